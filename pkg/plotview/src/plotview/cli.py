"""plotview <kind> --in DIR --out FILE.png

Kinds: curves | jacobi | decay | split (split also needs --nu K,T).
"""

import argparse
import sys

from .figures import KINDS, FigureSpec, ParseError, render


def _parse_nu(text):
    try:
        k, t = text.split(",")
        return int(k), float(t)
    except ValueError as exc:
        raise ParseError(f'nu must be "K,T", got {text!r}') from exc


def main(argv=None):
    parser = argparse.ArgumentParser(prog="plotview", description=__doc__)
    parser.add_argument("kind", choices=KINDS)
    parser.add_argument("--in", dest="input_dir", required=True, metavar="DIR")
    parser.add_argument("--out", required=True, metavar="FILE.png")
    parser.add_argument("--nu", default=None, metavar="K,T")
    parser.add_argument("--no-labels", action="store_true")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(
            kind=args.kind,
            input_dir=args.input_dir,
            output=args.out,
            nu=_parse_nu(args.nu) if args.nu else None,
            labels=not args.no_labels,
        )
        render(spec)
    except (FileNotFoundError, ParseError) as exc:
        print(f"plotview: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
