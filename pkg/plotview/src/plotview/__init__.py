"""Static figures from laurent-spectra CLI artifacts."""

from .figures import KINDS, FigureSpec, ParseError, render

__version__ = "0.1.0"
