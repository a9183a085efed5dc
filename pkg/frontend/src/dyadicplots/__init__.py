"""dyadicplots: renders dyadicint CSV tables as line charts."""

from .figures import FigureSpec, SchemaError, load_rows, render

__all__ = ["FigureSpec", "SchemaError", "load_rows", "render"]
