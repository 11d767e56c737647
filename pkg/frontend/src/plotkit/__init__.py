"""Deterministic figure renderer for slewsim CSV artifacts."""

from .figures import (
    FigureKind,
    FigureSpec,
    MissingColumnError,
    PlotkitError,
    read_csv,
    render,
)

__all__ = [
    "FigureKind",
    "FigureSpec",
    "MissingColumnError",
    "PlotkitError",
    "read_csv",
    "render",
]

__version__ = "0.1.0"
