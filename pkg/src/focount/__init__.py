"""Exact counting of satisfying assignments to free relation and function variables over finite structures."""

from .errors import FocountError
from .structures import Structure, Vocabulary

__version__ = "0.1.0"

__all__ = ["FocountError", "Structure", "Vocabulary", "__version__"]
