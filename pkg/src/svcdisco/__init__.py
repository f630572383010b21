"""Classification-indexed web service registry and discovery cost benchmark."""

from .discovery import Query, Selection, search_indexed, search_scan
from .registry import Registry, ServiceRecord
from .taxonomy import Classification, category_universe, decode, encode

__version__ = "0.1.0"

__all__ = [
    "Classification",
    "Query",
    "Registry",
    "Selection",
    "ServiceRecord",
    "category_universe",
    "decode",
    "encode",
    "search_indexed",
    "search_scan",
]
