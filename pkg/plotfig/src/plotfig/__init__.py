"""Render figure analogs from the simulation CLI's CSV bundles."""

from .recipes import TAGS, render
from .schemas import SchemaError, read_table

__version__ = "0.1.0"

__all__ = ["TAGS", "render", "SchemaError", "read_table"]
