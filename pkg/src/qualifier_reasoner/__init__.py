"""qualifier-reasoner: many-sorted reasoning over qualified statements."""

from __future__ import annotations

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("qualifier-reasoner")
except PackageNotFoundError:
    __version__ = "0.1.0"

__all__ = ["__version__"]
