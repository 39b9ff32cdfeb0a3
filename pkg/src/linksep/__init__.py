"""Separated cutsets in metric graphs and links of polygonal complexes."""
from __future__ import annotations

__version__ = "0.1.0"
