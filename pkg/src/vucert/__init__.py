"""Exact verification toolkit for virtually unipotent elements in one-edge and
one-loop graph-manifold groups."""

from vucert.kernels import BACKEND

__version__ = "0.1.0"

__all__ = ["BACKEND", "__version__"]
