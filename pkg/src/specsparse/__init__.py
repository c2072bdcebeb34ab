"""Deterministic expander-based sparsifiers and sublinear-query spectral approximation."""
from .kernels import BACKEND

__version__ = "0.1.0"
