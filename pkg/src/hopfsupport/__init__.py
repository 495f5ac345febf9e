"""Exact workbench for doubles of Frobenius kernels, pi-point supports and cohomology."""

__version__ = "0.1.0"
