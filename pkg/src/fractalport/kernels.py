"""Kernel backend selection: compiled Cython extension if built, numpy otherwise."""

try:
    from fractalport._cover_cy import cover_amplitudes

    KERNEL_BACKEND = "cython"
except ImportError:  # extension not compiled
    from fractalport._cover_py import cover_amplitudes

    KERNEL_BACKEND = "python"

__all__ = ["cover_amplitudes", "KERNEL_BACKEND"]
