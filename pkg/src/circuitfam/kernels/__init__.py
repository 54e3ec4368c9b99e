"""Hot inner loops, each with a numba and a numpy implementation."""
