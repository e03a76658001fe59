"""Backend selection for the integer kernels.

The compiled ``_ckernels`` extension is used when it was built; otherwise the
pure-Python ``_pykernels`` module provides the same functions.
"""

try:
    from vucert import _ckernels as _impl

    BACKEND = "cython"
except ImportError:  # extension not built
    from vucert import _pykernels as _impl

    BACKEND = "python"

rref_int = _impl.rref_int
poly_mul = _impl.poly_mul
poly_divmod_monic = _impl.poly_divmod_monic
cyclo_mulmod = _impl.cyclo_mulmod

__all__ = ["BACKEND", "rref_int", "poly_mul", "poly_divmod_monic", "cyclo_mulmod"]
