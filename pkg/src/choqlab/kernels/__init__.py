"""Kernel evaluation backends.

The compiled Cython core is preferred; if it is missing (source install
without a compiler) the NumPy implementation is selected.  Both expose

    angular_sums(t, shsq, pre, mu, out)

computing, for each kernel ratio ``t``, the weighted angular sum
``sum_k pre[k] * ((1-t)^2 + 4 t shsq[k])^(-mu/2)``.
"""

from . import _numpy_impl

try:  # pragma: no cover - depends on the build environment
    from . import _core

    angular_sums = _core.angular_sums
    BACKEND = _core.BACKEND
except ImportError:  # pragma: no cover
    angular_sums = _numpy_impl.angular_sums
    BACKEND = _numpy_impl.BACKEND

numpy_angular_sums = _numpy_impl.angular_sums

__all__ = ["angular_sums", "numpy_angular_sums", "BACKEND"]
