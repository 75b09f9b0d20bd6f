"""NumPy backend for the angular kernel sums (chunked broadcasting)."""

import numpy as np

BACKEND = "numpy"

# Chunk size balances broadcasting temporaries (~chunk * n_angle doubles)
# against Python-loop overhead.
_CHUNK = 65536


def angular_sums(t: np.ndarray, shsq: np.ndarray, pre: np.ndarray,
                 mu: float, out: np.ndarray) -> None:
    """out[i] = sum_k pre[k] * ((1 - t[i])^2 + 4 t[i] shsq[k])^(-mu/2).

    ``shsq`` holds sin^2(theta_k / 2); the form (1-t)^2 + 4 t shsq is the
    cancellation-free rewrite of 1 + t^2 - 2 t cos(theta).
    """
    e = -0.5 * mu
    for i in range(0, len(t), _CHUNK):
        ti = t[i : i + _CHUNK, None]
        q = (1.0 - ti) ** 2 + 4.0 * ti * shsq[None, :]
        np.einsum("ik,k->i", q**e, pre, out=out[i : i + _CHUNK])
