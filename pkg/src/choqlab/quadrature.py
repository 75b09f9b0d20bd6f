"""Small shared quadrature rules.

tanh-sinh (double-exponential) rules are used wherever an integrand may
carry an integrable algebraic singularity at an endpoint; they converge
geometrically in the number of nodes and the node/weight sets are cached.
"""

from functools import lru_cache

import numpy as np
from scipy.special import expit, roots_jacobi


@lru_cache(maxsize=32)
def tanh_sinh_unit(m: int = 120, tau_max: float = 3.2) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for integrals over (0, 1).

    Nodes cluster double-exponentially at both endpoints; endpoint values
    are never evaluated exactly.
    """
    tau = np.linspace(-tau_max, tau_max, m)
    h = tau[1] - tau[0]
    z = np.pi * np.sinh(tau)
    x = expit(z)
    w = h * np.pi * np.cosh(tau) * expit(z) * expit(-z)
    return x, w


@lru_cache(maxsize=32)
def tanh_sinh_theta(m: int = 256, tau_max: float = 3.6) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for integrals over the angle interval (0, pi)."""
    x, w = tanh_sinh_unit(m, tau_max)
    return np.pi * x, np.pi * w


@lru_cache(maxsize=32)
def jacobi_angular(n_points: int, dimension: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Jacobi rule for int_{-1}^{1} f(c) (1-c^2)^{(N-3)/2} dc.

    This is the cosine-substituted form of the angular measure
    sin^{N-2}(theta) d(theta) on the sphere of R^N.
    """
    a = (dimension - 3) / 2.0
    nodes, weights = roots_jacobi(n_points, a, a)
    return nodes, weights
