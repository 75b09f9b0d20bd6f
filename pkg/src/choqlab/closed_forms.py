"""Closed-form constants: sphere areas, the sharp Sobolev constant, and the
sharp diagonal Hardy-Littlewood-Sobolev constant.

These serve as the analytic side of every two-route consistency check; the
quadrature side lives in :mod:`choqlab.bubbles`.
"""

import numpy as np
from scipy.special import beta as beta_fn
from scipy.special import gamma as gamma_fn


def sphere_surface(n: int) -> float:
    """Surface measure of the unit sphere S^{n-1} in R^n."""
    return float(2.0 * np.pi ** (n / 2.0) / gamma_fn(n / 2.0))


def unit_ball_volume(n: int) -> float:
    return sphere_surface(n) / n


def sobolev_constant(n: int) -> float:
    """Best constant S of the embedding into L^{2n/(n-2)}:
    S = pi * n * (n-2) * (Gamma(n/2) / Gamma(n))^{2/n}.
    """
    if n < 3:
        raise ValueError("dimension must be >= 3")
    return float(np.pi * n * (n - 2) * (gamma_fn(n / 2.0) / gamma_fn(float(n))) ** (2.0 / n))


def hls_diagonal_constant(n: int, mu: float) -> float:
    """Sharp constant C(n, mu) of the diagonal HLS inequality with kernel
    |x - y|^{-mu} and both factors in L^{2n/(2n-mu)}:

        C(n, mu) = pi^{mu/2} * Gamma((n-mu)/2) / Gamma(n - mu/2)
                   * (Gamma(n/2) / Gamma(n))^{mu/n - 1}.
    """
    if not 0.0 < mu < n:
        raise ValueError("need 0 < mu < n")
    return float(
        np.pi ** (mu / 2.0)
        * gamma_fn((n - mu) / 2.0)
        / gamma_fn(n - mu / 2.0)
        * (gamma_fn(n / 2.0) / gamma_fn(float(n))) ** (mu / n - 1.0)
    )


def hls_embedding_constant(n: int, mu: float) -> float:
    """Best constant of the gradient-vs-double-integral quotient, obtained
    from the Sobolev constant through the sharp HLS constant:
    S_H = S / C(n, mu)^{1/t} with t = (2n - mu)/(n - 2)."""
    t = (2.0 * n - mu) / (n - 2.0)
    return sobolev_constant(n) / hls_diagonal_constant(n, mu) ** (1.0 / t)


def instanton_amplitude(n: int) -> float:
    """Amplitude c_n with -Delta W = W^{(n+2)/(n-2)} for
    W(y) = c_n (1 + |y|^2)^{-(n-2)/2}."""
    return float((n * (n - 2.0)) ** ((n - 2.0) / 4.0))


def angular_kernel_diagonal(n: int, mu: float) -> float:
    """Angular average of the kernel at coincident radii:
    A(1) = 2^{n-2-mu} * B((n-1-mu)/2, (n-1)/2), finite only for mu < n-1."""
    if mu >= n - 1:
        raise ValueError("angular kernel average diverges on the diagonal for mu >= n-1")
    return float(2.0 ** (n - 2 - mu) * beta_fn((n - 1 - mu) / 2.0, (n - 1) / 2.0))
