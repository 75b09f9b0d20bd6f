"""Coefficient families and their pointwise algebra.

The model bundles three ingredients:

* a diffusion profile ``g`` (even, ``g(0) = 1``, nondecreasing on ``t >= 0``)
  together with its antiderivative ``G`` and the inverse ``G^{-1}``,
* a space-weighted local nonlinearity ``h(x, t)`` with far-field limit
  ``hbar(t)``, both with exact antiderivatives in ``t``,
* a trapping potential ``a(x)`` rising exponentially to 1 at infinity.

Everything is vectorised over NumPy arrays and pure: identical inputs give
bit-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import ConfigError, NumericError
from .params import ProblemParams
from .quadrature import tanh_sinh_unit

ArrayLike = Union[float, np.ndarray]

_G_INV_TOL = 1e-12
_G_INV_MAX_ITER = 200


def _asarray(t: ArrayLike) -> np.ndarray:
    return np.asarray(t, dtype=float)


class SqrtPowerG:
    """g(t) = sqrt(1 + ((q+1)^2 / 2) |t|^{2q}) for q > 1/2.

    Growth exponents: alpha = q + 1, beta = (q + 1)/sqrt(2).  For q = 1 the
    antiderivative has the closed form
    G(t) = t sqrt(1+2t^2)/2 + asinh(sqrt(2) t)/(2 sqrt(2)).
    """

    kind = "sqrt_power"

    def __init__(self, q: float):
        if q <= 0.5:
            raise ConfigError(f"sqrt_power exponent q must be > 1/2, got {q}")
        self.q = float(q)
        self.coeff = (q + 1.0) ** 2 / 2.0

    @property
    def alpha(self) -> float:
        return self.q + 1.0

    @property
    def beta(self) -> float:
        return (self.q + 1.0) / np.sqrt(2.0)

    def g(self, t: ArrayLike) -> np.ndarray:
        t = _asarray(t)
        return np.sqrt(1.0 + self.coeff * np.abs(t) ** (2.0 * self.q))

    def g_prime(self, t: ArrayLike) -> np.ndarray:
        t = _asarray(t)
        a = np.abs(t)
        return self.coeff * self.q * np.sign(t) * a ** (2.0 * self.q - 1.0) / self.g(t)

    def antiderivative(self, t: ArrayLike) -> np.ndarray:
        t = _asarray(t)
        if self.q == 1.0:
            s2 = np.sqrt(2.0)
            return t * np.sqrt(1.0 + 2.0 * t * t) / 2.0 + np.arcsinh(s2 * t) / (2.0 * s2)
        return _quadrature_antiderivative(self.g, t)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "q": self.q}


class PlainPowerG:
    """g(t) = (1 + t^2)^{(alpha-1)/2}; beta = 1."""

    kind = "plain_power"

    def __init__(self, alpha: float):
        if alpha < 1.0:
            raise ConfigError(f"plain_power exponent alpha must be >= 1, got {alpha}")
        self.alpha_exp = float(alpha)

    @property
    def alpha(self) -> float:
        return self.alpha_exp

    @property
    def beta(self) -> float:
        return 1.0

    def g(self, t: ArrayLike) -> np.ndarray:
        t = _asarray(t)
        return (1.0 + t * t) ** ((self.alpha_exp - 1.0) / 2.0)

    def g_prime(self, t: ArrayLike) -> np.ndarray:
        t = _asarray(t)
        return (self.alpha_exp - 1.0) * t * (1.0 + t * t) ** ((self.alpha_exp - 3.0) / 2.0)

    def antiderivative(self, t: ArrayLike) -> np.ndarray:
        t = _asarray(t)
        if self.alpha_exp == 1.0:
            return t.copy()
        if self.alpha_exp == 2.0:
            return (t * np.sqrt(1.0 + t * t) + np.arcsinh(t)) / 2.0
        if self.alpha_exp == 3.0:
            return t + t ** 3 / 3.0
        return _quadrature_antiderivative(self.g, t)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "alpha": self.alpha_exp}


def _quadrature_antiderivative(g, t: np.ndarray) -> np.ndarray:
    """G(t) = int_0^t g, by a tanh-sinh rule on (0,1) after scaling.

    Tolerance is comfortably below 1e-12 relative for the smooth families
    used here; the rule handles the |u|^{2q} endpoint derivative
    singularity at u = 0.
    """
    x, w = tanh_sinh_unit(160, 3.4)
    flat = np.atleast_1d(t).ravel()
    out = np.empty_like(flat)
    chunk = max(1, 2_000_000 // max(len(x), 1))
    for i in range(0, len(flat), chunk):
        ti = flat[i : i + chunk, None]
        out[i : i + chunk] = np.sum(g(ti * x[None, :]) * w[None, :], axis=1) * flat[i : i + chunk]
    return out.reshape(np.shape(t)) if np.ndim(t) else float(out[0])


class ExpWeightedPowerH:
    """h(x, t) = (1 - e^{-nu |x|}) t^{k} on t >= 0 (zero below), with
    k = alpha*q_h + alpha - 1 wired from the g-family growth exponent."""

    kind = "exp_weighted_power"

    def __init__(self, q_h: float, nu: float, alpha: float):
        if nu <= 2.0:
            raise ConfigError(f"h-family decay exponent nu must be > 2, got {nu}")
        if q_h <= 1.0:
            raise ConfigError(f"h-family exponent q_h must be > 1, got {q_h}")
        self.q_h = float(q_h)
        self.nu = float(nu)
        self.alpha = float(alpha)
        self.k_exp = alpha * q_h + alpha - 1.0

    def weight(self, x_radius: ArrayLike) -> np.ndarray:
        return 1.0 - np.exp(-self.nu * _asarray(x_radius))

    def h(self, x_radius: ArrayLike, t: ArrayLike) -> np.ndarray:
        t = _asarray(t)
        tp = np.maximum(t, 0.0)
        return self.weight(x_radius) * tp ** self.k_exp

    def h_t(self, x_radius: ArrayLike, t: ArrayLike) -> np.ndarray:
        """Exact t-derivative (used by the hypothesis checks)."""
        t = _asarray(t)
        tp = np.maximum(t, 0.0)
        return self.weight(x_radius) * self.k_exp * tp ** (self.k_exp - 1.0)

    def H(self, x_radius: ArrayLike, t: ArrayLike) -> np.ndarray:
        t = _asarray(t)
        tp = np.maximum(t, 0.0)
        return self.weight(x_radius) * tp ** (self.k_exp + 1.0) / (self.k_exp + 1.0)

    def hbar(self, t: ArrayLike) -> np.ndarray:
        t = _asarray(t)
        tp = np.maximum(t, 0.0)
        return tp ** self.k_exp

    def Hbar(self, t: ArrayLike) -> np.ndarray:
        t = _asarray(t)
        tp = np.maximum(t, 0.0)
        return tp ** (self.k_exp + 1.0) / (self.k_exp + 1.0)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "q_h": self.q_h, "nu": self.nu}


class ExpWellA:
    """a(x) = 1 - k e^{-nu |x|} with k in (0, 1): a(0) < 1 and a -> 1."""

    kind = "exp_well"

    def __init__(self, k_amp: float, nu: float):
        if not 0.0 < k_amp < 1.0:
            raise ConfigError(f"potential well depth k must lie in (0,1), got {k_amp}")
        if nu <= 2.0:
            raise ConfigError(f"potential decay exponent nu must be > 2, got {nu}")
        self.k_amp = float(k_amp)
        self.nu = float(nu)

    def a(self, x_radius: ArrayLike) -> np.ndarray:
        return 1.0 - self.k_amp * np.exp(-self.nu * _asarray(x_radius))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "k": self.k_amp, "nu": self.nu}


@dataclass(frozen=True)
class CoefficientModel:
    """The three coefficient families, with all pointwise maps."""

    g_family: SqrtPowerG | PlainPowerG
    h_family: ExpWeightedPowerH
    a_family: ExpWellA

    @property
    def alpha(self) -> float:
        return self.g_family.alpha

    @property
    def beta(self) -> float:
        return self.g_family.beta

    # -- diffusion profile -------------------------------------------------

    def g(self, t: ArrayLike) -> np.ndarray:
        return self.g_family.g(t)

    def g_prime(self, t: ArrayLike) -> np.ndarray:
        return self.g_family.g_prime(t)

    def G(self, t: ArrayLike) -> np.ndarray:
        """Odd antiderivative of g (closed form where the family has one)."""
        t = _asarray(t)
        return np.sign(t) * self.g_family.antiderivative(np.abs(t))

    def G_inv(self, s: ArrayLike) -> np.ndarray:
        """Inverse of G by bracketed, safeguarded Newton iteration.

        Convergence criterion: |G(x) - s| <= 1e-12 * max(1, |s|) at every
        element; failure after the iteration cap raises NumericError.
        """
        s = _asarray(s)
        sa = np.abs(s)
        flat = np.atleast_1d(sa).ravel()
        root = self._inv_nonneg(flat)
        root = root.reshape(sa.shape) if sa.ndim else float(root[0])
        return np.sign(s) * root

    def _inv_nonneg(self, s: np.ndarray) -> np.ndarray:
        alpha, beta = self.alpha, self.beta
        lo = np.zeros_like(s)
        # G(t) >= (beta/alpha) t^alpha gives the algebraic bracket; adding s
        # covers the linear regime near zero where G(t) ~ t.
        hi = np.maximum(1.0, s * alpha / beta) ** (1.0 / alpha) + s
        x = np.minimum(s, hi)  # G(t) <= t never overshoots (g >= 1 here)
        target = _G_INV_TOL * np.maximum(1.0, s)
        for _ in range(_G_INV_MAX_ITER):
            val = self.g_family.antiderivative(x) - s
            done = np.abs(val) <= target
            if done.all():
                return x
            pos = val > 0
            hi = np.where(pos, np.minimum(hi, x), hi)
            lo = np.where(pos, lo, np.maximum(lo, x))
            step = val / self.g_family.g(x)
            x_new = x - step
            bad = (x_new <= lo) | (x_new >= hi)
            x = np.where(bad & ~done, 0.5 * (lo + hi), np.where(done, x, x_new))
        worst = float(np.max(np.abs(self.g_family.antiderivative(x) - s)))
        raise NumericError(
            f"G_inv failed to converge after {_G_INV_MAX_ITER} iterations "
            f"(worst residual {worst:.3e}); pathological g model?"
        )

    # -- local nonlinearity ------------------------------------------------

    def h(self, x_radius: ArrayLike, t: ArrayLike) -> np.ndarray:
        return self.h_family.h(x_radius, t)

    def H(self, x_radius: ArrayLike, t: ArrayLike) -> np.ndarray:
        return self.h_family.H(x_radius, t)

    def hbar(self, t: ArrayLike) -> np.ndarray:
        return self.h_family.hbar(t)

    def Hbar(self, t: ArrayLike) -> np.ndarray:
        return self.h_family.Hbar(t)

    def a(self, x_radius: ArrayLike) -> np.ndarray:
        return self.a_family.a(x_radius)

    # -- reduced nonlinearity in the transformed variable -------------------

    def f(self, x_radius: ArrayLike, s: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
        """Reduced right-hand side f and its exact antiderivative F.

        f(x,s) = a(x) s - a(x) G^{-1}(s)/g(G^{-1}(s)) + h(x, G^{-1}(s))/g(G^{-1}(s)),
        F(x,s) = a(x) [s^2 - (G^{-1}(s))^2]/2 + H(x, G^{-1}(s)),
        both extended by zero to s < 0.
        """
        s = _asarray(s)
        sp = np.maximum(s, 0.0)
        u = self.G_inv(sp)
        gu = self.g(u)
        av = self.a(x_radius)
        f = av * sp - av * u / gu + self.h(x_radius, u) / gu
        F = 0.5 * av * (sp * sp - u * u) + self.H(x_radius, u)
        zero = s < 0.0
        return np.where(zero, 0.0, f), np.where(zero, 0.0, F)

    def fbar(self, s: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
        """Far-field limit of (f, F): potential frozen at 1, h at hbar."""
        s = _asarray(s)
        sp = np.maximum(s, 0.0)
        u = self.G_inv(sp)
        gu = self.g(u)
        f = sp - u / gu + self.hbar(u) / gu
        F = 0.5 * (sp * sp - u * u) + self.Hbar(u)
        zero = s < 0.0
        return np.where(zero, 0.0, f), np.where(zero, 0.0, F)

    def limit_k(self, t: ArrayLike) -> np.ndarray:
        """Growth function k(t) = t^2 - (G^{-1}(t))^2 + hbar(G^{-1}(t)) G^{-1}(t)."""
        t = _asarray(t)
        u = self.G_inv(t)
        return t * t - u * u + self.hbar(u) * u

    def to_dict(self) -> dict:
        return {
            "g_family": self.g_family.to_dict(),
            "h_family": self.h_family.to_dict(),
            "a_family": self.a_family.to_dict(),
        }


def make_model(g_family, h_family_kind: str, q_h: float, nu_h: float,
               a_family_kind: str, k_amp: float, nu_a: float) -> CoefficientModel:
    if h_family_kind != ExpWeightedPowerH.kind:
        raise ConfigError(f"unknown h family {h_family_kind!r}")
    if a_family_kind != ExpWellA.kind:
        raise ConfigError(f"unknown a family {a_family_kind!r}")
    return CoefficientModel(
        g_family=g_family,
        h_family=ExpWeightedPowerH(q_h, nu_h, alpha=g_family.alpha),
        a_family=ExpWellA(k_amp, nu_a),
    )


def exemplar_model() -> CoefficientModel:
    """Default configuration: sqrt-power diffusion with q = 1 (alpha = 2,
    beta = sqrt(2)), quartic weighted nonlinearity (q_h = 3/2), half-depth
    exponential well (k = 1/2, nu = 3)."""
    g = SqrtPowerG(1.0)
    return make_model(g, "exp_weighted_power", 1.5, 3.0, "exp_well", 0.5, 3.0)


def exemplar_params() -> ProblemParams:
    """Parameters matched to :func:`exemplar_model` at N = 6, mu = 2."""
    return ProblemParams(
        dimension=6,
        mu=2.0,
        alpha=2.0,
        beta=float(np.sqrt(2.0)),
        mu_tilde=2.5,
        nu_decay=3.0,
        p_growth=1.8,
        gamma=0.0,
    )


def check_consistency(model: CoefficientModel, params: ProblemParams) -> None:
    """Model growth exponents must match the structural parameters."""
    if abs(model.alpha - params.alpha) > 1e-12 or abs(model.beta - params.beta) > 1e-12:
        raise ConfigError(
            f"model growth (alpha={model.alpha}, beta={model.beta}) does not match "
            f"params (alpha={params.alpha}, beta={params.beta})"
        )
    if abs(model.h_family.nu - params.nu_decay) > 1e-12 or \
            abs(model.a_family.nu - params.nu_decay) > 1e-12:
        raise ConfigError("family decay rates must equal params.nu_decay")
