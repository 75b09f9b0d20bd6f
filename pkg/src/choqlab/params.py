"""Structural parameters of the problem and their derived exponents."""

from dataclasses import dataclass

from .errors import ConfigError


@dataclass(frozen=True)
class ProblemParams:
    """Dimension, kernel exponent and growth exponents.

    ``alpha``/``beta`` describe the power growth of the diffusion
    coefficient, ``gamma`` the order of its expansion remainder,
    ``mu_tilde`` the superquadraticity exponent of the local nonlinearity,
    ``nu_decay`` the exponential rate at which the coefficients settle to
    their far-field limits, and ``p_growth`` the auxiliary power used in
    the far-field comparison bounds.

    All critical exponents are recomputed properties, never stored.
    """

    dimension: int
    mu: float
    alpha: float
    beta: float
    mu_tilde: float
    nu_decay: float
    p_growth: float
    gamma: float = 0.0

    def __post_init__(self) -> None:
        n = self.dimension
        if not (isinstance(n, int) and n >= 3):
            raise ConfigError(f"dimension must be an integer >= 3, got {n!r}")
        if not 0.0 < self.mu < min(n, 4):
            raise ConfigError(f"mu must lie in (0, min(N,4)) = (0, {min(n, 4)}), got {self.mu}")
        if self.alpha < 1.0:
            raise ConfigError(f"alpha must be >= 1, got {self.alpha}")
        if self.beta <= 0.0:
            raise ConfigError(f"beta must be > 0, got {self.beta}")
        if self.gamma >= self.alpha:
            raise ConfigError(f"gamma must be < alpha, got gamma={self.gamma}, alpha={self.alpha}")
        if not 2.0 < self.mu_tilde < self.two_star:
            raise ConfigError(
                f"mu_tilde must lie in (2, 2*) = (2, {self.two_star}), got {self.mu_tilde}"
            )
        if self.nu_decay <= 2.0:
            raise ConfigError(f"nu_decay must be > 2, got {self.nu_decay}")
        if not 1.0 < self.p_growth < self.two_star - 1.0:
            raise ConfigError(
                f"p_growth must lie in (1, 2*-1) = (1, {self.two_star - 1.0}), got {self.p_growth}"
            )
        if not 0.0 < self.delta <= 1.0:
            raise ConfigError(f"delta = 1 - gamma+/alpha must lie in (0, 1], got {self.delta}")

    @property
    def two_star(self) -> float:
        """Critical Sobolev exponent 2N/(N-2)."""
        n = self.dimension
        return 2.0 * n / (n - 2.0)

    @property
    def two_star_mu(self) -> float:
        """Critical double-integral exponent (2N - mu)/(N - 2)."""
        n = self.dimension
        return (2.0 * n - self.mu) / (n - 2.0)

    @property
    def gamma_plus(self) -> float:
        return max(self.gamma, 0.0)

    @property
    def delta(self) -> float:
        return 1.0 - self.gamma_plus / self.alpha

    @property
    def choquard_power(self) -> float:
        """Power alpha * 2*_mu applied inside the double integral."""
        return self.alpha * self.two_star_mu
