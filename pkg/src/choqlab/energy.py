"""Energy functionals on radial fields.

Two functionals share one implementation: the full one (potential ``a``,
nonlinearity ``h``) and its translation-invariant limit (potential frozen
at 1, nonlinearity at ``hbar``).  Writing ``z = G^{-1}(v)`` and ``z+`` for
its positive part, the value is

    J(v) = 1/2 int |grad v|^2 + 1/2 int a(x) z^2 - int H(x, z)
           - 1/(2 p) iint |z+(x)|^p |z+(y)|^p |x-y|^{-mu},   p = alpha * 2*_mu.

The directional derivative divides every zero-order term by g(z), which is
what makes the discrete gradient here the exact derivative of the discrete
energy: the finite-difference check in the tests holds to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from .errors import (
    ConfigError,
    DegenerateDirectionError,
    HypothesesNotVerified,
)
from .grid import RadialGrid
from .models import CoefficientModel, check_consistency
from .params import ProblemParams
from .riesz import KernelTable, riesz_convolve

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


class FunctionalKind(Enum):
    FULL = "full"
    LIMIT = "limit"


@dataclass(frozen=True)
class EnergyBreakdown:
    """Itemised functional value; ``f_term`` and ``choquard`` are the
    magnitudes of the subtracted terms."""

    kinetic: float
    potential: float
    f_term: float
    choquard: float

    @property
    def total(self) -> float:
        return self.kinetic + self.potential - self.f_term - self.choquard


@dataclass(frozen=True)
class EnergyContext:
    """Bundles everything a functional evaluation needs.

    ``axioms_verified`` gates the operations whose correctness rests on
    the structural hypotheses (single crossing of the ray derivative).
    """

    kind: FunctionalKind
    model: CoefficientModel
    params: ProblemParams
    table: KernelTable
    grid: RadialGrid
    axioms_verified: bool = False

    def __post_init__(self) -> None:
        check_consistency(self.model, self.params)
        if self.table.grid is not self.grid and not np.array_equal(
            self.table.grid.nodes, self.grid.nodes
        ):
            raise ConfigError("kernel table was built on a different grid")
        if self.table.mu != self.params.mu:
            raise ConfigError(
                f"kernel table mu={self.table.mu} does not match params mu={self.params.mu}"
            )

    @property
    def is_limit(self) -> bool:
        return self.kind is FunctionalKind.LIMIT

    @cached_property
    def a_values(self) -> np.ndarray:
        if self.is_limit:
            return np.ones(self.grid.n_nodes)
        return self.model.a(self.grid.nodes)

    def h_of(self, z: np.ndarray) -> np.ndarray:
        if self.is_limit:
            return self.model.hbar(z)
        return self.model.h(self.grid.nodes, z)

    def big_h_of(self, z: np.ndarray) -> np.ndarray:
        if self.is_limit:
            return self.model.Hbar(z)
        return self.model.H(self.grid.nodes, z)

    @cached_property
    def stiffness(self) -> sparse.csr_matrix:
        """K = D1^T diag(w) D1: the discrete quadratic form of the kinetic
        term (without the sphere-area factor)."""
        d1 = self.grid.d1
        return (d1.T @ sparse.diags(self.grid.weights) @ d1).tocsr()

    @cached_property
    def h1_preconditioner(self):
        """LU factorisation of K + diag(w), the discrete H1 inner product."""
        p = (self.stiffness + sparse.diags(self.grid.weights)).tocsc()
        return splu(p)


def prepare_context(
    kind: FunctionalKind,
    model: CoefficientModel,
    params: ProblemParams,
    table: KernelTable,
    grid: RadialGrid,
    check_axioms: bool = True,
) -> EnergyContext:
    """Build a context, optionally running a compact hypothesis check so
    that single-crossing-based operations are unlocked."""
    verified = False
    if check_axioms:
        from .axioms import SampleSpec, axiom_suite

        report = axiom_suite(model, params, SampleSpec(n_t=160, n_x=24, n_s=160, seed=7))
        verified = report.all_passed
    return EnergyContext(
        kind=kind, model=model, params=params, table=table, grid=grid,
        axioms_verified=verified,
    )


# -- functional value and derivative -----------------------------------------


def energy(ctx: EnergyContext, v: np.ndarray) -> EnergyBreakdown:
    v = np.asarray(v, dtype=float)
    grid = ctx.grid
    w = grid.weights
    sa = grid.sphere_area
    z = ctx.model.G_inv(v)
    zp = np.maximum(z, 0.0)
    dv = grid.gradient(v)
    kinetic = 0.5 * sa * float(w @ (dv * dv))
    potential = 0.5 * sa * float(w @ (ctx.a_values * z * z))
    f_term = sa * float(w @ ctx.big_h_of(z))
    p = ctx.params.choquard_power
    phi = riesz_convolve(ctx.table, zp, p)
    dval = sa * float(np.dot(w * zp**p, phi))
    choquard = dval / (2.0 * p)
    return EnergyBreakdown(kinetic=kinetic, potential=potential,
                           f_term=f_term, choquard=choquard)


def _pointwise_gradient(ctx: EnergyContext, v: np.ndarray) -> np.ndarray:
    """Zero-order part of the functional derivative (everything but the
    kinetic term), as a plain node-value array."""
    z = ctx.model.G_inv(v)
    gz = ctx.model.g(z)
    zp = np.maximum(z, 0.0)
    p = ctx.params.choquard_power
    phi = riesz_convolve(ctx.table, zp, p)
    return (
        ctx.a_values * z / gz
        - ctx.h_of(z) / gz
        - phi * zp ** (p - 1.0) / ctx.model.g(zp)
    )


def gateaux(ctx: EnergyContext, v: np.ndarray, phi: np.ndarray) -> float:
    """Directional derivative <J'(v), phi>."""
    v = np.asarray(v, dtype=float)
    phi = np.asarray(phi, dtype=float)
    grid = ctx.grid
    kin = float(grid.weights @ (grid.gradient(v) * grid.gradient(phi)))
    rest = float(grid.weights @ (_pointwise_gradient(ctx, v) * phi))
    return grid.sphere_area * (kin + rest)


def gradient_l2(ctx: EnergyContext, v: np.ndarray) -> np.ndarray:
    """Representative of J'(v) in the discrete L2 inner product:
    <J'(v), phi> = sphere_area * sum_i w_i grad_i phi_i for all phi."""
    v = np.asarray(v, dtype=float)
    kin = (ctx.stiffness @ v) / ctx.grid.weights
    return kin + _pointwise_gradient(ctx, v)


# -- ray geometry --------------------------------------------------------------


def _require_hypotheses(ctx: EnergyContext, trust: bool) -> None:
    if not (ctx.axioms_verified or trust):
        raise HypothesesNotVerified(
            "single-crossing of the ray derivative is only guaranteed for "
            "models that pass the hypothesis suite; run prepare_context "
            "with check_axioms=True or pass trust_hypotheses=True"
        )


def nehari_scale(ctx: EnergyContext, u: np.ndarray, trust_hypotheses: bool = False,
                 t_cap: float = 1e8) -> float:
    """The unique t* > 0 where d/dt J(t u) = 0 along the ray through u.

    Bracket by doubling/halving from t = 1, then Brent root-finding on
    phi(t) = <J'(tu), u> to relative tolerance 1e-12.
    """
    from scipy.optimize import brentq

    _require_hypotheses(ctx, trust_hypotheses)
    u = np.asarray(u, dtype=float)
    if not np.any(u > 0.0):
        raise DegenerateDirectionError("direction has no positive part")

    def ray_derivative(t: float) -> float:
        return gateaux(ctx, t * u, u)

    t_hi = 1.0
    val = ray_derivative(t_hi)
    if val > 0:
        while val > 0:
            t_hi *= 2.0
            if t_hi > t_cap:
                raise DegenerateDirectionError(
                    f"ray derivative stayed positive up to t = {t_cap:g}; "
                    "direction too weak to reach negative energy"
                )
            val = ray_derivative(t_hi)
        t_lo = t_hi / 2.0
    else:
        t_lo = 0.5
        while ray_derivative(t_lo) <= 0:
            t_lo *= 0.5
            if t_lo < 1e-12:
                raise DegenerateDirectionError(
                    "ray derivative not positive even at t = 1e-12"
                )
        t_hi = t_lo * 2.0
    return float(brentq(ray_derivative, t_lo, t_hi, rtol=1e-12, maxiter=200))


def ray_max(ctx: EnergyContext, u: np.ndarray, trust_hypotheses: bool = False,
            golden_iters: int = 48) -> tuple[float, float]:
    """Supremum of J along the ray through u: (t_at_max, sup_value).

    Seeded at the stationary scale, then refined by golden-section search
    on a bracketing interval.
    """
    u = np.asarray(u, dtype=float)
    t_star = nehari_scale(ctx, u, trust_hypotheses)

    def j_of(t: float) -> float:
        return energy(ctx, t * u).total

    a, b = t_star / 2.0, t_star * 2.0
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = -j_of(c), -j_of(d)
    for _ in range(golden_iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = -j_of(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = -j_of(d)
    t_best = (a + b) / 2.0
    return float(t_best), float(j_of(t_best))


@dataclass(frozen=True)
class MountainPassReport:
    """Ring infima of J and a negative-energy scale per direction."""

    rho_grid: np.ndarray
    inf_on_ring: np.ndarray
    best_floor: float
    best_rho: float
    negative_scales: list
    all_directions_reach_negative: bool = field(default=True)


def mp_geometry_check(ctx: EnergyContext, directions: list[np.ndarray],
                      rho_grid: np.ndarray) -> MountainPassReport:
    """Probe the mountain-pass geometry: J positive on a sphere of radius
    rho (inf over the given directions), yet negative far out along every
    direction."""
    if len(directions) == 0:
        raise ConfigError("need at least one direction")
    rho_grid = np.asarray(rho_grid, dtype=float)
    normed = []
    for d in directions:
        nrm = ctx.grid.norm_h1(d)
        if nrm <= 0:
            raise ConfigError("zero direction in mp_geometry_check")
        normed.append(np.asarray(d, dtype=float) / nrm)
    inf_ring = np.array(
        [min(energy(ctx, rho * d).total for d in normed) for rho in rho_grid]
    )
    k = int(np.argmax(inf_ring))
    neg_scales = []
    ok = True
    for d in normed:
        t = max(1.0, 2.0 * float(rho_grid[-1]))
        found = None
        while t <= 1e6:
            if energy(ctx, t * d).total < 0:
                found = t
                break
            t *= 2.0
        neg_scales.append(found)
        ok = ok and found is not None
    return MountainPassReport(
        rho_grid=rho_grid,
        inf_on_ring=inf_ring,
        best_floor=float(inf_ring[k]),
        best_rho=float(rho_grid[k]),
        negative_scales=neg_scales,
        all_directions_reach_negative=ok,
    )


def energy_curve(ctx: EnergyContext, u: np.ndarray, t_grid: np.ndarray) -> list[EnergyBreakdown]:
    """Itemised energies along the ray t -> J(t u)."""
    return [energy(ctx, float(t) * np.asarray(u)) for t in t_grid]
