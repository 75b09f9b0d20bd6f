"""Sampled verification of the structural hypotheses of a coefficient model.

Each clause evaluates one inequality (or limit trend) over a sample
lattice and reports its worst normalised margin together with the point
where it occurs.  Margins are relative: (lhs - rhs) / (1 + |lhs| + |rhs|),
so clauses that saturate asymptotically (equality in the power regime)
still pass at the 1e-9 tolerance.  Existential constants (the C's of the
tail bounds) are fitted from the sample by design: the suite checks that a
finite constant closes the inequality, which is exactly what the
hypotheses assert.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .models import CoefficientModel
from .params import ProblemParams

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class SampleSpec:
    """Sample counts and ranges for the clause lattices."""

    n_t: int = 1200
    t_min: float = 1e-3
    t_max: float = 50.0
    n_x: int = 48
    x_max: float = 10.0
    n_s: int = 1200
    s_min: float = 1e-3
    s_max: float = 50.0
    seed: int = 0

    def t_samples(self) -> np.ndarray:
        base = np.geomspace(self.t_min, self.t_max, self.n_t - self.n_t // 4)
        rng = np.random.default_rng(self.seed)
        extra = np.exp(rng.uniform(np.log(self.t_min), np.log(self.t_max), self.n_t // 4))
        return np.sort(np.concatenate([base, extra]))

    def s_samples(self) -> np.ndarray:
        base = np.geomspace(self.s_min, self.s_max, self.n_s - self.n_s // 4)
        rng = np.random.default_rng(self.seed + 1)
        extra = np.exp(rng.uniform(np.log(self.s_min), np.log(self.s_max), self.n_s // 4))
        return np.sort(np.concatenate([base, extra]))

    def x_samples(self) -> np.ndarray:
        return np.linspace(0.0, self.x_max, self.n_x)


@dataclass(frozen=True)
class ClauseResult:
    name: str
    passed: bool
    worst_margin: float
    worst_point: tuple
    info: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "name": self.name,
            "pass": self.passed,
            "worst_margin": self.worst_margin,
            "worst_point": list(self.worst_point),
        }
        if self.info:
            d["info"] = self.info
        return d


@dataclass(frozen=True)
class AxiomReport:
    clauses: list[ClauseResult]
    tolerance: float

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def failing(self) -> list[str]:
        return [c.name for c in self.clauses if not c.passed]

    def to_dict(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "tolerance": self.tolerance,
            "clauses": [c.to_dict() for c in self.clauses],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _margins(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    return (lhs - rhs) / (1.0 + np.abs(lhs) + np.abs(rhs))


def _clause(name: str, margins: np.ndarray, points, tolerance: float,
            info: dict | None = None) -> ClauseResult:
    margins = np.atleast_1d(np.asarray(margins, dtype=float))
    k = int(np.argmin(margins))
    worst = float(margins[k])
    pt = points[k] if points is not None else ()
    if not isinstance(pt, tuple):
        pt = (float(pt),)
    return ClauseResult(
        name=name,
        passed=bool(worst >= -tolerance),
        worst_margin=worst,
        worst_point=tuple(float(q) for q in pt),
        info=info or {},
    )


def _trend_to_zero(values: np.ndarray, points: np.ndarray, floor: float):
    """Margins asserting a sequence decays toward zero: each step must not
    increase (beyond rounding) and the final value must drop below
    ``floor`` times the initial one."""
    v = np.asarray(values, dtype=float)
    steps = _margins(v[:-1], v[1:])
    final = _margins(np.array([floor * v[0]]), np.array([v[-1]]))
    margins = np.concatenate([steps, final])
    pts = [ (float(points[i]),) for i in range(len(v) - 1) ] + [(float(points[-1]),)]
    return margins, pts


def axiom_suite(
    model: CoefficientModel,
    params: ProblemParams,
    sample_spec: SampleSpec | None = None,
    tolerance: float = DEFAULT_TOLERANCE,
) -> AxiomReport:
    """Run every clause; failures are report entries, never exceptions."""
    spec = sample_spec or SampleSpec()
    alpha, beta = params.alpha, params.beta
    mu_t = params.mu_tilde
    two_star = params.two_star
    nu = params.nu_decay
    p = params.p_growth

    t = spec.t_samples()
    s = spec.s_samples()
    xs = spec.x_samples()
    t_pts = [(float(q),) for q in t]
    s_pts = [(float(q),) for q in s]

    g = model.g(t)
    gp = model.g_prime(t)
    big_g = model.G(t)

    clauses: list[ClauseResult] = []
    add = clauses.append

    # -- base hypotheses on g ------------------------------------------------
    g0 = float(model.g(0.0))
    add(_clause("g0_unit_value", np.array([-abs(g0 - 1.0)]), [(0.0,)], tolerance))
    add(_clause("g0_positive", _margins(np.concatenate([[g0], g]), 0.0),
                [(0.0,)] + t_pts, tolerance))
    even_gap = np.abs(model.g(t) - model.g(-t))
    add(_clause("g0_even", -even_gap / (1.0 + 2.0 * g), t_pts, tolerance))
    add(_clause("g0_monotone", _margins(gp, 0.0), t_pts, tolerance))
    add(_clause("g1a_growth_control", _margins((alpha - 1.0) * g, gp * t), t_pts, tolerance))
    add(_clause(
        "g1b_derivative_floor",
        _margins(gp, beta**2 * (alpha - 1.0) * t ** (2.0 * alpha - 3.0) / g),
        t_pts, tolerance,
    ))

    # -- base hypotheses on h -------------------------------------------------
    xg, tg = np.meshgrid(xs, t, indexing="ij")
    hv = model.h(xg, tg)
    lattice_pts = [(float(a), float(b)) for a, b in zip(xg.ravel(), tg.ravel())]
    add(_clause("h0_nonnegative", _margins(hv.ravel(), 0.0), lattice_pts, tolerance))
    add(_clause("h0_vanishes_nonpositive",
                -np.abs(model.h(xg, -tg).ravel()) / (1.0 + np.abs(hv.ravel())),
                lattice_pts, tolerance))

    t_small = np.geomspace(1e-6, 1e-2, 9)[::-1]  # ordered toward the limit t -> 0
    ratios = model.h(1.0e3, t_small) / t_small
    m, pts = _trend_to_zero(ratios, t_small, floor=1e-3)
    add(_clause("h1_vanishes_at_zero", m, pts, tolerance))

    t_large = np.geomspace(1e2, 1e6, 9)
    ratios = model.h(1.0e3, t_large) / t_large ** (alpha * two_star - 1.0)
    m, pts = _trend_to_zero(ratios, t_large, floor=1e-2)
    add(_clause("h1_subcritical_at_infinity", m, pts, tolerance))

    ht = model.h_family.h_t(xg, tg)
    add(_clause("h2_superquadratic_growth",
                _margins(tg.ravel() * ht.ravel(), (alpha * mu_t - 1.0) * hv.ravel()),
                lattice_pts, tolerance))

    x_far = 30.0 / nu + 10.0
    hbar = model.hbar(t)
    gap = np.abs(model.h(x_far, t) - hbar) / (1.0 + hbar)
    add(_clause("h3_far_field_limit", _margins(1e-9, gap), t_pts, tolerance))

    # Lower envelope: fit C_eps for fixed eps, then verify the bound holds.
    eps_fit = 0.5
    deficit = (hbar[None, :] - hv) * np.exp(nu * xg)  # what must be dominated
    need = deficit - eps_fit * tg ** (2.0 * alpha - 1.0)
    with np.errstate(divide="ignore"):
        c_eps = max(0.0, float(np.max(need / tg ** (alpha * p + alpha - 1.0)))) * 1.1 + 1e-12
    envelope = np.exp(-nu * xg) * (
        eps_fit * tg**alpha + c_eps * tg ** (alpha * p)
    ) * tg ** (alpha - 1.0)
    add(_clause("h3_lower_envelope", _margins(hv - hbar[None, :], -envelope).ravel(),
                lattice_pts, tolerance, info={"eps": eps_fit, "c_eps": c_eps}))

    # -- base hypotheses on a -------------------------------------------------
    av = model.a(xs)
    x_pts = [(float(q),) for q in xs]
    add(_clause("a0_nonnegative", _margins(av, 0.0), x_pts, tolerance))
    add(_clause("a0_depressed_at_origin", _margins(1.0, model.a(0.0)), [(0.0,)], tolerance))
    add(_clause("a0_far_field_limit",
                np.array([-abs(float(model.a(x_far)) - 1.0)]), [(x_far,)], tolerance))
    k_env = model.a_family.k_amp * np.exp(-model.a_family.nu * xs)
    add(_clause("a0_envelope",
                np.minimum(_margins(1.0 - av, 0.0), _margins(k_env, 1.0 - av)),
                x_pts, tolerance))

    # -- derived properties of G ----------------------------------------------
    g_odd = np.abs(model.G(t) + model.G(-t)) / (1.0 + 2.0 * np.abs(big_g))
    sv = model.G_inv(s)
    ginv_odd = np.abs(sv + model.G_inv(-s)) / (1.0 + 2.0 * np.abs(sv))
    add(_clause("lem31_1_oddness",
                np.concatenate([-g_odd, -ginv_odd]), t_pts + s_pts, tolerance))
    add(_clause("lem31_2_chord_bound", _margins(g * t, big_g), t_pts, tolerance))
    add(_clause("lem31_2_inverse_bound", _margins(s / g0, sv), s_pts, tolerance))

    ratio = sv / s
    add(_clause("lem31_3_ratio_nonincreasing",
                _margins(ratio[:-1], ratio[1:]) + 1e-10,
                s_pts[:-1], tolerance))
    small = 1e-8
    lim0 = float(model.G_inv(small) / small)
    add(_clause("lem31_3_small_s_limit",
                np.array([-abs(lim0 - 1.0 / g0) / (1.0 + lim0)]), [(small,)], tolerance))
    if float(model.g(1e9)) > 1e3:  # g unbounded: the ratio must decay
        add(_clause("lem31_3_large_s_decay",
                    _margins(0.5 * ratio[0], ratio[-1]), [s_pts[-1]], tolerance))
    else:
        g_inf = float(model.g(1e12))
        add(_clause("lem31_3_large_s_limit",
                    np.array([-abs(ratio[-1] - 1.0 / g_inf) / (1.0 + ratio[-1])]),
                    [s_pts[-1]], tolerance))

    add(_clause("lem31_4_ray_comparison", _margins(alpha * big_g, g * t), t_pts, tolerance))
    big_h = model.H(xg, tg)
    add(_clause("lem31_4_h_superhomogeneous",
                _margins(hv.ravel() * tg.ravel(), alpha * mu_t * big_h.ravel()),
                lattice_pts, tolerance))
    g_l = model.g(tg)
    gp_l = model.g_prime(tg)
    big_g_l = model.G(tg)
    add(_clause("lem31_4_hG_ordering",
                _margins(hv.ravel() * big_g_l.ravel(), mu_t * g_l.ravel() * big_h.ravel()),
                lattice_pts, tolerance))
    dh_over_g = (ht * g_l - hv * gp_l) / g_l**2
    add(_clause("lem31_4_quotient_derivative",
                _margins(big_g_l.ravel() * dh_over_g.ravel(),
                         (mu_t - 1.0) * hv.ravel()),
                lattice_pts, tolerance))

    # Tail floor H >= C G^(mu_tilde) for t >= M, x away from the well center.
    m_floor, x_floor = 5.0, 0.5
    sel_t = t >= m_floor
    sel_x = xs >= x_floor
    if sel_t.any() and sel_x.any():
        xt, tt = np.meshgrid(xs[sel_x], t[sel_t], indexing="ij")
        ratio_tail = model.H(xt, tt) / model.G(tt) ** mu_t
        c_fit = 0.95 * float(np.min(ratio_tail))
        pts_tail = [(float(a), float(b)) for a, b in zip(xt.ravel(), tt.ravel())]
        add(_clause("lem31_5_tail_floor",
                    _margins(model.H(xt, tt).ravel(),
                             c_fit * model.G(tt).ravel() ** mu_t),
                    pts_tail, tolerance,
                    info={"fitted_c": c_fit, "t_floor": m_floor, "x_floor": x_floor,
                          "positive": bool(c_fit > 0)}))

    add(_clause("lem31_6_growth_floor",
                _margins((alpha / beta) * big_g, t**alpha), t_pts, tolerance))

    sel = t >= m_floor
    tt = t[sel]
    gg = model.G(tt)
    q_rem = (tt**alpha / gg) ** two_star - (alpha / beta) ** two_star
    upper = _margins(0.0, q_rem)  # remainder must be <= 0
    c_rem = 1.05 * max(0.0, float(np.max(-q_rem * gg**params.delta))) + 1e-12
    lower = _margins(q_rem, -c_rem * gg ** (-params.delta))
    add(_clause("lem31_6_remainder",
                np.concatenate([upper, lower]),
                [(float(q),) for q in np.concatenate([tt, tt])], tolerance,
                info={"fitted_c": c_rem, "t_floor": m_floor}))

    # -- reduced nonlinearity -------------------------------------------------
    xg_s, sg = np.meshgrid(xs, s, indexing="ij")
    fv, big_f = model.f(xg_s, sg)
    lattice_s = [(float(a), float(b)) for a, b in zip(xg_s.ravel(), sg.ravel())]
    add(_clause("lem32_1_f_nonnegative", _margins(fv.ravel(), 0.0), lattice_s, tolerance))

    s_small = np.geomspace(1e-6, 1e-2, 9)[::-1]  # ordered toward the limit s -> 0
    f_small, big_f_small = model.f(0.7, s_small)
    m1, pts1 = _trend_to_zero(f_small / s_small, s_small, floor=1e-3)
    m2, pts2 = _trend_to_zero(big_f_small / s_small**2, s_small, floor=1e-3)
    add(_clause("lem32_2_vanishes_at_zero", np.concatenate([m1, m2]), pts1 + pts2, tolerance))

    s_large = np.geomspace(1e2, 1e6, 9)
    f_large, big_f_large = model.f(0.7, s_large)
    m1, pts1 = _trend_to_zero(f_large / s_large ** (two_star - 1.0), s_large, floor=1e-2)
    m2, pts2 = _trend_to_zero(big_f_large / s_large**two_star, s_large, floor=1e-2)
    add(_clause("lem32_3_subcritical_at_infinity",
                np.concatenate([m1, m2]), pts1 + pts2, tolerance))

    add(_clause("lem32_4_ambrosetti_rabinowitz",
                _margins(fv.ravel() * sg.ravel(), 2.0 * big_f.ravel()),
                lattice_s, tolerance))

    fbar, _ = model.fbar(s)
    f_far, _ = model.f(x_far, s)
    gap = np.abs(f_far - fbar) / (1.0 + np.abs(fbar))
    add(_clause("lem32_5_far_field_limit", _margins(1e-9, gap), s_pts, tolerance))

    m1_floor = 1.0
    sel = s >= m1_floor
    xt, st = np.meshgrid(xs, s[sel], indexing="ij")
    f_lat, _ = model.f(xt, st)
    fbar_lat, _ = model.fbar(st)
    deficit = (fbar_lat - f_lat) * np.exp(nu * xt)
    c_env = max(0.0, float(np.max(deficit / (0.5 * st + st**p)))) * 0.55 + 1e-12
    envelope = 2.0 * c_env * np.exp(-nu * xt) * (0.5 * st + st**p)
    pts_env = [(float(a), float(b)) for a, b in zip(xt.ravel(), st.ravel())]
    add(_clause("lem32_5_lower_envelope",
                _margins(f_lat - fbar_lat, -envelope).ravel(), pts_env, tolerance,
                info={"fitted_c": c_env, "eps": 0.5, "s_floor": m1_floor}))

    return AxiomReport(clauses=clauses, tolerance=tolerance)
