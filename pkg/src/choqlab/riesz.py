"""Riesz-potential machinery for radial fields.

The kernel |x - y|^{-mu} acting between two spheres of radii r and s
reduces to the angular average

    W(r, s) = |S^{N-2}| * int_0^pi sin^{N-2}(th) (r^2 + s^2 - 2 r s cos th)^{-mu/2} dth,

which is homogeneous: W(r, s) = max(r,s)^{-mu} * A(min/max) with A the
one-parameter profile evaluated here by a tanh-sinh rule (the profile has
an integrable endpoint singularity as the ratio approaches 1).  Tables of
W over a grid are precomputed once and reused by every convolution.
"""

from __future__ import annotations

import hashlib
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from . import kernels
from .closed_forms import angular_kernel_diagonal, sphere_surface
from .errors import ConfigError
from .grid import RadialField, RadialGrid
from .quadrature import jacobi_angular, tanh_sinh_theta, tanh_sinh_unit

_MAGIC = b"CHQKRN1\n"


@dataclass(frozen=True)
class AngularRule:
    """tanh-sinh rule prepared for a fixed dimension."""

    dimension: int
    n_points: int = 256
    tau_max: float = 3.6

    @property
    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        theta, w = tanh_sinh_theta(self.n_points, self.tau_max)
        shsq = np.sin(theta / 2.0) ** 2
        pre = w * np.sin(theta) ** (self.dimension - 2)
        return shsq, pre


def angular_profile(ratios: np.ndarray, dimension: int, mu: float,
                    rule: AngularRule | None = None, threads: int = 1) -> np.ndarray:
    """A(t) for ratios t in [0, 1); the diagonal t = 1 has a closed form."""
    rule = rule or AngularRule(dimension)
    shsq, pre = rule.arrays
    t = np.ascontiguousarray(ratios, dtype=float)
    out = np.empty_like(t)
    if threads > 1 and len(t) > 4096:
        bounds = np.linspace(0, len(t), threads + 1, dtype=int)
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [
                pool.submit(kernels.angular_sums, t[a:b], shsq, pre, mu, out[a:b])
                for a, b in zip(bounds[:-1], bounds[1:])
                if b > a
            ]
            for f in futures:
                f.result()
    else:
        kernels.angular_sums(t, shsq, pre, mu, out)
    return out


@dataclass(frozen=True)
class KernelTable:
    """Angular-averaged kernel weights W(r_i, r_j) over a grid."""

    grid: RadialGrid
    mu: float
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        n = self.grid.n_nodes
        if self.matrix.shape != (n, n):
            raise ConfigError("kernel matrix shape does not match grid")


def _diagonal_cell_average(grid: RadialGrid, mu: float, rule: AngularRule) -> np.ndarray:
    """Average of W(r_i, s) over the trapezoid cell around each node.

    Used when mu >= N-1, where the pointwise diagonal diverges but the
    cell average (what the product quadrature actually needs) is finite.
    """
    r = grid.nodes
    edges = np.concatenate([[0.0], (r[:-1] + r[1:]) / 2.0, [r[-1]]])
    lo, hi = edges[:-1], edges[1:]
    x, w = tanh_sinh_unit(96, 3.4)
    n = grid.n_nodes
    svals = np.concatenate([
        (lo[:, None] + (r - lo)[:, None] * x[None, :]).ravel(),  # left side
        (r[:, None] + (hi - r)[:, None] * x[None, :]).ravel(),  # right side
    ])
    rvals = np.concatenate([np.repeat(r, len(x))] * 2)
    hi_rs = np.maximum(svals, rvals)
    lo_rs = np.minimum(svals, rvals)
    ratios = np.where(hi_rs > 0, lo_rs / np.where(hi_rs > 0, hi_rs, 1.0), 0.0)
    a = angular_profile(np.minimum(ratios, 1.0 - 1e-15), grid.dimension, mu, rule)
    wvals = hi_rs ** (-mu) * a
    m = len(x)
    left = (wvals[: n * m].reshape(n, m) @ w) * (r - lo)
    right = (wvals[n * m :].reshape(n, m) @ w) * (hi - r)
    return (left + right) / (hi - lo)


def build_kernel(
    grid: RadialGrid,
    mu: float,
    rule: AngularRule | None = None,
    threads: int = 1,
    cache_dir: str | Path | None = None,
) -> KernelTable:
    """Assemble the symmetric kernel table for (grid, mu).

    The optional binary cache is keyed by (N, mu, n, grid hash).
    """
    n_dim = grid.dimension
    if not 0.0 < mu < min(n_dim, 4):
        raise ConfigError(f"mu must lie in (0, min(N,4)), got {mu}")
    rule = rule or AngularRule(n_dim)

    cache_path = None
    if cache_dir is not None:
        key = f"{n_dim}_{mu!r}_{grid.n_nodes}_{grid.content_hash()[:16]}"
        cache_path = Path(cache_dir) / f"kernel_{key}.bin"
        if cache_path.exists():
            return _load_table(cache_path, grid, mu)

    r = grid.nodes
    n = grid.n_nodes
    iu, ju = np.triu_indices(n, k=1)
    ratios = r[iu] / r[ju]
    a_off = angular_profile(ratios, n_dim, mu, rule, threads=threads)
    surf = sphere_surface(n_dim - 1)
    mat = np.zeros((n, n))
    mat[iu, ju] = surf * r[ju] ** (-mu) * a_off
    mat[ju, iu] = mat[iu, ju]
    if mu < n_dim - 1 - 1e-9:
        np.fill_diagonal(mat, surf * r ** (-mu) * angular_kernel_diagonal(n_dim, mu))
    else:
        np.fill_diagonal(mat, surf * _diagonal_cell_average(grid, mu, rule))
    table = KernelTable(grid=grid, mu=float(mu), matrix=mat)

    if cache_path is not None:
        cache_path.parent.mkdir(parents=True, exist_ok=True)
        _save_table(cache_path, table)
    return table


def _save_table(path: Path, table: KernelTable) -> None:
    grid = table.grid
    digest = grid.content_hash().encode("ascii")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<qdq", grid.dimension, table.mu, grid.n_nodes))
        fh.write(struct.pack("<q", len(digest)))
        fh.write(digest)
        fh.write(np.ascontiguousarray(table.matrix).tobytes())


def _load_table(path: Path, grid: RadialGrid, mu: float) -> KernelTable:
    with open(path, "rb") as fh:
        if fh.read(len(_MAGIC)) != _MAGIC:
            raise ConfigError(f"{path} is not a kernel cache file")
        n_dim, mu_f, n = struct.unpack("<qdq", fh.read(24))
        (dlen,) = struct.unpack("<q", fh.read(8))
        digest = fh.read(dlen).decode("ascii")
        if (n_dim, n) != (grid.dimension, grid.n_nodes) or mu_f != mu:
            raise ConfigError(f"{path} was built for different (N, mu, n)")
        if digest != grid.content_hash():
            raise ConfigError(f"{path} was built for a different node set")
        mat = np.frombuffer(fh.read(8 * n * n), dtype=np.float64).reshape(n, n).copy()
    return KernelTable(grid=grid, mu=mu, matrix=mat)


# -- convolution and double integrals ----------------------------------------


def riesz_convolve(table: KernelTable, values: np.ndarray, exponent_p: float) -> np.ndarray:
    """Potential Phi(r) = int W(r, s) |u(s)|^p s^{N-1} ds at the grid nodes."""
    if exponent_p < 1.0:
        raise ConfigError(f"convolution exponent must be >= 1, got {exponent_p}")
    u = np.abs(np.asarray(values, dtype=float))
    return table.matrix @ (table.grid.weights * u**exponent_p)


def double_integral(table: KernelTable, values: np.ndarray, exponent_p: float) -> float:
    """D_p(u) = iint |u(x)|^p |u(y)|^p |x-y|^{-mu} dx dy for radial u."""
    u = np.abs(np.asarray(values, dtype=float))
    phi = riesz_convolve(table, values, exponent_p)
    return float(table.grid.sphere_area * np.dot(table.grid.weights * u**exponent_p, phi))


# -- translated pair integrals ------------------------------------------------


def make_even_interpolant(grid: RadialGrid, values: np.ndarray):
    """Cubic spline of a radial profile, mirrored evenly through r = 0 and
    cut to zero beyond r_max."""
    v = np.asarray(values, dtype=float)
    x = np.concatenate([-grid.nodes[::-1], grid.nodes])
    y = np.concatenate([v[::-1], v])
    spline = CubicSpline(x, y)
    r_max = grid.r_max

    def interp(d: np.ndarray) -> np.ndarray:
        d = np.asarray(d, dtype=float)
        out = spline(d)
        return np.where(d <= r_max, out, 0.0)

    return interp


def pair_integral(
    grid: RadialGrid,
    f_profile,
    g_field: RadialField | np.ndarray,
    psi,
    offset_r: float,
    n_angle: int = 96,
) -> float:
    """int f(|x|) psi(w(x - R nu)) dx for radial profiles f, w and |nu| = 1.

    Bispherical reduction: with c = cos(angle between x and nu),

        |S^{N-2}| * int_0^inf int_{-1}^1 f(r) psi(w(sqrt(r^2 + R^2 - 2 r R c)))
                                  (1 - c^2)^{(N-3)/2} dc r^{N-1} dr.

    ``f_profile`` may be a callable of r or an array of node values;
    ``psi`` is a pointwise map applied to interpolated w values; w is
    treated as zero beyond the grid radius.
    """
    if offset_r < 0:
        raise ConfigError("offset must be nonnegative")
    w_values = g_field.values if isinstance(g_field, RadialField) else np.asarray(g_field)
    interp = make_even_interpolant(grid, w_values)
    r = grid.nodes
    c, wc = jacobi_angular(n_angle, grid.dimension)
    dist = np.sqrt(
        np.maximum(r[:, None] ** 2 + offset_r**2 - 2.0 * offset_r * r[:, None] * c[None, :], 0.0)
    )
    inner = psi(interp(dist)) @ wc
    f_vals = f_profile(r) if callable(f_profile) else np.asarray(f_profile, dtype=float)
    total = np.dot(grid.weights * f_vals, inner)
    return float(sphere_surface(grid.dimension - 1) * total)
