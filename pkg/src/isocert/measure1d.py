"""One-dimensional probability measures e^{-V} dx / Z and isoperimetric machinery.

A measure is built from a potential V by adaptive truncation (the grid stops
where the density has fallen below e^{-41.4} of its peak, with the discarded
mass estimated and required to stay under 1e-9), a hybrid grid clustered by
probability so that tails are resolved down to 1e-16, and separately
accumulated left-CDF / right-tail tables so that neither end loses precision
to cancellation.

Profiles:
  tilde_profile  -- the half-line surrogate of the isoperimetric profile,
                    min(rho(u(t)), rho(v(t))) with mu((-inf,u)) = mu([v,inf)) = t.
                    (A printed source formula multiplies the *potential*
                    exponential by t; the boundary-density reading used here is
                    the one consistent with the surrogate's own asymptotics and
                    with the boundary measure of half-lines.)
  I_F_profile    -- I_F(r) = s F(1/s) / tilde_I(min(s,1-s)) with s the mass
                    outside the centered ball of radius r; 0 beyond the support.

Criteria on the line: the Cheeger constant as sup t / tilde_I(t); the
two-sided sup criterion F(x) log(1/F(x)) * int dx/rho over each half-line (its
divergence at the truncation boundary is detected and reported); the
convex-measure two-point bound 2 r mu+(A) >= H(mu(A)) + log mu(B_r); and the
monotone rearrangement f~ = G_{mu_f} o F_{mu_r}(|x|), which preserves the law
of f while making it radial and increasing.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

TRUST_TAIL = 1e-15  # smallest one-sided mass the accumulated tables resolve reliably
_LOG_TRUNC = float(np.log(1e18))  # potential rise at which the density is cut off
_MAX_REACH = 1e12  # outermost abscissa the truncation search will visit


def _vec(potential):
    def f(x):
        return np.asarray(potential(np.asarray(x, dtype=float)), dtype=float)

    return f


def _v_scalar(Vfn, x):
    return float(Vfn(np.array([x]))[0])


def _locate_peak(Vfn, lo, hi):
    a = lo if np.isfinite(lo) else -1e6
    b = hi if np.isfinite(hi) else 1e6
    probes = [np.linspace(max(a, -100.0), min(b, 100.0), 2001)]
    if b > 100.0:
        probes.append(np.geomspace(100.0, b, 200))
    if a < -100.0:
        probes.append(-np.geomspace(100.0, -a, 200))
    xs = np.unique(np.clip(np.concatenate(probes), a, b))
    vals = Vfn(xs)
    i = int(np.argmin(vals))
    lo_b = xs[max(i - 1, 0)]
    hi_b = xs[min(i + 1, xs.size - 1)]
    inv_gold = (np.sqrt(5.0) - 1.0) / 2.0
    c = hi_b - inv_gold * (hi_b - lo_b)
    d = lo_b + inv_gold * (hi_b - lo_b)
    fc, fd = _v_scalar(Vfn, c), _v_scalar(Vfn, d)
    for _ in range(80):
        if fc <= fd:
            hi_b, d, fd = d, c, fc
            c = hi_b - inv_gold * (hi_b - lo_b)
            fc = _v_scalar(Vfn, c)
        else:
            lo_b, c, fc = c, d, fd
            d = lo_b + inv_gold * (hi_b - lo_b)
            fd = _v_scalar(Vfn, d)
    x0 = 0.5 * (lo_b + hi_b)
    return x0, _v_scalar(Vfn, x0)


def _march_cut(Vfn, x0, v0, direction):
    """Abscissa beyond which V - v0 >= _LOG_TRUNC, by doubling + bisection."""
    step = 1.0
    prev = x0
    for _ in range(60):
        x = x0 + direction * step
        if abs(x) > _MAX_REACH:
            raise ValueError(
                "tail of exp(-V) decays too slowly: the density cannot be "
                "truncated with less than 1e-9 of the mass outside"
            )
        if _v_scalar(Vfn, x) - v0 >= _LOG_TRUNC:
            lo, hi = prev, x
            for _ in range(60):
                mid = 0.5 * (lo + hi)
                if _v_scalar(Vfn, mid) - v0 >= _LOG_TRUNC:
                    hi = mid
                else:
                    lo = mid
            return hi
        prev = x
        step *= 2.0
    raise ValueError(
        "tail of exp(-V) does not rise by ln(1e18) within the search range; "
        "the measure looks non-normalizable"
    )


def _tail_decay_check(Vfn, x_peak, cut):
    """Estimated mass beyond the cut, in units of exp(v_peak); error if not decaying."""
    d = cut - x_peak
    x2 = x_peak + 0.9 * d
    v_cut = _v_scalar(Vfn, cut)
    v_in = _v_scalar(Vfn, x2)
    if v_cut <= v_in:
        raise ValueError("density is not decaying over the last decade before the cut; tail not integrable")
    # decay rate per e-fold of distance from the peak; integrable tails give
    # int_cut^inf e^{-V} <~ w(cut) |d| / (rate - 1)
    rate = (v_cut - v_in) / (-np.log(0.9))
    v_peak = _v_scalar(Vfn, x_peak)
    return np.exp(-(v_cut - v_peak)) * abs(d) / max(rate - 1.0, 0.5)


@dataclass(frozen=True, eq=False)
class Measure1D:
    """Tabulated probability measure e^{-V} dx / Z on a truncated interval.

    cdf is accumulated from the left and tail from the right, so each is
    accurate in its own end down to TRUST_TAIL; density_at evaluates the
    density exactly from the potential rather than by interpolation.
    """

    grid: np.ndarray
    potential_values: np.ndarray
    density: np.ndarray
    cdf: np.ndarray
    tail: np.ndarray
    node_mass: np.ndarray
    Z: float
    log_norm: float  # log of int exp(-(V - v_min)) over the truncated support
    v_min: float
    median: float
    support: tuple
    truncation: tuple
    log_concave: bool
    potential_fn: Callable
    name: str = "measure"
    params: dict = field(default_factory=dict)

    # -- pointwise evaluations ------------------------------------------------
    def potential_at(self, x):
        return _vec(self.potential_fn)(x)

    def log_density_at(self, x):
        return -(self.potential_at(x) - self.v_min) - self.log_norm

    def density_at(self, x):
        x = np.asarray(x, dtype=float)
        lo, hi = self.truncation
        inside = (x >= lo) & (x <= hi)
        out = np.where(inside, np.exp(self.log_density_at(np.clip(x, lo, hi))), 0.0)
        return float(out) if out.ndim == 0 else out

    def cdf_at(self, x):
        return np.interp(np.asarray(x, dtype=float), self.grid, self.cdf, left=0.0, right=1.0)

    def tail_at(self, x):
        """mu([x, inf)), right-accumulated so the far tail keeps relative accuracy."""
        return np.interp(np.asarray(x, dtype=float), self.grid, self.tail, left=1.0, right=0.0)

    def quantile(self, p):
        p = np.asarray(p, dtype=float)
        if np.any((p <= 0) | (p >= 1)):
            raise ValueError("quantile level must lie in (0, 1)")
        left = np.interp(p, self.cdf, self.grid)
        right = np.interp(np.minimum(1.0 - p, 1.0), self.tail[::-1], self.grid[::-1])
        out = np.where(p <= 0.5, left, right)
        return float(out) if out.ndim == 0 else out

    def right_quantile(self, t):
        """v with mu([v, inf)) = t; accurate down to t ~ TRUST_TAIL."""
        t = np.asarray(t, dtype=float)
        if np.any((t <= 0) | (t > 1)):
            raise ValueError("tail mass must lie in (0, 1]")
        out = np.interp(t, self.tail[::-1], self.grid[::-1])
        return float(out) if out.ndim == 0 else out

    def mass_outside(self, r, center=0.0):
        """mu(|x - center| > r)."""
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise ValueError("radius must be nonnegative")
        out = self.cdf_at(center - r) + self.tail_at(center + r)
        # A zero-radius ball carries no mass for these densities, so the
        # outside mass is exactly 1; summing cdf and tail would instead pick
        # up cancellation noise of order n*eps and break the s == 1 branch
        # of the profile formulas.
        out = np.where(r == 0.0, 1.0, np.minimum(out, 1.0))
        return float(out) if out.ndim == 0 else out

    def radius_of_outside_mass(self, t, center=0.0):
        """r with mu(|x - center| > r) = t."""
        r_tab, out_tab = self._outside_table(center)
        t = np.asarray(t, dtype=float)
        out = np.interp(t, out_tab[::-1], r_tab[::-1])
        return float(out) if out.ndim == 0 else out

    def _outside_table(self, center=0.0):
        r_tab = np.unique(np.abs(self.grid - center))
        if r_tab[0] > 0.0:
            r_tab = np.concatenate(([0.0], r_tab))
        out = self.cdf_at(center - r_tab) + self.tail_at(center + r_tab)
        out = np.minimum.accumulate(np.minimum(out, 1.0))
        return r_tab, out

    def integrate(self, values):
        """int values dmu by the nodal-mass rule (exact on constants)."""
        values = np.asarray(values, dtype=float)
        if values.shape != self.grid.shape:
            raise ValueError("values must be sampled on the measure grid")
        return float(np.sum(values * self.node_mass))

    @property
    def n(self):
        return self.grid.size


def _probe_symmetry(Vfn, hi):
    xs = np.array([0.3, 0.7, 1.3, 2.9, 5.3]) * min(hi, 10.0) / 10.0
    xs = xs[xs < hi]
    if xs.size == 0:
        return False
    a, b = Vfn(xs), Vfn(-xs)
    return bool(np.all(np.abs(a - b) <= 1e-12 * (1.0 + np.abs(a))))


def _hybrid_knots(xs, cdf_prov, tail_prov, lo, hi, n, symmetric):
    eps_p = 1.0 / n
    if symmetric:
        q = np.linspace(0.5 + eps_p, 1.0 - eps_p, n // 4)
        kq = np.interp(q, cdf_prov, xs)
        ku = np.linspace(0.0, hi, n // 8 + 1)[1:]
        t_levels = np.geomspace(1e-16, 1e-2, n // 8)
        kt = np.interp(t_levels, tail_prov[::-1], xs[::-1])
        right = np.unique(np.concatenate([kq, ku, kt, [hi]]))
        right = right[(right > 0.0) & (right <= hi)]
        right = right[np.concatenate(([True], np.diff(right) > (hi - lo) * 1e-13))]
        return np.concatenate([-right[::-1], [0.0], right])
    q = np.linspace(eps_p, 1.0 - eps_p, n // 2)
    kq = np.interp(q, cdf_prov, xs)
    ku = np.linspace(lo, hi, n // 4)
    lev = np.geomspace(1e-16, 1e-2, n // 8)
    kl = np.interp(lev, cdf_prov, xs)
    kr = np.interp(lev, tail_prov[::-1], xs[::-1])
    g = np.unique(np.concatenate([kq, ku, kl, kr, [lo, hi]]))
    g = np.clip(g, lo, hi)
    g = np.unique(g)
    keep = np.concatenate(([True], np.diff(g) > (hi - lo) * 1e-13))
    return g[keep]


def _accumulate(grid, w):
    """Cell masses by trapezoid; (cdf, tail, node_mass) normalized to total 1."""
    cells = 0.5 * (w[:-1] + w[1:]) * np.diff(grid)
    total = float(np.sum(cells))
    if not (total > 0.0) or not np.isfinite(total):
        raise ValueError("density integrates to zero or overflows on the grid")
    cells = cells / total
    cdf = np.concatenate(([0.0], np.cumsum(cells)))
    cdf[-1] = 1.0
    tail = np.concatenate((np.cumsum(cells[::-1])[::-1], [0.0]))
    tail[0] = 1.0
    nm = np.empty_like(w)
    nm[0] = 0.5 * cells[0]
    nm[-1] = 0.5 * cells[-1]
    nm[1:-1] = 0.5 * (cells[:-1] + cells[1:])
    return cells, cdf, tail, nm, total


def build_measure(
    potential,
    support=(-np.inf, np.inf),
    n=16384,
    grid_kind="hybrid",
    name="measure",
    params=None,
    log_concave=None,
):
    """Tabulate e^{-V} dx / Z on an adaptively truncated grid.

    grid_kind "hybrid" (default) mixes quantile-uniform, uniform, and
    log-probability tail knots (~n total); "uniform" is an exact linspace of n
    points.  Infinite support sides are cut where the density falls below
    e^{-41.4} of the peak; the estimated mass beyond the cut must stay under
    1e-9 or the construction is refused.
    """
    if n < 64:
        raise ValueError("grid size too small")
    if grid_kind not in ("hybrid", "uniform"):
        raise ValueError("grid_kind must be 'hybrid' or 'uniform'")
    a, b = float(support[0]), float(support[1])
    if not a < b:
        raise ValueError("empty support interval")
    Vfn = _vec(potential)

    x_peak, v_peak = _locate_peak(Vfn, a, b)
    outside_est = 0.0
    if np.isfinite(a):
        lo = a
    else:
        lo = _march_cut(Vfn, x_peak, v_peak, -1.0)
        outside_est += _tail_decay_check(Vfn, x_peak, lo)
    if np.isfinite(b):
        hi = b
    else:
        hi = _march_cut(Vfn, x_peak, v_peak, +1.0)
        outside_est += _tail_decay_check(Vfn, x_peak, hi)

    symmetric = np.isfinite(a) == np.isfinite(b) and _probe_symmetry(Vfn, min(abs(lo), abs(hi)) * 0.99 + 1e-9)
    if symmetric and abs(lo + hi) <= 1e-9 * (hi - lo) + 1e-300:
        half = max(hi, -lo)
        lo, hi = -half, half
    else:
        symmetric = False

    # provisional pass to place probability-clustered knots
    xs = np.linspace(lo, hi, 65537)
    v_prov = Vfn(xs)
    vmin_prov = float(np.min(v_prov))
    w_prov = np.exp(-(v_prov - vmin_prov))
    _, cdf_prov, tail_prov, _, z_prov = _accumulate(xs, w_prov)

    # mass outside the cuts, relative to the retained mass
    rel_outside = outside_est * np.exp(-(vmin_prov - v_peak)) / z_prov
    if rel_outside > 1e-9:
        raise ValueError(f"mass outside the truncated support ({rel_outside:.2e}) exceeds 1e-9")

    if grid_kind == "uniform":
        grid = np.linspace(lo, hi, n)
    else:
        grid = _hybrid_knots(xs, cdf_prov, tail_prov, lo, hi, n, symmetric)

    v = Vfn(grid)
    if not np.all(np.isfinite(v)):
        raise ValueError("potential is not finite on the support")
    v_min = float(np.min(v))
    w = np.exp(-(v - v_min))
    _, cdf, tail, nm, z_shift = _accumulate(grid, w)
    log_norm = float(np.log(z_shift))
    density = w / z_shift
    Z = z_shift * np.exp(-v_min)

    if log_concave is None:
        slopes = np.diff(v) / np.diff(grid)
        tol = 1e-7 * (1.0 + float(np.max(np.abs(slopes))))
        log_concave = bool(np.all(np.diff(slopes) >= -tol))

    mu = Measure1D(
        grid=grid,
        potential_values=v,
        density=density,
        cdf=cdf,
        tail=tail,
        node_mass=nm,
        Z=float(Z),
        log_norm=log_norm,
        v_min=v_min,
        median=0.0,
        support=(a, b),
        truncation=(float(lo), float(hi)),
        log_concave=bool(log_concave),
        potential_fn=potential,
        name=name,
        params=dict(params or {}),
    )
    object.__setattr__(mu, "median", float(mu.quantile(0.5)))
    return mu


def builtin_measure(name, alpha=None, n=16384, support=(-np.inf, np.inf), grid_kind="hybrid"):
    """Built-in families: gauss (e^{-x^2/2}), exp (e^{-|x|}/2), exp_power
    (e^{-|x|^alpha}, alpha in [1,2]), loglog (e^{-|x| log(1+x^2)})."""
    if name == "gauss":
        return build_measure(lambda x: 0.5 * x * x, support=support, n=n, grid_kind=grid_kind, name="gauss", log_concave=True)
    if name == "exp":
        return build_measure(lambda x: np.abs(x), support=support, n=n, grid_kind=grid_kind, name="exp", log_concave=True)
    if name == "exp_power":
        if alpha is None or not 1.0 <= alpha <= 2.0:
            raise ValueError("exp_power requires alpha in [1, 2]")
        return build_measure(
            lambda x: np.abs(x) ** alpha,
            support=support,
            n=n,
            grid_kind=grid_kind,
            name=f"exp_power({alpha:g})",
            params={"alpha": float(alpha)},
            log_concave=True,
        )
    if name == "loglog":
        return build_measure(
            lambda x: np.abs(x) * np.log1p(x * x),
            support=support,
            n=n,
            grid_kind=grid_kind,
            name="loglog",
            log_concave=True,
        )
    raise ValueError(f"unknown builtin measure '{name}'")


# -- sampled functions --------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """f sampled on a measure grid with a derivative table.

    log_deriv, when present, is d/dx log f — exponential-family members use it
    so ratio arguments |f'|/f stay accurate where f under/overflows.
    """

    grid: np.ndarray
    values: np.ndarray
    dvalues: np.ndarray
    log_deriv: Optional[np.ndarray] = None
    name: str = "f"
    deriv_consistent: bool = True

    @classmethod
    def from_callable(cls, mu, fn, dfn=None, log_deriv_fn=None, name="f", check=True):
        grid = mu.grid
        values = np.asarray(fn(grid), dtype=float)
        if values.shape != grid.shape or not np.all(np.isfinite(values)):
            raise ValueError("function values must be finite on the measure grid")
        if dfn is not None:
            dvalues = np.asarray(dfn(grid), dtype=float)
        else:
            dvalues = np.gradient(values, grid)
        log_deriv = None if log_deriv_fn is None else np.asarray(log_deriv_fn(grid), dtype=float)
        ok = True
        if check and dfn is not None:
            rng = np.random.default_rng(2718)
            idx = rng.integers(1, grid.size - 1, size=10)
            fd = (values[idx + 1] - values[idx - 1]) / (grid[idx + 1] - grid[idx - 1])
            scale = np.maximum(np.abs(dvalues[idx]), 1e-8 * (1.0 + np.max(np.abs(values))))
            ok = bool(np.all(np.abs(fd - dvalues[idx]) <= 0.05 * scale + 1e-8))
        return cls(grid=grid, values=values, dvalues=dvalues, log_deriv=log_deriv, name=name, deriv_consistent=ok)


# -- isoperimetric profiles ----------------------------------------------------


@dataclass(frozen=True, eq=False)
class IsoProfile:
    """Half-line isoperimetric surrogate on a grid of one-sided masses t."""

    t_grid: np.ndarray
    tilde_I: np.ndarray
    u_t: np.ndarray
    v_t: np.ndarray
    trusted: np.ndarray
    lower_bound_k: Optional[float] = None
    lower_bound_exponent: Optional[float] = None


def tilde_profile(mu, t_grid):
    """min(rho(u(t)), rho(v(t))) with mu((-inf, u(t))) = mu([v(t), inf)) = t."""
    t = np.asarray(t_grid, dtype=float)
    if np.any((t <= 0) | (t > 0.5)):
        raise ValueError("t grid must lie in (0, 1/2]")
    u = np.atleast_1d(mu.quantile(t))
    v = np.atleast_1d(mu.right_quantile(t))
    vals = np.minimum(mu.density_at(u), mu.density_at(v))
    trusted = t >= TRUST_TAIL
    return IsoProfile(t_grid=t, tilde_I=np.atleast_1d(vals), u_t=u, v_t=v, trusted=np.atleast_1d(trusted))


@dataclass(frozen=True, eq=False)
class IFProfile:
    """I_F along ball radii: value s F(1/s) / tilde_I(min(s, 1-s)), 0 past the support."""

    r_grid: np.ndarray
    s_values: np.ndarray
    values: np.ndarray
    zero_flag: np.ndarray  # True where the mass outside the ball vanishes
    trusted: np.ndarray


def I_F_profile(mu, F, r_grid, center=0.0):
    r = np.atleast_1d(np.asarray(r_grid, dtype=float))
    if np.any(r < 0):
        raise ValueError("radii must be nonnegative")
    if abs(float(F(np.array([1.0]))[0])) > 1e-9:
        raise ValueError("entropy profile must satisfy F(1) = 0")
    s = np.atleast_1d(mu.mass_outside(r, center=center))
    zero = s <= 0.0
    trusted = zero | (s >= TRUST_TAIL)
    vals = np.zeros_like(s)
    live = ~zero & (s < 1.0)
    if np.any(live):
        sl = s[live]
        tt = np.minimum(sl, 1.0 - sl)
        prof = tilde_profile(mu, tt)
        with np.errstate(divide="ignore", invalid="ignore"):
            num = sl * F(1.0 / sl)
            vals[live] = np.where(prof.tilde_I > 0, num / prof.tilde_I, np.inf)
    # s == 1 (r = 0 on full-mass balls): F(1) = 0 makes the value 0
    return IFProfile(r_grid=r, s_values=s, values=vals, zero_flag=zero, trusted=trusted)


def cheeger_constant(mu, t_grid=None):
    """sup over sampled t of min(t, 1-t) / tilde_I(t) on (0, 1/2]."""
    if t_grid is None:
        t_grid = np.concatenate((np.geomspace(1e-9, 0.45, 1500), np.linspace(0.451, 0.5, 500)))
    prof = tilde_profile(mu, t_grid)
    with np.errstate(divide="ignore"):
        ratio = np.where(prof.tilde_I > 0, np.minimum(prof.t_grid, 1.0 - prof.t_grid) / prof.tilde_I, np.inf)
    ratio = ratio[prof.trusted]
    return float(np.max(ratio))


# -- line criteria --------------------------------------------------------------


@dataclass(frozen=True)
class BobkovGoetzeReport:
    left_value: Optional[float]
    left_arg: Optional[float]
    left_status: Optional[str]
    right_value: Optional[float]
    right_arg: Optional[float]
    right_status: Optional[str]


def _bg_side(mu, side):
    grid, cdf, tail = mu.grid, mu.cdf, mu.tail
    m = mu.median
    n = grid.size
    j = int(np.searchsorted(grid, m))  # first node with grid[j] >= m
    node_is_m = j < n and grid[j] == m
    # log of 1/rho at the nodes
    log_inv_rho = (mu.potential_values - mu.v_min) + mu.log_norm
    with np.errstate(divide="ignore"):
        # log of each cell's trapezoid contribution to int dx / rho
        cell = np.logaddexp(log_inv_rho[:-1], log_inv_rho[1:]) - np.log(2.0) + np.log(np.diff(grid))
    sliver = -np.inf
    if not node_is_m:
        lr_m = float((mu.potential_at(np.array([m]))[0] - mu.v_min) + mu.log_norm)
        if side == "left":
            width = m - grid[j - 1]
            sliver = np.logaddexp(log_inv_rho[j - 1], lr_m) - np.log(2.0) + np.log(max(width, 1e-300))
        else:
            width = grid[j] - m
            sliver = np.logaddexp(lr_m, log_inv_rho[j]) - np.log(2.0) + np.log(max(width, 1e-300))
    if side == "left":
        # nodes 0..j-1 sit strictly left of m
        idx = np.arange(0, j)
        if idx.size == 0:
            return 0.0, m, "FINITE"
        if node_is_m:
            # I(x_i) = sum of cells i..j-1
            log_I = np.logaddexp.accumulate(cell[:j][::-1])[::-1]
        else:
            # I(x_i) = sliver + sum of cells i..j-2 (node j-1 gets the sliver alone)
            full = cell[: j - 1]
            acc = np.logaddexp.accumulate(full[::-1])[::-1] if full.size else np.zeros(0)
            log_I = np.logaddexp(np.concatenate((acc, [-np.inf])), sliver)
        mass, xs = cdf[idx], grid[idx]
        boundary_first = True  # the truncation boundary is the first array element
    else:
        jr = j + 1 if node_is_m else j  # first node strictly right of m
        idx = np.arange(jr, n)
        if idx.size == 0:
            return 0.0, m, "FINITE"
        if node_is_m:
            # I(x_{j+1+q}) = sum of cells j..j+q
            log_I = np.logaddexp.accumulate(cell[j:])
        else:
            # I(x_{j+q}) = sliver + sum of cells j..j+q-1
            acc = np.concatenate(([-np.inf], np.logaddexp.accumulate(cell[j:])))
            log_I = np.logaddexp(acc, sliver)
        mass, xs = tail[idx], grid[idx]
        boundary_first = False
    good = mass >= TRUST_TAIL
    if not np.any(good):
        return 0.0, m, "FINITE"
    mass, xs, log_I = mass[good], xs[good], log_I[good]
    with np.errstate(divide="ignore"):
        logG = np.log(mass) + np.log(-np.log(mass)) + log_I
    G = np.exp(logG)
    i_star = int(np.argmax(G))
    value, arg = float(G[i_star]), float(xs[i_star])
    # divergence: still growing across the last resolved decades of tail mass
    edge = mass <= 1e-12
    status = "FINITE"
    if np.count_nonzero(edge) >= 3:
        Ge = G[edge]
        g_boundary, g_inner = (Ge[0], Ge[-1]) if boundary_first else (Ge[-1], Ge[0])
        if g_boundary >= 0.98 * value and g_boundary > g_inner * 1.02:
            status = "DIVERGENT"
    return value, arg, status


def bobkov_goetze(mu, which="both"):
    """Two-sided sup of F(x) log(1/F(x)) int_x^m dx/rho (and the mirror image).

    The inner integral is accumulated in log space; DIVERGENT means the
    running value still grows at the truncation boundary.
    """
    if which not in ("left", "right", "both"):
        raise ValueError("which must be 'left', 'right', or 'both'")
    lv = la = ls = rv = ra = rs = None
    if which in ("left", "both"):
        lv, la, ls = _bg_side(mu, "left")
    if which in ("right", "both"):
        rv, ra, rs = _bg_side(mu, "right")
    return BobkovGoetzeReport(left_value=lv, left_arg=la, left_status=ls, right_value=rv, right_arg=ra, right_status=rs)


@dataclass(frozen=True, eq=False)
class BobkovBoundReport:
    t_grid: np.ndarray
    margins: np.ndarray
    r_values: np.ndarray
    min_margin: float
    arg_t: float


def bobkov_bound_check(mu, t_grid, center=0.0):
    """Margin of the convex-measure bound 2 r mu+(A) >= H(t) + log mu(B_r).

    A = [v(t), inf) is the half-line of mass t, r the ball radius with the same
    outside mass, mu+(A) = rho(v(t)).  Requires a log-concave measure.
    """
    if not mu.log_concave:
        raise ValueError("the two-point bound is only guaranteed for log-concave measures")
    t = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if np.any((t <= 0) | (t > 0.5)):
        raise ValueError("t grid must lie in (0, 1/2]")
    v = np.atleast_1d(mu.right_quantile(t))
    surf = mu.density_at(v)
    r = np.atleast_1d(mu.radius_of_outside_mass(t, center=center))
    # mu(B_r) = 1 - t by the choice of r
    rhs = t * np.log(1.0 / t) + (1.0 - t) * np.log(1.0 / (1.0 - t)) + np.log1p(-t)
    margins = 2.0 * r * surf - rhs
    i = int(np.argmin(margins))
    return BobkovBoundReport(t_grid=t, margins=margins, r_values=r, min_margin=float(margins[i]), arg_t=float(t[i]))


# -- rearrangement ---------------------------------------------------------------


def rearrange(mu, f):
    """Monotone radial rearrangement: f~(x) = G_f(F_r(|x|)), same law as f.

    G_f is the weighted quantile of the law of f under mu and F_r the CDF of
    |x| under mu; the result increases in |x|.
    """
    if isinstance(f, SampledFunction):
        vals = f.values
    else:
        vals = np.asarray(f, dtype=float)
    if vals.shape != mu.grid.shape:
        raise ValueError("function must be sampled on the measure grid")
    if np.any(vals < 0):
        raise ValueError("rearrangement requires f >= 0")
    order = np.argsort(vals, kind="stable")
    sv = vals[order]
    cw = np.cumsum(mu.node_mass[order])
    cw[-1] = 1.0
    # Both cumulative tables are cumsums of the same node masses (in value
    # order and in radial order) so the searchsorted quantization moves any
    # level set by at most one node's mass.
    r_order = np.argsort(np.abs(mu.grid), kind="stable")
    cwr = np.cumsum(mu.node_mass[r_order])
    cwr[-1] = 1.0
    p_radial = np.empty_like(cwr)
    p_radial[r_order] = cwr
    idx = np.searchsorted(cw, np.clip(p_radial, 0.0, 1.0), side="left")
    new_vals = sv[np.minimum(idx, sv.size - 1)]
    dvals = np.gradient(new_vals, mu.grid)
    return SampledFunction(grid=mu.grid, values=new_vals, dvalues=dvals, name="rearranged")


def kolmogorov_distance(mu, f, g):
    """sup_t |mu(f <= t) - mu(g <= t)| for two sampled functions."""
    fv = f.values if isinstance(f, SampledFunction) else np.asarray(f, dtype=float)
    gv = g.values if isinstance(g, SampledFunction) else np.asarray(g, dtype=float)
    pts = np.unique(np.concatenate([fv, gv]))
    of, og = np.argsort(fv, kind="stable"), np.argsort(gv, kind="stable")
    cf = np.concatenate(([0.0], np.cumsum(mu.node_mass[of])))
    cg = np.concatenate(([0.0], np.cumsum(mu.node_mass[og])))
    Ff = cf[np.searchsorted(fv[of], pts, side="right")]
    Fg = cg[np.searchsorted(gv[og], pts, side="right")]
    return float(np.max(np.abs(Ff - Fg)))


# -- tail-ratio stabilization ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Lemma41Report:
    r_values: np.ndarray
    ratios: np.ndarray  # I_log(r)/r; NaN where the outside mass is below trust
    sup: float
    arg_r: float
    R_half: float

    def window_sup(self, r_lo, r_hi):
        m = (self.r_values >= r_lo) & (self.r_values <= r_hi)
        vals = self.ratios[m]
        vals = vals[np.isfinite(vals)]
        return float(np.max(vals)) if vals.size else 0.0


def lemma41_ratio(mu, r_range=None, n=800, F=None):
    """Sampled sup of I_log(r)/r for r past the half-mass radius.

    Radii whose outside mass underflows the trusted tail resolution are
    reported as NaN and excluded from suprema; radii beyond the support give
    exactly 0 (the profile vanishes there).
    """
    if not mu.log_concave:
        raise ValueError("tail-ratio stabilization is stated for log-concave measures")
    R_half = float(mu.radius_of_outside_mass(0.5))
    hi_cap = max(abs(mu.truncation[0]), abs(mu.truncation[1]))
    if r_range is None:
        r_range = (R_half, hi_cap)
    r_lo = max(float(r_range[0]), R_half)
    r_hi = float(r_range[1])
    if not r_lo < r_hi:
        raise ValueError("empty radius range")
    r = np.linspace(r_lo, r_hi, n)
    if F is None:
        from .entropy import log_entropy

        F = log_entropy()
    prof = I_F_profile(mu, F, r)
    ratios = np.where(prof.zero_flag, 0.0, prof.values / np.maximum(r, 1e-300))
    ratios = np.where(prof.trusted, ratios, np.nan)
    finite = np.isfinite(ratios)
    if np.any(finite):
        i = int(np.nanargmax(np.where(finite, ratios, -np.inf)))
        sup, arg = float(ratios[i]), float(r[i])
    else:
        sup, arg = 0.0, r_lo
    return Lemma41Report(r_values=r, ratios=ratios, sup=sup, arg_r=arg, R_half=R_half)


@dataclass(frozen=True)
class ProfileFitReport:
    k: float
    exponent: float
    t_lo: float
    t_hi: float
    n_used: int


def fitted_profile_lower_bound(profile, alpha):
    """Largest k with tilde_I(t) >= k t log(1/t)^{1 - 1/alpha} on the trusted grid.

    Positive k certifies the power-of-log lower-bound model for the sampled
    range (restricted to t <= 1/e so the log factor stays >= 1).
    """
    if alpha < 1.0:
        raise ValueError("alpha must be >= 1")
    expo = 1.0 - 1.0 / alpha
    m = profile.trusted & (profile.t_grid <= 1.0 / np.e)
    if not np.any(m):
        raise ValueError("no trusted profile points with t <= 1/e")
    t = profile.t_grid[m]
    model = t * np.log(1.0 / t) ** expo
    k = float(np.min(profile.tilde_I[m] / model))
    return ProfileFitReport(k=k, exponent=expo, t_lo=float(t.min()), t_hi=float(t.max()), n_used=int(t.size))
