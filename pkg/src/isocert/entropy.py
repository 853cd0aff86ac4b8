"""Entropy profiles F and their convex conjugate machinery.

An admissible profile is concave, increasing, with F(1) = 0; the checks below
sample the four standard assumptions:

  A1) F concave, increasing, F(1) = 0
  A2) y F(y) -> 0 as y -> 0 and F(y) -> infinity
  A3) y F(y) convex on [0, 1 + Delta] for some Delta > 0
  A4) y F'(y) <= 1 and nonincreasing on [y0, infinity) for some y0 >= 1

The generalized family flattens a base profile phi above the point x0 where
phi reaches 1:

    F_tau(x) = phi(x)                          for 0 < x <= x0
    F_tau(x) = (1/tau) (phi(x)^tau - 1) + 1    for x >= x0,

and the perturbation psi_{tau,beta} (identity below 1) composes with it so
that psi_{tau,beta}(F_tau) equals F_{2/beta} exactly.

Phi = (y F(y) - y)^* drives every integrability condition.  Next to the grid
table (conjugate_Phi) there is a continuous log-space evaluation log_Phi that
stays exact for arguments far beyond any table's slope range; for F = log it
reduces to Phi(x) = e^x.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .convex import ConjugateTable, legendre_transform


@dataclass(frozen=True)
class EntropyFunction:
    """An entropy profile F with optional closed-form derivative.

    fn_log evaluates F(e^u) directly from u, so that integrability sweeps can
    reach arguments like e^1500 without overflowing; builders supply it for
    the closed-form families.
    """

    fn: Callable
    dfn: Optional[Callable] = None
    fn_log: Optional[Callable] = None
    name: str = "F"
    tau: Optional[float] = None
    x0: Optional[float] = None
    beta: Optional[float] = None

    def __call__(self, y):
        return self.fn(np.asarray(y, dtype=float))

    def at_log(self, u):
        """F(e^u) evaluated from u."""
        u = np.asarray(u, dtype=float)
        if self.fn_log is not None:
            return self.fn_log(u)
        if np.any(u > 700.0):
            raise OverflowError("argument exceeds e^700 and no log-form evaluation is available")
        return self.fn(np.exp(u))

    def derivative(self, y):
        y = np.asarray(y, dtype=float)
        if self.dfn is not None:
            return self.dfn(y)
        h = 1e-6 * y
        return (self.fn(y + h) - self.fn(y - h)) / (2.0 * h)


def log_entropy():
    """F = log, the classical entropy profile."""
    return EntropyFunction(
        fn=lambda y: np.log(y),
        dfn=lambda y: 1.0 / y,
        fn_log=lambda u: u,
        name="log",
        tau=1.0,
        x0=float(np.e),
    )


def _bisect_increasing(f, target, lo, hi, rel_tol=1e-12, iters=200):
    flo, fhi = f(lo), f(hi)
    if not (flo <= target <= fhi):
        raise ValueError("target not bracketed on the search interval")
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if f(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= rel_tol * hi:
            break
    return 0.5 * (lo + hi)


def eval_F_tau(phi, tau, x):
    """The flattened profile: phi below x0 (phi(x0)=1), power-tau growth above."""
    if not 0 < tau <= 1:
        raise ValueError("tau must lie in (0, 1]")
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("F_tau argument must be positive")
    p = phi(x)
    with np.errstate(invalid="ignore"):
        upper = (np.maximum(p, 0.0) ** tau - 1.0) / tau + 1.0
    return np.where(p <= 1.0, p, upper)


def F_tau(tau, phi=None):
    """Build the F_tau profile as an EntropyFunction (base defaults to log)."""
    if phi is None:
        phi = log_entropy()
    if not 0 < tau <= 1:
        raise ValueError("tau must lie in (0, 1]")
    x0 = _bisect_increasing(lambda x: float(phi(np.array([x]))[0]), 1.0, 1.0, 1e9)

    def fn(y):
        return eval_F_tau(phi, tau, y)

    def dfn(y):
        y = np.asarray(y, dtype=float)
        p = phi(y)
        dp = phi.derivative(y)
        return np.where(p <= 1.0, dp, np.maximum(p, 1e-300) ** (tau - 1.0) * dp)

    def fn_log(u):
        pl = phi.at_log(u)
        with np.errstate(invalid="ignore"):
            upper = (np.maximum(pl, 0.0) ** tau - 1.0) / tau + 1.0
        return np.where(pl <= 1.0, pl, upper)

    return EntropyFunction(fn=fn, dfn=dfn, fn_log=fn_log, name=f"F_tau({phi.name},{tau:g})", tau=tau, x0=x0)


def eval_psi_tau_beta(tau, beta, x):
    """Concave perturbation: identity below 1, slowed growth above.

    psi_{2/beta, beta} is the identity; requires tau >= 2/beta.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    if tau < 2.0 / beta - 1e-12:
        raise ValueError("psi undefined for tau < 2/beta")
    x = np.asarray(x, dtype=float)
    base = 1.0 + tau * (x - 1.0)
    with np.errstate(invalid="ignore"):
        upper = 0.5 * beta * (np.maximum(base, 0.0) ** (2.0 / (tau * beta)) - 1.0) + 1.0
    out = np.where(x <= 1.0, x, upper)
    return float(out) if out.ndim == 0 else out


def psi_derivative(tau, beta, x):
    x = np.asarray(x, dtype=float)
    base = 1.0 + tau * (x - 1.0)
    with np.errstate(invalid="ignore"):
        upper = np.maximum(base, 1e-300) ** (2.0 / (tau * beta) - 1.0)
    return np.where(x <= 1.0, 1.0, upper)


def conjugate_Phi(F, x_grid, y_min=1e-8, y_max=1e8, n=16384):
    """Grid table of Phi(x) = sup_y (x y - y F(y) + y).

    The primal grid is log-spaced over [y_min, y_max] with an explicit 0
    ordinate (the integrand vanishes at 0 by A2).  Dual points beyond the
    grid's slope range keep their truncation flag.
    """
    x_grid = np.asarray(x_grid, dtype=float)
    y = np.geomspace(y_min, y_max, n)
    g = y * F(y) - y
    y = np.concatenate(([0.0], y))
    g = np.concatenate(([0.0], g))
    return legendre_transform((y, g), x_grid)


def _phi_objective(F, x, u):
    """log of the conjugate integrand: u + log(x + 1 - F(e^u)), -inf outside."""
    rem = x + 1.0 - F.at_log(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = u + np.log(rem)
    return np.where(rem > 0, val, -np.inf)


def log_Phi(F, x, iters=140):
    """log Phi(x) by maximizing u + log(x + 1 - F(e^u)) over u.

    The objective is unimodal for admissible F (the remainder term decreases
    through the stationary point x + 1 - F(y) = y F'(y)); golden-section runs
    vectorized over x.  Exact overflow-free route for large arguments: for
    F = log it returns x identically.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x).astype(float)

    # bracket the zero of x + 1 - F(e^u): the maximizer lies below it.  For
    # negative x the zero sits far left (F(e^u) -> -inf as u -> -inf), so the
    # lower end of the bracket scales with x.
    lo = np.minimum(-40.0, 1.5 * x - 10.0)
    for _ in range(64):
        sunk = F.at_log(lo) < x + 1.0
        if np.all(sunk):
            break
        lo = np.where(sunk, lo, 2.0 * lo - 10.0)
    hi = np.full_like(x, 1.0)
    for _ in range(64):
        need = F.at_log(hi) < x + 1.0
        if not np.any(need):
            break
        hi = np.where(need, hi * 2.0, hi)
        if np.all(hi > 1e9):
            raise ValueError("F does not reach the requested level; A2 growth violated")
    lo_root, hi_root = lo.copy(), hi
    for _ in range(120):
        mid = 0.5 * (lo_root + hi_root)
        below = F.at_log(mid) < x + 1.0
        lo_root = np.where(below, mid, lo_root)
        hi_root = np.where(below, hi_root, mid)
    u_root = lo_root

    a = lo
    b = u_root
    inv_gold = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - inv_gold * (b - a)
    d = a + inv_gold * (b - a)
    fc = _phi_objective(F, x, c)
    fd = _phi_objective(F, x, d)
    for _ in range(iters):
        take_left = fc >= fd
        b = np.where(take_left, d, b)
        a = np.where(take_left, a, c)
        c = b - inv_gold * (b - a)
        d = a + inv_gold * (b - a)
        fc = _phi_objective(F, x, c)
        fd = _phi_objective(F, x, d)
    u_star = 0.5 * (a + b)
    out = _phi_objective(F, x, u_star)
    # the sup is never below the y = 1 ordinate, log(x + 1 - F(1)) = log1p(x),
    # which exists only for x > -1
    floor = np.where(x > -1.0, np.log1p(np.where(x > -1.0, x, 0.0)), -np.inf)
    out = np.maximum(out, floor)
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class AssumptionReport:
    a1: bool
    a2: bool
    a3: bool
    a4: bool
    delta: float  # largest sampled Delta <= 9 with y F(y) convex on [0, 1+Delta]
    y0: Optional[float]  # smallest sampled threshold validating A4
    witnesses: dict = field(default_factory=dict)
    f_at_1: float = 0.0

    def all_pass(self):
        return self.a1 and self.a2 and self.a3 and self.a4


def check_assumptions(F, n=4096):
    """Sampled assumption flags; a pass means no sampled violation."""
    wit = {}
    f1 = float(F(np.array([1.0]))[0])

    y = np.geomspace(1e-8, 1e8, n)
    vals = F(y)
    tol = 1e-12 * (1.0 + float(np.max(np.abs(vals[np.isfinite(vals)]))))
    slopes = np.diff(vals) / np.diff(y)
    inc = slopes >= -tol
    conc = np.diff(slopes) <= tol
    a1 = abs(f1) <= 1e-10 and bool(np.all(inc)) and bool(np.all(conc))
    if not np.all(inc):
        wit["a1_monotone"] = float(y[np.argmin(inc)])
    if not np.all(conc):
        wit["a1_concave"] = float(y[np.argmin(conc) + 1])

    ks = np.arange(1, 13)
    small = 10.0 ** (-ks.astype(float))
    m = np.abs(small * F(small))
    tail_ok = m[-1] <= 1e-8 and bool(np.all(np.diff(m[5:]) <= 1e-12))
    grow_ok = float(F(np.array([1e8]))[0]) > float(F(np.array([1e4]))[0]) + 1e-2
    a2 = bool(tail_ok and grow_ok)
    if not tail_ok:
        wit["a2_zero_limit"] = float(m[-1])
    if not grow_ok:
        wit["a2_growth"] = float(F(np.array([1e8]))[0])

    t = np.linspace(0.0, 10.0, n)
    yf = np.zeros_like(t)
    yf[1:] = t[1:] * F(t[1:])
    d2 = np.diff(yf, 2)
    tol3 = 1e-12 * (1.0 + float(np.max(np.abs(yf))))
    bad = np.nonzero(d2 < -tol3)[0]
    delta_max = 9.0 if bad.size == 0 else max(0.0, min(9.0, float(t[bad[0]] - 1.0)))
    a3 = delta_max > 0.0
    if not a3:
        wit["a3_first_violation"] = float(t[bad[0]]) if bad.size else None

    yy = np.geomspace(1.0, 1e8, n)
    w = yy * F.derivative(yy)
    tol4 = 1e-9 * (1.0 + float(np.max(np.abs(w[np.isfinite(w)]))))
    ok_level = w <= 1.0 + tol4
    ok_dec = np.concatenate((np.diff(w) <= tol4, [True]))
    good = ok_level & ok_dec
    # smallest index from which the suffix is entirely good
    suffix_good = np.logical_and.accumulate(good[::-1])[::-1]
    idx = np.nonzero(suffix_good)[0]
    y0 = float(yy[idx[0]]) if idx.size else None
    a4 = y0 is not None
    if not a4:
        wit["a4_last_violation"] = float(yy[np.nonzero(~good)[0][-1]])

    return AssumptionReport(a1=a1, a2=a2, a3=a3, a4=a4, delta=delta_max, y0=y0, witnesses=wit, f_at_1=f1)


@dataclass(frozen=True)
class Lemma32Report:
    delta: float
    T: Optional[float]  # smallest sampled y from which the margin stays nonnegative
    min_margin: float  # min over [T, y_max] of y^{2 delta} - Phi(delta F(y))
    status: str
    y_range: tuple


def lemma32_bound_check(F, delta, y_range=(1.0, 1e6), n=2000):
    """Worst-case margin of Phi(delta F(y)) <= y^{2 delta} on a log-spaced sweep.

    Phi is evaluated continuously in log space, so no truncation can occur;
    the reported T is the empirically smallest valid sampled threshold.
    """
    if not 0 < delta <= 0.5:
        raise ValueError("delta must lie in (0, 1/2]")
    y = np.geomspace(y_range[0], y_range[1], n)
    args = delta * F(y)
    if np.any(args < 0):
        raise ValueError("sweep must start where F >= 0 (y >= 1)")
    lp = log_Phi(F, args)
    margin_log = 2.0 * delta * np.log(y) - lp
    ok = margin_log >= -1e-9
    suffix_ok = np.logical_and.accumulate(ok[::-1])[::-1]
    idx = np.nonzero(suffix_ok)[0]
    if idx.size == 0:
        return Lemma32Report(delta=delta, T=None, min_margin=float("-inf"), status="no_valid_threshold", y_range=y_range)
    i0 = idx[0]
    # margin in value space: y^{2 delta} (1 - exp(logPhi - 2 delta log y))
    y2d = np.exp(2.0 * delta * np.log(y[i0:]))
    m = y2d * (-np.expm1(np.minimum(lp[i0:] - 2.0 * delta * np.log(y[i0:]), 50.0)))
    # the log-space evaluation cannot resolve margins below a few ulp of
    # y^{2 delta}; negatives inside that noise floor are certified zeros
    m = np.where((m < 0) & (m > -64 * np.finfo(float).eps * y2d), 0.0, m)
    return Lemma32Report(delta=delta, T=float(y[i0]), min_margin=float(np.min(m)), status="ok", y_range=y_range)
