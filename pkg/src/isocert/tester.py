"""Empirical verification of entropy--energy inequalities on 1-D measures.

Every functional here is a quadrature against a discretized measure: the
entropy side integrates f^2 F(f^2 / mu(f^2)), the energy side integrates
f^2 c*(|f'|/f) or plain gradient powers, and set-restricted integrals mark
grid cells with proportional boundary contributions.  Best-constant
estimates are suprema over *finite* test-function families, so they are
reported as lower bounds for the true constants, never as certificates.

Family members are evaluated independently and reduced in parameter order,
so reports are deterministic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

import numpy as np

from .convex import CostFunction, dual_cost, eval_cost, legendre_transform
from .entropy import EntropyFunction, F_tau, check_assumptions, log_Phi, log_entropy
from .measure1d import Measure1D, SampledFunction, builtin_measure

__all__ = [
    "TestFamily",
    "TestRow",
    "TestReport",
    "Lemma33Report",
    "Lemma34Report",
    "entropy_functional",
    "cost_energy",
    "modified_energy",
    "variance",
    "median_of",
    "median_energy",
    "verify_theorem_2_1",
    "verify_theorem_1_1",
    "verify_theorem_4_4",
    "lemma_3_3_check",
    "lemma_3_4_check",
]

_SATURATION_TOL = 1e-3


# -- test-function families ----------------------------------------------------


@dataclass(frozen=True)
class TestFamily:
    """A finite family of strictly positive test functions.

    kinds:
      exponential     f = e^{lam*x/2}, parameter lam
      bump            f = floor + e^{-x^2/(2 w^2)}, parameter w > 0
      shifted_linear  f = (1 + eps*x)_+ + floor, parameter eps
      random_smooth   f = e^{scale*g} for a seeded random trigonometric
                      polynomial g; parameters are integer member labels
      stretched_exp   f = e^{lam*(x^2 + smoothing^2)^{exponent/2}}, parameter
                      lam; the smoothing term regularizes the |x|^exponent
                      cusp so the closed-form derivative stays finite at 0
      user            callables supplied in user_fns (optionally (fn, dfn)
                      pairs); parameters are labels

    Members carry a positive floor where needed so that energy ratios
    |f'|/f are defined everywhere.
    """

    kind: str
    params: tuple
    floor: float = 1e-6
    seed: int = 0
    scale: float = 0.5
    exponent: float = 0.7
    smoothing: float = 0.05
    n_terms: int = 6
    user_fns: tuple = ()

    __test__ = False  # not a test-runner collectible despite the name
    _NUMERIC_KINDS = ("exponential", "bump", "shifted_linear", "stretched_exp")

    def __post_init__(self):
        kinds = self._NUMERIC_KINDS + ("random_smooth", "user")
        if self.kind not in kinds:
            raise ValueError(f"unknown family kind {self.kind!r}; expected one of {kinds}")
        if self.kind == "user" and len(self.user_fns) == 0:
            raise ValueError("user family needs user_fns")
        if len(self.params) == 0 and self.kind != "user":
            raise ValueError("family has no members")
        if self.floor < 0:
            raise ValueError("floor must be nonnegative")

    def _ordered_params(self):
        if self.kind in self._NUMERIC_KINDS:
            return tuple(sorted(float(p) for p in self.params))
        if self.kind == "user":
            return tuple(self.params) if self.params else tuple(range(len(self.user_fns)))
        return tuple(int(p) for p in self.params)

    def members(self, mu: Measure1D):
        """Materialize the family on the measure grid, ordered by parameter."""
        x = mu.grid
        out = []
        if self.kind == "exponential":
            for lam in self._ordered_params():
                # overflow here is caught by the finiteness gate below
                with np.errstate(over="ignore"):
                    vals = np.exp(0.5 * lam * x)
                    dvals = 0.5 * lam * vals
                out.append(
                    SampledFunction(
                        grid=x,
                        values=vals,
                        dvalues=dvals,
                        log_deriv=np.full_like(x, 0.5 * lam),
                        name=f"exponential({lam:g})",
                    )
                )
        elif self.kind == "bump":
            for w in self._ordered_params():
                if w <= 0:
                    raise ValueError("bump width must be positive")
                core = np.exp(-0.5 * (x / w) ** 2)
                vals = self.floor + core
                out.append(
                    SampledFunction(
                        grid=x,
                        values=vals,
                        dvalues=-(x / w**2) * core,
                        name=f"bump({w:g})",
                    )
                )
        elif self.kind == "shifted_linear":
            for eps in self._ordered_params():
                lin = 1.0 + eps * x
                vals = np.maximum(lin, 0.0) + self.floor
                out.append(
                    SampledFunction(
                        grid=x,
                        values=vals,
                        dvalues=np.where(lin > 0.0, eps, 0.0),
                        name=f"shifted_linear({eps:g})",
                    )
                )
        elif self.kind == "stretched_exp":
            p = self.exponent
            a2 = self.smoothing**2
            for lam in self._ordered_params():
                s = (x * x + a2) ** (0.5 * p)
                ds = p * x * (x * x + a2) ** (0.5 * p - 1.0)
                vals = np.exp(lam * s)
                out.append(
                    SampledFunction(
                        grid=x,
                        values=vals,
                        dvalues=lam * ds * vals,
                        log_deriv=lam * ds,
                        name=f"stretched_exp({lam:g})",
                    )
                )
        elif self.kind == "random_smooth":
            lo, hi = mu.truncation
            L = max(abs(lo), abs(hi))
            omega = np.pi / L
            j = np.arange(1, self.n_terms + 1, dtype=float)
            wts = 1.0 / j**2
            for label in self._ordered_params():
                rng = np.random.default_rng([self.seed, int(label)])
                a = rng.standard_normal(self.n_terms)
                b = rng.standard_normal(self.n_terms)
                phase = np.outer(x, j * omega)
                g = np.cos(phase) @ (wts * a) + np.sin(phase) @ (wts * b)
                gp = -np.sin(phase) @ (wts * a * j * omega) + np.cos(phase) @ (wts * b * j * omega)
                vals = np.exp(self.scale * g)
                out.append(
                    SampledFunction(
                        grid=x,
                        values=vals,
                        dvalues=self.scale * gp * vals,
                        log_deriv=self.scale * gp,
                        name=f"random_smooth({int(label)})",
                    )
                )
        else:  # user
            labels = self._ordered_params()
            for label, fn in zip(labels, self.user_fns):
                if isinstance(fn, tuple):
                    f, df = fn
                else:
                    f, df = fn, None
                out.append(SampledFunction.from_callable(mu, f, dfn=df, name=f"user({label})"))
        for sf in out:
            if not np.all(np.isfinite(sf.values)):
                raise ValueError(f"family member {sf.name} overflows on the measure grid")
        return out

    def enriched(self):
        """A denser version of the family: midpoints between consecutive
        parameters for numeric kinds, doubled member count for random_smooth.
        User families cannot be enriched and are returned unchanged."""
        if self.kind == "random_smooth":
            n = len(self.params)
            return TestFamily(
                kind=self.kind,
                params=tuple(range(2 * n)),
                floor=self.floor,
                seed=self.seed,
                scale=self.scale,
                exponent=self.exponent,
                smoothing=self.smoothing,
                n_terms=self.n_terms,
            )
        if self.kind == "user":
            return self
        ps = sorted(float(p) for p in self.params)
        mids = [0.5 * (a + b) for a, b in zip(ps[:-1], ps[1:])]
        return TestFamily(
            kind=self.kind,
            params=tuple(sorted(ps + mids)),
            floor=self.floor,
            seed=self.seed,
            scale=self.scale,
            exponent=self.exponent,
            smoothing=self.smoothing,
            n_terms=self.n_terms,
            user_fns=self.user_fns,
        )


def _as_sampled(mu: Measure1D, f) -> SampledFunction:
    if isinstance(f, SampledFunction):
        if f.grid.shape != mu.grid.shape or not np.array_equal(f.grid, mu.grid):
            raise ValueError("sampled function lives on a different grid than the measure")
        return f
    if callable(f):
        return SampledFunction.from_callable(mu, f)
    vals = np.asarray(f, dtype=float)
    if vals.shape != mu.grid.shape:
        raise ValueError("value array does not match the measure grid")
    return SampledFunction(grid=mu.grid, values=vals, dvalues=np.gradient(vals, mu.grid))


# -- scalar functionals ----------------------------------------------------------


def entropy_functional(mu: Measure1D, f, F: EntropyFunction) -> float:
    """Quadrature of f^2 F(f^2 / mu(f^2)); with F = log this is the classical
    entropy of f^2.  Requires f >= 0 and a nonvanishing second moment."""
    sf = _as_sampled(mu, f)
    v = sf.values
    if np.any(v < 0):
        raise ValueError("entropy_functional requires f >= 0 on the grid")
    m2 = mu.integrate(v * v)
    if not m2 > 0:
        raise ValueError("integral of f^2 vanishes; entropy undefined")
    h = v * v / m2
    out = np.zeros_like(v)
    mask = h > 0
    out[mask] = v[mask] ** 2 * np.asarray(F(h[mask]), dtype=float)
    return float(mu.integrate(out))


def cost_energy(mu: Measure1D, f, cost: Union[CostFunction, float]) -> float:
    """Energy of the gradient alone: int c(|f'|) dmu for a CostFunction, or
    int |f'|^p dmu when cost is a plain exponent p > 0."""
    sf = _as_sampled(mu, f)
    g = np.abs(sf.dvalues)
    if isinstance(cost, CostFunction):
        vals = eval_cost(cost, g)
    else:
        p = float(cost)
        if p <= 0:
            raise ValueError("gradient exponent must be positive")
        vals = g**p
    return float(mu.integrate(np.asarray(vals, dtype=float)))


def _dual_evaluator(cost: CostFunction, r_max: float):
    """Return a callable evaluating c* on [0, r_max]."""
    if cost.kind == "closed_form_cAalpha":
        dual = dual_cost(cost)
        return lambda r: np.asarray(eval_cost(dual, r), dtype=float)
    hi = max(r_max, 1.0) * 1.0000001
    dual_grid = np.concatenate(([0.0], np.geomspace(max(hi * 1e-12, 1e-300), hi, 2048)))
    table = legendre_transform(cost, dual_grid)
    return lambda r: np.asarray(table(np.minimum(r, hi)), dtype=float)


def _modified_integrand(mu: Measure1D, sf: SampledFunction, cost: CostFunction) -> np.ndarray:
    """Pointwise f^2 c*(|f'|/f); requires f > 0."""
    v = sf.values
    if np.any(v <= 0):
        raise ValueError("modified energy requires f > 0; add a family floor")
    if sf.log_deriv is not None:
        ratio = np.abs(sf.log_deriv)
    else:
        ratio = np.abs(sf.dvalues) / v
    cstar = _dual_evaluator(cost, float(np.max(ratio)))(ratio)
    return v * v * cstar


def modified_energy(mu: Measure1D, f, cost: CostFunction) -> float:
    """Quadrature of f^2 c*(|f'|/f) with c* the Legendre conjugate of cost
    (closed form when the cost is closed form).  The ratio uses the logarithmic
    derivative table when the member carries one."""
    sf = _as_sampled(mu, f)
    return float(mu.integrate(_modified_integrand(mu, sf, cost)))


def _centered_integrand(sf: SampledFunction, cost: CostFunction, center: float) -> np.ndarray:
    """(f-c)^2 c*(|f'|/|f-c|) with exact limits at nodes where f = c:
    0 when f' = 0 there; otherwise |f'|^2/2 for a quadratic dual, 0 for dual
    exponent < 2, +inf for dual exponent > 2 (and +inf for sampled costs,
    whose tabulated dual cannot resolve the limit)."""
    u = sf.values - center
    au = np.abs(u)
    dv = np.abs(sf.dvalues)
    zero = au == 0.0
    ratio = np.where(zero, 0.0, dv / np.where(zero, 1.0, au))
    if cost.kind == "closed_form_cAalpha":
        dual = dual_cost(cost)
        b = dual.alpha
        with np.errstate(over="ignore"):
            core = u * u * np.asarray(eval_cost(dual, ratio), dtype=float)
        if b > 2.0:
            lim = np.where(dv == 0.0, 0.0, np.inf)
        elif b == 2.0:
            lim = 0.5 * dv * dv
        else:
            lim = np.zeros_like(dv)
    else:
        finite = ~zero
        r_max = float(np.max(ratio[finite])) if np.any(finite) else 1.0
        ev = _dual_evaluator(cost, r_max)
        core = u * u * ev(ratio)
        lim = np.where(dv == 0.0, 0.0, np.inf)
    return np.where(zero, lim, core)


def variance(mu: Measure1D, f) -> float:
    """Var_mu f by nodal-mass quadrature."""
    v = _as_sampled(mu, f).values
    m1 = mu.integrate(v)
    return float(mu.integrate((v - m1) ** 2))


def median_of(mu: Measure1D, f) -> float:
    """inf{t : mu(f > t) <= 1/2}, read from the sorted value table."""
    v = _as_sampled(mu, f).values
    u, inv = np.unique(v, return_inverse=True)
    w = np.zeros(u.size)
    np.add.at(w, inv, mu.node_mass)
    suffix = np.concatenate((np.cumsum(w[::-1])[::-1][1:], [0.0]))
    return float(u[int(np.argmax(suffix <= 0.5))])


def median_energy(mu: Measure1D, f) -> float:
    """int (f - m_f)^2 dmu with m_f the median of f under mu."""
    v = _as_sampled(mu, f).values
    return float(mu.integrate((v - median_of(mu, f)) ** 2))


def _restricted_integral(mu: Measure1D, integrand: np.ndarray, marker: np.ndarray) -> float:
    """int_{marker >= 0} integrand dmu on trapezoid cells; cells crossed by the
    marker's zero contribute proportionally, the crossing located by linear
    interpolation.  Exactly complementary: the result for marker and -marker
    sums to the full-cell integral."""
    x = mu.grid
    p = integrand * mu.density
    p0, p1 = p[:-1], p[1:]
    m0, m1 = marker[:-1], marker[1:]
    dx = np.diff(x)

    a = np.zeros_like(dx)
    b = np.ones_like(dx)
    denom = m0 - m1
    safe = np.where(denom == 0.0, 1.0, denom)
    theta = np.clip(m0 / safe, 0.0, 1.0)
    # cell fully outside
    outside = (m0 < 0.0) & (m1 < 0.0)
    b = np.where(outside, 0.0, b)
    # marker decreasing through zero: keep [0, theta]
    dec = (m0 >= 0.0) & (m1 < 0.0)
    b = np.where(dec, theta, b)
    # marker increasing through zero: keep [theta, 1]
    inc = (m0 < 0.0) & (m1 >= 0.0)
    a = np.where(inc, theta, a)

    width = b - a
    contrib = dx * (width * p0 + 0.5 * (b * b - a * a) * (p1 - p0))
    return float(np.sum(contrib))


# -- reports ---------------------------------------------------------------------


@dataclass(frozen=True)
class TestRow:
    """Functional values for one family member.

    modified_energy holds the theorem's paired energy term: f^2 c*(|f'|/f)
    for the quadratic/cost forms, the beta-gradient energy for the
    power-entropy display.  variance likewise holds the theorem's variance
    term.  ratio is the member's entropy/energy quotient (NaN when both sides
    vanish), and saturation marks members with classical_entropy equal to
    2 * grad_energy within one part in a thousand."""

    name: str
    parameter: float
    entropy_F: float
    classical_entropy: float
    variance: float
    grad_energy: float
    modified_energy: float
    median_energy: float
    ratio: float
    saturation: bool


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


@dataclass(frozen=True)
class TestReport:
    """Family-level verification report.

    C_hat is the supremum of member ratios (a lower bound for the true best
    constant); B_hat, when present, is the least additive constant making the
    target display hold across the family.  details carries the
    theorem-specific extras (second-display constants, stability runs,
    explicit-bound margins)."""

    family_kind: str
    rows: Tuple[TestRow, ...]
    C_hat: float
    B_hat: Optional[float] = None
    details: dict = field(default_factory=dict)

    def to_json_dict(self):
        return {
            "family": self.family_kind,
            "C_hat": _jsonable(self.C_hat),
            "B_hat": _jsonable(self.B_hat),
            "rows": [
                {
                    "name": r.name,
                    "parameter": _jsonable(r.parameter),
                    "entropy_F": _jsonable(r.entropy_F),
                    "classical_entropy": _jsonable(r.classical_entropy),
                    "variance": _jsonable(r.variance),
                    "grad_energy": _jsonable(r.grad_energy),
                    "modified_energy": _jsonable(r.modified_energy),
                    "median_energy": _jsonable(r.median_energy),
                    "ratio": _jsonable(r.ratio),
                    "saturation": bool(r.saturation),
                }
                for r in self.rows
            ],
            "details": _jsonable(self.details),
        }

    def to_csv_text(self):
        cols = (
            "name,parameter,entropy_F,classical_entropy,variance,grad_energy,"
            "modified_energy,median_energy,ratio,saturation"
        )
        lines = [cols]
        for r in self.rows:
            lines.append(
                ",".join(
                    [
                        r.name,
                        "%.17g" % r.parameter,
                        "%.17g" % r.entropy_F,
                        "%.17g" % r.classical_entropy,
                        "%.17g" % r.variance,
                        "%.17g" % r.grad_energy,
                        "%.17g" % r.modified_energy,
                        "%.17g" % r.median_energy,
                        "%.17g" % r.ratio,
                        "true" if r.saturation else "false",
                    ]
                )
            )
        return "\n".join(lines) + "\n"


def _sup_ratio(pairs):
    """Least constant C with num <= C * den across pairs; 0/0 pairs are
    skipped, positive/0 pairs force +inf."""
    best = 0.0
    seen = False
    for num, den in pairs:
        if den > 0:
            best = max(best, num / den)
            seen = True
        elif num > 0:
            return float("inf"), True
    return (best, seen) if seen else (float("nan"), False)


def _base_row(mu, sf):
    classical = entropy_functional(mu, sf, log_entropy())
    grad = cost_energy(mu, sf, 2.0)
    sat = grad > 0 and abs(classical / (2.0 * grad) - 1.0) <= _SATURATION_TOL
    try:
        param = float(sf.name.split("(")[1].rstrip(")"))
    except (IndexError, ValueError):
        param = float("nan")
    return {
        "name": sf.name,
        "parameter": param,
        "classical_entropy": classical,
        "grad_energy": grad,
        "median_energy": median_energy(mu, sf),
        "saturation": bool(sat),
    }


# -- theorem-level verification ---------------------------------------------------


def verify_theorem_2_1(mu: Measure1D, F: EntropyFunction, cost: CostFunction, K: float, family: TestFamily) -> TestReport:
    """Empirically test the two-sided entropy bound: for each family member,
    compare f^2-entropy against (a) 4x the modified energy restricted to
    {f^2 >= K mu(f^2)} plus B mu(f^2), and (b) 4x the centered modified energy
    plus B Var f.  Reports the least B making (a) hold (B_hat), the analogous
    constant for (b), the full-energy ratio supremum (C_hat), and the explicit
    truncated-layer bound margins.

    Callers are expected to have certified the (measure, entropy, cost)
    triple finite beforehand; this routine checks only K > 1 and a nonempty
    family."""
    if not K > 1.0:
        raise ValueError("K must exceed 1")
    members = family.members(mu)
    if not members:
        raise ValueError("family is empty")

    fprime1 = float(np.asarray(F.derivative(np.array([1.0])))[0])
    c_step = (4.0 * (K + 1.0) ** 2 + 2.0 + (math.sqrt(K) + 1.0) ** 2) * fprime1

    rows = []
    pairs = []
    b15 = 0.0
    b16 = 0.0
    step_rows = []
    for sf in members:
        v = sf.values
        m2 = mu.integrate(v * v)
        lhs = entropy_functional(mu, sf, F)
        var = variance(mu, sf)
        integrand = _modified_integrand(mu, sf, cost)
        full_energy = float(mu.integrate(integrand))
        restricted = _restricted_integral(mu, integrand, v * v - K * m2)
        b15_member = max(0.0, (lhs - 4.0 * restricted) / m2)
        b15 = max(b15, b15_member)

        m1 = mu.integrate(v)
        cen = _centered_integrand(sf, cost, m1)
        e16 = float(mu.integrate(cen))
        if var > 0:
            b16_member = max(0.0, (lhs - 4.0 * e16) / var) if np.isfinite(e16) else 0.0
        else:
            b16_member = 0.0 if lhs <= 4.0 * e16 else float("inf")
        b16 = max(b16, b16_member)

        # truncated layer integral and its explicit variance bound
        h = np.zeros_like(v)
        pos = v > 0
        h[pos] = v[pos] ** 2 / m2
        g_arr = np.zeros_like(v)
        g_arr[pos] = np.asarray(F(h[pos]), dtype=float)
        i1 = float(mu.integrate(g_arr * np.minimum(v * v, K * m2)))
        bound = c_step * var
        step_rows.append(
            {
                "name": sf.name,
                "I1": i1,
                "bound": bound,
                "margin": bound - i1,
                "ok": bool(i1 <= bound + 1e-9 * max(1.0, abs(bound))),
            }
        )

        ratio = lhs / full_energy if full_energy > 0 else (float("inf") if lhs > 0 else float("nan"))
        if not (full_energy == 0 and lhs == 0):
            pairs.append((lhs, full_energy))
        base = _base_row(mu, sf)
        rows.append(
            TestRow(
                name=base["name"],
                parameter=base["parameter"],
                entropy_F=lhs,
                classical_entropy=base["classical_entropy"],
                variance=var,
                grad_energy=base["grad_energy"],
                modified_energy=full_energy,
                median_energy=base["median_energy"],
                ratio=ratio,
                saturation=base["saturation"],
            )
        )

    c_hat, seen = _sup_ratio(pairs)
    return TestReport(
        family_kind=family.kind,
        rows=tuple(rows),
        C_hat=c_hat if seen else 0.0,
        B_hat=b15,
        details={
            "K": K,
            "B16_hat": b16,
            "C16_used": 4.0,
            "step1_constant": c_step,
            "step1": step_rows,
        },
    )


def verify_theorem_1_1(alpha: float, tau: float, A: float, family: TestFamily, n_grid: int = 16384, measure: Optional[Measure1D] = None) -> TestReport:
    """Entropy--energy ratio for the |x|^alpha measure: tests
    F_tau-entropy <= C * int f^2 c_{A,q}(|f'|/f) dmu with q = alpha*tau/(alpha-1),
    reporting the ratio supremum and its stability under family enrichment.
    The energy is evaluated through the conjugate of c_{A, q/(q-1)}, which
    recovers c_{A,q} exactly."""
    if not 1.0 < alpha <= 2.0:
        raise ValueError("alpha must lie in (1, 2]")
    lo_tau = 2.0 * (1.0 - 1.0 / alpha)
    if not (lo_tau - 1e-12 <= tau <= 1.0 + 1e-12):
        raise ValueError(f"tau must lie in [{lo_tau:g}, 1]")
    if A <= 0:
        raise ValueError("A must be positive")
    mu = measure if measure is not None else builtin_measure("exp_power", alpha=alpha, n=n_grid)
    F = F_tau(min(tau, 1.0))
    q = alpha * tau / (alpha - 1.0)
    # pre-dualized so the energy integrand applies c_{A,q} itself
    cost = dual_cost(CostFunction.closed_form(A, q))

    def run(fam):
        members = fam.members(mu)
        if not members:
            raise ValueError("family is empty")
        rows = []
        pairs = []
        for sf in members:
            lhs = entropy_functional(mu, sf, F)
            energy = modified_energy(mu, sf, cost)
            skip = energy == 0 and lhs == 0
            ratio = float("nan") if skip else (lhs / energy if energy > 0 else float("inf"))
            if not skip:
                pairs.append((lhs, energy))
            base = _base_row(mu, sf)
            rows.append(
                TestRow(
                    name=base["name"],
                    parameter=base["parameter"],
                    entropy_F=lhs,
                    classical_entropy=base["classical_entropy"],
                    variance=variance(mu, sf),
                    grad_energy=base["grad_energy"],
                    modified_energy=energy,
                    median_energy=base["median_energy"],
                    ratio=ratio,
                    saturation=base["saturation"],
                )
            )
        c_hat, seen = _sup_ratio(pairs)
        return rows, (c_hat if seen else 0.0)

    rows, c_hat = run(family)
    _, c_enr = run(family.enriched())
    stable = bool(
        np.isfinite(c_hat) and np.isfinite(c_enr) and c_hat > 0 and abs(c_enr / c_hat - 1.0) <= 0.10
    )
    return TestReport(
        family_kind=family.kind,
        rows=tuple(rows),
        C_hat=c_hat,
        B_hat=None,
        details={
            "alpha": alpha,
            "tau": tau,
            "A": A,
            "q": q,
            "C_hat_enriched": c_enr,
            "stable": stable,
        },
    )


def verify_theorem_4_4(mu: Measure1D, alpha: float, family: TestFamily) -> TestReport:
    """Power-entropy display on a log-concave measure: with beta = alpha/(alpha-1),
    tests Ent |f|^beta <= C [ int |f'|^beta dmu + Var |f|^{beta/2} ] and reports
    the least such C over the family plus its stability under enrichment.
    Requires a log-concave measure and a numerically verified
    int e^{eps |x|^alpha} dmu < infinity for a sampled eps."""
    if not mu.log_concave:
        raise ValueError("refused: measure is not log-concave")
    if not alpha > 1.0:
        raise ValueError("alpha must exceed 1")
    beta = alpha / (alpha - 1.0)

    eps_used = None
    for eps in (0.05, 0.1, 0.2):
        with np.errstate(over="ignore"):
            contrib = mu.node_mass * np.exp(eps * np.abs(mu.grid) ** alpha)
        total = float(np.sum(contrib))
        edge = float(np.sum(contrib[:4]) + np.sum(contrib[-4:]))
        if np.isfinite(total) and edge <= 1e-8 * total:
            eps_used = eps
            break
    if eps_used is None:
        raise ValueError("could not verify int e^{eps|x|^alpha} dmu finite on the grid")

    def run(fam):
        members = fam.members(mu)
        if not members:
            raise ValueError("family is empty")
        rows = []
        pairs = []
        for sf in members:
            v = np.abs(sf.values)
            g = v**beta
            mg = mu.integrate(g)
            if mg > 0:
                ent_terms = np.zeros_like(g)
                pos = g > 0
                ent_terms[pos] = g[pos] * np.log(g[pos] / mg)
                lhs = float(mu.integrate(ent_terms))
            else:
                lhs = 0.0
            rhs_grad = float(mu.integrate(np.abs(sf.dvalues) ** beta))
            half = v ** (0.5 * beta)
            m_half = mu.integrate(half)
            rhs_var = float(mu.integrate((half - m_half) ** 2))
            rhs = rhs_grad + rhs_var
            skip = rhs == 0 and lhs == 0
            ratio = float("nan") if skip else (lhs / rhs if rhs > 0 else float("inf"))
            if not skip:
                pairs.append((lhs, rhs))
            base = _base_row(mu, sf)
            rows.append(
                TestRow(
                    name=base["name"],
                    parameter=base["parameter"],
                    entropy_F=lhs,
                    classical_entropy=base["classical_entropy"],
                    variance=rhs_var,
                    grad_energy=base["grad_energy"],
                    modified_energy=rhs_grad,
                    median_energy=base["median_energy"],
                    ratio=ratio,
                    saturation=base["saturation"],
                )
            )
        c_hat, seen = _sup_ratio(pairs)
        return rows, (c_hat if seen else 0.0)

    rows, c_hat = run(family)
    _, c_enr = run(family.enriched())
    stable = bool(
        np.isfinite(c_hat) and np.isfinite(c_enr) and c_hat > 0 and abs(c_enr / c_hat - 1.0) <= 0.10
    )
    return TestReport(
        family_kind=family.kind,
        rows=tuple(rows),
        C_hat=c_hat,
        B_hat=None,
        details={
            "alpha": alpha,
            "beta": beta,
            "eps_used": eps_used,
            "C_hat_enriched": c_enr,
            "stable": stable,
        },
    )


# -- cross-function comparison lemmas ---------------------------------------------


@dataclass(frozen=True)
class Lemma33Report:
    """Margin for the two-function comparison: the f^2-entropy read at g's
    level profile is controlled by twice f's own entropy plus
    C = 2 int Phi(u/2) dmu - 1 times mu(f^2)."""

    lhs: float
    rhs: float
    C: float
    margin: float
    ok: bool
    u_min: float
    u_max: float


def lemma_3_3_check(mu: Measure1D, F: EntropyFunction, f, g) -> Lemma33Report:
    sf = _as_sampled(mu, f)
    sg = _as_sampled(mu, g)
    vf = sf.values
    vg = sg.values
    if np.any(vf < 0) or np.any(vg < 0):
        raise ValueError("lemma_3_3_check requires nonnegative f and g")
    m2f = mu.integrate(vf * vf)
    m2g = mu.integrate(vg * vg)
    if not (m2f > 0 and m2g > 0):
        raise ValueError("f and g need nonvanishing second moments")

    h = vg * vg / m2g
    pos = h > 0
    Fh = np.full_like(h, -np.inf)
    Fh[pos] = np.asarray(F(h[pos]), dtype=float)

    lhs_terms = np.where(vf == 0.0, 0.0, vf * vf * Fh)
    lhs = float(np.sum(lhs_terms * mu.node_mass))

    u = np.full_like(h, -np.inf)
    u[pos] = Fh[pos] + h[pos] * np.asarray(F.derivative(h[pos]), dtype=float) - 1.0
    phi_vals = np.zeros_like(h)
    if np.any(pos):
        with np.errstate(over="ignore"):
            phi_vals[pos] = np.exp(log_Phi(F, 0.5 * u[pos]))
    C = 2.0 * float(mu.integrate(phi_vals)) - 1.0
    rhs = 2.0 * entropy_functional(mu, sf, F) + C * m2f
    margin = rhs - lhs
    scale = max(1.0, abs(rhs), abs(lhs) if np.isfinite(lhs) else 0.0)
    finite_u = u[np.isfinite(u)]
    return Lemma33Report(
        lhs=lhs,
        rhs=rhs,
        C=C,
        margin=margin,
        ok=bool(margin >= -1e-9 * scale),
        u_min=float(np.min(finite_u)) if finite_u.size else float("nan"),
        u_max=float(np.max(finite_u)) if finite_u.size else float("nan"),
    )


@dataclass(frozen=True)
class Lemma34Report:
    """Margins for the truncation comparison: the entropy integrand restricted
    to {f^2 >= K mu(f^2)} against the full integral plus C Var (first display),
    and the least B making the full integral <= B Var + 2x the shifted-positive-
    part integral (second display)."""

    rows: tuple
    C_used: float
    B_hat: float
    display1_ok: bool


def lemma_3_4_check(mu: Measure1D, F: EntropyFunction, K: float, family: TestFamily) -> Lemma34Report:
    if not K > 1.0:
        raise ValueError("K must exceed 1")
    rep = check_assumptions(F)
    if not (rep.a1 and rep.a2 and rep.a3):
        raise ValueError("entropy profile fails the concavity/growth/convexity gates")

    fprime1 = float(np.asarray(F.derivative(np.array([1.0])))[0])
    c_used = (4.0 * (K + 1.0) ** 2 + 2.0 + (math.sqrt(K) + 1.0) ** 2) * fprime1

    rows = []
    b_hat = 0.0
    all_ok = True
    for sf in family.members(mu):
        v = sf.values
        m2 = mu.integrate(v * v)
        h = np.zeros_like(v)
        pos = v > 0
        h[pos] = v[pos] ** 2 / m2
        Fh = np.zeros_like(v)
        Fh[pos] = np.asarray(F(h[pos]), dtype=float)
        integrand = np.where(pos, v * v * Fh, 0.0)

        full = float(mu.integrate(integrand))
        restricted = _restricted_integral(mu, integrand, v * v - K * m2)
        var = variance(mu, sf)
        margin1 = c_used * var + full - restricted
        scale1 = max(1.0, abs(full), c_used * var)
        ok1 = bool(margin1 >= -1e-9 * scale1)
        all_ok = all_ok and ok1

        shifted = np.maximum(v - math.sqrt(K * m2), 0.0)
        plus_term = float(mu.integrate(shifted * shifted * Fh))
        if var > 0:
            b_member = max(0.0, (full - 2.0 * plus_term) / var)
        else:
            b_member = 0.0 if full <= 2.0 * plus_term else float("inf")
        b_hat = max(b_hat, b_member)

        rows.append(
            {
                "name": sf.name,
                "full": full,
                "restricted": restricted,
                "variance": var,
                "plus_term": plus_term,
                "margin1": margin1,
                "display1_ok": ok1,
                "B_member": b_member,
            }
        )

    return Lemma34Report(rows=tuple(rows), C_used=c_used, B_hat=b_hat, display1_ok=all_ok)
