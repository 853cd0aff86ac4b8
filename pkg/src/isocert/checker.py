"""Numerical certification of entropy-cost integrability conditions.

The core object is the improper integral over small one-sided masses t,

    int_0^{1/K} Phi(delta * c[ t F(1/t) / I(t) ]) dt,

with Phi the conjugate of y F(y) - y (evaluated continuously in log space, so
no table truncation can occur), c a convex superlinear cost or the plain
square, and I the half-line isoperimetric surrogate of the measure.

Finiteness of an improper integral is numerically undecidable, so the
checker's contract is a three-way verdict driven by the tail model

    integrand(t) ~ exp(log^p(1/t)),  convergent iff p < 1:

  FINITE            fitted p < 1 AND the per-decade partial sums decrease
                    geometrically (ratio <= 0.95) over the last 3 decades;
  DIVERGENT_LIKELY  fitted p >= 1 OR the last partial sums are non-decreasing;
  INCONCLUSIVE      anything else.

Quadrature: substitution t = e^{-s}, composite Simpson with 256 panels per
decade; decades are anchored at absolute powers of ten so that enlarging K
only shrinks the domain.  Partial sums are accumulated in log space and a
decade whose sum overflows float range reports log10_partial_sum only.
"""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .convex import CostFunction, eval_cost
from .entropy import EntropyFunction, F_tau, check_assumptions, log_Phi
from .measure1d import TRUST_TAIL, Measure1D, builtin_measure, fitted_profile_lower_bound, tilde_profile

_LN10 = float(np.log(10.0))
_FORMS = ("general", "quadratic", "one_d_quadratic")


def _logsumexp(a):
    a = np.asarray(a, dtype=float)
    m = np.max(a)
    if not np.isfinite(m):
        return float(m)
    return float(m + np.log(np.sum(np.exp(a - m))))


@dataclass(frozen=True)
class ConditionSpec:
    """One integrability question: measure, entropy profile, cost, scales.

    form 'general' evaluates Phi(delta * c(ratio)) and needs a CostFunction;
    'quadratic' and 'one_d_quadratic' evaluate Phi(delta * ratio^2), the
    latter naming the profile-based one-dimensional variant, for which K > 2
    is enforced.
    """

    measure: Measure1D
    F: EntropyFunction
    cost: Optional[CostFunction] = None
    delta: float = 1.0
    K: float = 2.0
    form: str = "quadratic"
    profile_choice: str = "tilde"
    t_min: float = 1e-12

    def __post_init__(self):
        if self.form not in _FORMS:
            raise ValueError(f"form must be one of {_FORMS}")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if not self.K > 1:
            raise ValueError("K must exceed 1")
        if self.form == "one_d_quadratic" and not self.K > 2:
            raise ValueError("the one-dimensional quadratic condition requires K > 2")
        if not TRUST_TAIL <= self.t_min < 1.0 / self.K:
            raise ValueError(f"t_min must lie in [{TRUST_TAIL:g}, 1/K)")
        if self.form == "general" and not isinstance(self.cost, CostFunction):
            raise ValueError("form 'general' requires a CostFunction")
        if self.profile_choice not in ("tilde", "lower_bound_model"):
            raise ValueError("profile_choice must be 'tilde' or 'lower_bound_model'")


@dataclass(frozen=True)
class ConditionReport:
    verdict: str
    integral_estimate: Optional[float]  # None when the sum overflows float range
    log10_integral_estimate: float
    delta: float
    K: float
    tail_p: float
    decades: tuple  # of dicts {t_lo, t_hi, partial_sum, log10_partial_sum}
    flags: tuple = ()
    form: str = "quadratic"
    t_min: float = 1e-12
    measure_name: str = ""
    entropy_name: str = ""
    cost_name: str = ""

    def to_json_dict(self):
        return {
            "verdict": self.verdict,
            "integral_estimate": self.integral_estimate,
            "log10_integral_estimate": self.log10_integral_estimate,
            "delta": self.delta,
            "K": self.K,
            "tail_p": self.tail_p,
            "decades": [dict(d) for d in self.decades],
            "flags": list(self.flags),
            "form": self.form,
            "t_min": self.t_min,
            "measure": self.measure_name,
            "entropy": self.entropy_name,
            "cost": self.cost_name,
        }


def _profile_fn(spec):
    """Returns tilde_I(t) for vector t in (0, 1/2]."""
    mu = spec.measure
    if spec.profile_choice == "tilde":
        def prof(t):
            # the profile is symmetric in t <-> 1-t; fold (1/2, 1) back
            return tilde_profile(mu, np.minimum(t, 1.0 - t)).tilde_I

        return prof
    alpha = mu.params.get("alpha")
    if alpha is None:
        raise ValueError("lower_bound_model needs a measure with an 'alpha' parameter")
    base = tilde_profile(mu, np.geomspace(max(spec.t_min, TRUST_TAIL), 0.3, 400))
    k = fitted_profile_lower_bound(base, alpha).k
    expo = 1.0 - 1.0 / alpha

    def prof(t):
        tt = np.minimum(t, 1.0 - t)
        return k * tt * np.log(1.0 / tt) ** expo

    return prof


def _cost_label(spec):
    if spec.form != "general":
        return "quadratic"
    c = spec.cost
    if c.kind == "closed_form":
        return f"c_{{{c.A:g},{c.alpha:g}}}"
    return "sampled"


def _decade_edges(K, t_min):
    """s-edges [ln K, k ln 10, ...] anchored at absolute powers of ten."""
    s0 = float(np.log(K))
    k0 = int(np.floor(s0 / _LN10)) + 1  # first power of ten below 1/K
    k1 = int(np.ceil(-np.log10(t_min)))
    ks = np.arange(k0, k1 + 1, dtype=float)
    edges = np.concatenate(([s0], ks * _LN10))
    return edges[edges >= s0 - 1e-12]


def check_condition(spec, n_per_decade=256, validate=True):
    """Evaluate the condition integral and classify its tail.

    The cost must be convex superlinear with c(0) = 0 and F must pass the
    concavity/limit assumptions (A1-A2); sampled costs that get extrapolated
    beyond their chord range taint a FINITE verdict down to INCONCLUSIVE,
    since linear extrapolation underestimates a superlinear cost.
    """
    if validate:
        rep = check_assumptions(spec.F)
        if not (rep.a1 and rep.a2):
            raise ValueError("entropy profile fails the concavity/limit assumptions (A1-A2)")
        if spec.form == "general" and not spec.cost.superlinearity_ok():
            raise ValueError("cost must be superlinear (c(x)/x unbounded)")

    edges = _decade_edges(spec.K, spec.t_min)
    prof = _profile_fn(spec)
    flags = []

    n_dec = edges.size - 1
    s_nodes = []
    for i in range(n_dec):
        s_nodes.append(np.linspace(edges[i], edges[i + 1], n_per_decade + 1))
    s_all = np.concatenate(s_nodes)
    t_all = np.exp(-s_all)
    ratio = t_all * spec.F.at_log(s_all)  # t * F(1/t)
    I_all = prof(t_all)
    if np.any(I_all <= 0):
        flags.append("profile_zero_divergent_integrand")
        I_all = np.maximum(I_all, 1e-300)
    ratio = ratio / I_all

    if spec.form == "general":
        if spec.cost.kind == "sampled":
            carg, trunc = eval_cost(spec.cost, ratio, return_flag=True)
            if np.any(trunc):
                flags.append("cost_extrapolated_beyond_grid")
        else:
            carg = eval_cost(spec.cost, ratio)
        x_all = spec.delta * carg
    else:
        x_all = spec.delta * ratio * ratio

    log_phi = log_Phi(spec.F, x_all)
    log_integrand = log_phi - s_all  # Jacobian dt = e^{-s} ds

    # Simpson weights per decade
    dec_rows = []
    log_partials = []
    pos = 0
    w = np.ones(n_per_decade + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    log_w_base = np.log(w / 3.0)
    for i in range(n_dec):
        h = (edges[i + 1] - edges[i]) / n_per_decade
        chunk = log_integrand[pos : pos + n_per_decade + 1]
        lp = _logsumexp(chunk + log_w_base + np.log(h))
        log_partials.append(lp)
        with np.errstate(over="ignore"):
            ps = float(np.exp(lp))
        dec_rows.append(
            {
                "t_lo": float(np.exp(-edges[i + 1])),
                "t_hi": float(np.exp(-edges[i])),
                "partial_sum": ps if np.isfinite(ps) else None,
                "log10_partial_sum": lp / _LN10,
            }
        )
        pos += n_per_decade + 1
    log_partials = np.array(log_partials)

    log_total = _logsumexp(log_partials)
    with np.errstate(over="ignore"):
        total = float(np.exp(log_total))

    # tail model exp(log^p(1/t)): p from log(Phi-exponent) / log(s) at the last edges
    edge_idx = np.cumsum([n_per_decade + 1] * n_dec) - 1
    H = log_phi[edge_idx][-3:]
    S = s_all[edge_idx][-3:]
    with np.errstate(divide="ignore", invalid="ignore"):
        p_vals = np.where(H > 1.0, np.log(np.maximum(H, 1.0 + 1e-12)) / np.log(S), 0.0)
    tail_p = float(np.median(p_vals))

    last = log_partials[-3:]
    geometric = last.size == 3 and bool(np.all(np.diff(last) <= np.log(0.95)))
    nondecreasing = last.size >= 2 and bool(np.all(np.diff(last) >= -1e-12))

    if tail_p >= 1.0 or nondecreasing:
        verdict = "DIVERGENT_LIKELY"
    elif tail_p < 1.0 and geometric:
        verdict = "FINITE"
    else:
        verdict = "INCONCLUSIVE"
    if verdict == "FINITE" and ("cost_extrapolated_beyond_grid" in flags or "profile_zero_divergent_integrand" in flags):
        verdict = "INCONCLUSIVE"
    if "profile_zero_divergent_integrand" in flags:
        verdict = "DIVERGENT_LIKELY"

    return ConditionReport(
        verdict=verdict,
        integral_estimate=total if np.isfinite(total) else None,
        log10_integral_estimate=log_total / _LN10,
        delta=spec.delta,
        K=spec.K,
        tail_p=tail_p,
        decades=tuple(dec_rows),
        flags=tuple(flags),
        form=spec.form,
        t_min=spec.t_min,
        measure_name=spec.measure.name,
        entropy_name=spec.F.name,
        cost_name=_cost_label(spec),
    )


@dataclass(frozen=True)
class SweepReport:
    deltas: tuple
    verdicts: tuple
    best_delta: Optional[float]  # largest sampled delta certified FINITE
    reports: tuple

    def to_json_dict(self):
        return {
            "deltas": list(self.deltas),
            "verdicts": list(self.verdicts),
            "best_delta": self.best_delta,
            "reports": [r.to_json_dict() for r in self.reports],
        }


def check_condition_sweep(spec, deltas=(1.0, 0.5, 0.25, 0.125, 0.0625), n_per_decade=256):
    """Rerun the condition across a delta sweep; any delta > 0 suffices for the
    inequality once the cost growth condition holds, so the certificate is the
    largest sampled delta with a FINITE verdict."""
    deltas = tuple(sorted(set(float(d) for d in deltas), reverse=True))
    reports = []
    rep_assumed = check_assumptions(spec.F)
    if not (rep_assumed.a1 and rep_assumed.a2):
        raise ValueError("entropy profile fails the concavity/limit assumptions (A1-A2)")
    for d in deltas:
        reports.append(check_condition(replace(spec, delta=d), n_per_decade=n_per_decade, validate=False))
    best = None
    for d, r in zip(deltas, reports):
        if r.verdict == "FINITE":
            best = d
            break
    return SweepReport(
        deltas=deltas,
        verdicts=tuple(r.verdict for r in reports),
        best_delta=best,
        reports=tuple(reports),
    )


@dataclass(frozen=True)
class ExpPowerReport:
    alpha: float
    tau: float
    A: float
    q_star: float  # cost exponent of the dual pairing used in the first run
    beta: float
    run_cost: ConditionReport  # (F_tau, cost c_{A, q*})
    run_quadratic: ConditionReport  # (F_{2/beta}, quadratic)

    def to_json_dict(self):
        return {
            "alpha": self.alpha,
            "tau": self.tau,
            "A": self.A,
            "q_star": self.q_star,
            "beta": self.beta,
            "run_cost": self.run_cost.to_json_dict(),
            "run_quadratic": self.run_quadratic.to_json_dict(),
        }


def check_exp_power(alpha, tau, A=1.0, delta=0.25, K=4.0, n_grid=16384, measure=None):
    """Both finiteness checks behind the exp-power entropy inequality.

    For the measure e^{-|x|^alpha}: first the pair (F_tau, cost c_{A, q*})
    with q* = tau*alpha/(alpha(tau-1)+1) — the conjugate exponent of the
    energy cost c_{A, alpha*tau/(alpha-1)} named by the inequality — then the
    endpoint pair (F_{2/beta}, quadratic) with beta = alpha/(alpha-1) fixed.
    Requires 2(1 - 1/alpha) <= tau <= 1.
    """
    if not 1.0 < alpha <= 2.0:
        raise ValueError("alpha must lie in (1, 2]")
    lo = 2.0 * (1.0 - 1.0 / alpha)
    if not lo - 1e-12 <= tau <= 1.0 + 1e-12:
        raise ValueError(f"tau must lie in [{lo:g}, 1]")
    tau = min(max(tau, lo), 1.0)
    beta = alpha / (alpha - 1.0)
    q_star = tau * alpha / (alpha * (tau - 1.0) + 1.0)
    if measure is None:
        measure = builtin_measure("exp_power", alpha=alpha, n=n_grid)
    F1 = F_tau(tau)
    F2 = F_tau(2.0 / beta)
    spec1 = ConditionSpec(measure=measure, F=F1, cost=CostFunction.closed_form(A, q_star), delta=delta, K=K, form="general")
    spec2 = ConditionSpec(measure=measure, F=F2, delta=delta, K=K, form="quadratic")
    return ExpPowerReport(
        alpha=float(alpha),
        tau=float(tau),
        A=float(A),
        q_star=float(q_star),
        beta=float(beta),
        run_cost=check_condition(spec1),
        run_quadratic=check_condition(spec2),
    )


@dataclass(frozen=True)
class GrowthReport:
    C: float  # inf over sampled r of g(r) / (r phi^{1-1/alpha}(e^{g(r)}))
    bounded: bool  # stays bounded away from 0 toward the edge of the range
    log_normalizer: float  # log int e^{g(|x|)} dmu (additive rescaling constant)
    sup_ratio: float
    r_lo: float
    r_hi: float
    n_used: int

    def to_json_dict(self):
        return {
            "C": self.C,
            "bounded": self.bounded,
            "log_normalizer": self.log_normalizer,
            "sup_ratio": self.sup_ratio,
            "r_lo": self.r_lo,
            "r_hi": self.r_hi,
            "n_used": self.n_used,
        }


def verify_growth_condition(mu, g, phi=None, alpha=2.0, n=600):
    """Fitted constant in the growth condition g(r) >= C r phi^{1-1/alpha}(e^{g(r)}).

    g must be increasing and e^{g(|x|)} integrable against mu (checked: the
    mass-weighted contributions must not peak at the truncation boundary).
    The additive constant normalizing int e^g dmu to 1 is computed and
    reported, but the ratio uses g as given — the worked examples' algebra
    (e.g. g = eps r^2 on the Gaussian giving C = sqrt(eps)) is stated for the
    raw function.  phi=None means phi = log, evaluated overflow-free as
    phi(e^g) = g.
    """
    if alpha < 1.0:
        raise ValueError("alpha must be >= 1")
    gv = _as_fn(g)
    # integrability of e^{g(|x|)} dmu on the truncated support
    contrib = gv(np.abs(mu.grid)) + np.log(np.maximum(mu.node_mass, 1e-300))
    i_peak = int(np.argmax(contrib))
    n_edge = max(8, mu.grid.size // 100)
    if i_peak < n_edge or i_peak >= mu.grid.size - n_edge:
        raise ValueError("exp(g(|x|)) dmu peaks at the truncation boundary; not integrable")
    c0 = _logsumexp(contrib)

    R_half = float(mu.radius_of_outside_mass(0.5))
    r_hi = 0.999 * max(abs(mu.truncation[0]), abs(mu.truncation[1]))
    if not R_half < r_hi:
        raise ValueError("no radii between the half-mass radius and the support edge")
    r = np.linspace(R_half, r_hi, n)
    gr = gv(r)
    if np.any(np.diff(gr) < -1e-12 * (1.0 + np.max(np.abs(gr)))):
        raise ValueError("g must be increasing on the sampled radii")
    expo = 1.0 - 1.0 / alpha
    if phi is None:
        phival = gr  # log(e^{g}) without forming e^{g}
    else:
        with np.errstate(over="ignore"):
            phival = np.asarray(phi(np.exp(np.minimum(gr, 700.0))), dtype=float)
    ok = phival > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(ok, gr / (r * np.maximum(phival, 1e-300) ** expo), np.nan)
    good = np.isfinite(ratio)
    if not np.any(good):
        raise ValueError("phi(e^{g(r)}) is nonpositive on the whole sampled range")
    C = float(np.nanmin(ratio))
    sup = float(np.nanmax(ratio))
    # bounded away from zero: the infimum over the outermost window must hold
    # its own against the overall supremum
    w_lo = max(np.sqrt(R_half * r_hi), r_hi / 100.0)
    wmask = good & (r >= w_lo)
    inf_edge = float(np.nanmin(ratio[wmask])) if np.any(wmask) else 0.0
    bounded = bool(inf_edge >= 0.25 * sup and inf_edge > 0)
    return GrowthReport(
        C=C,
        bounded=bounded,
        log_normalizer=c0,
        sup_ratio=sup,
        r_lo=float(R_half),
        r_hi=float(r_hi),
        n_used=int(np.count_nonzero(good)),
    )


def _as_fn(g):
    def f(x):
        return np.asarray(g(np.asarray(x, dtype=float)), dtype=float)

    return f
