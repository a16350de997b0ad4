"""Closed-form control-overhead model for proactive routing and its sensitivities.

Total overhead decomposes into three parts:

  * failure overhead — data packets wasted on routes whose links changed
    within one periodic-update interval,
  * periodic overhead — table refreshes, growing as k*n^3 / (B*T_pr),
  * trigger overhead — updates emitted between periodic rounds.

The trigger part exists in two printed forms (see TriggerForm); evaluation
modes keep the literal ceiling operators ("ceil") or relax them to identity
("smooth"), which is the only mode whose derivatives are validated against
finite differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

# evaluation modes
CEIL = "ceil"  # ceiling operators taken literally, as printed
SMOOTH = "smooth"  # ceil(x) relaxed to x; differentiable everywhere

# trigger-term forms
RATIO = "ratio"  # per-route ratio ceil(T/T_pr) / (T/T_pr), summed over nodes
COUNT = "count"  # plain count n * ceil(T/T_pr)

MODES = (CEIL, SMOOTH)
FORMS = (RATIO, COUNT)


class BracketError(ValueError):
    """The stationary-point bracket does not straddle a sign change."""


class CeilingBreakpoint(ValueError):
    """A ceiling-mode derivative was requested at a discontinuity."""


@dataclass(frozen=True)
class AnalyticParams:
    """Every free symbol of the overhead model in one place.

    n       node count (real-valued so sensitivities can be probed numerically)
    B       bandwidth, bit/s
    k       routing-protocol impulse factor (pure scale)
    T_pr    periodic route-update interval, s
    T       triggered-update epoch, s
    mu_k    mean link uptime, s
    lam     successful-packet rate, 1/s
    PN_avg  average number of paths
    L_avg   average path length, hops
    H       HELLO interval for the OLSR instantiation, s
    """

    n: float = 50
    B: float = 2e6
    k: float = 1.0
    T_pr: float = 15.0
    T: float = 30.0
    mu_k: float = 30.0
    lam: float = 40.0
    PN_avg: float = 10.0
    L_avg: int = 3
    H: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.L_avg < 0 or self.L_avg != int(self.L_avg):
            raise ValueError("L_avg must be a non-negative integer")
        for name in ("B", "k", "T_pr", "T", "mu_k", "H"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.lam < 0 or self.PN_avg < 0:
            raise ValueError("lam and PN_avg must be non-negative")


PARAM_FILE_KEYS = {
    "n": "n", "B": "B", "k": "k", "T_pr": "T_pr", "T": "T",
    "mu_k": "mu_k", "lambda": "lam", "PN_avg": "PN_avg",
    "L_avg": "L_avg", "H": "H",
}


def load_analytic_params(path: str) -> AnalyticParams:
    """Read a flat `key = value` file; keys are the model symbols, all optional."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if key not in PARAM_FILE_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown parameter {key!r}")
            try:
                parsed = float(value)
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad value for {key!r}: {value!r}") from exc
            field = PARAM_FILE_KEYS[key]
            values[field] = int(parsed) if field == "L_avg" else parsed
    return AnalyticParams(**values)


def _is_integral(x: float, tol: float = 1e-9) -> bool:
    return abs(x - round(x)) <= tol * max(1.0, abs(x))


def _ceil(x: float, mode: str) -> float:
    return math.ceil(x) if mode == CEIL else x


# -- overhead components ------------------------------------------------------


def path_failure_prob(r: int, T_pr: float, mu_k: float) -> float:
    """1 - exp(-r*T_pr/mu_k): chance the first r hops of a route see a link
    change within one update interval.  Zero at r=0, increasing in r and T_pr,
    decreasing in mean link uptime."""
    if T_pr <= 0 or mu_k <= 0:
        raise ValueError("T_pr and mu_k must be positive")
    if r < 0:
        raise ValueError("hop index must be non-negative")
    return 1.0 - math.exp(-r * T_pr / mu_k)


def failure_overhead(p: AnalyticParams) -> float:
    """Path-averaged packets lost to stale routes per periodic interval:
    PN_avg * lam * T_pr * sum_{r=0}^{L_avg} (1 - exp(-r*T_pr/mu_k))."""
    s = sum(path_failure_prob(r, p.T_pr, p.mu_k) for r in range(p.L_avg + 1))
    return p.PN_avg * p.lam * p.T_pr * s


def failure_overhead_per_path(path_lengths, lam: float, T_pr: float, mu_k: float) -> float:
    """Same quantity over an explicit path set (for simulator cross-checks)."""
    total = 0.0
    for length in path_lengths:
        total += sum(path_failure_prob(r, T_pr, mu_k) for r in range(length + 1))
    return lam * T_pr * total


def periodic_overhead(k: float, n: float, B: float, T_pr: float) -> float:
    """Table-refresh cost k*n^3 / (B*T_pr); cubic in node count."""
    if B <= 0 or T_pr <= 0:
        raise ValueError("B and T_pr must be positive")
    return k * n ** 3 / (B * T_pr)


def trigger_overhead_single(T: float, T_pr: float, mode: str = CEIL) -> float:
    """Cost of one triggered update relative to the periodic cadence:
    ceil(T/T_pr) / (T/T_pr).  Always in [1, 2); exactly 1 at integer ratios."""
    if T <= 0 or T_pr <= 0:
        raise ValueError("T and T_pr must be positive")
    x = T / T_pr
    return _ceil(x, mode) / x


def trigger_overhead(n: float, T: float, T_pr: float, form: str = COUNT,
                     mode: str = CEIL) -> float:
    """Network-wide triggered-update overhead in either printed form."""
    if form == COUNT:
        return n * _ceil(T / T_pr, mode)
    if form == RATIO:
        return n * trigger_overhead_single(T, T_pr, mode)
    raise ValueError(f"unknown trigger form {form!r}")


def total_overhead(p: AnalyticParams, form: str = COUNT, mode: str = CEIL) -> float:
    """Aggregate control overhead: failure + periodic + trigger components."""
    return (failure_overhead(p)
            + periodic_overhead(p.k, p.n, p.B, p.T_pr)
            + trigger_overhead(p.n, p.T, p.T_pr, form, mode))


# -- sensitivities -------------------------------------------------------------


def _failure_dTpr_sum(T_pr: float, mu_k: float, L_avg: int) -> float:
    s = 0.0
    for r in range(L_avg + 1):
        x = r * T_pr / mu_k
        s += 1.0 - math.exp(-x) + x * math.exp(-x)
    return s


def overhead_dTpr(p: AnalyticParams, form: str = COUNT, mode: str = SMOOTH) -> float:
    """Sensitivity of total overhead to the periodic interval.

    smooth: C*sum[1 - e^-x + x e^-x] - k n^3/(B T_pr^2) minus n*T/T_pr^2 for
    the count trigger form (ratio form contributes nothing).
    ceil: the literal printed expression; undefined at integral T/T_pr.
    """
    C = p.PN_avg * p.lam
    core = C * _failure_dTpr_sum(p.T_pr, p.mu_k, p.L_avg) \
        - p.k * p.n ** 3 / (p.B * p.T_pr ** 2)
    if mode == SMOOTH:
        if form == COUNT:
            return core - p.n * p.T / p.T_pr ** 2
        return core
    if _is_integral(p.T / p.T_pr):
        raise CeilingBreakpoint(
            f"T/T_pr = {p.T / p.T_pr} is integral: ceiling derivative undefined")
    trig = p.n * (math.ceil(-p.T / p.T_pr ** 2) + p.T / p.T_pr ** 2) \
        * p.T_pr ** 2 / p.T ** 2
    return core + trig


def overhead_dlambda(p: AnalyticParams) -> float:
    """Sensitivity to the successful-packet rate: only the failure term carries it."""
    return p.PN_avg * sum(
        p.T_pr * path_failure_prob(r, p.T_pr, p.mu_k) for r in range(p.L_avg + 1))


def overhead_dT(p: AnalyticParams, mode: str = SMOOTH, form: str = COUNT) -> float:
    """Sensitivity to the triggered-update epoch."""
    if mode == SMOOTH:
        return p.n / p.T_pr if form == COUNT else 0.0
    if _is_integral(p.T / p.T_pr):
        raise CeilingBreakpoint(
            f"T/T_pr = {p.T / p.T_pr} is integral: ceiling derivative undefined")
    return (p.n + 1) * (math.ceil(1.0 / p.T_pr ** 2) - 1.0 / p.T_pr ** 2) \
        * p.T_pr ** 2 / p.T ** 2


def overhead_dmu(p: AnalyticParams) -> float:
    """Sensitivity to mean link uptime; non-positive, since longer-lived links
    can only reduce failure overhead."""
    s = 0.0
    for r in range(p.L_avg + 1):
        x = r * p.T_pr / p.mu_k
        s += -(r * p.T_pr / p.mu_k ** 2) * math.exp(-x)
    return p.PN_avg * p.lam * p.T_pr * s


def overhead_dn(p: AnalyticParams) -> float:
    """Sensitivity to node count, periodic term only: 3*k*n^2 / (B*T_pr)."""
    return 3.0 * p.k * p.n ** 2 / (p.B * p.T_pr)


def total_differential(p: AnalyticParams, dTpr: float, dT: float,
                       form: str = COUNT, mode: str = SMOOTH) -> float:
    """First-order overhead change along a joint (T_pr, T) perturbation."""
    return overhead_dTpr(p, form, mode) * dTpr + overhead_dT(p, mode, form) * dT


def finite_diff(f, p: AnalyticParams, name: str, step: float) -> float:
    """Central difference of f over one parameter: (f(x+h) - f(x-h)) / 2h."""
    if step <= 0:
        raise ValueError("step must be positive")
    x = getattr(p, name)
    hi = f(replace(p, **{name: x + step}))
    lo = f(replace(p, **{name: x - step}))
    return (hi - lo) / (2.0 * step)


def spans_breakpoint(p: AnalyticParams, name: str, step: float) -> bool:
    """True when a step across `name` crosses a ceiling discontinuity in T/T_pr."""
    x = getattr(p, name)
    lo, hi = replace(p, **{name: x - step}), replace(p, **{name: x + step})
    return math.floor(lo.T / lo.T_pr) != math.floor(hi.T / hi.T_pr)


# -- stationary interval and update coefficient --------------------------------


def stationary_Tpr(p: AnalyticParams, bracket: tuple[float, float],
                   form: str = COUNT, mode: str = SMOOTH,
                   rel_tol: float = 1e-9, max_iter: int = 200) -> float:
    """Bisect overhead_dTpr to zero inside `bracket`.

    Returns the interval at which overhead stops improving; requires a sign
    change over the bracket and resolves until |derivative| <= rel_tol * scale.
    """
    lo, hi = bracket
    g = lambda t: overhead_dTpr(replace(p, T_pr=t), form, mode)
    g_lo, g_hi = g(lo), g(hi)
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if (g_lo < 0) == (g_hi < 0):
        raise BracketError(
            f"derivative does not change sign on [{lo}, {hi}]: {g_lo} and {g_hi}")
    scale = max(abs(g_lo), abs(g_hi), 1e-300)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if abs(g_mid) <= rel_tol * scale:
            return mid
        if (g_mid < 0) == (g_lo < 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def update_coefficient_balance(p: AnalyticParams, h: float,
                               form: str = COUNT) -> tuple[float, float]:
    """Both sides of the stationarity condition written in the update
    coefficient h = T_pr / mu_k (so T_pr = mu_k * h).

    lhs: failure-term growth C * sum[1 - e^{-rh} + r h e^{-rh}]
    rhs: periodic + trigger decay k n^3/(B (mu_k h)^2) [+ n T/(mu_k h)^2]

    lhs - rhs equals the smooth T_pr-sensitivity at T_pr = mu_k*h, so a
    stationary interval balances the two sides.  The rhs depends on mu_k and h
    only through their product.
    """
    if h <= 0:
        raise ValueError("update coefficient must be positive")
    C = p.PN_avg * p.lam
    lhs = 0.0
    for r in range(p.L_avg + 1):
        x = r * h
        lhs += 1.0 - math.exp(-x) + x * math.exp(-x)
    lhs *= C
    T_pr = p.mu_k * h
    rhs = p.k * p.n ** 3 / (p.B * T_pr ** 2)
    if form == COUNT:
        rhs += p.n * p.T / T_pr ** 2
    return lhs, rhs


# -- OLSR instantiation ---------------------------------------------------------


def olsr_overhead(p: AnalyticParams, H: float | None = None, mode: str = CEIL) -> float:
    """Overhead with HELLO interval H and TC interval 2H as the periodic
    messages; the trigger cadence becomes their combined 3H epoch.  The
    failure term keeps its own update interval T_pr."""
    H = p.H if H is None else H
    if H <= 0:
        raise ValueError("H must be positive")
    x = p.T / (3.0 * H)
    trig = p.n * _ceil(x, mode) / x
    return (failure_overhead(p)
            + p.k * p.n ** 3 / (p.B * H)
            + p.k * p.n ** 3 / (p.B * 2.0 * H)
            + trig)


def olsr_overhead_dH(p: AnalyticParams, H: float | None = None,
                     mode: str = SMOOTH) -> float:
    """Sensitivity of the OLSR form to the HELLO interval: both periodic terms
    shrink as 1/H^2; the relaxed trigger ratio is constant."""
    H = p.H if H is None else H
    if H <= 0:
        raise ValueError("H must be positive")
    periodic = -p.k * p.n ** 3 / (p.B * H ** 2) - p.k * p.n ** 3 / (p.B * 2.0 * H ** 2)
    if mode == SMOOTH:
        return periodic
    x = p.T / (3.0 * H)
    if _is_integral(x):
        raise CeilingBreakpoint(
            f"T/(3H) = {x} is integral: ceiling derivative undefined")
    trig = p.n * (math.ceil(-p.T / (3.0 * H) ** 2) + p.T / (3.0 * H) ** 2) \
        * (3.0 * H) ** 2 / p.T ** 2
    return periodic + trig
