"""Wirtinger/Alzer-type inequalities as checkable predicates.

Every checker returns an :class:`IneqReport` with both sides of the
inequality, the margin, and the numeric evidence for each hypothesis of
the theorem.  Checks always run; failed hypotheses are recorded, not
enforced, so that violations outside the hypotheses stay visible.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .expr import (
    X,
    Const,
    Interval,
    differentiate,
    evaluate,
    parse,
    power,
    sub,
    substitute,
    to_text,
)
from .quad import DEFAULT_TOL, integrate, minimum, sup_norm
from .special import beta_int

__all__ = [
    "TWO_PI",
    "PERIODIC_INTERVAL",
    "UNIT_INTERVAL",
    "HypothesisFlags",
    "IneqReport",
    "HigherOrderConstants",
    "higher_order_constants",
    "evaluate_hypotheses",
    "check_wirtinger",
    "check_alzer",
    "check_thm3_convex",
    "check_thm4_increasing",
    "check_cor1_decreasing",
    "check_thm5_endpoint_max",
    "check_thm6_general",
    "check_higher_order",
    "vanishing_integral_residual",
    "vanishing_identity",
    "trapezoid_functional",
    "thm4_extremal_constant",
    "extremal_function",
    "audit_sharpness",
    "run_check",
    "CHECKERS",
    "THEOREM_IDS",
    "REQUIRED_HYPOTHESES",
    "SHARPNESS_TOL",
]

TWO_PI = 2.0 * math.pi
PERIODIC_INTERVAL = Interval(0.0, TWO_PI)
UNIT_INTERVAL = Interval(0.0, 1.0)

ABS_TOL = 1e-9
REL_TOL = 1e-9
SHAPE_TOL = 1e-9  # threshold on min f'' / min f' for convex / monotone evidence
ENDPOINT_TOL = 1e-8
MEAN_ZERO_TOL = 1e-8
SHARPNESS_TOL = 1e-7

EVIDENCE_NOTE = "hypothesis flags are numeric evidence from grid search with refinement, not proofs"


@dataclass
class HypothesisFlags:
    """Hypothesis evidence; a flag left as ``None`` was not evaluated."""

    mean_zero: bool | None = None
    mean_residual: float | None = None
    convex: bool | None = None
    min_second_derivative: float | None = None
    increasing: bool | None = None
    min_first_derivative: float | None = None
    decreasing: bool | None = None
    max_first_derivative: float | None = None
    endpoint_product_positive: bool | None = None
    endpoint_product: float | None = None
    endpoints_are_max: bool | None = None
    endpoint_max_gap: float | None = None
    periodic_match: bool | None = None
    periodic_gap: float | None = None
    note: str = EVIDENCE_NOTE

    def to_dict(self):
        return asdict(self)


@dataclass
class IneqReport:
    theorem_id: str
    interval: tuple
    lhs: float
    rhs: float
    margin: float
    satisfied: bool
    sharpness_ratio: float | None
    hypotheses: HypothesisFlags
    hypotheses_met: bool
    quadrature_budget: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    function: str = ""
    sharp_confirmed: bool | None = None

    def to_dict(self):
        d = asdict(self)
        d["interval"] = list(self.interval)
        return d


@dataclass(frozen=True)
class HigherOrderConstants:
    n: int
    beta: float
    alpha: float


def higher_order_constants(n, interval):
    """``beta = B(2n+1, 2n+1)`` and ``alpha = 12^n (b-a)^-(n+1/2) / sqrt(beta)``."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    beta = beta_int(2 * n + 1, 2 * n + 1)
    alpha = 12.0**n * interval.width ** (-(n + 0.5)) / math.sqrt(beta)
    return HigherOrderConstants(n=n, beta=beta, alpha=alpha)


# --------------------------------------------------------------------------
# Hypothesis evidence
# --------------------------------------------------------------------------


def evaluate_hypotheses(f, interval, which, tol=DEFAULT_TOL, sn=None, integral=None):
    """Evaluate the named hypotheses of ``f`` on ``interval``.

    ``which`` is an iterable over ``mean_zero``, ``convex``,
    ``increasing``, ``decreasing``, ``endpoint_product_positive``,
    ``endpoints_are_max`` and ``periodic_match``.
    """
    flags = HypothesisFlags()
    which = set(which)
    a, b = interval
    fa, fb = evaluate(f, a), evaluate(f, b)
    if "mean_zero" in which:
        res = integral if integral is not None else integrate(f, interval, tol)
        flags.mean_residual = res.value
        flags.mean_zero = abs(res.value) <= MEAN_ZERO_TOL * max(1.0, interval.width)
    if "convex" in which:
        m, _ = minimum(differentiate(f, 2), interval)
        flags.min_second_derivative = m
        flags.convex = m >= -SHAPE_TOL
    if "increasing" in which or "decreasing" in which:
        df = differentiate(f)
        if "increasing" in which:
            m, _ = minimum(df, interval)
            flags.min_first_derivative = m
            flags.increasing = m >= -SHAPE_TOL
        if "decreasing" in which:
            m, _ = minimum(-df, interval)
            flags.max_first_derivative = -m
            flags.decreasing = -m <= SHAPE_TOL
    if "endpoint_product_positive" in which:
        flags.endpoint_product = fa * fb
        flags.endpoint_product_positive = fa * fb > 0.0
    if "endpoints_are_max" in which:
        sn = sn if sn is not None else sup_norm(f, interval)
        gap = max(abs(fa - sn.max_value), abs(fb - sn.max_value))
        flags.endpoint_max_gap = gap
        flags.endpoints_are_max = gap <= ENDPOINT_TOL
    if "periodic_match" in which:
        flags.periodic_gap = abs(fa - fb)
        flags.periodic_match = abs(fa - fb) <= ENDPOINT_TOL
    return flags


REQUIRED_HYPOTHESES = {
    "wirtinger": ("mean_zero", "periodic_match"),
    "alzer": ("mean_zero", "periodic_match"),
    "thm3": ("convex", "mean_zero", "endpoint_product_positive"),
    "thm4": ("increasing", "mean_zero"),
    "cor1": ("decreasing", "mean_zero"),
    "thm5": ("endpoints_are_max", "mean_zero"),
    "thm6": (),
    "higher": ("mean_zero",),
}


def _hypotheses_met(theorem_id, flags):
    return all(getattr(flags, name) is True for name in REQUIRED_HYPOTHESES[theorem_id])


# --------------------------------------------------------------------------
# Report assembly
# --------------------------------------------------------------------------


def _report(theorem_id, f, interval, lhs, rhs, flags, budget, details=None):
    margin = rhs - lhs
    satisfied = lhs <= rhs + ABS_TOL + REL_TOL * abs(rhs)
    ratio = lhs / rhs if rhs > 0.0 else None
    return IneqReport(
        theorem_id=theorem_id,
        interval=(interval.a, interval.b),
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        satisfied=satisfied,
        sharpness_ratio=ratio,
        hypotheses=flags,
        hypotheses_met=_hypotheses_met(theorem_id, flags),
        quadrature_budget={k: v.summary() for k, v in budget.items()},
        details=details or {},
        function=to_text(f),
    )


def _energy(f, interval, tol):
    """``int f'^2`` over the interval."""
    df = differentiate(f)
    return integrate(power(df, Const(2.0)), interval, tol)


def _squared_max(sn, flags):
    """``max f^2``: signed max squared in the endpoint-max setting, else sup-norm squared."""
    if flags.endpoints_are_max:
        return sn.max_value**2, "signed_max"
    return sn.abs_max**2, "abs_max"


def trapezoid_functional(f, interval, tol=DEFAULT_TOL, integral=None):
    """``(b-a)(f(a)+f(b))/2 - int f`` and the integral used."""
    a, b = interval
    res = integral if integral is not None else integrate(f, interval, tol)
    return interval.width * 0.5 * (evaluate(f, a) + evaluate(f, b)) - res.value, res


# --------------------------------------------------------------------------
# Checkers
# --------------------------------------------------------------------------


def check_wirtinger(f, tol=DEFAULT_TOL):
    """``int f^2 <= int f'^2`` on ``[0, 2 pi]``."""
    interval = PERIODIC_INTERVAL
    integral = integrate(f, interval, tol)
    flags = evaluate_hypotheses(f, interval, REQUIRED_HYPOTHESES["wirtinger"], tol, integral=integral)
    sq = integrate(power(f, Const(2.0)), interval, tol)
    energy = _energy(f, interval, tol)
    budget = {"integral_f": integral, "integral_f_squared": sq, "integral_df_squared": energy}
    return _report("wirtinger", f, interval, sq.value, energy.value, flags, budget)


def check_alzer(f, tol=DEFAULT_TOL):
    """``(6/pi) max f^2 <= int f'^2`` on ``[0, 2 pi]``."""
    interval = PERIODIC_INTERVAL
    integral = integrate(f, interval, tol)
    sn = sup_norm(f, interval)
    flags = evaluate_hypotheses(
        f, interval, REQUIRED_HYPOTHESES["alzer"] + ("endpoints_are_max",), tol, sn=sn, integral=integral
    )
    max_sq, rule = _squared_max(sn, flags)
    energy = _energy(f, interval, tol)
    budget = {"integral_f": integral, "integral_df_squared": energy}
    details = {"max_f_squared": max_sq, "max_rule": rule, "max_value": sn.max_value, "abs_max": sn.abs_max}
    return _report("alzer", f, interval, 6.0 / math.pi * max_sq, energy.value, flags, budget, details)


def check_thm3_convex(f, interval, tol=DEFAULT_TOL):
    """``f(a) f(b) <= (b-a)/12 int f'^2`` for convex mean-zero ``f``."""
    a, b = interval
    integral = integrate(f, interval, tol)
    flags = evaluate_hypotheses(f, interval, REQUIRED_HYPOTHESES["thm3"], tol, integral=integral)
    energy = _energy(f, interval, tol)
    lhs = evaluate(f, a) * evaluate(f, b)
    rhs = interval.width / 12.0 * energy.value
    budget = {"integral_f": integral, "integral_df_squared": energy}
    return _report("thm3", f, interval, lhs, rhs, flags, budget)


def check_thm4_increasing(f, interval, tol=DEFAULT_TOL):
    """``(2 f(a) - f(b)) f(b) <= (b-a)/12 int f'^2`` for increasing mean-zero ``f``."""
    a, b = interval
    integral = integrate(f, interval, tol)
    flags = evaluate_hypotheses(f, interval, REQUIRED_HYPOTHESES["thm4"], tol, integral=integral)
    energy = _energy(f, interval, tol)
    fa, fb = evaluate(f, a), evaluate(f, b)
    lhs = (2.0 * fa - fb) * fb
    rhs = interval.width / 12.0 * energy.value
    budget = {"integral_f": integral, "integral_df_squared": energy}
    return _report("thm4", f, interval, lhs, rhs, flags, budget)


def check_cor1_decreasing(f, interval, tol=DEFAULT_TOL):
    """``(2 f(b) - f(a)) f(a) <= (b-a)/12 int f'^2`` for decreasing mean-zero ``f``."""
    a, b = interval
    integral = integrate(f, interval, tol)
    flags = evaluate_hypotheses(f, interval, REQUIRED_HYPOTHESES["cor1"], tol, integral=integral)
    energy = _energy(f, interval, tol)
    fa, fb = evaluate(f, a), evaluate(f, b)
    lhs = (2.0 * fb - fa) * fa
    rhs = interval.width / 12.0 * energy.value
    budget = {"integral_f": integral, "integral_df_squared": energy}
    return _report("cor1", f, interval, lhs, rhs, flags, budget)


def check_thm5_endpoint_max(f, interval, tol=DEFAULT_TOL):
    """``max f^2 <= (b-a)/12 int f'^2`` when ``f(a) = max f = f(b)``."""
    integral = integrate(f, interval, tol)
    sn = sup_norm(f, interval)
    flags = evaluate_hypotheses(f, interval, REQUIRED_HYPOTHESES["thm5"], tol, sn=sn, integral=integral)
    max_sq, rule = _squared_max(sn, flags)
    energy = _energy(f, interval, tol)
    rhs = interval.width / 12.0 * energy.value
    budget = {"integral_f": integral, "integral_df_squared": energy}
    details = {"max_f_squared": max_sq, "max_rule": rule, "max_value": sn.max_value, "abs_max": sn.abs_max}
    return _report("thm5", f, interval, max_sq, rhs, flags, budget, details)


def check_thm6_general(f, interval, tol=DEFAULT_TOL):
    """``(2 T(f)/(b-a) - max f) max f <= (b-a)/12 int f'^2`` with no hypotheses.

    ``T(f)`` is the one-panel trapezoid error ``(b-a)(f(a)+f(b))/2 - int f``.
    """
    t_rap, integral = trapezoid_functional(f, interval, tol)
    sn = sup_norm(f, interval)
    flags = evaluate_hypotheses(f, interval, (), tol)
    energy = _energy(f, interval, tol)
    m = sn.max_value
    lhs = (2.0 / interval.width * t_rap - m) * m
    rhs = interval.width / 12.0 * energy.value
    budget = {"integral_f": integral, "integral_df_squared": energy}
    details = {"t_rap": t_rap, "max_value": m, "argmax": sn.argmax}
    return _report("thm6", f, interval, lhs, rhs, flags, budget, details)


def _weight(interval, n):
    a, b = interval
    return power(sub(X, Const(a)), Const(float(n))) * power(sub(Const(b), X), Const(float(n)))


def vanishing_integral_residual(f, interval, n=1, tol=DEFAULT_TOL):
    """Computed value of ``int (x-a)^n (b-x)^n f^(2n)(x) dx``."""
    d2n = differentiate(f, 2 * n)
    return integrate(_weight(interval, n) * d2n, interval, tol).value


def vanishing_identity(f, interval, tol=DEFAULT_TOL):
    """Closed form of the ``n = 1`` residual: ``(b-a)(f(a)+f(b)) - 2 int f``."""
    a, b = interval
    return interval.width * (evaluate(f, a) + evaluate(f, b)) - 2.0 * integrate(f, interval, tol).value


def check_higher_order(f, interval, n=1, tol=DEFAULT_TOL):
    """``||f||_inf <= ((b-a)/12)^n ||f^(2n)||_2`` for mean-zero ``f``.

    Violations are reported, not suppressed.  The report also carries the
    residual of the integration-by-parts step the inequality relies on.
    """
    n = int(n)
    if n < 1:
        raise ValueError("n must be a positive integer")
    d2n = differentiate(f, 2 * n)
    integral = integrate(f, interval, tol)
    flags = evaluate_hypotheses(f, interval, REQUIRED_HYPOTHESES["higher"], tol, integral=integral)
    sn = sup_norm(f, interval)
    energy = integrate(power(d2n, Const(2.0)), interval, tol)
    lhs = sn.abs_max
    rhs = (interval.width / 12.0) ** n * math.sqrt(max(energy.value, 0.0))
    weighted = integrate(_weight(interval, n) * d2n, interval, tol)
    consts = higher_order_constants(n, interval)
    details = {
        "n": n,
        "vanishing_residual": weighted.value,
        "beta": consts.beta,
        "alpha": consts.alpha,
        "abs_argmax": sn.abs_argmax,
    }
    if n == 1:
        a, b = interval
        identity = interval.width * (evaluate(f, a) + evaluate(f, b)) - 2.0 * integral.value
        details["vanishing_identity"] = identity
        details["identity_gap"] = weighted.value - identity
    budget = {"integral_f": integral, "integral_d2n_squared": energy, "weighted_integral": weighted}
    return _report("higher", f, interval, lhs, rhs, flags, budget, details)


CHECKERS = {
    "wirtinger": lambda f, interval, tol=DEFAULT_TOL, n=1: check_wirtinger(f, tol),
    "alzer": lambda f, interval, tol=DEFAULT_TOL, n=1: check_alzer(f, tol),
    "thm3": lambda f, interval, tol=DEFAULT_TOL, n=1: check_thm3_convex(f, interval, tol),
    "thm4": lambda f, interval, tol=DEFAULT_TOL, n=1: check_thm4_increasing(f, interval, tol),
    "cor1": lambda f, interval, tol=DEFAULT_TOL, n=1: check_cor1_decreasing(f, interval, tol),
    "thm5": lambda f, interval, tol=DEFAULT_TOL, n=1: check_thm5_endpoint_max(f, interval, tol),
    "thm6": lambda f, interval, tol=DEFAULT_TOL, n=1: check_thm6_general(f, interval, tol),
    "higher": lambda f, interval, tol=DEFAULT_TOL, n=1: check_higher_order(f, interval, n, tol),
}
THEOREM_IDS = tuple(CHECKERS)


def run_check(theorem_id, f, interval, tol=DEFAULT_TOL, n=1):
    """Dispatch to the checker named ``theorem_id``."""
    try:
        checker = CHECKERS[theorem_id]
    except KeyError:
        raise ValueError(f"unknown theorem {theorem_id!r}; expected one of {THEOREM_IDS}") from None
    return checker(f, interval, tol=tol, n=n)


# --------------------------------------------------------------------------
# Sharpness audit
# --------------------------------------------------------------------------


def thm4_extremal_constant():
    return (10.0 + 2.0 * math.sqrt(835.0)) / 27.0


def _alzer_extremal(c=1.0):
    return parse(f"{c!r} * (3*((x - pi)/pi)^2 - 1)")


def _thm4_extremal():
    c = Const(thm4_extremal_constant())
    return c * c * Const(4.0) * power(X, Const(3.0)) + Const(12.0) * c * X - c * c - Const(6.0) * c


def extremal_function(theorem_id):
    """Claimed extremal function and its native interval."""
    if theorem_id in ("thm2", "thm5"):
        return _alzer_extremal(), PERIODIC_INTERVAL
    if theorem_id in ("thm3", "thm6"):
        return parse("6*x^2 - 6*x + 1"), UNIT_INTERVAL
    if theorem_id == "thm4":
        return _thm4_extremal(), UNIT_INTERVAL
    raise ValueError(f"no extremal function for {theorem_id!r}")


def _reparameterise(f, source, target):
    """``f`` moved affinely from ``source`` onto ``target``."""
    scale = source.width / target.width
    inner = Const(source.a) + Const(scale) * sub(X, Const(target.a))
    return substitute(f, inner)


_AUDIT_CHECK = {"thm2": "alzer", "thm3": "thm3", "thm4": "thm4", "thm5": "thm5", "thm6": "thm6"}


def audit_sharpness(theorem_id, interval=None, tol=DEFAULT_TOL):
    """Run the checker of ``theorem_id`` on its claimed extremal function.

    ``sharp_confirmed`` is set iff the ratio lhs/rhs lies within 1e-7 of 1.
    For thm3..thm6 the extremal is moved affinely onto ``interval`` when
    one is given; thm2 always runs on ``[0, 2 pi]``.
    """
    if theorem_id not in _AUDIT_CHECK:
        raise ValueError(f"audit supports {tuple(_AUDIT_CHECK)}, got {theorem_id!r}")
    f, native = extremal_function(theorem_id)
    target = native
    if interval is not None and theorem_id != "thm2":
        target = interval
        if target != native:
            f = _reparameterise(f, native, target)
    report = run_check(_AUDIT_CHECK[theorem_id], f, target, tol)
    report.details["checker"] = report.theorem_id
    report.theorem_id = theorem_id
    ratio = report.sharpness_ratio
    report.sharp_confirmed = ratio is not None and abs(ratio - 1.0) <= SHARPNESS_TOL
    return report
