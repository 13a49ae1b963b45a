"""Applications: trapezoid error bounds and mean-inequality chains."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field

from .expr import (
    Const,
    DifferentiationError,
    DomainError,
    ExprTooLargeError,
    Interval,
    differentiate,
    evaluate,
    power,
    to_text,
    unary,
)
from .ineq import ABS_TOL, REL_TOL, evaluate_hypotheses, trapezoid_functional
from .quad import DEFAULT_TOL, integrate, minimum, sup_norm

__all__ = [
    "TrapezoidBounds",
    "GeometricMeanReport",
    "MeanChainReport",
    "InversionError",
    "trapezoid_bounds",
    "geometric_mean_bound",
    "log_convex_chain",
    "bijective_generalization",
    "invert_monotone",
    "LAMBDA_GRID",
]

LAMBDA_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
LOG_CONVEX_TOL = 1e-9
MAX_BISECTIONS = 200
# energies can be large; an absolute target alone may sit below double precision
ENERGY_REL_TOL = 1e-13

INTERPRETATION_NOTE = (
    "integral taken over [alpha, beta] with alpha = f^-1(f(x)^lambda), "
    "beta = f^-1(f(y)^(1-lambda)); oriented when beta < alpha"
)


class InversionError(ValueError):
    """Target value outside the range of the monotone function."""


def _holds(lhs, rhs):
    return lhs <= rhs + ABS_TOL + REL_TOL * abs(rhs)


@dataclass
class TrapezoidBounds:
    t_rap: float
    true_abs: float
    classic_bound: float | None
    m_constant: float | None
    new_bound: float | None
    classic_applicable: bool
    hypothesis_note: str
    sup_norm: float = 0.0
    max_value: float = 0.0
    second_derivative_sup: float | None = None
    energy: float | None = None
    signed_bound: float | None = None
    signed_bound_holds: bool | None = None
    new_bound_holds: bool | None = None
    classic_holds: bool | None = None
    function: str = ""
    interval: tuple = ()

    @property
    def tighter(self):
        """Name of the smaller available bound."""
        if self.new_bound is None:
            return "classic" if self.classic_bound is not None else None
        if self.classic_bound is None:
            return "new"
        if self.new_bound < self.classic_bound:
            return "new"
        if self.classic_bound < self.new_bound:
            return "classic"
        return "equal"

    def to_dict(self):
        d = asdict(self)
        d["interval"] = list(self.interval)
        d["tighter"] = self.tighter
        return d


def trapezoid_bounds(f, interval, tol=DEFAULT_TOL):
    """Classical and ``M``-based bounds on the one-panel trapezoid error.

    The classical bound is ``(b-a)^3/12 ||f''||_inf``.  The new bound is
    ``(b-a)^3/12 M`` with
    ``M = 6/(b-a)^2 ||f||_inf + ||f'||_2^2 / (2 (b-a) ||f||_inf)``,
    which equals ``(b-a)/2 ||f||_inf + (b-a)^2/24 ||f'||_2^2 / ||f||_inf``.
    """
    width = interval.width
    t_rap, _ = trapezoid_functional(f, interval, tol)
    sn = sup_norm(f, interval)
    notes = []

    classic = d2_sup = None
    classic_applicable = False
    df = None
    try:
        df = differentiate(f)
        d2 = differentiate(f, 2)
        d2_sup = sup_norm(d2, interval).abs_max
        classic = width**3 / 12.0 * d2_sup
        classic_applicable = True
    except (DifferentiationError, ExprTooLargeError) as exc:
        notes.append(f"classical bound unavailable: {exc}")

    m_const = new = energy = signed = None
    signed_holds = new_holds = None
    if df is None:
        notes.append("new bound unavailable: no derivative")
    elif sn.abs_max == 0.0:
        notes.append("||f||_inf = 0: M undefined, classical bound only")
    else:
        energy = integrate(power(df, Const(2.0)), interval, tol, ENERGY_REL_TOL).value
        m_const = 6.0 / width**2 * sn.abs_max + energy / (2.0 * width * sn.abs_max)
        new = width**3 / 12.0 * m_const
        new_holds = _holds(abs(t_rap), new)
        if sn.max_value != 0.0:
            signed = width / 2.0 * sn.max_value + width**2 / (24.0 * sn.max_value) * energy
            signed_holds = _holds(t_rap, signed)
        else:
            notes.append("max f = 0: signed corollary form undefined")
        if sn.max_value < 0.0:
            notes.append("max f < 0: signed corollary form divides by a negative maximum")

    return TrapezoidBounds(
        t_rap=t_rap,
        true_abs=abs(t_rap),
        classic_bound=classic,
        m_constant=m_const,
        new_bound=new,
        classic_applicable=classic_applicable,
        hypothesis_note="; ".join(notes) if notes else "all bounds computed",
        sup_norm=sn.abs_max,
        max_value=sn.max_value,
        second_derivative_sup=d2_sup,
        energy=energy,
        signed_bound=signed,
        signed_bound_holds=signed_holds,
        new_bound_holds=new_holds,
        classic_holds=_holds(abs(t_rap), classic) if classic is not None else None,
        function=to_text(f),
        interval=(interval.a, interval.b),
    )


@dataclass
class GeometricMeanReport:
    lhs: float
    rhs: float
    satisfied: bool
    ratio: float | None
    endpoint_product: float
    hypotheses: object
    hypotheses_met: bool
    function: str = ""
    interval: tuple = ()

    def to_dict(self):
        d = asdict(self)
        d["interval"] = list(self.interval)
        return d


def geometric_mean_bound(f, interval, tol=DEFAULT_TOL):
    """``sqrt(f(a) f(b)) <= sqrt((b-a)/12) ||f'||_2``.

    Raises
    ------
    DomainError
        When ``f(a) f(b) <= 0`` and the geometric mean is undefined.
    """
    a, b = interval
    product = evaluate(f, a) * evaluate(f, b)
    if not product > 0.0:
        raise DomainError(f"geometric mean undefined: f(a) f(b) = {product!r} <= 0")
    integral = integrate(f, interval, tol)
    flags = evaluate_hypotheses(
        f, interval, ("convex", "mean_zero", "endpoint_product_positive"), tol, integral=integral
    )
    energy = integrate(power(differentiate(f), Const(2.0)), interval, tol, ENERGY_REL_TOL).value
    lhs = math.sqrt(product)
    rhs = math.sqrt(interval.width / 12.0) * math.sqrt(max(energy, 0.0))
    return GeometricMeanReport(
        lhs=lhs,
        rhs=rhs,
        satisfied=_holds(lhs, rhs),
        ratio=lhs / rhs if rhs > 0.0 else None,
        endpoint_product=product,
        hypotheses=flags,
        hypotheses_met=bool(flags.convex and flags.mean_zero and flags.endpoint_product_positive),
        function=to_text(f),
        interval=(a, b),
    )


@dataclass
class MeanChainReport:
    lam: float
    left: float
    middle: float
    right: float
    chain_holds: tuple
    x: float
    y: float
    log_convex: bool | None = None
    log_convex_witness: float | None = None
    alpha: float | None = None
    beta: float | None = None
    ordered: bool | None = None
    notes: list = field(default_factory=list)
    function: str = ""

    def to_dict(self):
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        d["chain_holds"] = list(self.chain_holds)
        return d


def _log_convexity(f, lo, hi):
    """Minimum of ``(log f)''`` on ``[lo, hi]``, or None when f is not positive there."""
    sub_interval = Interval(lo, hi)
    f_min, _ = minimum(f, sub_interval)
    if not f_min > 0.0:
        return None
    m, _ = minimum(differentiate(unary("log", f), 2), sub_interval)
    return m


def log_convex_chain(f, x, y, tol=DEFAULT_TOL):
    """``f((x+y)/2) <= sqrt(f(x) f(y)) <= sqrt((y-x)/12) ||f'||_2`` on ``[x, y]``.

    Both links are evaluated and reported separately; log-convexity is
    checked numerically and recorded, never assumed.
    """
    if not x < y:
        raise ValueError("log_convex_chain needs x < y")
    notes = []
    fx, fy = evaluate(f, x), evaluate(f, y)
    left = evaluate(f, 0.5 * (x + y))
    witness = None
    try:
        witness = _log_convexity(f, x, y)
    except (DomainError, DifferentiationError, ExprTooLargeError) as exc:
        notes.append(f"log-convexity check failed: {exc}")
    if witness is None:
        notes.append("f is not positive on [x, y]; not log-convex")
    log_convex = witness is not None and witness >= -LOG_CONVEX_TOL
    middle = math.sqrt(fx * fy) if fx * fy >= 0.0 else math.nan
    energy = integrate(power(differentiate(f), Const(2.0)), Interval(x, y), tol, ENERGY_REL_TOL).value
    right = math.sqrt((y - x) / 12.0) * math.sqrt(max(energy, 0.0))
    links = (_holds(left, middle), _holds(middle, right))
    return MeanChainReport(
        lam=0.5,
        left=left,
        middle=middle,
        right=right,
        chain_holds=links,
        x=x,
        y=y,
        log_convex=log_convex,
        log_convex_witness=witness,
        notes=notes,
        function=to_text(f),
    )


def invert_monotone(f, interval, value, increasing=None):
    """Solve ``f(t) = value`` on ``interval`` by bisection for monotone ``f``."""
    a, b = interval
    fa, fb = evaluate(f, a), evaluate(f, b)
    if increasing is None:
        increasing = fb > fa
    lo_v, hi_v = (fa, fb) if increasing else (fb, fa)
    if not lo_v <= value <= hi_v:
        raise InversionError(f"value {value!r} outside the range [{lo_v!r}, {hi_v!r}] of f")
    if value == fa:
        return a
    if value == fb:
        return b
    lo, hi = a, b
    for _ in range(MAX_BISECTIONS):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        fm = evaluate(f, mid)
        if fm == value:
            return mid
        if (fm < value) == increasing:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def bijective_generalization(f, interval, x, y, lam, tol=DEFAULT_TOL):
    """Weighted chain ``f(A_lam(x, y)) <= G_lam(f(x), f(y)) <= bound``.

    ``A_lam(x, y) = lam x + (1 - lam) y`` and
    ``G_lam(u, v) = u^lam v^(1 - lam)``.  The bound is
    ``(beta - alpha)/12 * int_alpha^beta f'^2`` where ``f(alpha) = f(x)^lam``
    and ``f(beta) = f(y)^(1-lam)``; both preimages come from bisection on
    the monotone ``f``.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")
    notes = [INTERPRETATION_NOTE]
    df = differentiate(f)
    d_min, _ = minimum(df, interval)
    d_max = -minimum(-df, interval)[0]
    increasing = d_min > 0.0
    if not (d_min > 0.0 or d_max < 0.0):
        notes.append(f"f' changes sign or vanishes (min {d_min!r}, max {d_max!r}); bijectivity not established")
    fx, fy = evaluate(f, x), evaluate(f, y)
    if fx < 0.0 or fy < 0.0:
        raise DomainError("weighted geometric mean needs f(x), f(y) >= 0")
    left = evaluate(f, lam * x + (1.0 - lam) * y)
    middle = fx**lam * fy ** (1.0 - lam)
    alpha = invert_monotone(f, interval, fx**lam, increasing)
    beta = invert_monotone(f, interval, fy ** (1.0 - lam), increasing)
    ordered = beta > alpha
    if alpha == beta:
        right = 0.0
        notes.append("alpha == beta: degenerate interval")
    else:
        lo, hi = min(alpha, beta), max(alpha, beta)
        energy = integrate(power(df, Const(2.0)), Interval(lo, hi), tol, ENERGY_REL_TOL).value
        oriented = energy if ordered else -energy
        right = (beta - alpha) / 12.0 * oriented
        if not ordered:
            notes.append("beta < alpha: integral oriented from alpha to beta")
    links = (_holds(left, middle), _holds(middle, right))
    return MeanChainReport(
        lam=lam,
        left=left,
        middle=middle,
        right=right,
        chain_holds=links,
        x=x,
        y=y,
        alpha=alpha,
        beta=beta,
        ordered=ordered,
        notes=notes,
        function=to_text(f),
    )
