"""Seeded corpora of hypothesis-satisfying functions and counterexample mining.

Trial ``i`` of a spec with master seed ``s`` draws from
``SeedSequence(s, spawn_key=(i,))``, so any single trial can be replayed
in isolation and serial and parallel runs produce the same corpus.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from numpy.polynomial import Polynomial

from .expr import X, Const, ExprError, Interval, add, mul, power, to_text, unary
from .ineq import (
    ABS_TOL,
    PERIODIC_INTERVAL,
    REL_TOL,
    UNIT_INTERVAL,
    evaluate_hypotheses,
    run_check,
)
from .quad import DEFAULT_TOL, QuadratureError, mean_zero_shift

__all__ = [
    "FAMILIES",
    "TARGETS",
    "GeneratorSpec",
    "GeneratorSpecError",
    "CounterexampleRecord",
    "TheoremSummary",
    "trial_rng",
    "generate",
    "generate_one",
    "mine",
    "mine_with_summary",
    "replay",
    "polynomial_expr",
]

logger = logging.getLogger(__name__)

FAMILIES = ("polynomial", "trig-polynomial", "exp-mixture")
TARGETS = ("convex", "increasing", "decreasing", "mean-zero", "endpoint-max", "positive-endpoint-product")

_SUPPORTED = {
    "polynomial": set(TARGETS),
    "trig-polynomial": {"mean-zero", "positive-endpoint-product"},
    "exp-mixture": {"convex", "increasing", "decreasing", "mean-zero", "positive-endpoint-product"},
}
_SHAPES = ("convex", "increasing", "decreasing", "endpoint-max")

# target name -> hypothesis flag checked as evidence
_EVIDENCE = {
    "convex": "convex",
    "increasing": "increasing",
    "decreasing": "decreasing",
    "mean-zero": "mean_zero",
    "endpoint-max": "endpoints_are_max",
    "positive-endpoint-product": "endpoint_product_positive",
}


class GeneratorSpecError(ValueError):
    pass


@dataclass(frozen=True)
class GeneratorSpec:
    """What to generate.

    ``degree`` caps the polynomial degree, the highest harmonic of a trig
    polynomial, or the number of exponential terms.
    """

    family: str = "polynomial"
    degree: int = 6
    coef_range: tuple = (-3.0, 3.0)
    targets: frozenset = frozenset()
    seed: int = 0
    trials: int = 100
    interval: Interval | None = None
    max_rejects: int = 10_000

    def __post_init__(self):
        object.__setattr__(self, "targets", frozenset(self.targets))
        object.__setattr__(self, "coef_range", tuple(float(c) for c in self.coef_range))
        if self.family not in FAMILIES:
            raise GeneratorSpecError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        unknown = self.targets - set(TARGETS)
        if unknown:
            raise GeneratorSpecError(f"unknown targets {sorted(unknown)}")
        unsupported = self.targets - _SUPPORTED[self.family]
        if unsupported:
            raise GeneratorSpecError(f"family {self.family!r} cannot target {sorted(unsupported)}")
        shapes = [t for t in _SHAPES if t in self.targets]
        if len(shapes) > 1:
            raise GeneratorSpecError(f"at most one shape target allowed, got {shapes}")
        if self.degree < 1:
            raise GeneratorSpecError("degree must be at least 1")
        if self.trials < 0:
            raise GeneratorSpecError("trials must be non-negative")
        lo, hi = self.coef_range
        if not lo < hi:
            raise GeneratorSpecError("coef_range must be (low, high) with low < high")
        if self.interval is None:
            default = PERIODIC_INTERVAL if self.family == "trig-polynomial" else UNIT_INTERVAL
            object.__setattr__(self, "interval", default)

    def to_dict(self):
        return {
            "family": self.family,
            "degree": self.degree,
            "coef_range": list(self.coef_range),
            "targets": sorted(self.targets),
            "seed": self.seed,
            "trials": self.trials,
            "interval": [self.interval.a, self.interval.b],
            "max_rejects": self.max_rejects,
        }


def trial_rng(seed, trial):
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


# --------------------------------------------------------------------------
# Construction
# --------------------------------------------------------------------------


def polynomial_expr(coefs):
    """``sum c_k x^k`` as an expression, ascending coefficients."""
    terms = Const(0.0)
    for k, c in enumerate(coefs):
        if c == 0.0:
            continue
        mono = Const(1.0) if k == 0 else (X if k == 1 else power(X, Const(float(k))))
        terms = add(terms, mul(Const(float(c)), mono))
    return terms


def _sum_of_squares(rng, degree, scale):
    """Random polynomial of degree <= ``degree`` that is nonnegative on R."""
    half = max(degree // 2, 0)
    p = Polynomial([abs(rng.uniform(0.0, scale))])
    for _ in range(int(rng.integers(1, 3))):
        q = Polynomial(rng.uniform(-scale, scale, size=half + 1))
        p = p + rng.uniform(0.0, 1.0) * q * q
    return p


def _to_x(p_t, interval):
    """Re-express a polynomial in ``t = (x-a)/(b-a)`` as a polynomial in ``x``."""
    a, w = interval.a, interval.width
    return p_t(Polynomial([-a / w, 1.0 / w]))


def _poly_candidate(spec, rng):
    lo, hi = spec.coef_range
    scale = max(abs(lo), abs(hi))
    deg = int(rng.integers(2, spec.degree + 1)) if spec.degree >= 2 else 1
    targets = spec.targets
    if "convex" in targets:
        p = _sum_of_squares(rng, deg - 2, scale).integ(2) + Polynomial(rng.uniform(lo, hi, size=2))
    elif "increasing" in targets or "decreasing" in targets:
        p = _sum_of_squares(rng, deg - 1, scale).integ(1) + Polynomial([rng.uniform(lo, hi)])
        if "decreasing" in targets:
            p = -p
    elif "endpoint-max" in targets:
        # g increasing on [0, 1] composed with s = (2t - 1)^2 peaks at both endpoints
        g = _sum_of_squares(rng, max(deg // 2 - 1, 0), scale).integ(1) + Polynomial([rng.uniform(lo, hi)])
        p = g(Polynomial([-1.0, 2.0]) ** 2)
    else:
        p = Polynomial(rng.uniform(lo, hi, size=deg + 1))
    return polynomial_expr(_to_x(p, spec.interval).coef)


def _trig_candidate(spec, rng):
    lo, hi = spec.coef_range
    harmonics = int(rng.integers(1, spec.degree + 1))
    a, w = spec.interval.a, spec.interval.width
    # t = 2 pi (x - a) / w, so the basis is periodic on the interval
    scale = 2.0 * math.pi / w
    phase = mul(Const(scale), add(X, Const(-a))) if a != 0.0 else mul(Const(scale), X)
    f = Const(0.0)
    for k in range(1, harmonics + 1):
        arg = mul(Const(float(k)), phase)
        f = add(f, mul(Const(rng.uniform(lo, hi)), unary("cos", arg)))
        f = add(f, mul(Const(rng.uniform(lo, hi)), unary("sin", arg)))
    return f


def _exp_candidate(spec, rng):
    lo, hi = spec.coef_range
    scale = max(abs(lo), abs(hi))
    terms = int(rng.integers(1, spec.degree + 1))
    f = Const(rng.uniform(lo, hi))
    for _ in range(terms):
        weight = rng.uniform(0.05, scale)
        rate = rng.uniform(lo, hi)
        if "increasing" in spec.targets:
            rate = abs(rate) or 1.0
        elif "decreasing" in spec.targets:
            rate = -abs(rate) or -1.0
        f = add(f, mul(Const(weight), unary("exp", mul(Const(rate), X))))
    return f


_CANDIDATES = {"polynomial": _poly_candidate, "trig-polynomial": _trig_candidate, "exp-mixture": _exp_candidate}


def _accept(f, spec):
    a, b = spec.interval
    if "positive-endpoint-product" in spec.targets and not f(a) * f(b) > 0.0:
        return False
    which = [_EVIDENCE[t] for t in spec.targets]
    if not which:
        return True
    flags = evaluate_hypotheses(f, spec.interval, which)
    return all(getattr(flags, name) is True for name in which)


def generate_one(spec, trial):
    """The function emitted by trial ``trial`` of ``spec``."""
    rng = trial_rng(spec.seed, trial)
    make = _CANDIDATES[spec.family]
    rejects = 0
    while True:
        f = make(spec, rng)
        try:
            if "mean-zero" in spec.targets:
                f = mean_zero_shift(f, spec.interval)
            if _accept(f, spec):
                return f
        except (ExprError, QuadratureError) as exc:
            logger.debug("trial %d: candidate rejected: %s", trial, exc)
        rejects += 1
        if rejects > spec.max_rejects:
            raise GeneratorSpecError(
                f"trial {trial}: more than {spec.max_rejects} rejections for one accepted function"
            )


def generate(spec):
    """Corpus of ``spec.trials`` functions, one per trial index."""
    return [generate_one(spec, i) for i in range(spec.trials)]


# --------------------------------------------------------------------------
# Mining
# --------------------------------------------------------------------------


@dataclass
class CounterexampleRecord:
    theorem_id: str
    function: str
    interval: tuple
    lhs: float
    rhs: float
    margin: float
    hypotheses: dict
    hypotheses_met: bool
    seed: int
    trial: int
    n: int = 1
    confirmed_tol: float = DEFAULT_TOL / 10.0

    def to_dict(self):
        d = asdict(self)
        d["interval"] = list(self.interval)
        return d


@dataclass
class TheoremSummary:
    theorem_id: str
    checked: int = 0
    violations: int = 0
    violations_with_hypotheses: int = 0
    failures: int = 0
    worst_ratio: float | None = None
    worst_trial: int | None = None

    def to_dict(self):
        return asdict(self)


@dataclass
class _TrialOutcome:
    trial: int
    records: list = field(default_factory=list)
    ratios: dict = field(default_factory=dict)
    checked: list = field(default_factory=list)
    failures: list = field(default_factory=list)


def _violates(report):
    return report.margin < -(ABS_TOL + REL_TOL * abs(report.rhs))


def _run_trial(args):
    spec, theorems, n, tol, trial = args
    out = _TrialOutcome(trial)
    try:
        f = generate_one(spec, trial)
    except (GeneratorSpecError, ExprError, QuadratureError) as exc:
        logger.warning("trial %d skipped: %s", trial, exc)
        out.failures.extend(theorems)
        return out
    for theorem in theorems:
        try:
            report = run_check(theorem, f, spec.interval, tol, n)
        except (ExprError, QuadratureError, ArithmeticError) as exc:
            logger.warning("trial %d, %s failed: %s", trial, theorem, exc)
            out.failures.append(theorem)
            continue
        out.checked.append(theorem)
        out.ratios[theorem] = report.sharpness_ratio
        if not _violates(report):
            continue
        # confirmation pass at 10x tighter quadrature
        tight = tol / 10.0
        try:
            confirm = run_check(theorem, f, spec.interval, tight, n)
        except (ExprError, QuadratureError, ArithmeticError) as exc:
            logger.warning("trial %d, %s confirmation failed: %s", trial, theorem, exc)
            continue
        if not _violates(confirm):
            continue
        out.records.append(
            CounterexampleRecord(
                theorem_id=theorem,
                function=to_text(f),
                interval=(spec.interval.a, spec.interval.b),
                lhs=confirm.lhs,
                rhs=confirm.rhs,
                margin=confirm.margin,
                hypotheses=confirm.hypotheses.to_dict(),
                hypotheses_met=confirm.hypotheses_met,
                seed=spec.seed,
                trial=trial,
                n=n,
                confirmed_tol=tight,
            )
        )
    return out


def mine_with_summary(spec, theorems, n=1, tol=DEFAULT_TOL, workers=1):
    """Run every checker in ``theorems`` on every corpus member.

    Returns
    -------
    records : list of CounterexampleRecord
        Confirmed violations ordered by (trial, position in ``theorems``).
    summary : dict of TheoremSummary
    """
    theorems = list(theorems)
    jobs = [(spec, theorems, n, tol, i) for i in range(spec.trials)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_trial, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        outcomes = [_run_trial(job) for job in jobs]
    outcomes.sort(key=lambda o: o.trial)

    summary = {t: TheoremSummary(t) for t in theorems}
    records = []
    for out in outcomes:
        for t in out.checked:
            s = summary[t]
            s.checked += 1
            ratio = out.ratios.get(t)
            if ratio is not None and (s.worst_ratio is None or ratio > s.worst_ratio):
                s.worst_ratio, s.worst_trial = ratio, out.trial
        for t in out.failures:
            summary[t].failures += 1
        for rec in out.records:
            summary[rec.theorem_id].violations += 1
            summary[rec.theorem_id].violations_with_hypotheses += int(rec.hypotheses_met)
            records.append(rec)
    return records, summary


def mine(spec, theorems, n=1, tol=DEFAULT_TOL, workers=1):
    """Confirmed counterexamples of ``theorems`` over the corpus of ``spec``."""
    return mine_with_summary(spec, theorems, n, tol, workers)[0]


def replay(spec, record, tol=None):
    """Re-run a single record's trial; returns the fresh record or None."""
    tol = record.confirmed_tol * 10.0 if tol is None else tol
    single = replace(spec, seed=record.seed)
    out = _run_trial((single, [record.theorem_id], record.n, tol, record.trial))
    return out.records[0] if out.records else None
