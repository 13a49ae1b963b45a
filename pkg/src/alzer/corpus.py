"""Closed-form integrals used to validate the quadrature engine.

Each truth value comes from an antiderivative worked by hand, independent
of the numeric path it checks.
"""

import math
from fractions import Fraction

from .expr import Interval, parse

PI = math.pi
E = math.e


def _poly_truth(coefs, a, b):
    """Exact integral of ``sum c_k x^k`` on ``[a, b]`` with rational arithmetic."""
    fa, fb = Fraction(a), Fraction(b)
    total = Fraction(0)
    for k, c in enumerate(coefs):
        c = Fraction(c)
        total += c * (fb ** (k + 1) - fa ** (k + 1)) / (k + 1)
    return float(total)


def validation_corpus():
    """List of ``(text, Interval, truth)``; 30 members."""
    items = []
    for k in range(11):
        items.append((f"x^{k}", Interval(0.0, 1.0), 1.0 / (k + 1)))
    items += [
        ("(2*x - 1)^10", Interval(0.0, 1.0), 1.0 / 11.0),
        ("(12*x - 6)^2", Interval(0.0, 1.0), 12.0),
        ("3*x^10 - 2*x^7 + x^3 - 5", Interval(-1.0, 2.0), _poly_truth([-5, 0, 0, 1, 0, 0, 0, -2, 0, 0, 3], -1, 2)),
        ("x^9 - 4*x^4 + 0.5*x", Interval(0.5, 1.5), _poly_truth([0, 0.5, 0, 0, -4, 0, 0, 0, 0, 1], 0.5, 1.5)),
        ("sin(x)", Interval(0.0, PI), 2.0),
        ("cos(x)", Interval(0.0, PI / 2), 1.0),
        ("sin(x)^2", Interval(0.0, 2 * PI), PI),
        ("sin(x)*cos(x)", Interval(0.0, PI / 4), 0.25),
        ("sin(3*x)*cos(x)", Interval(0.0, PI / 2), 0.5),
        ("cos(x)^2", Interval(0.0, 1.0), 0.5 + math.sin(2.0) / 4.0),
        ("sin(50*x)^2", Interval(0.0, 2 * PI), PI),
        ("x*sin(x)", Interval(0.0, PI), PI),
        ("cos(x)^3", Interval(0.0, PI / 2), 2.0 / 3.0),
        ("exp(x)", Interval(0.0, 1.0), E - 1.0),
        ("exp(2*x)", Interval(-1.0, 1.0), (math.exp(2.0) - math.exp(-2.0)) / 2.0),
        ("x*exp(x)", Interval(0.0, 1.0), 1.0),
        ("exp(x)*sin(x)", Interval(0.0, PI), (math.exp(PI) + 1.0) / 2.0),
        ("exp(-x)*cos(x)", Interval(0.0, 2 * PI), (1.0 - math.exp(-2 * PI)) / 2.0),
        ("sqrt(x)", Interval(1.0, 4.0), 14.0 / 3.0),
    ]
    return [(text, interval, truth) for text, interval, truth in items]


def validation_exprs():
    return [(parse(text), interval, truth) for text, interval, truth in validation_corpus()]
