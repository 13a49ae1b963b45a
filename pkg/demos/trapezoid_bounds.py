"""
Two bounds on the trapezoid error
=================================

The one-panel trapezoid error T = (b-a)(f(a)+f(b))/2 - int f is classically
bounded by (b-a)^3/12 ||f''||_inf.  A second bound replaces ||f''||_inf by

    M = 6/(b-a)^2 ||f||_inf + ||f'||_2^2 / (2 (b-a) ||f||_inf),

which needs only one derivative.  Neither bound dominates the other.
"""

import math

from alzer.apps import trapezoid_bounds
from alzer.expr import Interval, parse

cases = [
    ("6*x^2 - 6*x + 1", Interval(0.0, 1.0)),
    ("x", Interval(0.0, 1.0)),
    ("sin(x)", Interval(0.0, math.pi)),
    ("exp(x)", Interval(0.0, 1.0)),
    ("x^4", Interval(-1.0, 1.0)),
    ("sin(20*x)", Interval(0.0, 1.0)),
    ("abs(x - 0.3)", Interval(0.0, 1.0)),
]

print(f"{'f':<18} {'|T|':>12} {'classic':>12} {'new':>12}  tighter")
for text, interval in cases:
    b = trapezoid_bounds(parse(text), interval)
    classic = "n/a" if b.classic_bound is None else f"{b.classic_bound:12.6g}"
    new = "n/a" if b.new_bound is None else f"{b.new_bound:12.6g}"
    print(f"{text:<18} {b.true_abs:12.6g} {classic:>12} {new:>12}  {b.tighter}")

# For the quadratic, M coincides with ||f''||_inf = 12 and all three agree.
b = trapezoid_bounds(parse("6*x^2 - 6*x + 1"), Interval(0.0, 1.0))
print("\nM =", b.m_constant, " ||f''|| =", b.second_derivative_sup)
