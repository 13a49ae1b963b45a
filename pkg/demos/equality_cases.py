"""
Equality cases of the energy inequalities
=========================================

Each inequality below bounds a pointwise quantity of ``f`` by a multiple
of the energy ``int f'^2``.  For a few special functions the two sides
coincide, which makes them good end-to-end checks of the numerics.
"""

import math

from alzer.expr import Interval, parse
from alzer.ineq import (
    check_alzer,
    check_higher_order,
    check_thm3_convex,
    check_thm5_endpoint_max,
    check_thm6_general,
    check_wirtinger,
)

unit = Interval(0.0, 1.0)
quadratic = parse("6*x^2 - 6*x + 1")

# The quadratic is convex, has zero mean on [0, 1] and f(0) = f(1) = 1.
# Its energy is int (12x - 6)^2 = 12, so (b - a)/12 * 12 = 1 on every
# right-hand side that uses that constant.
rows = [
    check_thm3_convex(quadratic, unit),
    check_thm5_endpoint_max(quadratic, unit),
    check_thm6_general(quadratic, unit),
    check_higher_order(quadratic, unit, 1),
]

# On [0, 2 pi] the sine attains the periodic bound, and the shifted
# parabola c (3 ((x - pi)/pi)^2 - 1) attains the sup-norm bound.
rows.append(check_wirtinger(parse("sin(x)")))
for c in (1.0, 2.0, -3.0):
    rows.append(check_alzer(parse(f"{c!r}*(3*((x - pi)/pi)^2 - 1)")))

print(f"{'check':<10} {'function':<44} {'lhs':>12} {'rhs':>12} {'ratio':>12}")
for r in rows:
    print(f"{r.theorem_id:<10} {r.function[:44]:<44} {r.lhs:12.9f} {r.rhs:12.9f} {r.sharpness_ratio:12.9f}")

# The trapezoid functional T = (b-a)(f(a)+f(b))/2 - int f enters the
# general form; for the quadratic it equals 1 exactly.
print("\nT(quadratic) =", rows[2].details["t_rap"])

# The higher-order form is not universal: sin on [0, 2 pi] has mean zero,
# sup norm 1, and ||f''||_2 = sqrt(pi), so the bound (pi/6) sqrt(pi) < 1.
r = check_higher_order(parse("sin(x)"), Interval(0.0, 2 * math.pi), 1)
print(f"\nsin on [0, 2pi], n = 1: lhs {r.lhs:.6f}  rhs {r.rhs:.6f}  satisfied={r.satisfied}")
print("vanishing-integral residual of the quadratic:", rows[3].details["vanishing_residual"])
