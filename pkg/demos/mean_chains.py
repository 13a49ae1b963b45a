"""
Mean inequalities from the energy bound
=======================================

With x < y and a log-convex f, the energy bound on [x, y] extends the
chain f(A(x, y)) <= G(f(x), f(y)) with a third member.  The weighted form
uses preimages alpha, beta of f^lam(x) and f^(1-lam)(y).
"""

from alzer.apps import LAMBDA_GRID, bijective_generalization, geometric_mean_bound, log_convex_chain
from alzer.expr import Interval, parse

r = geometric_mean_bound(parse("6*x^2 - 6*x + 1"), Interval(0.0, 1.0))
print(f"geometric mean: lhs {r.lhs:.9f}  rhs {r.rhs:.9f}")

for text in ("exp(x)", "exp(x^2)", "1"):
    c = log_convex_chain(parse(text), 0.0, 1.0)
    print(f"{text:<9} left {c.left:.6f}  middle {c.middle:.6f}  right {c.right:.6f}  links {c.chain_holds}")

# The second link fails in all three rows.  For the constant the energy is
# zero; for exp the energy on [0, 1] is (e^2 - 1)/2 and the bound
# sqrt(1/12) * sqrt(3.19) = 0.516 is below the geometric mean e^(1/2).

# Weighted form for exp on [0, 2]: alpha = lam x, beta = (1 - lam) y.
# beta < alpha reverses the orientation of the integral; lam = 3/4 makes
# the interval degenerate.
for lam in LAMBDA_GRID:
    c = bijective_generalization(parse("exp(x)"), Interval(0.0, 2.0), 0.5, 1.5, lam)
    print(f"lambda {lam:4.2f}: alpha {c.alpha:.6f}  beta {c.beta:.6f}  right {c.right:+.6f}  links {c.chain_holds}")
