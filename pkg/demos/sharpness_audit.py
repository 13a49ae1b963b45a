"""
Auditing the claimed extremal functions
=======================================

For each inequality with a stated extremal function we evaluate the
ratio lhs / rhs at that function.  A ratio of one (to 1e-7) confirms the
constant cannot be improved; anything else is reported as found.
"""

from alzer.expr import Interval, to_text
from alzer.ineq import audit_sharpness, extremal_function

for theorem in ("thm2", "thm3", "thm4", "thm5", "thm6"):
    f, native = extremal_function(theorem)
    r = audit_sharpness(theorem)
    verdict = "confirmed" if r.sharp_confirmed else "NOT confirmed"
    print(f"{theorem}: ratio {r.sharpness_ratio:+.10f}  {verdict}")
    print(f"      f = {to_text(f)} on [{native.a:g}, {native.b:.6g}]")

# The cubic offered for the increasing case satisfies the hypotheses but
# its left-hand side is negative, so it cannot be an equality case.
r = audit_sharpness("thm4")
print("\nincreasing-case extremal: lhs", r.lhs, "rhs", r.rhs)

# Extremals move affinely with the interval; the ratio is unchanged.
for interval in (Interval(-2.0, 7.0), Interval(100.0, 100.25)):
    r = audit_sharpness("thm3", interval)
    print(f"thm3 on [{interval.a:g}, {interval.b:g}]: ratio {r.sharpness_ratio:.12f}")
