"""
The quadrature engine on closed-form integrals
==============================================

Adaptive Simpson with a Richardson correction, evaluated panel-level in
numpy.  The table lists the 30 validation integrals with the relative
error and the engine's own error estimate.
"""

from alzer.corpus import validation_corpus
from alzer.expr import Interval, parse
from alzer.quad import integrate, sup_norm

print(f"{'integrand':<28} {'interval':<22} {'rel. error':>11} {'estimate':>11} {'panels':>7}")
for text, interval, truth in validation_corpus():
    res = integrate(parse(text), interval)
    rel = abs(res.value - truth) / abs(truth)
    span = f"[{interval.a:.4g}, {interval.b:.4g}]"
    print(f"{text:<28} {span:<22} {rel:11.2e} {res.error_estimate:11.2e} {res.subdivisions:7d}")

# The sup norm combines a dense grid with root-finding on f'.
s = sup_norm(parse("sin(37*x) - cos(11*x)"), Interval(0.0, 1.0))
print("\nmax of sin(37x) - cos(11x) on [0, 1]:", s.max_value, "at", s.argmax)
