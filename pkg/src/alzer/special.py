"""Log-factorials and the Euler beta function at integer arguments."""

import math
from fractions import Fraction

# exact rational arithmetic up to (170)!; log-factorials beyond
EXACT_LIMIT = 170


def log_factorial(n):
    if n < 0:
        raise ValueError("factorial of a negative number")
    return math.lgamma(n + 1)


def beta_int(m, n):
    """``B(m, n) = (m-1)! (n-1)! / (m+n-1)!`` for positive integers.

    Correctly rounded for ``m + n - 1 <= 170``; log-factorials above.
    """
    if m < 1 or n < 1:
        raise ValueError("beta_int needs positive integers")
    if m + n - 1 <= EXACT_LIMIT:
        return float(beta_int_exact(m, n))
    return math.exp(log_factorial(m - 1) + log_factorial(n - 1) - log_factorial(m + n - 1))


def beta_int_exact(m, n):
    return Fraction(math.factorial(m - 1) * math.factorial(n - 1), math.factorial(m + n - 1))
