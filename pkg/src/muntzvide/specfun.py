"""Log-gamma and Beta functions.

Every Gauss weight, Muntz-monomial moment and closed-form forcing term
downstream is a ratio of Gamma values, so the accuracy here bounds the
exactness checks of the whole rule hierarchy.
"""

import math

__all__ = ["ln_gamma", "beta"]


def ln_gamma(x: float) -> float:
    """Natural logarithm of Gamma(x) for x > 0."""
    if not x > 0:
        raise ValueError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def beta(a: float, b: float) -> float:
    """Beta function B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b) for a, b > 0.

    Evaluated in log space, so large parameters (the weighted norms use
    exponents like m + 1/lam - 1) cannot overflow intermediate Gammas.
    """
    if not (a > 0 and b > 0):
        raise ValueError(f"beta requires positive arguments, got ({a}, {b})")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))
