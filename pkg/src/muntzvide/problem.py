"""Problem definitions for delay Volterra integro-differential equations.

The equation family solved by this package is

    y'(t) = a1(t) y(t) + b1(t) y(eps*t) + f1(t)
            + int_0^t (t-s)^(-mu) K1(t, s) y(s) ds
            + int_0^(eps*t) (eps*t - tau)^(-mu) K2(t, tau) y(tau) d tau,
    y(0) = y0,        t in [0, T],  0 <= mu < 1,  0 < eps < 1.

``scale_to_unit`` rewrites an instance on [0, 1]: with t = T*theta the delay
integral is first pulled back to [0, t] via tau = eps*s, which moves a factor
eps^(1-mu) onto the second kernel, and every coefficient picks up the horizon
powers shown in ``ScaledProblem``.

A registry of four benchmark problems is provided.  Three of them have
closed-form solutions; their forcing functions are *manufactured*: f1 is
recovered from the exact solution by evaluating the two weakly singular
integrals with a pair of independent quadrature oracles that cross-check each
other on every call.  (Closed-form forcings for these benchmarks circulate
with sign/typo variants; the printed variants are kept available under
``forcing="printed"`` for comparison runs, but the manufactured forcing is
authoritative.)
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .quadrature import gauss_jacobi, singular_ratio, to_fractional
from .specfun import beta as beta_fn

__all__ = [
    "VideProblem",
    "ScaledProblem",
    "OracleDisagreement",
    "scale_to_unit",
    "default_lambda",
    "singular_integral",
    "manufactured_forcing",
    "register_examples",
    "make_example",
    "scaled_residual",
    "exact_phi_pair",
    "EXAMPLE_KEYS",
]

ScalarFn = Callable[[float], float]
KernelFn = Callable[[float, float], float]


class OracleDisagreement(RuntimeError):
    """The two independent singular-integral oracles disagree."""


@dataclass(frozen=True, eq=False)
class VideProblem:
    """One equation instance on [0, T].

    ``k1``/``k2`` include any sign in front of their integral; ``exact`` and
    ``exact_deriv`` are optional closed-form y and y'.  ``lam`` records the
    recommended basis exponent for this problem (see ``default_lambda``).
    """

    a1: ScalarFn
    b1: ScalarFn
    f1: Optional[ScalarFn]
    k1: KernelFn
    k2: KernelFn
    mu: float
    eps: float
    T: float
    y0: float
    exact: Optional[ScalarFn] = None
    exact_deriv: Optional[ScalarFn] = None
    lam: Optional[float] = None
    label: str = ""

    def __post_init__(self):
        if not 0.0 <= self.mu < 1.0:
            raise ValueError(f"mu must lie in [0, 1), got {self.mu}")
        if not 0.0 < self.eps < 1.0:
            raise ValueError(f"eps must lie in (0, 1), got {self.eps}")
        if not self.T > 0.0:
            raise ValueError(f"T must be positive, got {self.T}")


@dataclass(frozen=True, eq=False)
class ScaledProblem:
    """The same equation rescaled to theta in [0, 1].

    a_t(theta) = T a1(T theta)            (same for b_t, f_t)
    kbar1(theta, eta) = T^(2-mu) K1(T theta, T eta)
    kbar2(theta, tau) = eps^(1-mu) T^(2-mu) K2(T theta, T tau)

    kbar2 is always called with tau = eps*eta; phi0 is the initial value.
    """

    a_t: ScalarFn
    b_t: ScalarFn
    f_t: Optional[ScalarFn]
    kbar1: KernelFn
    kbar2: KernelFn
    mu: float
    eps: float
    phi0: float


def scale_to_unit(p: VideProblem) -> ScaledProblem:
    """Rescale a problem from [0, T] to [0, 1]."""
    T, mu, eps = p.T, p.mu, p.eps
    c1 = T ** (2.0 - mu)
    c2 = eps ** (1.0 - mu) * c1
    f1 = p.f1
    return ScaledProblem(
        a_t=lambda th: T * p.a1(T * th),
        b_t=lambda th: T * p.b1(T * th),
        f_t=None if f1 is None else (lambda th: T * f1(T * th)),
        kbar1=lambda th, eta: c1 * p.k1(T * th, T * eta),
        kbar2=lambda th, tau: c2 * p.k2(T * th, T * tau),
        mu=mu,
        eps=eps,
        phi0=p.y0,
    )


def exact_phi_pair(p: VideProblem):
    """(phi, phi') on [0, 1] from the closed-form solution, or None."""
    if p.exact is None or p.exact_deriv is None:
        return None
    T, y, yp = p.T, p.exact, p.exact_deriv
    return (lambda th: y(T * th)), (lambda th: T * yp(T * th))


def default_lambda(mu: float) -> float:
    """Basis exponent heuristic: 1/q when mu is (close to) p/q with small q.

    Solutions behave like sums of powers t^(i + j(2-mu)); for rational mu the
    exponents all lie on the 1/q lattice, so the matching Muntz basis removes
    the initial-point singularity.  Falls back to 1/2 for awkward mu.
    """
    if mu == 0.0:
        return 1.0
    frac = Fraction(mu).limit_denominator(16)
    if frac.denominator > 1 and abs(float(frac) - mu) <= 1e-12:
        return 1.0 / frac.denominator
    return 0.5


# ---------------------------------------------------------------------------
# weakly singular integral oracles
# ---------------------------------------------------------------------------

_GL_X, _GL_W = np.polynomial.legendre.leggauss(12)
_GL01_X = 0.5 * (_GL_X + 1.0)
_GL01_W = 0.5 * _GL_W


def singular_integral(t: float, g: ScalarFn, mu: float, levels: int = 50) -> float:
    """int_0^t (t-s)^(-mu) g(s) ds by dyadic panels toward both endpoints.

    The kernel is singular at s = t and g may carry a fractional power at
    s = 0, so the panels are refined geometrically toward both ends; on each
    dyadic panel the integrand is analytic and 12-point Gauss-Legendre is
    accurate to machine precision.  The leftover sliver at s = t is
    integrated with g frozen at t (the kernel's antiderivative is explicit);
    the sliver at s = 0 is a midpoint term of width t*2^-(levels+1).
    """
    if t <= 0.0:
        return 0.0
    total = 0.0
    hi = 0.5 * t
    for _ in range(levels):
        lo = 0.5 * hi
        width = hi - lo
        # singular end: d = t - s in [lo, hi]
        d = lo + width * _GL01_X
        vals = sum(w * dk**-mu * g(t - dk) for w, dk in zip(_GL01_W, d))
        # data end: s in [lo, hi]
        s = lo + width * _GL01_X
        vals += sum(w * (t - sk) ** -mu * g(sk) for w, sk in zip(_GL01_W, s))
        total += width * vals
        hi = lo
    total += g(t) * hi ** (1.0 - mu) / (1.0 - mu)
    total += g(0.5 * hi) * hi * (t - 0.5 * hi) ** -mu
    return total


@functools.lru_cache(maxsize=32)
def _mapped_oracle_rule(mu: float, lam: float, npts: int):
    """Gauss-Jacobi data for the substitution s = t * xi^(1/lam)."""
    rule = to_fractional(gauss_jacobi(npts, -mu, 1.0 / lam - 1.0), lam)
    ratio = singular_ratio(rule.z_nodes, lam, mu)
    return rule, ratio


def _singular_integral_mapped(t, g, mu, rule, ratio) -> float:
    """Same integral via s = t xi^(1/lam); the rule absorbs the singular weight."""
    if t <= 0.0:
        return 0.0
    vals = np.array([g(t * sk) for sk in rule.nodes])
    return t ** (1.0 - mu) / rule.lam * float(np.dot(rule.weights * ratio, vals))


def manufactured_forcing(
    y: ScalarFn,
    y_prime: ScalarFn,
    skeleton: VideProblem,
    quad_points: int = 200,
    check_tol: float = 1e-9,
) -> ScalarFn:
    """Forcing f1 that makes ``y`` the exact solution of ``skeleton``.

    Rearranges the equation: f1 = y' - a1 y - b1 y(eps t) - (K1 y) - (K2 y).
    Each weakly singular integral is evaluated twice, by the mapped
    Gauss-Jacobi rule and by the dyadic-panel rule; a disagreement beyond
    ``check_tol`` raises ``OracleDisagreement``.
    """
    mu, eps = skeleton.mu, skeleton.eps
    lam_hat = skeleton.lam if skeleton.lam is not None else default_lambda(mu)
    rule, ratio = _mapped_oracle_rule(mu, lam_hat, quad_points)

    def f1(t: float) -> float:
        def g1(s):
            return skeleton.k1(t, s) * y(s)

        def g2(s):
            return skeleton.k2(t, s) * y(s)

        i1 = _singular_integral_mapped(t, g1, mu, rule, ratio)
        i2 = _singular_integral_mapped(eps * t, g2, mu, rule, ratio)
        i1_alt = singular_integral(t, g1, mu)
        i2_alt = singular_integral(eps * t, g2, mu)
        if abs(i1 - i1_alt) > check_tol or abs(i2 - i2_alt) > check_tol:
            raise OracleDisagreement(
                f"singular-integral oracles disagree at t={t}: "
                f"|{i1} - {i1_alt}| and |{i2} - {i2_alt}| vs tol {check_tol}"
            )
        return (
            y_prime(t)
            - skeleton.a1(t) * y(t)
            - skeleton.b1(t) * y(eps * t)
            - i1
            - i2
        )

    return f1


def scaled_residual(
    scaled: ScaledProblem,
    phi: ScalarFn,
    phi_prime: ScalarFn,
    theta: float,
    levels: int = 50,
) -> float:
    """Residual of the rescaled equation at theta for a candidate solution.

    Both Volterra terms are evaluated with the dyadic-panel oracle, so a
    correct (phi, phi', f_t) triple gives residuals at oracle accuracy.
    """
    if scaled.f_t is None:
        raise ValueError("scaled problem has no forcing term")
    mu, eps = scaled.mu, scaled.eps
    i1 = singular_integral(
        theta, lambda eta: scaled.kbar1(theta, eta) * phi(eta), mu, levels
    )
    i2 = singular_integral(
        theta, lambda eta: scaled.kbar2(theta, eps * eta) * phi(eps * eta), mu, levels
    )
    rhs = (
        scaled.a_t(theta) * phi(theta)
        + scaled.b_t(theta) * phi(eps * theta)
        + scaled.f_t(theta)
        + i1
        + i2
    )
    return phi_prime(theta) - rhs


# ---------------------------------------------------------------------------
# benchmark registry
# ---------------------------------------------------------------------------

EXAMPLE_KEYS = ("5.1", "5.2", "5.3", "5.4")


def _with_forcing(skeleton: VideProblem, printed: Optional[ScalarFn], forcing: str) -> VideProblem:
    if forcing == "corrected":
        return replace(
            skeleton,
            f1=manufactured_forcing(skeleton.exact, skeleton.exact_deriv, skeleton),
        )
    if forcing == "printed":
        return replace(skeleton, f1=printed)
    raise ValueError(f"forcing must be 'corrected' or 'printed', got {forcing!r}")


def _example_5_1(mu: float = 0.5, eps: float = 0.5, T: float = 1.0, forcing: str = "corrected") -> VideProblem:
    """Exponentially damped kernels, exact solution y(t) = t exp(-t^(1-mu))."""
    om = 1.0 - mu

    def y(t):
        return t * math.exp(-(t**om))

    def yp(t):
        return math.exp(-(t**om)) * (1.0 - om * t**om)

    skeleton = VideProblem(
        a1=lambda t: -1.0,
        b1=lambda t: 1.0,
        f1=None,
        k1=lambda t, s: -math.exp(s**om),
        k2=lambda t, s: math.exp(s**om),
        mu=mu,
        eps=eps,
        T=T,
        y0=0.0,
        exact=y,
        exact_deriv=yp,
        lam=default_lambda(mu),
        label="5.1",
    )

    b = beta_fn(om, 2.0)

    def printed(t):
        # circulated closed form; the Beta-term factor reads (1 + e^(2-mu))
        # where the manufactured forcing gives (1 - eps^(2-mu))
        return (
            (1.0 - om * t**om + t) * math.exp(-(t**om))
            + (1.0 + math.e ** (2.0 - mu)) * b * t ** (2.0 - mu)
            - (eps * t) * math.exp(-((eps * t) ** om))
        )

    return _with_forcing(skeleton, printed, forcing)


def _example_5_2(mu: float = 1.0 / 3.0, eps: float = 0.6, T: float = 0.5, forcing: str = "corrected") -> VideProblem:
    """Exponential kernels, exact solution y(t) = t^(2-mu) exp(-t)."""

    def y(t):
        return t ** (2.0 - mu) * math.exp(-t)

    def yp(t):
        return t ** (1.0 - mu) * math.exp(-t) * (2.0 - mu - t)

    skeleton = VideProblem(
        a1=lambda t: -1.0,
        b1=lambda t: 1.0,
        f1=None,
        k1=lambda t, s: -math.exp(s),
        k2=lambda t, s: math.exp(s),
        mu=mu,
        eps=eps,
        T=T,
        y0=0.0,
        exact=y,
        exact_deriv=yp,
        lam=default_lambda(mu),
        label="5.2",
    )

    b = beta_fn(1.0 - mu, 3.0 - mu)

    def printed(t):
        return (
            (2.0 - mu) * t ** (1.0 - mu) * math.exp(-t)
            + b * t ** (3.0 - 2.0 * mu) * (1.0 + math.e ** (3.0 - 2.0 * mu))
            - (eps * t) ** (2.0 - mu) * math.exp(-eps * t)
        )

    return _with_forcing(skeleton, printed, forcing)


def _example_5_3(mu: float = 0.5, eps: float = 0.5, T: float = 1.0, forcing: str = "corrected") -> VideProblem:
    """Two incommensurate powers: y(t) = (t^(1+w1) + t^(1+w2)) exp(-t)."""
    w1 = 0.5
    w2 = math.sqrt(2.0)

    def y(t):
        return (t ** (1.0 + w1) + t ** (1.0 + w2)) * math.exp(-t)

    def yp(t):
        return math.exp(-t) * (
            t**w1 * (1.0 + w1 - t) + t**w2 * (1.0 + w2 - t)
        )

    skeleton = VideProblem(
        a1=lambda t: -1.0,
        b1=lambda t: 1.0,
        f1=None,
        k1=lambda t, s: -math.exp(s),
        k2=lambda t, s: math.exp(s),
        mu=mu,
        eps=eps,
        T=T,
        y0=0.0,
        exact=y,
        exact_deriv=yp,
        lam=default_lambda(mu),
        label="5.3",
    )

    b1_ = beta_fn(1.0 - mu, w1 + 2.0)
    b2_ = beta_fn(1.0 - mu, w2 + 2.0)

    def printed(t):
        return (
            math.exp(-t) * (t**w1 * (1.0 + w1 - t) + t**w2 * (1.0 + w2 - t))
            + (t ** (1.0 + w1) + t ** (1.0 + w2)) * math.exp(-t)
            - ((eps * t) ** (1.0 + w1) + (eps * t) ** (1.0 + w2)) * math.exp(-eps * t)
            - b1_ * t ** (2.0 - mu + w1) * (math.e ** (2.0 - mu + w1) + 1.0)
            - b2_ * t ** (2.0 - mu + w2) * (math.e ** (2.0 - mu + w2) + 1.0)
        )

    return _with_forcing(skeleton, printed, forcing)


def _example_5_4(mu: float = 0.5, eps: float = 0.5, T: float = 0.5, y0: float = 3.0, forcing: str = "corrected") -> VideProblem:
    """No closed-form solution; compared against a high-order reference run."""
    return VideProblem(
        a1=math.cos,
        b1=lambda t: math.exp(-t),
        f1=lambda t: math.sin(2.0 * t),
        k1=lambda t, s: -(1.0 + math.sin(t * s)),
        k2=lambda t, s: -(1.0 + math.cos(t * s)),
        mu=mu,
        eps=eps,
        T=T,
        y0=y0,
        lam=default_lambda(mu),
        label="5.4",
    )


_FACTORIES = {
    "5.1": _example_5_1,
    "5.2": _example_5_2,
    "5.3": _example_5_3,
    "5.4": _example_5_4,
}


def make_example(key: str, **overrides) -> VideProblem:
    """Build a registry problem, optionally overriding mu/eps/T (and y0 for 5.4)."""
    if key not in _FACTORIES:
        raise KeyError(f"unknown example {key!r}; choose from {EXAMPLE_KEYS}")
    kwargs = {k: v for k, v in overrides.items() if v is not None}
    return _FACTORIES[key](**kwargs)


def register_examples() -> dict[str, VideProblem]:
    """All benchmark problems with their published parameters."""
    return {key: make_example(key) for key in EXAMPLE_KEYS}
