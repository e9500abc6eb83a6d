"""Error norms, convergence sweeps, rate fitting, and reference solutions."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from time import perf_counter
from typing import Callable, Optional

import numpy as np

from .collocation import SingularSystemError, assemble, solve
from .muntz_basis import CollocationGrid, build_grid, interpolate
from .problem import (
    OracleDisagreement,
    VideProblem,
    default_lambda,
    exact_phi_pair,
    scale_to_unit,
)
from .quadrature import QuadratureError, gauss_jacobi, to_fractional

__all__ = [
    "SolverConfig",
    "SweepRow",
    "ConvergenceTable",
    "RateFit",
    "RateReport",
    "InsufficientDataError",
    "weighted_l2_error",
    "linf_error",
    "solve_once",
    "convergence_sweep",
    "fit_rates",
    "reference_solution",
    "ReferenceSolution",
]

# uniform evaluation grids start here rather than at 0: the exact solutions
# typically have an unbounded second derivative at the left endpoint
_LINF_LEFT = 1e-12

_FIT_CHANNELS = ("l2_e", "linf_e", "l2_estar", "linf_estar")


class InsufficientDataError(ValueError):
    """Not enough successful sweep rows to fit a rate."""


@dataclass
class SolverConfig:
    """Knobs for a single solve or a sweep.

    ``lam=None`` defers to the problem's recommended exponent.  ``quad_points``
    defaults to N+1 (one point per unknown), the scheme's natural choice; it
    is exposed separately for refinement studies.  The L2 norm weight
    defaults to the grid's (alpha, beta).
    """

    lam: Optional[float] = None
    alpha: float = -0.5
    beta: float = -0.5
    quad_points: Optional[int] = None
    l2_points: Optional[int] = None
    l2_alpha: Optional[float] = None
    l2_beta: Optional[float] = None
    linf_points: int = 2001


@dataclass
class SweepRow:
    n: int
    l2_e: float
    linf_e: float
    l2_estar: float
    linf_estar: float
    runtime_ms: float
    failed: bool = False
    message: str = ""


@dataclass
class ConvergenceTable:
    rows: list[SweepRow] = field(default_factory=list)
    meta: dict = field(default_factory=dict)


@dataclass
class RateFit:
    slope_n: float
    r2_n: float
    slope_loglog: float
    r2_loglog: float
    classification: str


@dataclass
class RateReport:
    channels: dict[str, RateFit]
    classification: str


@dataclass(frozen=True, eq=False)
class ReferenceSolution:
    """High-order solve standing in for an unknown exact solution."""

    grid: CollocationGrid
    u: np.ndarray
    u_star: np.ndarray
    n: int

    def __call__(self, theta: float) -> tuple[float, float]:
        return (
            interpolate(self.grid, self.u, theta),
            interpolate(self.grid, self.u_star, theta),
        )


def weighted_l2_error(
    err_fn: Callable[[float], float], alpha: float, beta: float, m: int
) -> float:
    """Weighted L2 norm of err_fn against (1-theta)^alpha theta^beta on [0, 1]."""
    if m < 1:
        raise ValueError(f"need at least one quadrature point, got {m}")
    rule = to_fractional(gauss_jacobi(m, alpha, beta), 1.0)
    vals = np.array([err_fn(t) for t in rule.nodes])
    return math.sqrt(float(np.dot(rule.weights, vals * vals)))


def linf_error(
    err_fn: Callable[[float], float],
    grid_size: int = 2001,
    extra_points=None,
) -> float:
    """Max |err_fn| over a uniform grid on [~0, 1], plus any extra points."""
    if grid_size < 2:
        raise ValueError(f"need at least two grid points, got {grid_size}")
    pts = np.linspace(_LINF_LEFT, 1.0, grid_size)
    if extra_points is not None:
        pts = np.union1d(pts, np.asarray(extra_points, dtype=float))
    return max(abs(err_fn(t)) for t in pts)


def _resolve_lam(problem: VideProblem, config: SolverConfig) -> float:
    if config.lam is not None:
        return config.lam
    if problem.lam is not None:
        return problem.lam
    return default_lambda(problem.mu)


def solve_once(problem: VideProblem, n: int, config: SolverConfig):
    """One collocation solve; returns (grid, solution, runtime_ms)."""
    lam = _resolve_lam(problem, config)
    start = perf_counter()
    grid = build_grid(n, config.alpha, config.beta, lam)
    scaled = scale_to_unit(problem)
    npts = config.quad_points if config.quad_points is not None else n + 1
    quad_mu = to_fractional(gauss_jacobi(npts, -problem.mu, 1.0 / lam - 1.0), lam)
    quad_hat = to_fractional(gauss_jacobi(npts, 0.0, 1.0 / lam - 1.0), lam)
    sol = solve(assemble(scaled, grid, quad_mu, quad_hat))
    runtime_ms = (perf_counter() - start) * 1e3
    return grid, sol, runtime_ms


def _error_row(problem, grid, sol, config, reference, n, runtime_ms) -> SweepRow:
    pair = exact_phi_pair(problem)
    if pair is not None:
        phi_fn, phistar_fn = pair
    else:
        phi_fn = lambda th: reference(th)[0]  # noqa: E731
        phistar_fn = lambda th: reference(th)[1]  # noqa: E731

    e = lambda th: phi_fn(th) - interpolate(grid, sol.u, th)  # noqa: E731
    estar = lambda th: phistar_fn(th) - interpolate(grid, sol.u_star, th)  # noqa: E731

    m = config.l2_points if config.l2_points is not None else max(4 * n, 200)
    l2a = config.l2_alpha if config.l2_alpha is not None else config.alpha
    l2b = config.l2_beta if config.l2_beta is not None else config.beta
    return SweepRow(
        n=n,
        l2_e=weighted_l2_error(e, l2a, l2b, m),
        linf_e=linf_error(e, config.linf_points, extra_points=grid.points),
        l2_estar=weighted_l2_error(estar, l2a, l2b, m),
        linf_estar=linf_error(estar, config.linf_points, extra_points=grid.points),
        runtime_ms=runtime_ms,
    )


def convergence_sweep(
    problem: VideProblem,
    config: SolverConfig,
    n_list,
    reference: Optional[Callable[[float], tuple[float, float]]] = None,
) -> ConvergenceTable:
    """One solve per N, with errors against the exact solution or a reference.

    A failing solve marks its row instead of aborting the sweep.
    """
    n_list = list(n_list)
    if not n_list or any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise ValueError(f"n_list must be nonempty and strictly increasing, got {n_list}")
    if exact_phi_pair(problem) is None:
        if reference is None:
            raise ValueError(
                f"problem {problem.label or '<anonymous>'} has no exact solution; "
                "supply a reference evaluator"
            )
        ref_n = getattr(reference, "n", None)
        if ref_n is not None and ref_n <= max(n_list):
            raise ValueError(
                f"reference order {ref_n} must exceed the largest sweep order {max(n_list)}"
            )
    table = ConvergenceTable(
        meta={
            "problem": problem.label,
            "lambda": _resolve_lam(problem, config),
            "alpha": config.alpha,
            "beta": config.beta,
            "eps": problem.eps,
            "mu": problem.mu,
            "T": problem.T,
        }
    )
    for n in n_list:
        try:
            grid, sol, runtime_ms = solve_once(problem, n, config)
            row = _error_row(problem, grid, sol, config, reference, n, runtime_ms)
        except (QuadratureError, SingularSystemError, OracleDisagreement, ValueError) as exc:
            row = SweepRow(
                n=n,
                l2_e=math.nan,
                linf_e=math.nan,
                l2_estar=math.nan,
                linf_estar=math.nan,
                runtime_ms=0.0,
                failed=True,
                message=str(exc),
            )
        table.rows.append(row)
    return table


def _fit(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    pred = slope * x + intercept
    ss_res = float(np.sum((y - pred) ** 2))
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), r2


def fit_rates(table: ConvergenceTable) -> RateReport:
    """Fit log10(err) against N and against log10(N) for every channel.

    A channel is classified exponential when the linear-in-N fit explains at
    least 95% of the variance with slope <= -0.5, algebraic otherwise.  The
    report-level classification follows the linf_e channel.
    """
    rows = [r for r in table.rows if not r.failed]
    if len(rows) < 3:
        raise InsufficientDataError(
            f"need at least 3 successful rows to fit rates, got {len(rows)}"
        )
    ns = np.array([r.n for r in rows], dtype=float)
    channels: dict[str, RateFit] = {}
    for name in _FIT_CHANNELS:
        errs = np.array([getattr(r, name) for r in rows])
        good = np.isfinite(errs) & (errs > 0.0)
        if good.sum() < 3:
            raise InsufficientDataError(
                f"channel {name} has fewer than 3 positive entries"
            )
        y = np.log10(errs[good])
        slope_n, r2_n = _fit(ns[good], y)
        slope_ll, r2_ll = _fit(np.log10(ns[good]), y)
        cls = "exponential" if (r2_n >= 0.95 and slope_n <= -0.5) else "algebraic"
        channels[name] = RateFit(
            slope_n=slope_n,
            r2_n=r2_n,
            slope_loglog=slope_ll,
            r2_loglog=r2_ll,
            classification=cls,
        )
    return RateReport(channels=channels, classification=channels["linf_e"].classification)


def reference_solution(problem: VideProblem, config: SolverConfig, n_ref: int) -> ReferenceSolution:
    """High-N solve wrapped as a theta -> (phi, phi*) evaluator."""
    grid, sol, _ = solve_once(problem, n_ref, config)
    return ReferenceSolution(grid=grid, u=sol.u, u_star=sol.u_star, n=n_ref)
