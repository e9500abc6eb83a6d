"""Assembly and solution of the collocation system.

At the grid points theta_i the unknowns are the nodal values of the solution
(phi_i), of its derivative treated as a separate unknown (phi_i^*), and of
the delayed solution (v_i).  Every integral is pulled to [0, 1] with
eta = theta_i * xi^(1/lam), which turns the cardinal functions into ordinary
polynomials of xi and absorbs the weak singularity into the quadrature
weight (1-xi)^(-mu) xi^(1/lam - 1).  Two rule families appear:

    * ``quad_mu``  - parameters (-mu, 1/lam - 1), carries the kernel rows C, D;
    * ``quad_hat`` - parameters (0, 1/lam - 1), carries the integration rows
      E, H, which are exact on the whole trial space (the integrands are
      polynomials of degree <= N in xi).

The three coupled relations

    U* = (A + C + D) U + B V + F,   U = U0 + E U*,   V = U0 + H U*

reduce to one dense (N+1) x (N+1) solve for U*.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .muntz_basis import CollocationGrid, basis_matrix_z, interpolate
from .problem import ScaledProblem
from .quadrature import FractionalRule, singular_ratio

__all__ = [
    "SingularSystemError",
    "SystemMatrices",
    "DiscreteSolution",
    "kernel_tilde",
    "assemble",
    "solve",
    "eval_solution",
]

_COND_LIMIT = 1e14


class SingularSystemError(RuntimeError):
    """The reduced collocation matrix is singular or hopelessly conditioned."""

    def __init__(self, message: str, cond: float):
        super().__init__(f"{message} (condition estimate {cond:.3e})")
        self.cond = cond


@dataclass(frozen=True, eq=False)
class SystemMatrices:
    A: np.ndarray  # diag of a_t(theta_i)
    B: np.ndarray  # diag of b_t(theta_i)
    C: np.ndarray  # first kernel quadrature
    D: np.ndarray  # delayed kernel quadrature
    E: np.ndarray  # integration of phi* up to theta_i
    H: np.ndarray  # integration of the delayed phi*
    fvec: np.ndarray
    u0: np.ndarray
    grid: CollocationGrid


@dataclass(frozen=True, eq=False)
class DiscreteSolution:
    u_star: np.ndarray
    u: np.ndarray
    v: np.ndarray
    grid: CollocationGrid


def kernel_tilde(scaled: ScaledProblem, theta_i: float, xi: float, which: int, lam: float) -> float:
    """Transformed kernel value at quadrature abscissa xi in (0, 1).

    (1/lam) theta_i^(1-mu) ((1 - xi^(1/lam)) / (1 - xi))^(-mu) Kbar(...),
    with the endpoint-singular ratio evaluated through ``singular_ratio``.
    """
    mu = scaled.mu
    eta = theta_i * xi ** (1.0 / lam)
    base = singular_ratio(xi, lam, mu) * theta_i ** (1.0 - mu) / lam
    if which == 1:
        return base * scaled.kbar1(theta_i, eta)
    if which == 2:
        return base * scaled.kbar2(theta_i, scaled.eps * eta)
    raise ValueError(f"which must be 1 or 2, got {which}")


def _check_rule(name: str, rule: FractionalRule, alpha: float, beta: float, lam: float) -> None:
    ok = (
        math.isclose(rule.lam, lam, rel_tol=0.0, abs_tol=1e-14)
        and math.isclose(rule.alpha, alpha, rel_tol=0.0, abs_tol=1e-12)
        and math.isclose(rule.beta, beta, rel_tol=0.0, abs_tol=1e-12)
    )
    if not ok:
        raise ValueError(
            f"{name} has parameters (lam={rule.lam}, alpha={rule.alpha}, "
            f"beta={rule.beta}); expected (lam={lam}, alpha={alpha}, beta={beta})"
        )


def assemble(
    scaled: ScaledProblem,
    grid: CollocationGrid,
    quad_mu: FractionalRule,
    quad_hat: FractionalRule,
) -> SystemMatrices:
    """Build all matrices and vectors of the discrete system.

    The rules enter in parent-variable form: row i samples the basis at
    eta_i(xi_k) = theta_i xi_k^(1/lam), whose exact z coordinate is
    z_i * xi_k, and the weights already absorb (1-xi)^(-mu) xi^(1/lam-1).
    """
    if scaled.f_t is None:
        raise ValueError("cannot assemble a problem without a forcing term")
    lam, mu, eps = grid.lam, scaled.mu, scaled.eps
    _check_rule("quad_mu", quad_mu, -mu, 1.0 / lam - 1.0, lam)
    _check_rule("quad_hat", quad_hat, 0.0, 1.0 / lam - 1.0, lam)
    n1 = grid.n + 1
    theta, z = grid.points, grid.z_points

    xi, om = quad_mu.z_nodes, quad_mu.weights
    xih, omh = quad_hat.z_nodes, quad_hat.weights
    ratio = singular_ratio(xi, lam, mu)
    root_mu = quad_mu.nodes  # xi_k^(1/lam)
    eps_lam = eps**lam

    C = np.empty((n1, n1))
    D = np.empty((n1, n1))
    E = np.empty((n1, n1))
    H = np.empty((n1, n1))
    for i in range(n1):
        ti, zi = theta[i], z[i]
        eta = ti * root_mu
        fac = (ti ** (1.0 - mu) / lam) * ratio * om
        k1 = np.array([scaled.kbar1(ti, e) for e in eta])
        k2 = np.array([scaled.kbar2(ti, eps * e) for e in eta])
        C[i] = (fac * k1) @ basis_matrix_z(grid, zi * xi)
        D[i] = (fac * k2) @ basis_matrix_z(grid, eps_lam * zi * xi)
        E[i] = (ti / lam) * (omh @ basis_matrix_z(grid, zi * xih))
        H[i] = (eps * ti / lam) * (omh @ basis_matrix_z(grid, eps_lam * zi * xih))

    A = np.diag([scaled.a_t(t) for t in theta])
    B = np.diag([scaled.b_t(t) for t in theta])
    fvec = np.array([scaled.f_t(t) for t in theta])
    u0 = np.full(n1, scaled.phi0)
    return SystemMatrices(A=A, B=B, C=C, D=D, E=E, H=H, fvec=fvec, u0=u0, grid=grid)


def solve(sysm: SystemMatrices) -> DiscreteSolution:
    """Solve the reduced system and back-substitute U and V.

    Eliminating U and V gives [I - (A+C+D)E - BH] U* = (A+C+D+B) U0 + F,
    solved by dense LU with partial pivoting.
    """
    n1 = sysm.fvec.shape[0]
    G = sysm.A + sysm.C + sysm.D
    M = np.eye(n1) - G @ sysm.E - sysm.B @ sysm.H
    rhs = (G + sysm.B) @ sysm.u0 + sysm.fvec
    try:
        u_star = np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError("reduced collocation matrix is singular", math.inf) from exc
    cond = float(np.linalg.cond(M))
    if not math.isfinite(cond) or cond > _COND_LIMIT:
        raise SingularSystemError("reduced collocation matrix is ill-conditioned", cond)
    u = sysm.u0 + sysm.E @ u_star
    v = sysm.u0 + sysm.H @ u_star
    return DiscreteSolution(u_star=u_star, u=u, v=v, grid=sysm.grid)


def eval_solution(grid: CollocationGrid, sol: DiscreteSolution, theta: float) -> tuple[float, float]:
    """(phi_N(theta), phi_N^*(theta)) by interpolating the nodal values."""
    return (
        interpolate(grid, sol.u, theta),
        interpolate(grid, sol.u_star, theta),
    )
