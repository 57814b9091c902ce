# linear_solver.py: Jacobi-preconditioned conjugate gradient for SPD systems.

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import cg

from errors import NumericalError


@dataclass(frozen=True)
class SolveInfo:
    iterations: int
    relative_residual: float


def solve_spd(matrix: sp.spmatrix, rhs: np.ndarray, x0: np.ndarray, tol: float):
    """
    Solves matrix @ x = rhs and checks the true relative residual against
    `tol`. The iteration cap is 10 * n.
    """
    n = rhs.size
    diagonal = matrix.diagonal()
    if np.any(diagonal <= 0.0):
        raise NumericalError("System matrix has a non-positive diagonal entry.")
    preconditioner = sp.diags(1.0 / diagonal)

    rhs_norm = float(np.linalg.norm(rhs))
    if rhs_norm == 0.0:
        return np.zeros_like(rhs), SolveInfo(0, 0.0)

    counter = {"iterations": 0}

    def _count(_):
        counter["iterations"] += 1

    # The inner tolerance is tighter so the true residual clears `tol`.
    solution, status = cg(
        matrix,
        rhs,
        x0=x0,
        rtol=0.1 * tol,
        atol=0.0,
        maxiter=10 * n,
        M=preconditioner,
        callback=_count,
    )
    residual = float(np.linalg.norm(matrix @ solution - rhs)) / rhs_norm
    if status < 0 or not np.all(np.isfinite(solution)):
        raise NumericalError(f"Conjugate gradient broke down (status {status}).")
    if residual > tol:
        raise NumericalError(
            f"Conjugate gradient did not converge: relative residual {residual:.3e} > {tol:.1e} "
            f"after {counter['iterations']} iterations."
        )
    return solution, SolveInfo(counter["iterations"], residual)
