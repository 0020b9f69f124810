"""Two-parameter convergence probe for the commutator series.

For scale eps (both exponents scaled alike), the truncations R_k(eps) are
compared against the principal matrix log of exp(eps P) exp(eps Q).  The
quantity that governs convergence is the spread of the eigenvalues of
R/i followed continuously from eps = 0: once it reaches 2*pi, eigenvalues
of the product merge while the log develops cusps and the series is no
longer trustworthy.  The principal branch alone cannot express a spread
of 2*pi or more, so the spread is computed by tracking eigenphases along
a refined path from zero and unwrapping them, matching eigenvectors
between consecutive points.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

from .bch import bch_truncation, _require_order
from .errors import InvariantViolationError
from .hamiltonian import unitary_eig
from .operators import DenseOperator, _check_dims

TWO_PI = 2.0 * np.pi
DIVERGENCE_SPREAD = TWO_PI


@dataclass(frozen=True)
class ConvergenceReport:
    """Truncation errors and continued spectral spread over a scale grid."""

    eps: tuple[float, ...]
    orders: tuple[int, ...]
    errors: dict[int, tuple[float, ...]]
    spread: tuple[float, ...]
    divergence_onset: float | None
    spread_method: str

    def to_dict(self) -> dict:
        return {
            "eps": list(self.eps),
            "orders": list(self.orders),
            "errors": {str(k): list(v) for k, v in self.errors.items()},
            "spread": list(self.spread),
            "divergence_onset": self.divergence_onset,
            "divergence_threshold": DIVERGENCE_SPREAD,
            "spread_method": self.spread_method,
        }


def _is_anti_hermitian(m: np.ndarray, tol: float) -> bool:
    return float(np.max(np.abs(m + m.conj().T))) <= tol


def tracked_phases(
    p: DenseOperator, q: DenseOperator, eps_points
) -> np.ndarray:
    """Unwrapped eigenphases of log(exp(eps P) exp(eps Q))/i, continued
    from eps = 0, at each requested point (anti-Hermitian P, Q).

    Returns an array of shape (len(eps_points), dim); rows are sorted.
    """
    _check_dims(p, q)
    pm, qm = p.matrix, q.matrix
    pts = np.asarray(sorted(float(e) for e in eps_points))
    if (pts < 0).any():
        raise InvariantViolationError("eps grid must be non-negative")
    speed = float(np.linalg.norm(pm, 2) + np.linalg.norm(qm, 2))
    max_eps = float(pts[-1]) if len(pts) else 0.0
    n_fine = max(16, int(np.ceil(max_eps * speed / 0.2)))
    fine = np.union1d(np.linspace(0.0, max_eps, n_fine + 1), pts)

    dim = p.dim
    prev_phases = np.zeros(dim)
    prev_vecs = np.eye(dim, dtype=np.complex128)
    out: dict[float, np.ndarray] = {0.0: prev_phases.copy()}
    for eps in fine[1:]:
        u = scipy.linalg.expm(eps * pm) @ scipy.linalg.expm(eps * qm)
        theta, z = unitary_eig(DenseOperator(u, tol=1e-8))
        overlap = np.abs(prev_vecs.conj().T @ z) ** 2
        _, cols = scipy.optimize.linear_sum_assignment(-overlap)
        theta = theta[cols]
        z = z[:, cols]
        unwrapped = theta + TWO_PI * np.round((prev_phases - theta) / TWO_PI)
        jump = float(np.max(np.abs(unwrapped - prev_phases)))
        if jump > np.pi:
            raise InvariantViolationError(
                f"phase tracking step too coarse (jump {jump:.3f} rad)"
            )
        prev_phases, prev_vecs = unwrapped, z
        out[float(eps)] = unwrapped.copy()
    return np.array([np.sort(out[float(e)]) for e in pts])


def convergence_probe(
    p: DenseOperator,
    q: DenseOperator,
    eps_grid,
    orders=(1, 2, 3, 4),
) -> ConvergenceReport:
    """Truncation errors, continued spectral spread, and divergence onset."""
    _check_dims(p, q)
    orders = tuple(_require_order(k) for k in orders)
    eps = tuple(sorted(float(e) for e in eps_grid))
    pm, qm = p.matrix, q.matrix

    errors: dict[int, list[float]] = {k: [] for k in orders}
    anti_herm = _is_anti_hermitian(pm, 1e-10) and _is_anti_hermitian(qm, 1e-10)
    for e in eps:
        u = scipy.linalg.expm(e * pm) @ scipy.linalg.expm(e * qm)
        if anti_herm:
            theta, z = unitary_eig(DenseOperator(u, tol=1e-8))
            r_exact = (z * (1j * theta)) @ z.conj().T
        else:
            r_exact = scipy.linalg.logm(u)
        pe = DenseOperator(e * pm, tol=p.tol)
        qe = DenseOperator(e * qm, tol=q.tol)
        for k in orders:
            r_k = bch_truncation(pe, qe, k).matrix
            errors[k].append(float(np.max(np.abs(r_k - r_exact))))

    if anti_herm:
        phases = tracked_phases(p, q, eps)
        spread = tuple(float(row[-1] - row[0]) for row in phases)
        method = "continued-phase-tracking"
    else:
        spread_vals = []
        for e in eps:
            u = scipy.linalg.expm(e * pm) @ scipy.linalg.expm(e * qm)
            lam = np.linalg.eigvals(scipy.linalg.logm(u) / 1j)
            spread_vals.append(float(lam.real.max() - lam.real.min()))
        spread = tuple(spread_vals)
        method = "principal-log-eigenvalues"

    onset = None
    for e, s in zip(eps, spread):
        if s >= DIVERGENCE_SPREAD:
            onset = e
            break
    return ConvergenceReport(
        eps=eps,
        orders=orders,
        errors={k: tuple(v) for k, v in errors.items()},
        spread=spread,
        divergence_onset=onset,
        spread_method=method,
    )
