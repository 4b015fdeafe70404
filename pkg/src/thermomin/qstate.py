"""Dense 2x2/4x4 complex matrix helpers for two-qubit states.

Basis convention, fixed everywhere in this package: the two-qubit
computational basis is ordered |11>, |10>, |01>, |00> with |1> the excited
atomic level, so index 0 is the doubly excited state and index 3 the joint
ground state. Subsystem a is the left tensor factor. Bloch components use
the standard unnormalized Pauli operators, x_i = Tr(rho (sigma_i x I)).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_SLACK = -1e-10
JACOBI_OFF_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100

ID2 = np.eye(2, dtype=complex)
ID4 = np.eye(4, dtype=complex)
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)

# Pauli tensor basis, precomputed once for Bloch conversions.
_PAULI_A = [np.kron(s, ID2) for s in PAULIS]
_PAULI_B = [np.kron(ID2, s) for s in PAULIS]
_PAULI_AB = [[np.kron(si, sj) for sj in PAULIS] for si in PAULIS]


class NotHermitian(ValueError):
    """Matrix is not Hermitian within tolerance."""


class TraceNotOne(ValueError):
    """State trace differs from one beyond tolerance."""


class NotPositive(ValueError):
    """Matrix has an eigenvalue below the positive-semidefinite slack."""


def _as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError("matrix entries must all be finite")
    return a


def validate_state(m) -> np.ndarray:
    """Check Hermiticity, unit trace and positivity of a 4x4 density matrix.

    Returns the matrix (as a complex ndarray) when all three invariants
    hold, otherwise raises NotHermitian / TraceNotOne / NotPositive naming
    the size of the violation.
    """
    rho = _as_matrix(m)
    if rho.shape[0] != 4:
        raise ValueError(f"expected a 4x4 matrix, got {rho.shape[0]}x{rho.shape[0]}")
    herm_dev = float(np.max(np.abs(rho - rho.conj().T)))
    if herm_dev > HERMITICITY_TOL:
        raise NotHermitian(f"|rho - rho^dag| = {herm_dev:.3e} exceeds {HERMITICITY_TOL:.0e}")
    trace_dev = abs(complex(np.trace(rho)) - 1.0)
    if trace_dev > TRACE_TOL:
        raise TraceNotOne(f"|Tr(rho) - 1| = {trace_dev:.3e} exceeds {TRACE_TOL:.0e}")
    evals, _ = hermitian_eigensystem(0.5 * (rho + rho.conj().T))
    if evals[-1] < PSD_SLACK:
        raise NotPositive(f"smallest eigenvalue {evals[-1]:.3e} below slack {PSD_SLACK:.0e}")
    return rho


def hermitian_eigensystem(m, off_tol: float = JACOBI_OFF_TOL):
    """Eigenvalues and eigenvectors of a small Hermitian matrix.

    Cyclic Jacobi rotation sweeps; converged when the off-diagonal
    Frobenius mass drops below ``off_tol`` (at most 100 sweeps, which the
    fixed 4x4 problem size never needs). Returns ``(evals, vecs)`` with
    eigenvalues sorted in descending order and the matching orthonormal
    eigenvectors as columns.
    """
    a = _as_matrix(m)
    herm_dev = float(np.max(np.abs(a - a.conj().T)))
    if herm_dev > HERMITICITY_TOL:
        raise NotHermitian(f"|m - m^dag| = {herm_dev:.3e} exceeds {HERMITICITY_TOL:.0e}")
    n = a.shape[0]
    # Scalar lists beat ndarray indexing for matrices this small.
    A = [[complex(a[i, j]) for j in range(n)] for i in range(n)]
    Q = [[1.0 + 0.0j if i == j else 0.0 + 0.0j for j in range(n)] for i in range(n)]
    for _ in range(JACOBI_MAX_SWEEPS):
        off = 0.0
        for i in range(n - 1):
            row = A[i]
            for j in range(i + 1, n):
                v = row[j]
                off += v.real * v.real + v.imag * v.imag
        if sqrt(2.0 * off) < off_tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p][q]
                beta = abs(apq)
                if beta == 0.0:
                    continue
                phase = apq / beta
                tau = (A[q][q].real - A[p][p].real) / (2.0 * beta)
                if tau >= 0.0:
                    t = 1.0 / (tau + sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + sqrt(1.0 + tau * tau))
                c = 1.0 / sqrt(1.0 + t * t)
                s = t * c
                sph = s * phase
                sphc = s * phase.conjugate()
                app = A[p][p].real
                aqq = A[q][q].real
                A[p][p] = complex(app - t * beta)
                A[q][q] = complex(aqq + t * beta)
                A[p][q] = 0.0 + 0.0j
                A[q][p] = 0.0 + 0.0j
                for k in range(n):
                    if k == p or k == q:
                        continue
                    akp = A[k][p]
                    akq = A[k][q]
                    new_p = c * akp - sphc * akq
                    new_q = sph * akp + c * akq
                    A[k][p] = new_p
                    A[k][q] = new_q
                    A[p][k] = new_p.conjugate()
                    A[q][k] = new_q.conjugate()
                for k in range(n):
                    Qk = Q[k]
                    qkp = Qk[p]
                    qkq = Qk[q]
                    Qk[p] = c * qkp - sphc * qkq
                    Qk[q] = sph * qkp + c * qkq
    evals = np.array([A[i][i].real for i in range(n)])
    vecs = np.array(Q, dtype=complex)
    order = np.argsort(-evals, kind="stable")
    return evals[order], vecs[:, order]


def matrix_sqrt_psd(m) -> np.ndarray:
    """Hermitian square root of a positive-semidefinite matrix."""
    evals, vecs = hermitian_eigensystem(m)
    if evals[-1] < PSD_SLACK:
        raise NotPositive(f"smallest eigenvalue {evals[-1]:.3e} below slack {PSD_SLACK:.0e}")
    # Slack-level negatives are roundoff, clamp before the square root.
    roots = np.sqrt(np.clip(evals, 0.0, None))
    s = (vecs * roots) @ vecs.conj().T
    return 0.5 * (s + s.conj().T)


def partial_trace(rho, subsystem: str) -> np.ndarray:
    """Reduced 2x2 state of subsystem "a" (left factor) or "b" (right)."""
    rho = validate_state(rho)
    r = rho.reshape(2, 2, 2, 2)
    if subsystem == "a":
        return np.einsum("ikjk->ij", r)
    if subsystem == "b":
        return np.einsum("kikj->ij", r)
    raise ValueError("subsystem must be 'a' or 'b'")


@dataclass(frozen=True, eq=False)
class BlochRep:
    """Bloch vectors of both subsystems and the 3x3 correlation matrix."""

    x: np.ndarray
    y: np.ndarray
    C: np.ndarray


def bloch_decompose(rho) -> BlochRep:
    """Pauli expectation values of a valid state: x_i, y_j, c_ij."""
    rho = validate_state(rho)
    x = np.array([np.einsum("ij,ji->", rho, p).real for p in _PAULI_A])
    y = np.array([np.einsum("ij,ji->", rho, p).real for p in _PAULI_B])
    C = np.array(
        [[np.einsum("ij,ji->", rho, _PAULI_AB[i][j]).real for j in range(3)] for i in range(3)]
    )
    return BlochRep(x=x, y=y, C=C)


def bloch_compose(b: BlochRep) -> np.ndarray:
    """Rebuild a density matrix from Bloch data; raises NotPositive for non-states."""
    rho = ID4.copy()
    for i in range(3):
        rho += b.x[i] * _PAULI_A[i]
        rho += b.y[i] * _PAULI_B[i]
        for j in range(3):
            rho += b.C[i, j] * _PAULI_AB[i][j]
    return validate_state(rho / 4.0)


def hs_norm_sq(m) -> float:
    """Squared Hilbert-Schmidt norm, the sum of squared entry magnitudes."""
    a = _as_matrix(m)
    return float(np.vdot(a, a).real)


def trace_norm(m) -> float:
    """Trace norm (sum of singular values; sum of |eigenvalues| if Hermitian)."""
    a = _as_matrix(m)
    if float(np.max(np.abs(a - a.conj().T))) <= HERMITICITY_TOL:
        evals, _ = hermitian_eigensystem(0.5 * (a + a.conj().T))
        return float(np.abs(evals).sum())
    gram = a.conj().T @ a
    evals, _ = hermitian_eigensystem(0.5 * (gram + gram.conj().T))
    return float(np.sqrt(np.clip(evals, 0.0, None)).sum())
