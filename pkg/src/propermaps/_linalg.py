"""Dense linear-algebra helpers shared across modules (numpy/scipy backed)."""

from __future__ import annotations

import numpy as np
import scipy.linalg

#: Relative singular-value threshold shared by rank and nullspace computations.
RANK_RTOL = 1e-10


def numerical_rank(matrix: np.ndarray, rtol: float = RANK_RTOL) -> int:
    m = np.asarray(matrix, dtype=complex)
    if m.size == 0:
        return 0
    s = np.linalg.svd(m, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > s[0] * rtol))


def nullspace_basis(matrix: np.ndarray, rtol: float = RANK_RTOL) -> np.ndarray:
    """Orthonormal basis of the kernel, as columns of an (n, dim) array."""
    m = np.asarray(matrix, dtype=complex)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    if s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(s > s[0] * rtol))
    return vh[rank:].conj().T


def is_unitary(matrix: np.ndarray, tol: float = 1e-8) -> bool:
    u = np.asarray(matrix, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)


def has_orthonormal_columns(matrix: np.ndarray, tol: float = 1e-8) -> bool:
    b = np.asarray(matrix, dtype=complex)
    if b.ndim != 2 or b.shape[1] > b.shape[0]:
        return False
    return bool(np.max(np.abs(b.conj().T @ b - np.eye(b.shape[1]))) <= tol)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random unitary via QR of a complex Gaussian matrix."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    phases = np.diag(r).copy()
    phases /= np.abs(phases)
    return q * phases


def gram_schmidt_complement(basis: np.ndarray, tol: float = 1e-8) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of the column span.

    Canonical basis vectors are orthogonalized in index order, so when the
    input is spanned by canonical vectors the complement is the remaining
    canonical vectors in ascending order.  Deterministic.
    """
    b = np.asarray(basis, dtype=complex)
    n, d = b.shape
    found: list[np.ndarray] = []
    for j in range(n):
        if len(found) == n - d:
            break
        v = np.zeros(n, dtype=complex)
        v[j] = 1.0
        v = v - b @ (b.conj().T @ v)
        for w in found:
            v = v - w * (w.conj() @ v)
        norm = np.linalg.norm(v)
        if norm > tol:
            found.append(v / norm)
    if len(found) != n - d:
        raise ValueError("could not complete the orthogonal complement")
    return np.column_stack(found) if found else np.zeros((n, 0), dtype=complex)


def procrustes_unitary(source: np.ndarray, target: np.ndarray) -> np.ndarray:
    """Unitary W minimizing ||W @ source - target||_F (least squares over unitaries)."""
    a = np.asarray(source, dtype=complex)
    b = np.asarray(target, dtype=complex)
    m = b @ a.conj().T
    u, _, vh = np.linalg.svd(m)
    return u @ vh


class UnitaryPath:
    """Continuous path s -> U(s) with U(0) = I and U(1) = U.

    Uses the complex Schur form (diagonal for unitary input) and scales the
    eigenvalue phases linearly, so every U(s) is unitary.
    """

    def __init__(self, unitary: np.ndarray):
        u = np.asarray(unitary, dtype=complex)
        if not is_unitary(u, tol=1e-6):
            raise ValueError("matrix is not unitary")
        t, z = scipy.linalg.schur(u, output="complex")
        self.angles = np.angle(np.diag(t))
        self.frame = z
        self.dim = u.shape[0]

    def __call__(self, s: float) -> np.ndarray:
        phases = np.exp(1j * s * self.angles)
        return (self.frame * phases) @ self.frame.conj().T

    @property
    def is_constant(self) -> bool:
        return bool(np.max(np.abs(self.angles)) <= 1e-14)
