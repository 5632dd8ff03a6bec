"""Small dense complex linear algebra: eigen, singular values, ranks, subspaces."""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .exceptions import NotHermitianError, NotPSDError, ShapeError

__all__ = [
    "TolerancePolicy",
    "MatrixSubspace",
    "as_complex_matrix",
    "hermitian_eig",
    "singular_values",
    "smallest_singular_value",
    "numerical_rank",
    "rank_gap",
    "spectral_split",
    "residual_to_subspace",
    "join_subspaces",
    "orthonormalize",
    "span",
]


@dataclass(frozen=True)
class TolerancePolicy:
    rank_rel_tol: float = 1e-8
    psd_rel_tol: float = 1e-10
    membership_tol: float = 1e-10

    def __post_init__(self):
        for name in ("rank_rel_tol", "psd_rel_tol", "membership_tol"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")

    def as_dict(self):
        return {
            "rank_rel_tol": self.rank_rel_tol,
            "psd_rel_tol": self.psd_rel_tol,
            "membership_tol": self.membership_tol,
        }


DEFAULT_TOL = TolerancePolicy()


def as_complex_matrix(a, name="matrix"):
    """Return ``a`` as a finite 2-D complex128 array."""
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.size == 0:
        raise ShapeError(f"{name} must be a nonempty 2-D array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


@dataclass(frozen=True)
class MatrixSubspace:
    """Subspace of C^N held as an orthonormal basis (columns of ``basis``)."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=np.complex128)
        if b.ndim != 2:
            raise ShapeError("basis must be 2-D (ambient_dim x dim)")
        if b.shape[1] > b.shape[0]:
            raise ShapeError("subspace dimension exceeds ambient dimension")
        gram = b.conj().T @ b
        if b.shape[1] and np.abs(gram - np.eye(b.shape[1])).max() > 1e-12:
            raise ValueError("basis vectors are not orthonormal")
        object.__setattr__(self, "basis", b)

    @property
    def ambient_dim(self):
        return self.basis.shape[0]

    @property
    def dim(self):
        return self.basis.shape[1]

    def projector(self):
        return self.basis @ self.basis.conj().T

    def vectors(self):
        return [self.basis[:, k] for k in range(self.dim)]

    def contains(self, v, tol=DEFAULT_TOL.membership_tol):
        return residual_to_subspace(v, self) < tol

    @classmethod
    def empty(cls, ambient_dim):
        return cls(np.zeros((ambient_dim, 0), dtype=np.complex128))


def hermitian_eig(h):
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns) of ``h``.

    ``h`` must be Hermitian to within ``1e-12 * ||h||_F``; it is symmetrized
    before the solve.
    """
    h = as_complex_matrix(h)
    if h.shape[0] != h.shape[1]:
        raise ShapeError(f"expected a square matrix, got {h.shape}")
    scale = np.linalg.norm(h)
    if np.abs(h - h.conj().T).max() > 1e-12 * max(scale, np.finfo(float).tiny):
        raise NotHermitianError("matrix is not Hermitian")
    w, v = _kernels.eigh(h)
    return np.asarray(w, dtype=float), np.asarray(v)


def singular_values(m):
    """All singular values (descending) and right singular vectors of ``m``.

    When ``m`` has fewer rows than columns the trailing values are zero.
    """
    m = as_complex_matrix(m)
    s, v = _kernels.svd(m)
    return np.asarray(s, dtype=float), np.asarray(v)


def smallest_singular_value(m):
    """Return ``(sigma_min, right_vector)`` with ``||m v|| = sigma_min``."""
    s, v = singular_values(m)
    return float(s[-1]), v[:, -1].copy()


def numerical_rank(m, tol=DEFAULT_TOL):
    s, _ = singular_values(m)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_rel_tol * s[0]))


def rank_gap(m, tol=DEFAULT_TOL):
    """Ratio of the smallest retained to the largest discarded singular value.

    Infinite when nothing is discarded or the discarded values are exactly 0.
    """
    s, _ = singular_values(m)
    if s[0] == 0.0:
        return np.inf
    keep = s > tol.rank_rel_tol * s[0]
    dropped = s[~keep]
    if dropped.size == 0 or dropped[0] == 0.0:
        return np.inf
    return float(s[keep][-1] / dropped[0])


def spectral_split(h, tol=DEFAULT_TOL):
    """Split C^N into the range and kernel of a PSD Hermitian matrix."""
    w, v = hermitian_eig(h)
    scale = np.linalg.norm(h)
    if w[0] < -tol.psd_rel_tol * scale:
        raise NotPSDError(f"matrix has a negative eigenvalue {w[0]:.3e}")
    top = w[-1]
    keep = w > tol.rank_rel_tol * top if top > 0 else np.zeros_like(w, dtype=bool)
    return MatrixSubspace(v[:, keep]), MatrixSubspace(v[:, ~keep])


def residual_to_subspace(v, s):
    """Relative distance ``||v - P v|| / ||v||`` of ``v`` from ``s`` (0 for v = 0)."""
    v = np.asarray(v, dtype=np.complex128).ravel()
    if v.shape[0] != s.ambient_dim:
        raise ShapeError(f"vector length {v.shape[0]} != ambient dim {s.ambient_dim}")
    norm = np.linalg.norm(v)
    if norm == 0.0:
        return 0.0
    b = s.basis
    r = v - b @ (b.conj().T @ v)
    # one reprojection keeps the residual accurate when v is almost in s
    r = r - b @ (b.conj().T @ r)
    return float(min(np.linalg.norm(r) / norm, 1.0))


def span(vectors, tol=DEFAULT_TOL):
    """Orthonormal basis of the span of ``vectors`` via singular vectors."""
    mat = np.column_stack([np.asarray(x, dtype=np.complex128).ravel() for x in vectors])
    s, vr = singular_values(mat)
    if s[0] == 0.0:
        return MatrixSubspace.empty(mat.shape[0])
    keep = s > tol.rank_rel_tol * s[0]
    u = (mat @ vr[:, keep]) / s[keep]
    # re-orthonormalise the left vectors (they inherit O(eps / sigma) error)
    q, _ = np.linalg.qr(u)
    return MatrixSubspace(q)


def join_subspaces(s1, s2, tol=DEFAULT_TOL):
    if s1.ambient_dim != s2.ambient_dim:
        raise ShapeError("subspaces live in different ambient spaces")
    if s1.dim + s2.dim == 0:
        return MatrixSubspace.empty(s1.ambient_dim)
    return span(list(s1.basis.T) + list(s2.basis.T), tol)


def orthonormalize(vectors, tol=DEFAULT_TOL):
    """Modified Gram-Schmidt in the given order, dropping dependent vectors."""
    vecs = [np.asarray(x, dtype=np.complex128).ravel() for x in vectors]
    if not vecs:
        raise ValueError("no vectors given")
    scale = max(np.linalg.norm(x) for x in vecs)
    basis = []
    for x in vecs:
        r = x.copy()
        for _ in range(2):
            for b in basis:
                r = r - (b.conj() @ r) * b
        nr = np.linalg.norm(r)
        if nr > tol.rank_rel_tol * scale:
            basis.append(r / nr)
    if not basis:
        return MatrixSubspace.empty(vecs[0].shape[0])
    return MatrixSubspace(np.column_stack(basis))
