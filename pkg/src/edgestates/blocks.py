"""Block matrices in M_n (x) M_m and the matrix/vector identification.

Convention: an element ``A = sum_ij a_ij (x) e_ij`` (``a_ij`` n x n, ``e_ij``
in M_m) is stored as the (nm) x (nm) array whose (i, j) block of size n x n is
``a_ij``; the global row of block row ``i`` and inner row ``k`` is ``i*n + k``
(0-based).  An m x n matrix ``z`` is identified with the vector whose i-th
length-n block is the i-th row of ``z`` (row-major flattening).
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import NotHermitianError, ShapeError
from .numlin import as_complex_matrix

__all__ = [
    "BlockMatrix",
    "partial_transpose",
    "vectorize",
    "matricize",
    "pure_state",
    "conjugate_partner",
    "hadamard",
]


@dataclass(frozen=True, eq=False)
class BlockMatrix:
    m: int
    n: int
    data: np.ndarray

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ShapeError("block dimensions must be positive")
        data = as_complex_matrix(self.data, "block matrix data")
        size = self.m * self.n
        if data.shape != (size, size):
            raise ShapeError(f"expected a {size}x{size} array for m={self.m}, n={self.n}, got {data.shape}")
        object.__setattr__(self, "data", data)

    @classmethod
    def square(cls, data, m=3):
        """Wrap an (m n) x (m n) array, inferring ``n``."""
        data = np.asarray(data)
        n, rem = divmod(data.shape[0], m)
        if rem:
            raise ShapeError(f"size {data.shape[0]} is not a multiple of m={m}")
        return cls(m, n, data)

    @property
    def shape(self):
        return self.data.shape

    def block(self, i, j):
        n = self.n
        return self.data[i * n:(i + 1) * n, j * n:(j + 1) * n]

    def norm(self):
        return float(np.linalg.norm(self.data))

    def trace(self):
        return complex(np.trace(self.data))

    def is_hermitian(self, rtol=1e-12):
        return bool(np.abs(self.data - self.data.conj().T).max() <= rtol * max(self.norm(), 1e-300))

    def require_hermitian(self, rtol=1e-12):
        if not self.is_hermitian(rtol):
            raise NotHermitianError("block matrix is not Hermitian")
        return self

    def __add__(self, other):
        _same_shape(self, other)
        return BlockMatrix(self.m, self.n, self.data + other.data)

    def scaled(self, factor):
        return BlockMatrix(self.m, self.n, factor * self.data)

    @property
    def tau(self):
        return partial_transpose(self)


def _same_shape(a, b):
    if (a.m, a.n) != (b.m, b.n):
        raise ShapeError(f"block shapes differ: ({a.m},{a.n}) vs ({b.m},{b.n})")


def partial_transpose(a):
    """Swap blocks (i, j) and (j, i); a pure permutation of entries."""
    m, n = a.m, a.n
    data = a.data.reshape(m, n, m, n).transpose(2, 1, 0, 3).reshape(m * n, m * n)
    return BlockMatrix(m, n, data.copy())


def vectorize(z):
    z = as_complex_matrix(z)
    return z.reshape(-1).copy()


def matricize(v, m, n):
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1 or v.shape[0] != m * n:
        raise ShapeError(f"expected a vector of length {m * n}, got shape {v.shape}")
    return v.reshape(m, n).copy()


def pure_state(z):
    """Rank-one block matrix ``vec(z) vec(z)^*``."""
    z = as_complex_matrix(z)
    if not np.any(z):
        raise ValueError("pure_state needs a nonzero matrix")
    v = vectorize(z)
    return BlockMatrix(z.shape[0], z.shape[1], np.outer(v, v.conj()))


def conjugate_partner(x, y):
    """Return ``(x y^*, conj(x) y^*)``.

    Partial transposition maps ``pure_state(x y^*)`` to ``pure_state(conj(x) y^*)``.
    """
    x = np.asarray(x, dtype=np.complex128).ravel()
    y = np.asarray(y, dtype=np.complex128).ravel()
    if not np.any(x) or not np.any(y):
        raise ValueError("conjugate_partner needs nonzero vectors")
    return np.outer(x, y.conj()), np.outer(x.conj(), y.conj())


def hadamard(a, b):
    _same_shape(a, b)
    return BlockMatrix(a.m, a.n, a.data * b.data)
