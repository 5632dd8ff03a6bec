"""Decomposable maps M_m -> M_n given by Kraus lists, and their pairing with block matrices."""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .exceptions import ParameterError, ShapeError
from .numlin import as_complex_matrix, hermitian_eig

__all__ = [
    "DecomposableMap",
    "apply_map",
    "pairing",
    "phi_family",
    "positivity_margin",
    "matrix_unit",
]


def matrix_unit(i, j, m, n=None):
    """The m x n matrix with a single 1 at (i, j), 0-based."""
    e = np.zeros((m, m if n is None else n), dtype=np.complex128)
    e[i, j] = 1.0
    return e


@dataclass(frozen=True, eq=False)
class DecomposableMap:
    """``X -> sum V^* X V + sum W^* X^t W`` with V in ``cp_kraus`` and W in ``ccp_kraus``."""

    m: int
    n: int
    cp_kraus: tuple = field(default=())
    ccp_kraus: tuple = field(default=())

    def __post_init__(self):
        cp = tuple(as_complex_matrix(v, "Kraus matrix") for v in self.cp_kraus)
        ccp = tuple(as_complex_matrix(v, "Kraus matrix") for v in self.ccp_kraus)
        if not cp and not ccp:
            raise ValueError("a decomposable map needs at least one Kraus matrix")
        for v in cp + ccp:
            if v.shape != (self.m, self.n):
                raise ShapeError(f"Kraus matrix shape {v.shape} != ({self.m}, {self.n})")
        object.__setattr__(self, "cp_kraus", cp)
        object.__setattr__(self, "ccp_kraus", ccp)

    def scale(self):
        """Sum of squared Frobenius norms of all Kraus matrices."""
        return float(sum(np.linalg.norm(v) ** 2 for v in self.cp_kraus + self.ccp_kraus))

    def swapped(self):
        """Exchange the completely positive and completely copositive parts."""
        return DecomposableMap(self.m, self.n, self.ccp_kraus, self.cp_kraus)

    def __call__(self, x):
        return apply_map(self, x)


def apply_map(phi, x):
    x = as_complex_matrix(x)
    if x.shape != (phi.m, phi.m):
        raise ShapeError(f"map acts on {phi.m}x{phi.m} matrices, got {x.shape}")
    out = np.zeros((phi.n, phi.n), dtype=np.complex128)
    for v in phi.cp_kraus:
        out += v.conj().T @ x @ v
    xt = x.T
    for w in phi.ccp_kraus:
        out += w.conj().T @ xt @ w
    return out


def pairing(a, phi):
    """Bilinear pairing ``sum_ij <phi(e_ij), a_ij>`` with ``<X, Y> = Tr(Y X^t)``.

    ``a`` lives in M_n (x) M_m: m x m blocks of size n x n.
    """
    if (a.m, a.n) != (phi.m, phi.n):
        raise ShapeError(f"block matrix ({a.m},{a.n}) does not match map ({phi.m},{phi.n})")
    total = 0.0 + 0.0j
    for i in range(phi.m):
        for j in range(phi.m):
            image = apply_map(phi, matrix_unit(i, j, phi.m))
            # Tr(a_ij image^t) = sum_kl (a_ij)_kl image_kl
            total += np.sum(a.block(i, j) * image)
    return complex(total)


def phi_family(lam):
    """The map ``sum phi_{e_ii - e_jj} + sum phi^{mu e_ij - lam e_ji}`` on M_3, mu = 1/lam."""
    lam = float(lam)
    if not (lam > 0.0 and lam != 1.0) or not np.isfinite(lam):
        raise ParameterError(f"lambda must satisfy lambda>0, lambda!=1 (got {lam})")
    mu = 1.0 / lam
    e = lambda i, j: matrix_unit(i, j, 3)  # noqa: E731
    cp = (e(0, 0) - e(1, 1), e(1, 1) - e(2, 2), e(2, 2) - e(0, 0))
    ccp = (
        mu * e(0, 1) - lam * e(1, 0),
        mu * e(1, 2) - lam * e(2, 1),
        mu * e(2, 0) - lam * e(0, 2),
    )
    return DecomposableMap(3, 3, cp, ccp)


def _unit_vector(params, m):
    theta = params[: m - 1]
    phases = np.concatenate([[0.0], params[m - 1:]])
    sines = np.concatenate([[1.0], np.cumprod(np.sin(theta))])
    cosines = np.concatenate([np.cos(theta), [1.0]])
    return sines * cosines * np.exp(1j * phases)


def _angles(x):
    """Inverse of :func:`_unit_vector` after fixing the global phase."""
    m = x.shape[0]
    lead = np.flatnonzero(np.abs(x) > 0)[0]
    x = x * np.exp(-1j * np.angle(x[lead])) / np.linalg.norm(x)
    mags = np.abs(x)
    theta = np.empty(m - 1)
    rest = 1.0
    for k in range(m - 1):
        ratio = 1.0 if rest == 0.0 else np.clip(mags[k] / rest, -1.0, 1.0)
        theta[k] = np.arccos(ratio)
        rest *= np.sin(theta[k])
    return np.concatenate([theta, np.angle(x[1:])])


def _unit_images(phi):
    """``phi(e_ij)`` stacked as (m, m, n, n); phi(x x^*) is their x_i conj(x_j) combination."""
    m = phi.m
    return np.array([[apply_map(phi, matrix_unit(i, j, m)) for j in range(m)] for i in range(m)])


def _min_eig_on_product(images, params):
    m = images.shape[0]
    x = _unit_vector(params, m)
    h = np.einsum("i,j,ijkl->kl", x, x.conj(), images)
    return _kernels.eigh(0.5 * (h + h.conj().T))[0][0]


def positivity_margin(phi, restarts=200, seed=0, sweeps=60, step=0.5, min_step=1e-9):
    """Smallest eigenvalue of ``phi(x x^*)`` over unit ``x``, by multistart coordinate descent.

    A strictly positive value is numerical evidence that ``phi`` lies in the
    interior of the positive maps.  Each restart ``k`` draws its start from
    ``default_rng(seed + k)``; ties between restarts go to the lowest index.
    Returns ``(margin, argmin_x)``.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    m = phi.m
    if m == 1:
        x = np.ones(1, dtype=complex)
        return float(hermitian_eig(apply_map(phi, np.outer(x, x)))[0][0]), x
    images = _unit_images(phi)
    best_val, best_params = np.inf, None
    for k in range(restarts):
        rng = np.random.default_rng(seed + k)
        g = rng.normal(size=m) + 1j * rng.normal(size=m)
        params = _angles(g / np.linalg.norm(g))
        val = _min_eig_on_product(images, params)
        h = step
        for _ in range(sweeps):
            improved = False
            for c in range(params.shape[0]):
                for sign in (1.0, -1.0):
                    trial = params.copy()
                    trial[c] += sign * h
                    tv = _min_eig_on_product(images, trial)
                    if tv < val:
                        params, val, improved = trial, tv, True
                        break
            if not improved:
                h *= 0.5
                if h < min_step:
                    break
        if val < best_val:
            best_val, best_params = val, params
    return float(best_val), _unit_vector(best_params, m)
