"""Verdicts on block matrices: PPT, rank profile, dual-face pairing, edge search."""

import enum
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .blocks import BlockMatrix, matricize, partial_transpose, vectorize
from .exceptions import NotPPTError, ShapeError
from .maps import pairing
from .numlin import (
    DEFAULT_TOL,
    hermitian_eig,
    numerical_rank,
    residual_to_subspace,
    smallest_singular_value,
    spectral_split,
)

__all__ = [
    "PptReport",
    "EdgeVerdict",
    "EdgeReport",
    "SearchConfig",
    "CertificationReport",
    "is_ppt",
    "rank_profile",
    "gram_rank_prediction",
    "edge_search",
    "candidate_check",
    "dual_face_membership",
    "classify",
]


@dataclass(frozen=True)
class PptReport:
    is_ppt: bool
    min_eig_A: float
    min_eig_Atau: float
    norm_scale: float


class EdgeVerdict(str, enum.Enum):
    PRODUCT_PAIR_FOUND = "PRODUCT_PAIR_FOUND"
    NO_PAIR_FOUND = "NO_PAIR_FOUND"


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 300
    seed: int = 0
    max_iterations: int = 500
    step_tolerance: float = 1e-12
    objective_tolerance: float = 1e-10
    polish_rounds: int = 4
    stop_on_success: bool = True

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("restarts and max_iterations must be >= 1")
        if self.step_tolerance <= 0 or self.objective_tolerance <= 0:
            raise ValueError("tolerances must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")

    def as_dict(self):
        return {
            "restarts": self.restarts,
            "seed": self.seed,
            "max_iterations": self.max_iterations,
            "step_tolerance": self.step_tolerance,
            "objective_tolerance": self.objective_tolerance,
            "polish_rounds": self.polish_rounds,
            "stop_on_success": self.stop_on_success,
        }


@dataclass(frozen=True, eq=False)
class EdgeReport:
    verdict: EdgeVerdict
    min_objective: float
    best_x: np.ndarray
    best_y: np.ndarray
    restarts_run: int
    seed: int
    per_restart_minima: list = field(default_factory=list)

    @property
    def found(self):
        return self.verdict is EdgeVerdict.PRODUCT_PAIR_FOUND


@dataclass(frozen=True, eq=False)
class CertificationReport:
    ppt: PptReport
    s: int
    t: int
    pairing_value: complex | None
    dual_face_member: bool | None
    edge: EdgeReport

    @property
    def is_edge(self):
        return self.ppt.is_ppt and self.edge.verdict is EdgeVerdict.NO_PAIR_FOUND


def is_ppt(a, tol=DEFAULT_TOL):
    a.require_hermitian()
    scale = a.norm()
    w = hermitian_eig(a.data)[0][0]
    wt = hermitian_eig(partial_transpose(a).data)[0][0]
    bound = -tol.psd_rel_tol * scale
    return PptReport(bool(w >= bound and wt >= bound), float(w), float(wt), scale)


def rank_profile(a, tol=DEFAULT_TOL):
    """``(rank A, rank A^tau)``."""
    return numerical_rank(a.data, tol), numerical_rank(partial_transpose(a).data, tol)


def _gram(*vectors):
    return np.array([[np.vdot(v, u) for v in vectors] for u in vectors])


def gram_rank_prediction(xi, eta, zeta, tol=DEFAULT_TOL):
    """Ranks of X and X^tau predicted from the Gram matrices of unit xi, eta, zeta."""
    vecs = [np.asarray(v, dtype=np.complex128).ravel() for v in (xi, eta, zeta)]
    for v in vecs:
        if abs(np.linalg.norm(v) - 1.0) > 1e-12:
            raise ValueError("gram_rank_prediction needs unit vectors")
    xi, eta, zeta = vecs
    s = 1 + sum(numerical_rank(_gram(u, v), tol) for u, v in ((xi, eta), (eta, zeta), (zeta, xi)))
    t = 3 + numerical_rank(_gram(xi, eta, zeta), tol)
    return s, t


def _kernel_stack(a, tol):
    """Matricized orthonormal kernel basis of ``a`` as an array (k, m, n)."""
    _, kernel = spectral_split(a.data, tol)
    if kernel.dim == 0:
        return np.zeros((0, a.m, a.n), dtype=np.complex128)
    return np.stack([matricize(v, a.m, a.n) for v in kernel.vectors()])


def _start_params(rng, m):
    g = rng.normal(size=m) + 1j * rng.normal(size=m)
    x = g / np.linalg.norm(g)
    x = x * np.exp(-1j * np.angle(x[0]))
    mags = np.abs(x)
    theta = np.empty(m - 1)
    rest = 1.0
    for k in range(m - 1):
        theta[k] = np.arccos(np.clip(mags[k] / rest, -1.0, 1.0)) if rest > 0 else 0.0
        rest *= np.sin(theta[k])
    return np.concatenate([theta, np.angle(x[1:])])


def _point(params, m):
    return np.asarray(_kernels.sphere_point(np.asarray(params, dtype=float), m))


def _constraints(x, tau_kernel, kernel):
    return np.asarray(_kernels.constraint_matrix(x, tau_kernel, kernel))


# local searches aim this far below objective_tolerance
TARGET_FACTOR = 1e-3


def _local_search(start, m, tau_kernel, kernel, cfg):
    target = cfg.objective_tolerance * TARGET_FACTOR
    params, val, _ = _kernels.nelder_mead(
        start, 0.5, m, tau_kernel, kernel, cfg.max_iterations, cfg.step_tolerance, target
    )
    step = 1e-2
    # restarted simplices around the incumbent; Nelder-Mead stalls on the
    # cone-shaped minima of a smallest singular value
    for _ in range(cfg.polish_rounds):
        if val < target:
            break
        p2, v2, _ = _kernels.nelder_mead(
            params, step, m, tau_kernel, kernel, cfg.max_iterations, cfg.step_tolerance, target
        )
        if not v2 < val:
            break
        params, val = p2, v2
        step = max(step * 1e-2, 1e-8)
    return np.asarray(params, dtype=float), float(val)


def edge_search(a, cfg=SearchConfig(), tol=DEFAULT_TOL, check_ppt=True):
    """Search for a product vector ``x y^*`` in range(A^tau) whose partner ``conj(x) y^*`` lies in range(A).

    For fixed unit ``x`` both memberships are linear in ``y``: the rows
    ``x^* L_j`` (L_j spanning ker A^tau) and ``x^T K_j`` (K_j spanning ker A)
    must annihilate ``y``.  The smallest singular value of that stacked matrix
    is minimised over the unit sphere from ``cfg.restarts`` seeded starts;
    restart ``k`` uses ``default_rng(cfg.seed + k)``.
    """
    if check_ppt and not is_ppt(a, tol).is_ppt:
        raise NotPPTError("edge_search requires a PPT input")
    m = a.m
    tau_kernel = _kernel_stack(partial_transpose(a), tol)
    kernel = _kernel_stack(a, tol)

    minima = []
    best_val, best_params = np.inf, None
    for k in range(cfg.restarts):
        rng = np.random.default_rng(cfg.seed + k)
        start = _start_params(rng, m)
        params, val = _local_search(start, m, tau_kernel, kernel, cfg)
        minima.append(val)
        if val < best_val:
            best_val, best_params = val, params
        if cfg.stop_on_success and best_val < cfg.objective_tolerance:
            break

    x = _point(best_params, m)
    if tau_kernel.shape[0] + kernel.shape[0] == 0:
        y = np.zeros(a.n, dtype=np.complex128)
        y[0] = 1.0
    else:
        _, y = smallest_singular_value(_constraints(x, tau_kernel, kernel))
    found = best_val < tol.membership_tol
    return EdgeReport(
        EdgeVerdict.PRODUCT_PAIR_FOUND if found else EdgeVerdict.NO_PAIR_FOUND,
        float(best_val),
        x,
        y,
        len(minima),
        cfg.seed,
        minima,
    )


@dataclass(frozen=True)
class CandidateCheck:
    in_range_tau: bool
    partner_in_range: bool
    residual_tau: float
    residual_partner: float


def candidate_check(a, x, y, tol=DEFAULT_TOL):
    """Membership of ``x y^*`` in range(A^tau) and of ``conj(x) y^*`` in range(A)."""
    x = np.asarray(x, dtype=np.complex128).ravel()
    y = np.asarray(y, dtype=np.complex128).ravel()
    if not np.any(x) or not np.any(y):
        raise ValueError("candidate vectors must be nonzero")
    if x.shape[0] != a.m or y.shape[0] != a.n:
        raise ShapeError("candidate vectors do not match the block shape")
    range_a, _ = spectral_split(a.data, tol)
    range_tau, _ = spectral_split(partial_transpose(a).data, tol)
    r_tau = residual_to_subspace(vectorize(np.outer(x, y.conj())), range_tau)
    r_partner = residual_to_subspace(vectorize(np.outer(x.conj(), y.conj())), range_a)
    return CandidateCheck(r_tau < tol.membership_tol, r_partner < tol.membership_tol, r_tau, r_partner)


def dual_face_membership(a, phi, tol=DEFAULT_TOL):
    """Return ``(<A, phi>, member)`` with member iff |<A, phi>| <= tol * ||A|| * scale(phi)."""
    value = pairing(a, phi)
    member = abs(value) <= tol.membership_tol * a.norm() * phi.scale()
    return value, bool(member)


def classify(a, phi=None, cfg=SearchConfig(), tol=DEFAULT_TOL):
    """Aggregate PPT, rank profile, optional pairing and edge search into one report.

    The edge search is skipped (reported as PRODUCT_PAIR_FOUND) when both A and
    A^tau have full rank, and when A is not PPT (it then reports NO_PAIR_FOUND
    with infinite objective and zero restarts).
    """
    a.require_hermitian()
    ppt = is_ppt(a, tol)
    s, t = rank_profile(a, tol)
    value = member = None
    if phi is not None:
        value, member = dual_face_membership(a, phi, tol)
    full = a.m * a.n
    if not ppt.is_ppt:
        edge = EdgeReport(EdgeVerdict.NO_PAIR_FOUND, float("inf"), np.zeros(a.m, complex), np.zeros(a.n, complex), 0, cfg.seed, [])
    elif s == full and t == full:
        x = np.zeros(a.m, dtype=np.complex128)
        y = np.zeros(a.n, dtype=np.complex128)
        x[0] = y[0] = 1.0
        edge = EdgeReport(EdgeVerdict.PRODUCT_PAIR_FOUND, 0.0, x, y, 0, cfg.seed, [])
    else:
        edge = edge_search(a, cfg, tol, check_ppt=False)
    return CertificationReport(ppt, s, t, value, member, edge)
