"""3x3 PPT state families built from the vectors xi, eta, zeta, alpha, beta, gamma.

Two independent constructions are provided.  :func:`general_state` writes the
9x9 matrix entry by entry from a table of weighted inner products;
:func:`gram_route_state` forms ``X^tau = sum_i vec(rho o sigma_i) vec(rho o sigma_i)^*``
and partially transposes it.  They must agree.
"""

import enum
import re
from dataclasses import dataclass

import numpy as np

from .blocks import BlockMatrix, partial_transpose, vectorize
from .exceptions import ParameterError
from .numlin import orthonormalize

__all__ = [
    "Family",
    "FamilySpec",
    "rho_matrix",
    "general_state",
    "gram_route_state",
    "named_family",
    "make_spec",
    "dual_subspaces",
    "witnesses_85",
    "range_spanning_85",
    "tau_range_spanning_85",
    "minor_w3",
    "minor_w2",
    "REDUCED_KINDS",
]


class Family(str, enum.Enum):
    F76 = "76"
    F75 = "75"
    F65 = "65"
    F44 = "44"
    F85 = "85"
    GENERAL = "general"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        text = str(value).strip().upper().lstrip("F")
        for kind in cls:
            if kind.value.upper() == text:
                return kind
        raise ParameterError(f"unknown family {value!r}")


# families whose matrix takes the reduced form with unit-norm xi, eta, zeta
REDUCED_KINDS = (Family.F76, Family.F75, Family.F65, Family.F44)

EXPECTED_PROFILE = {
    Family.F76: (7, 6),
    Family.F75: (7, 5),
    Family.F65: (6, 5),
    Family.F44: (4, 4),
    Family.F85: (8, 5),
}

_VECTOR_NAMES = ("xi", "eta", "zeta", "alpha", "beta", "gamma")


def _check_lambda(lam):
    lam = float(lam)
    if not np.isfinite(lam) or lam <= 0.0 or lam == 1.0:
        raise ParameterError(f"lambda must satisfy lambda>0, lambda!=1 (got {lam})")
    return lam


def _inner(u, v):
    """(u|v), linear in u and conjugate-linear in v."""
    return complex(np.vdot(v, u))


@dataclass(frozen=True, eq=False)
class FamilySpec:
    kind: Family
    lam: float
    xi: np.ndarray
    eta: np.ndarray
    zeta: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    gamma: np.ndarray
    t: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", Family.parse(self.kind))
        object.__setattr__(self, "lam", _check_lambda(self.lam))
        vecs = []
        for name in _VECTOR_NAMES:
            v = np.asarray(getattr(self, name), dtype=np.complex128).ravel()
            object.__setattr__(self, name, v)
            vecs.append(v)
        nu = vecs[0].shape[0]
        if any(v.shape[0] != nu for v in vecs):
            raise ParameterError("construction vectors must share one length nu")
        if self.kind is Family.F85:
            if self.t is None or not float(self.t) > 1.0:
                raise ParameterError(f"t must satisfy t>1 for the (8,5) family (got {self.t})")
            object.__setattr__(self, "t", float(self.t))
        elif self.t is not None:
            raise ParameterError("t is only used by the (8,5) family")
        if self.kind in REDUCED_KINDS:
            for name in ("xi", "eta", "zeta"):
                if abs(np.linalg.norm(getattr(self, name)) - 1.0) > 1e-12:
                    raise ParameterError(f"{name} must be a unit vector for family {self.kind.value}")
        if self.kind is not Family.GENERAL:
            self.check_orthogonality()

    @property
    def mu(self):
        return 1.0 / self.lam

    @property
    def nu(self):
        return self.xi.shape[0]

    def vectors(self):
        return {name: getattr(self, name) for name in _VECTOR_NAMES}

    def check_orthogonality(self, tol=1e-12):
        """alpha, beta, gamma orthonormal and orthogonal to xi, eta, zeta."""
        abg = np.column_stack([self.alpha, self.beta, self.gamma])
        if np.abs(abg.conj().T @ abg - np.eye(3)).max() > tol:
            raise ParameterError("alpha, beta, gamma must be mutually orthonormal")
        xez = np.column_stack([self.xi, self.eta, self.zeta])
        if np.abs(abg.conj().T @ xez).max() > tol:
            raise ParameterError("span{xi,eta,zeta} must be orthogonal to span{alpha,beta,gamma}")


def rho_matrix(lam):
    lam = _check_lambda(lam)
    mu = 1.0 / lam
    return np.array([[1.0, lam, mu], [mu, 1.0, lam], [lam, mu, 1.0]])


# Entry (r, c) of X is coef * (left|right); letters: x=xi, e=eta, z=zeta,
# a=alpha, b=beta, g=gamma; L=lambda, M=mu, L2, M2 their squares.
_X_TABLE = (
    "(x|x)    L(x|a)   M(x|g)   M(a|x)   (a|a)    M2(a|g)  L(g|x)   L2(g|a)  (g|g)",
    "L(a|x)   L2(a|a)  (a|g)    (e|x)    L(e|a)   M(e|g)   M(b|x)   (b|a)    M2(b|g)",
    "M(g|x)   (g|a)    M2(g|g)  L(b|x)   L2(b|a)  (b|g)    (z|x)    L(z|a)   M(z|g)",
    "M(x|a)   (x|e)    L(x|b)   M2(a|a)  M(a|e)   (a|b)    (g|a)    L(g|e)   L2(g|b)",
    "(a|a)    L(a|e)   L2(a|b)  M(e|a)   (e|e)    L(e|b)   M2(b|a)  M(b|e)   (b|b)",
    "M2(g|a)  M(g|e)   (g|b)    (b|a)    L(b|e)   L2(b|b)  M(z|a)   (z|e)    L(z|b)",
    "L(x|g)   M(x|b)   (x|z)    (a|g)    M2(a|b)  M(a|z)   L2(g|g)  (g|b)    L(g|z)",
    "L2(a|g)  (a|b)    L(a|z)   L(e|g)   M(e|b)   (e|z)    (b|g)    M2(b|b)  M(b|z)",
    "(g|g)    M2(g|b)  M(g|z)   L2(b|g)  (b|b)    L(b|z)   L(z|g)   M(z|b)   (z|z)",
)
_TOKEN = re.compile(r"^(L2|M2|L|M)?\(([xezabg])\|([xezabg])\)$")
_LETTER = {"x": "xi", "e": "eta", "z": "zeta", "a": "alpha", "b": "beta", "g": "gamma"}


def _parse_table():
    rows = []
    for line in _X_TABLE:
        cells = []
        for token in line.split():
            coef, left, right = _TOKEN.match(token).groups()
            cells.append((coef or "", _LETTER[left], _LETTER[right]))
        rows.append(cells)
    return rows


_X_CELLS = _parse_table()


def _general_display(spec):
    lam, mu = spec.lam, spec.mu
    weight = {"": 1.0, "L": lam, "M": mu, "L2": lam * lam, "M2": mu * mu}
    vec = spec.vectors()
    x = np.empty((9, 9), dtype=np.complex128)
    for r, cells in enumerate(_X_CELLS):
        for c, (coef, left, right) in enumerate(cells):
            x[r, c] = weight[coef] * _inner(vec[left], vec[right])
    return x


def _reduced_display(spec):
    """The sparse form taken when alpha, beta, gamma are orthonormal and orthogonal to xi, eta, zeta."""
    lam2, mu2 = spec.lam**2, spec.mu**2
    xi, eta, zeta = spec.xi, spec.eta, spec.zeta
    x = np.zeros((9, 9), dtype=np.complex128)
    x[np.diag_indices(9)] = [1.0, lam2, mu2, mu2, 1.0, lam2, lam2, mu2, 1.0]
    for r, c in ((0, 4), (0, 8), (4, 8)):
        x[r, c] = x[c, r] = 1.0
    for r, c, u, v in ((1, 3, eta, xi), (2, 6, zeta, xi), (5, 7, zeta, eta)):
        x[r, c] = _inner(u, v)
        x[c, r] = _inner(v, u)
    return x


def general_state(spec):
    """Closed-form 9x9 matrix X for ``spec`` (no positivity check)."""
    if spec.kind in REDUCED_KINDS:
        return BlockMatrix(3, 3, _reduced_display(spec))
    return BlockMatrix(3, 3, _general_display(spec))


def gram_route_state(spec):
    """X built as the partial transpose of ``sum_i vec(x_i) vec(x_i)^*``, ``x_i = rho o sigma_i``.

    ``X^tau`` is a Gram matrix, hence positive semi-definite by construction.
    """
    rho = rho_matrix(spec.lam)
    xtau = np.zeros((9, 9), dtype=np.complex128)
    for i in range(spec.nu):
        a, b, g = spec.alpha[i], spec.beta[i], spec.gamma[i]
        sigma = np.array(
            [[spec.xi[i], a, g], [a, spec.eta[i], b], [g, b, spec.zeta[i]]], dtype=np.complex128
        )
        v = vectorize(rho * sigma)
        xtau += np.outer(v, v.conj())
    return partial_transpose(BlockMatrix(3, 3, xtau))


def _unit(k, nu):
    e = np.zeros(nu, dtype=np.complex128)
    e[k] = 1.0
    return e


def make_spec(kind, lam, t=None):
    """Canonical FamilySpec for a named family.

    Unit-vector families use xi=e1, eta=e2 in C^6 with alpha, beta, gamma = e4,
    e5, e6; the (8,5) family lives in C^5 with alpha, beta, gamma = e3, e4, e5.
    """
    kind = Family.parse(kind)
    if kind is Family.GENERAL:
        raise ParameterError("the general family needs explicit vectors")
    lam = _check_lambda(lam)
    if kind is Family.F85:
        if t is None or not float(t) > 1.0:
            raise ParameterError(f"t must satisfy t>1 for the (8,5) family (got {t})")
        t = float(t)
        nu = 5
        xi = np.sqrt(t) * _unit(0, nu)
        eta = np.sqrt(t) * _unit(1, nu)
        zeta = np.sqrt(1.0 / (t * (t + 1.0))) * (xi + eta)
        return FamilySpec(kind, lam, xi, eta, zeta, _unit(2, nu), _unit(3, nu), _unit(4, nu), t=t)
    if t is not None:
        raise ParameterError("t is only used by the (8,5) family")
    nu = 6
    xi, eta = _unit(0, nu), _unit(1, nu)
    if kind is Family.F76:
        zeta = _unit(2, nu)
    elif kind is Family.F75:
        zeta = (xi + eta) / np.sqrt(2.0)
    elif kind is Family.F65:
        zeta = xi.copy()
    else:
        eta = xi.copy()
        zeta = xi.copy()
    return FamilySpec(kind, lam, xi, eta, zeta, _unit(3, nu), _unit(4, nu), _unit(5, nu))


def named_family(kind, lam, t=None):
    spec = make_spec(kind, lam, t)
    return spec, general_state(spec)


def _e(i, j):
    z = np.zeros((3, 3), dtype=np.complex128)
    z[i, j] = 1.0
    return z


def dual_subspaces(lam):
    """Orthonormalised vectorizations of the 7-dim space D and the 6-dim space E."""
    lam = _check_lambda(lam)
    mu = 1.0 / lam
    d = [_e(0, 1), _e(1, 0), _e(1, 2), _e(2, 1), _e(2, 0), _e(0, 2), (_e(0, 0) + _e(1, 1) + _e(2, 2)) / np.sqrt(3.0)]
    e = [
        lam * _e(0, 1) + mu * _e(1, 0),
        lam * _e(1, 2) + mu * _e(2, 1),
        lam * _e(2, 0) + mu * _e(0, 2),
        _e(0, 0),
        _e(1, 1),
        _e(2, 2),
    ]
    d_tilde = orthonormalize([vectorize(z) for z in d])
    e_tilde = orthonormalize([vectorize(z) for z in e])
    return d_tilde, e_tilde


def range_spanning_85(t):
    """Eight matrices spanning the range of the (8,5) state."""
    return [
        t * _e(0, 0) + _e(1, 1) + _e(2, 2),
        _e(0, 0) + t * _e(1, 1) + _e(2, 2),
        _e(0, 1), _e(1, 0), _e(1, 2), _e(2, 1), _e(2, 0), _e(0, 2),
    ]


def tau_range_spanning_85(lam, t):
    """Five matrices spanning the range of the partial transpose of the (8,5) state."""
    mu = 1.0 / lam
    c = np.sqrt(t / (t + 1.0))
    return [
        t * _e(0, 0) + c * _e(2, 2),
        t * _e(1, 1) + c * _e(2, 2),
        lam * _e(0, 1) + mu * _e(1, 0),
        lam * _e(1, 2) + mu * _e(2, 1),
        lam * _e(2, 0) + mu * _e(0, 2),
    ]


def witnesses_85(lam, t):
    """Six rank-one matrices ``x y^*`` in the range of X^tau for the (8,5) state, as (x, y).

    The first four are real; the last two carry the +-i entries.
    """
    lam = _check_lambda(lam)
    if not float(t) > 1.0:
        raise ParameterError(f"t must satisfy t>1 for the (8,5) family (got {t})")
    mu = 1.0 / lam
    s = (t * t + t) ** 0.25
    pairs = [
        ((1.0, 0.0, lam / s), (s, 0.0, mu)),
        ((0.0, 1.0, mu / s), (0.0, s, lam)),
        ((1.0, 0.0, -lam / s), (-s, 0.0, mu)),
        ((0.0, 1.0, -mu / s), (0.0, -s, lam)),
        ((1.0, -1j * mu, 0.0), (-1j, lam, 0.0)),
        ((1.0, 1j * mu, 0.0), (1j, lam, 0.0)),
    ]
    return [(np.array(x, dtype=np.complex128), np.array(y, dtype=np.complex128)) for x, y in pairs]


def minor_w3(t):
    return np.array([[t, 1.0, 1.0], [1.0, t, 1.0], [1.0, 1.0, 2.0 / (t + 1.0)]])


def minor_w2(lam, t):
    c = np.sqrt(t / (t + 1.0))
    return np.array([[lam * lam, c], [c, 1.0 / (lam * lam)]])

