"""Hot inner loops: complex Jacobi eigen/SVD and the product-vector search.

Every kernel has a loop implementation (compiled by numba when available) and
a numpy/scipy implementation.  The public names at the bottom of the module
dispatch on :data:`edgestates._backend.HAVE_NUMBA`; both implementations stay
importable so they can be compared directly in tests and benchmarks.
"""

import math

import numpy as np

from ._backend import HAVE_NUMBA, njit

_EPS = 2.220446049250313e-16
_MAX_SWEEPS = 60


# ---------------------------------------------------------------------------
# Hermitian eigendecomposition: cyclic Jacobi with complex rotations


@njit
def _rotation(app, aqq, apq):
    """Return (c, s, phase) zeroing ``apq`` in the 2x2 Hermitian block."""
    g = abs(apq)
    # componentwise: complex division by a subnormal g can overflow
    phase = complex(apq.real / g, apq.imag / g)
    tau = (aqq - app) / (2.0 * g)
    if abs(tau) > 1e150:
        # tau*tau would overflow; t -> 1/(2 tau) asymptotically
        t = 0.5 / tau
    elif tau >= 0.0:
        t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
    else:
        t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
    c = 1.0 / math.sqrt(1.0 + t * t)
    return c, t * c, phase


@njit
def jacobi_eigh_loops(h):
    n = h.shape[0]
    a = np.empty((n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            a[i, j] = 0.5 * (h[i, j] + np.conj(h[j, i]))
    v = np.zeros((n, n), dtype=np.complex128)
    for i in range(n):
        v[i, i] = 1.0
    norm = 0.0
    for i in range(n):
        for j in range(n):
            norm += a[i, j].real ** 2 + a[i, j].imag ** 2
    norm = math.sqrt(norm)
    floor = 1e-30 * norm

    for _ in range(_MAX_SWEEPS):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= floor:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                if mag <= _EPS * math.sqrt(abs(app * aqq)):
                    continue
                rotated = True
                c, s, ph = _rotation(app, aqq, apq)
                sp = s * ph
                sm = s * np.conj(ph)
                # A <- A J with J = [[c, s e^{i phi}], [-s e^{-i phi}, c]]
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - sm * akq
                    a[k, q] = sp * akp + c * akq
                # A <- J^H A
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - sp * aqk
                    a[q, k] = sm * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = c * vkp - sm * vkq
                    v[k, q] = sp * vkp + c * vkq
        if not rotated:
            break

    w = np.empty(n)
    for i in range(n):
        w[i] = a[i, i].real
    order = np.argsort(w, kind="mergesort")
    return w[order], v[:, order]


def eigh_numpy(h):
    h = 0.5 * (h + h.conj().T)
    return np.linalg.eigh(h)


# ---------------------------------------------------------------------------
# Singular values: one-sided (Hestenes) Jacobi on the columns


@njit
def hestenes_svd_loops(m):
    """Singular values (descending) and right singular vectors of ``m``.

    Matrices with fewer rows than columns are padded with zero rows, so the
    trailing singular values are zero up to rounding in that case.
    """
    rows, cols = m.shape
    r = rows if rows >= cols else cols
    a = np.zeros((r, cols), dtype=np.complex128)
    for i in range(rows):
        for j in range(cols):
            a[i, j] = m[i, j]
    v = np.zeros((cols, cols), dtype=np.complex128)
    for i in range(cols):
        v[i, i] = 1.0

    total = 0.0
    for i in range(rows):
        for j in range(cols):
            total += m[i, j].real ** 2 + m[i, j].imag ** 2
    # columns below 1e-100 of the matrix norm are numerically zero; rotating
    # them only churns subnormals
    floor = 1e-200 * total

    for _ in range(_MAX_SWEEPS):
        rotated = False
        for p in range(cols - 1):
            for q in range(p + 1, cols):
                alpha = 0.0
                beta = 0.0
                gamma = 0.0 + 0.0j
                for k in range(r):
                    x = a[k, p]
                    y = a[k, q]
                    alpha += x.real * x.real + x.imag * x.imag
                    beta += y.real * y.real + y.imag * y.imag
                    gamma += np.conj(x) * y
                mag = abs(gamma)
                if mag == 0.0 or min(alpha, beta) <= floor or mag <= _EPS * math.sqrt(alpha) * math.sqrt(beta):
                    continue
                rotated = True
                c, s, ph = _rotation(alpha, beta, gamma)
                sp = s * ph
                sm = s * np.conj(ph)
                for k in range(r):
                    x = a[k, p]
                    y = a[k, q]
                    a[k, p] = c * x - sm * y
                    a[k, q] = sp * x + c * y
                for k in range(cols):
                    x = v[k, p]
                    y = v[k, q]
                    v[k, p] = c * x - sm * y
                    v[k, q] = sp * x + c * y
        if not rotated:
            break

    sv = np.empty(cols)
    for j in range(cols):
        acc = 0.0
        for k in range(r):
            acc += a[k, j].real ** 2 + a[k, j].imag ** 2
        sv[j] = math.sqrt(acc)
    order = np.argsort(-sv, kind="mergesort")
    return sv[order], v[:, order]


def svd_numpy(m):
    rows, cols = m.shape
    if rows < cols:
        m = np.vstack([m, np.zeros((cols - rows, cols), dtype=m.dtype)])
    _, s, vh = np.linalg.svd(m)
    return s, vh.conj().T


# ---------------------------------------------------------------------------
# Product-vector search objective and a Nelder-Mead driver


@njit
def sphere_point(params, m):
    """Unit vector in C^m with real nonnegative leading entry (gauge fixed).

    ``params`` holds m-1 polar angles followed by m-1 phases.
    """
    x = np.empty(m, dtype=np.complex128)
    rest = 1.0
    for k in range(m - 1):
        theta = params[k]
        if k == 0:
            x[0] = rest * math.cos(theta)
        else:
            x[k] = rest * math.cos(theta) * np.exp(1j * params[m - 1 + k - 1])
        rest *= math.sin(theta)
    if m == 1:
        x[0] = 1.0
    else:
        x[m - 1] = rest * np.exp(1j * params[2 * m - 3])
    return x


@njit
def constraint_matrix(x, tau_kernel, kernel):
    """Rows x^* L_j for each L_j in ``tau_kernel`` and x^T K_j for each K_j."""
    nl = tau_kernel.shape[0]
    nk = kernel.shape[0]
    m = x.shape[0]
    n = tau_kernel.shape[2] if nl > 0 else kernel.shape[2]
    out = np.zeros((nl + nk, n), dtype=np.complex128)
    for j in range(nl):
        for c in range(n):
            acc = 0.0 + 0.0j
            for i in range(m):
                acc += np.conj(x[i]) * tau_kernel[j, i, c]
            out[j, c] = acc
    for j in range(nk):
        for c in range(n):
            acc = 0.0 + 0.0j
            for i in range(m):
                acc += x[i] * kernel[j, i, c]
            out[nl + j, c] = acc
    return out


@njit
def edge_objective_loops(params, m, tau_kernel, kernel):
    if tau_kernel.shape[0] + kernel.shape[0] == 0:
        return 0.0
    x = sphere_point(params, m)
    sv, _ = hestenes_svd_loops(constraint_matrix(x, tau_kernel, kernel))
    return sv[sv.shape[0] - 1]


@njit
def nelder_mead_edge(start, step, m, tau_kernel, kernel, max_iter, xtol, ftarget):
    """Minimise :func:`edge_objective_loops` from ``start``.

    Returns (best_params, best_value, iterations).
    """
    d = start.shape[0]
    pts = np.empty((d + 1, d))
    vals = np.empty(d + 1)
    for i in range(d + 1):
        for k in range(d):
            pts[i, k] = start[k]
        if i > 0:
            pts[i, i - 1] += step
        vals[i] = edge_objective_loops(pts[i], m, tau_kernel, kernel)

    it = 0
    while it < max_iter:
        order = np.argsort(vals, kind="mergesort")
        pts = pts[order]
        vals = vals[order]
        if vals[0] < ftarget:
            break
        size = 0.0
        for i in range(1, d + 1):
            for k in range(d):
                diff = abs(pts[i, k] - pts[0, k])
                if diff > size:
                    size = diff
        if size < xtol:
            break
        it += 1

        cen = np.zeros(d)
        for i in range(d):
            cen += pts[i]
        cen /= d
        worst = pts[d].copy()

        xr = cen + (cen - worst)
        fr = edge_objective_loops(xr, m, tau_kernel, kernel)
        if fr < vals[0]:
            xe = cen + 2.0 * (cen - worst)
            fe = edge_objective_loops(xe, m, tau_kernel, kernel)
            if fe < fr:
                pts[d] = xe
                vals[d] = fe
            else:
                pts[d] = xr
                vals[d] = fr
            continue
        if fr < vals[d - 1]:
            pts[d] = xr
            vals[d] = fr
            continue
        if fr < vals[d]:
            xc = cen + 0.5 * (xr - cen)
        else:
            xc = cen + 0.5 * (worst - cen)
        fc = edge_objective_loops(xc, m, tau_kernel, kernel)
        if fc < min(fr, vals[d]):
            pts[d] = xc
            vals[d] = fc
            continue
        for i in range(1, d + 1):
            pts[i] = pts[0] + 0.5 * (pts[i] - pts[0])
            vals[i] = edge_objective_loops(pts[i], m, tau_kernel, kernel)

    best = 0
    for i in range(1, d + 1):
        if vals[i] < vals[best]:
            best = i
    return pts[best].copy(), vals[best], it


def edge_objective_numpy(params, m, tau_kernel, kernel):
    if tau_kernel.shape[0] + kernel.shape[0] == 0:
        return 0.0
    params = np.asarray(params, dtype=float)
    if m == 1:
        x = np.ones(1, dtype=complex)
    else:
        theta = params[: m - 1]
        phases = np.concatenate([[0.0], params[m - 1:]])
        sines = np.concatenate([[1.0], np.cumprod(np.sin(theta))])
        cosines = np.concatenate([np.cos(theta), [1.0]])
        x = sines * cosines * np.exp(1j * phases)
    rows = np.concatenate(
        [np.einsum("i,jik->jk", x.conj(), tau_kernel), np.einsum("i,jik->jk", x, kernel)]
    )
    s, _ = svd_numpy(rows)
    return float(s[-1])


def nelder_mead_numpy(start, step, m, tau_kernel, kernel, max_iter, xtol, ftarget):
    from scipy.optimize import minimize

    d = start.shape[0]
    simplex = np.repeat(start[None, :], d + 1, axis=0)
    simplex[1:] += step * np.eye(d)
    res = minimize(
        edge_objective_numpy,
        start,
        args=(m, tau_kernel, kernel),
        method="Nelder-Mead",
        options={
            "maxiter": max_iter,
            "xatol": xtol,
            "fatol": ftarget,
            "initial_simplex": simplex,
        },
    )
    return np.asarray(res.x, dtype=float), float(res.fun), int(res.nit)


if HAVE_NUMBA:
    eigh = jacobi_eigh_loops
    svd = hestenes_svd_loops
    edge_objective = edge_objective_loops
    nelder_mead = nelder_mead_edge
else:
    eigh = eigh_numpy
    svd = svd_numpy
    edge_objective = edge_objective_numpy
    nelder_mead = nelder_mead_numpy
