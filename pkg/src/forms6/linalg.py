"""Dense linear algebra helpers for small matrices.

Exact paths run fraction-preserving Gaussian elimination (entries int or
Fraction, never rounded); float paths go through numpy (SVD ranks, symmetric
eigenvalues).  Dispatching helpers pick the exact route whenever every entry
is exact.
"""

from fractions import Fraction

import numpy as np

from .exterior import is_exact


def matrix_is_exact(rows):
    return all(is_exact(x) for r in rows for x in r)


def to_float_matrix(rows):
    return np.array([[float(x) for x in r] for r in rows], dtype=float)


def _rref(rows):
    """Reduced row echelon form; returns (rref rows, pivot columns)."""
    m = [list(r) for r in rows]
    nrow = len(m)
    ncol = len(m[0]) if nrow else 0
    pivots = []
    r = 0
    for c in range(ncol):
        pr = next((i for i in range(r, nrow) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        pv = m[r][c]
        m[r] = [x / pv if not isinstance(x, int) or not isinstance(pv, int)
                else Fraction(x, pv) for x in m[r]]
        for i in range(nrow):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrow:
            break
    return m, pivots


def exact_rank(rows):
    return len(_rref(rows)[1])


def exact_nullspace(rows):
    """Basis of the right null space, as tuples of Fractions."""
    if not rows:
        return []
    ncol = len(rows[0])
    rref, pivots = _rref(rows)
    free = [c for c in range(ncol) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncol
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -Fraction(rref[r][fc])
        basis.append(tuple(v))
    return basis


def exact_solve(rows, rhs):
    """Solve A x = b exactly; returns None when inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    rref, pivots = _rref(aug)
    ncol = len(rows[0])
    if ncol in pivots:
        return None
    x = [Fraction(0)] * ncol
    for r, pc in enumerate(pivots):
        x[pc] = Fraction(rref[r][ncol])
    return tuple(x)


def exact_det(rows):
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def exact_inverse(rows):
    n = len(rows)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(rows)]
    rref, pivots = _rref(aug)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in rref]


def det(rows):
    if matrix_is_exact(rows):
        return exact_det(rows)
    return float(np.linalg.det(to_float_matrix(rows)))


def inverse(rows):
    if matrix_is_exact(rows):
        return exact_inverse(rows)
    return [list(r) for r in np.linalg.inv(to_float_matrix(rows))]


def float_rank(rows, tol=1e-8):
    a = to_float_matrix(rows)
    if not a.size:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def float_nullspace(rows, tol=1e-8):
    a = to_float_matrix(rows)
    _, s, vt = np.linalg.svd(a)
    smax = s[0] if s.size else 0.0
    r = int(np.sum(s > tol * smax)) if smax > 0 else 0
    return [tuple(v) for v in vt[r:]]


def rank(rows, tol=1e-8):
    if matrix_is_exact(rows):
        return exact_rank(rows)
    return float_rank(rows, tol)


def nullspace(rows, tol=1e-8):
    if matrix_is_exact(rows):
        return exact_nullspace(rows)
    return float_nullspace(rows, tol)


def signature_counts(sym, tol=1e-8):
    """Eigenvalue inertia (n_zero, n_plus, n_minus) of a symmetric matrix.

    Eigenvalues within tol * max|eigenvalue| of zero count as zero.  For an
    exact matrix the zero count is cross-checked against the exact rank.
    """
    a = to_float_matrix(sym)
    scale0 = float(np.abs(a).max()) if a.size else 0.0
    if not np.allclose(a, a.T, atol=1e-12 * max(1.0, scale0)):
        raise ValueError("matrix is not symmetric")
    w = np.linalg.eigvalsh(a)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if scale == 0.0:
        return (len(sym), 0, 0)
    cut = tol * scale
    n0 = int(np.sum(np.abs(w) <= cut))
    npos = int(np.sum(w > cut))
    nneg = int(np.sum(w < -cut))
    if matrix_is_exact(sym):
        n0_exact = len(sym) - exact_rank(sym)
        if n0_exact != n0:
            raise ValueError(
                f"signature tolerance misconfigured: float zeros {n0}, exact {n0_exact}")
    return (n0, npos, nneg)


def leading_minors(rows):
    """Leading principal minors, exact when entries are exact."""
    return [det([r[: k + 1] for r in rows[: k + 1]]) for k in range(len(rows))]


def is_positive_definite(rows):
    """Sylvester criterion: all leading principal minors positive."""
    return all(m > 0 for m in leading_minors(rows))
