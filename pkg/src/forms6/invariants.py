"""Equivariant invariants and orbit classification of 3-forms on (V^6, omega).

Built around three polynomial invariants of a 3-form phi, trivialized by the
volume form omega^3/3!:

* ``compute_K``  -- the quadratic endomorphism, iota_{K v} vol = -iota_v phi ^ phi
* ``compute_F``  -- the cubic 3-form, F(v1,v2,v3) = -2 phi(K v1, v2, v3)
* ``compute_Q``  -- the quartic scalar, Q = -(phi ^ F) / vol

together with the symmetric bilinear form ``q_form``, GL and Sp orbit
classification, and the 14-coefficient parametrization of primitive 3-forms
(``PrimitiveCoords``) with its closed-form image ``hat_map`` under -F/2.
"""

import math
from fractions import Fraction
from typing import NamedTuple

from . import linalg
from .exterior import (DIM, DEFAULT_TOL, Form, GradeError, LinearMap6, basis,
                       interior, is_exact, pullback, vector_of_five_form, wedge)

# GL(V) orbit labels
O_MINUS = "O-"
O_PLUS = "O+"
O_0 = "O0"
O_1 = "O1"
O_3 = "O3"
O_6 = "O6"

GL_LABELS = (O_MINUS, O_PLUS, O_0, O_1, O_3, O_6)

# Sp(V, omega) orbit labels on primitive 3-forms
SP_LABELS = ("O-+", "O--", "O+", "O0+", "O0-", "O1+", "O1-", "O3", "O6")


def standard_omega():
    """The standard symplectic form e^12 + e^34 + e^56."""
    return basis(1, 2) + basis(3, 4) + basis(5, 6)


def standard_volume():
    return basis(1, 2, 3, 4, 5, 6)


def volume_of(omega):
    """omega^3/3!; raises on degenerate omega."""
    if omega.grade != 2:
        raise GradeError("symplectic form must have grade 2")
    w3 = wedge(wedge(omega, omega), omega)
    vol = w3 / 6 if not w3.is_exact() else w3.map_coeffs(lambda c: Fraction(c, 6))
    if not vol:
        raise ValueError("degenerate symplectic form: omega^3 = 0")
    return vol


def _resolve_vol(omega, vol):
    if vol is not None:
        if not vol or vol.grade != DIM:
            raise ValueError("volume form must be a nonzero 6-form")
        return vol
    if omega is None:
        raise ValueError("need a symplectic form or a volume form")
    return volume_of(omega)


def compute_K(phi, omega=None, vol=None):
    """The endomorphism K(phi) relative to vol = omega^3/3! (or a given vol).

    Column j is K(e_j), the unique vector with
    iota_{K e_j} vol = -iota_{e_j} phi ^ phi.
    """
    if phi.grade != 3:
        raise GradeError("K is defined for 3-forms")
    vol = _resolve_vol(omega, vol)
    cols = []
    for j in range(DIM):
        ej = [0] * DIM
        ej[j] = 1
        beta = -wedge(interior(ej, phi), phi)
        cols.append(vector_of_five_form(beta, vol))
    return LinearMap6([[cols[j][i] for j in range(DIM)] for i in range(DIM)])


def _contractions_by_K(phi, K):
    """iota_{K e_i} phi for each basis vector, reused by F and friends."""
    rows = K.rows
    return [interior([rows[l][i] for l in range(DIM)], phi) for i in range(DIM)]


def compute_F(phi, omega=None, vol=None, tol=DEFAULT_TOL):
    """The 3-form F(phi), F(v1,v2,v3) = -2 phi(K v1, v2, v3), trivialized by vol.

    Alternation in the first slot against the others is not formal, so it is
    verified internally; a failure indicates a broken K and raises.
    """
    vol = _resolve_vol(omega, vol)
    K = compute_K(phi, vol=vol)
    mphi = _contractions_by_K(phi, K)  # mphi[i] = iota_{K e_i} phi, a 2-form

    def pair(m2, j, k):
        # value of a 2-form on (e_j, e_k), axes 1-based
        mask = (1 << (j - 1)) | (1 << (k - 1))
        c = m2.coeffs.get(mask, 0)
        return c if j < k else -c

    out = {}
    exact = phi.is_exact() and vol.is_exact()
    for i in range(1, DIM + 1):
        for j in range(i + 1, DIM + 1):
            # antisymmetry of phi(K.,.,.) in its first two slots is a theorem,
            # not bookkeeping: check it on every pair
            for k in range(1, DIM + 1):
                if k == i or k == j:
                    continue
                lhs = pair(mphi[i - 1], j, k)
                rhs = pair(mphi[j - 1], i, k)
                if exact:
                    bad = lhs + rhs != 0
                else:
                    bad = abs(float(lhs + rhs)) > tol * max(1.0, abs(float(lhs)), abs(float(rhs)))
                if bad:
                    raise ArithmeticError(
                        f"F(phi) is not alternating at ({i},{j},{k}); K is inconsistent")
            for k in range(j + 1, DIM + 1):
                c = -2 * pair(mphi[i - 1], j, k)
                if c != 0:
                    out[(1 << (i - 1)) | (1 << (j - 1)) | (1 << (k - 1))] = c
    return Form(3, out)


def compute_Q(phi, omega=None, vol=None):
    """The scalar Q(phi) = -(phi ^ F(phi)) / vol."""
    vol = _resolve_vol(omega, vol)
    F = compute_F(phi, vol=vol)
    top = -wedge(phi, F)
    c = top.coeffs.get((1 << DIM) - 1, 0)
    v = vol.coeffs[(1 << DIM) - 1]
    if isinstance(c, int) and isinstance(v, int):
        return Fraction(c, v)
    return c / v


def omega_matrix(omega):
    """W[i][j] = omega(e_i, e_j)."""
    w = [[0] * DIM for _ in range(DIM)]
    for m, c in omega.coeffs.items():
        i, j = (b for b in range(DIM) if m >> b & 1)
        w[i][j] = c
        w[j][i] = -c
    return w


def q_form(phi, omega, tol=DEFAULT_TOL):
    """The symmetric bilinear form q(omega, phi) of a primitive 3-form.

    Computed three ways -- omega(v1, K v2), (iota_{v1}phi ^ iota_{v2}phi ^
    omega)/vol, and -<iota_{v1}phi, iota_{v2}phi> under the pairing on
    2-forms induced by omega -- which must agree; disagreement or asymmetry
    raises an internal consistency error.  The agreement (and the symmetry
    of the first formula) holds on the primitive subspace only, which is the
    natural domain of this form; non-primitive input is rejected.
    """
    res = primitivity_residual(phi, omega)
    if res > tol * max(1.0, phi.max_abs()):
        raise ValueError(f"q-form needs a primitive 3-form; |omega ^ phi| = {res}")
    vol = volume_of(omega)
    volc = vol.coeffs[(1 << DIM) - 1]
    W = omega_matrix(omega)
    K = compute_K(phi, vol=vol)

    # route 1: omega(v1, K v2) = (W K)_{ij}
    q1 = [[sum(W[i][l] * K.rows[l][j] for l in range(DIM)) for j in range(DIM)]
          for i in range(DIM)]

    # route 2: top-degree wedge quotient
    contr = []
    for i in range(DIM):
        ei = [0] * DIM
        ei[i] = 1
        contr.append(interior(ei, phi))
    q2 = [[None] * DIM for _ in range(DIM)]
    for i in range(DIM):
        for j in range(i, DIM):
            top = wedge(wedge(contr[i], contr[j]), omega)
            c = top.coeffs.get((1 << DIM) - 1, 0)
            val = Fraction(c, volc) if isinstance(c, int) and isinstance(volc, int) else c / volc
            q2[i][j] = val
            q2[j][i] = val

    # route 3: pairing of 2-forms induced by omega (determinant extension of
    # the dual pairing omega1 = -W^{-1})
    Winv = linalg.inverse(W)
    O1 = [[-Winv[i][j] for j in range(DIM)] for i in range(DIM)]

    def pair2(a, b):
        tot = 0
        for ma, ca in a.coeffs.items():
            i, j = (x for x in range(DIM) if ma >> x & 1)
            for mb, cb in b.coeffs.items():
                k, l = (x for x in range(DIM) if mb >> x & 1)
                g = O1[i][k] * O1[j][l] - O1[i][l] * O1[j][k]
                if g:
                    tot += ca * cb * g
        return tot

    q3 = [[-pair2(contr[i], contr[j]) for j in range(DIM)] for i in range(DIM)]

    scale = max(1.0, phi.max_abs() ** 2)
    for i in range(DIM):
        for j in range(DIM):
            d12 = abs(float(q1[i][j] - q2[i][j]))
            d13 = abs(float(q1[i][j] - q3[i][j]))
            dsym = abs(float(q1[i][j] - q1[j][i]))
            if max(d12, d13, dsym) > tol * scale:
                raise ArithmeticError(
                    f"q-form routes disagree at ({i},{j}): "
                    f"{q1[i][j]}, {q2[i][j]}, {q3[i][j]}")
    return q1


class SignatureTriple(NamedTuple):
    n0: int
    nplus: int
    nminus: int


def signature(sym, tol=1e-8):
    """Inertia (n_zero, n_plus, n_minus) of a symmetric matrix."""
    return SignatureTriple(*linalg.signature_counts(sym, tol))


class SubspaceDims(NamedTuple):
    ker_phi: int
    ker_K: int
    im_K: int
    ann_perp: int


def subspace_dims(phi, omega=None, vol=None, tol=1e-8):
    """Dimensions (ker phi, ker K, im K, (Ann phi)^perp)."""
    vol = _resolve_vol(omega if omega is not None else standard_omega(), vol)
    # v -> iota_v phi as a 15 x 6 matrix over the 2-form basis
    cols = []
    for j in range(DIM):
        ej = [0] * DIM
        ej[j] = 1
        cols.append(interior(ej, phi))
    masks2 = sorted({m for c in cols for m in c.coeffs})
    m1 = [[cols[j].coeffs.get(m, 0) for j in range(DIM)] for m in masks2] or [[0] * DIM]
    ker_phi = DIM - linalg.rank(m1, tol)

    K = compute_K(phi, vol=vol)
    rk = linalg.rank(K.rows, tol)

    # alpha -> alpha ^ phi as a 15 x 6 matrix over the 4-form basis
    wcols = [wedge(basis(j + 1), phi) for j in range(DIM)]
    masks4 = sorted({m for c in wcols for m in c.coeffs})
    m2 = [[wcols[j].coeffs.get(m, 0) for j in range(DIM)] for m in masks4] or [[0] * DIM]
    ann_perp = linalg.rank(m2, tol)

    return SubspaceDims(ker_phi, DIM - rk, rk, ann_perp)


class ClassificationError(ValueError):
    """Raised when tolerancing produces an impossible orbit datum."""


def _q_is_zero(phi, Q, tol):
    if is_exact(Q):
        return Q == 0
    scale = max(1.0, phi.max_abs()) ** 4
    return abs(float(Q)) <= tol * scale


def classify_gl(phi, vol=None, tol=1e-8):
    """GL(V) orbit label of a 3-form.

    Stable orbits by the sign of Q; on the Q = 0 hypersurface the kernel
    dimension (0, 1, 3, 6) separates the remaining orbits.
    """
    if vol is None:
        vol = standard_volume()
    Q = compute_Q(phi, vol=vol)
    if not _q_is_zero(phi, Q, tol):
        return O_MINUS if Q < 0 else O_PLUS
    k = subspace_dims(phi, vol=vol, tol=tol).ker_phi
    table = {0: O_0, 1: O_1, 3: O_3, 6: O_6}
    if k not in table:
        raise ClassificationError(
            f"dim ker phi = {k} is impossible for a 3-form; check tolerances")
    return table[k]


class SpOrbit(NamedTuple):
    label: str
    mu: object = None  # positive scalar for the stable orbits, else None


def _fourth_root(x):
    if is_exact(x):
        x = float(x)
    return x ** 0.25


def primitivity_residual(phi, omega):
    """Max coefficient of omega ^ phi (0 iff phi is primitive)."""
    return wedge(omega, phi).max_abs()


def classify_sp(phi, omega=None, tol=1e-8):
    """Sp(V, omega) orbit of a primitive 3-form, with mu for stable orbits.

    mu is recovered from Q: Q = -16 mu^4 on the O- orbits and Q = 4 mu^4 on
    O+.  Inside Q = 0 the label follows the signature of the q-form.
    """
    if omega is None:
        omega = standard_omega()
    res = primitivity_residual(phi, omega)
    if res > tol * max(1.0, phi.max_abs()):
        raise ValueError(f"form is not primitive: |omega ^ phi| = {res}")
    Q = compute_Q(phi, omega)
    sig = signature(q_form(phi, omega, tol), tol)
    if not _q_is_zero(phi, Q, tol):
        if Q < 0:
            mu = _fourth_root(-Q / 16)
            if sig == (0, 6, 0):
                return SpOrbit("O-+", mu)
            if sig == (0, 2, 4):
                return SpOrbit("O--", mu)
            raise ClassificationError(f"Q<0 with unexpected signature {sig}")
        mu = _fourth_root(Q / 4)
        if sig != (0, 3, 3):
            raise ClassificationError(f"Q>0 with unexpected signature {sig}")
        return SpOrbit("O+", mu)
    k = subspace_dims(phi, omega, tol=tol).ker_phi
    if k == 0:
        if sig == (3, 3, 0):
            return SpOrbit("O0+")
        if sig == (3, 1, 2):
            return SpOrbit("O0-")
        raise ClassificationError(f"nondegenerate unstable form with signature {sig}")
    if k == 1:
        if sig == (5, 1, 0):
            return SpOrbit("O1+")
        if sig == (5, 0, 1):
            return SpOrbit("O1-")
        raise ClassificationError(f"kernel-1 form with signature {sig}")
    if k == 3:
        return SpOrbit("O3")
    if k == 6:
        return SpOrbit("O6")
    raise ClassificationError(f"dim ker phi = {k} is impossible")


# --- the 14-coefficient parametrization of primitive 3-forms ----------------

class PrimitiveCoords(NamedTuple):
    """Coefficients of a primitive 3-form in the standard basis below."""
    A: object = 0
    B: object = 0
    C: object = 0
    D: object = 0
    E: object = 0
    F: object = 0
    G: object = 0
    H: object = 0
    I: object = 0
    J: object = 0
    K: object = 0
    L: object = 0
    M: object = 0
    N: object = 0

    def to_floats(self):
        return PrimitiveCoords(*(float(x) for x in self))


COORD_NAMES = PrimitiveCoords._fields

# basis of primitive 3-forms matching PrimitiveCoords slot by slot:
# eight pure masks, then six two-mask combinations e^a ^ (pair - pair)
PRIMITIVE_BASIS = (
    basis(1, 3, 5),
    basis(1, 3, 6),
    basis(1, 4, 5),
    basis(1, 4, 6),
    basis(2, 3, 5),
    basis(2, 3, 6),
    basis(2, 4, 5),
    basis(2, 4, 6),
    basis(1, 3, 4) - basis(1, 5, 6),
    basis(2, 3, 4) - basis(2, 5, 6),
    basis(1, 2, 3) - basis(3, 5, 6),
    basis(1, 2, 4) - basis(4, 5, 6),
    basis(1, 2, 5) - basis(3, 4, 5),
    basis(1, 2, 6) - basis(3, 4, 6),
)

_LEAD_MASKS = tuple(sorted(f.coeffs)[0] for f in PRIMITIVE_BASIS)


def coords_to_form(c):
    """The primitive 3-form with the given coefficients (standard omega)."""
    out = Form.zero(3)
    for x, b in zip(c, PRIMITIVE_BASIS):
        if x != 0:
            out = out + b * x
    return out


def form_to_coords(phi, tol=DEFAULT_TOL):
    """Coefficients of a primitive 3-form; rejects non-primitive input."""
    if phi.grade != 3:
        raise GradeError("expected a 3-form")
    res = primitivity_residual(phi, standard_omega())
    exact = phi.is_exact()
    if (res != 0) if exact else (res > tol * max(1.0, phi.max_abs())):
        raise ValueError(f"form is not primitive: |omega ^ phi| = {res}")
    return PrimitiveCoords(*(phi.coeffs.get(m, 0) for m in _LEAD_MASKS))


def hat_map(c):
    """Closed-form coefficients of -F(phi)/2 for phi = coords_to_form(c).

    This is the polynomial shortcut for the cubic invariant on primitive
    forms; coords_to_form(hat_map(c)) == -compute_F(coords_to_form(c))/2
    exactly on the rational backend.
    """
    A, B, C, D, E, F, G, H, I, J, K, L, M, N = c
    hA = A * (A * H - B * G - C * F - D * E + 2 * I * J + 2 * K * L + 2 * M * N) \
        - 2 * (B * M**2 + C * K**2 + E * I**2 - B * C * E + 2 * I * K * M)
    hB = B * (A * H - B * G + C * F + D * E + 2 * I * J + 2 * K * L - 2 * M * N) \
        - 2 * (-A * N**2 + D * K**2 + F * I**2 + A * D * F + 2 * I * K * N)
    hC = C * (A * H + B * G - C * F + D * E + 2 * I * J - 2 * K * L + 2 * M * N) \
        - 2 * (-A * L**2 + D * M**2 + G * I**2 + A * D * G + 2 * I * L * M)
    hD = D * (-A * H - B * G - C * F + D * E + 2 * I * J - 2 * K * L - 2 * M * N) \
        - 2 * (-B * L**2 - C * N**2 + H * I**2 - B * C * H + 2 * I * L * N)
    hE = E * (A * H + B * G + C * F - D * E - 2 * I * J + 2 * K * L + 2 * M * N) \
        - 2 * (-A * J**2 + F * M**2 + G * K**2 + A * F * G + 2 * J * K * M)
    hF = F * (-A * H - B * G + C * F - D * E - 2 * I * J + 2 * K * L - 2 * M * N) \
        - 2 * (-B * J**2 + H * K**2 - E * N**2 - B * E * H + 2 * J * K * N)
    hG = G * (-A * H + B * G - C * F - D * E - 2 * I * J - 2 * K * L + 2 * M * N) \
        - 2 * (-C * J**2 - E * L**2 + H * M**2 - C * E * H + 2 * J * L * M)
    hH = H * (-A * H + B * G + C * F + D * E - 2 * I * J - 2 * K * L - 2 * M * N) \
        - 2 * (-D * J**2 - F * L**2 - G * N**2 + D * F * G + 2 * J * L * N)
    hI = I * (A * H - B * G - C * F + D * E) - 2 * J * (A * D - B * C) \
        + 2 * (A * L * N - B * L * M - C * K * N + D * K * M)
    hJ = J * (-A * H + B * G + C * F - D * E) + 2 * I * (E * H - F * G) \
        + 2 * (E * L * N - F * L * M - G * K * N + H * K * M)
    hK = K * (A * H - B * G + C * F - D * E) - 2 * L * (A * F - B * E) \
        + 2 * (A * J * N - B * J * M - E * I * N + F * I * M)
    hL = L * (-A * H + B * G - C * F + D * E) + 2 * K * (C * H - D * G) \
        + 2 * (C * J * N - D * J * M - G * I * N + H * I * M)
    hM = M * (A * H + B * G - C * F - D * E) - 2 * N * (A * G - C * E) \
        + 2 * (A * J * L - C * J * K - E * I * L + G * I * K)
    hN = N * (-A * H - B * G + C * F + D * E) + 2 * M * (B * H - D * F) \
        + 2 * (B * J * L - D * J * K - F * I * L + H * I * K)
    return PrimitiveCoords(hA, hB, hC, hD, hE, hF, hG, hH, hI, hJ, hK, hL, hM, hN)


def q_from_coords(c):
    """Q(phi) for phi = coords_to_form(c), via the closed quartic polynomial."""
    A, B, C, D, E, F, G, H, I, J, K, L, M, N = c
    q4 = 2 * (A**2 * H**2 + B**2 * G**2 + C**2 * F**2 + D**2 * E**2) \
        - (A * H + B * G + C * F + D * E)**2 + 4 * (A * D * F * G + B * C * E * H) \
        + 4 * I**2 * (F * G - E * H) + 4 * J**2 * (B * C - A * D) \
        + 4 * I * J * (A * H - B * G - C * F + D * E) \
        + 4 * K**2 * (D * G - C * H) + 4 * L**2 * (B * E - A * F) \
        + 4 * K * L * (A * H - B * G + C * F - D * E) \
        + 4 * M**2 * (D * F - B * H) + 4 * N**2 * (C * E - A * G) \
        + 4 * M * N * (A * H + B * G - C * F - D * E) \
        + 8 * (A * J * L * N - B * J * L * M - C * J * K * N + D * J * K * M
               - E * I * L * N + F * I * L * M + G * I * K * N - H * I * K * M)
    return 4 * q4


# signed pairing between dQ and the hat coefficients: dQ/dc_i = factor * hat_j
GRADIENT_TABLE = (
    ("A", -8, "H"), ("B", 8, "G"), ("C", 8, "F"), ("D", -8, "E"),
    ("E", 8, "D"), ("F", -8, "C"), ("G", -8, "B"), ("H", 8, "A"),
    ("I", -16, "J"), ("J", 16, "I"), ("K", -16, "L"), ("L", 16, "K"),
    ("M", -16, "N"), ("N", 16, "M"),
)


def gradient_relations_check(c, h=1e-5):
    """Worst relative error of central differences of Q against the hat table."""
    c = c.to_floats()
    hats = hat_map(c)
    worst = 0.0
    for name, factor, hat_name in GRADIENT_TABLE:
        i = COORD_NAMES.index(name)
        up = list(c)
        dn = list(c)
        up[i] += h
        dn[i] -= h
        fd = (q_from_coords(PrimitiveCoords(*up))
              - q_from_coords(PrimitiveCoords(*dn))) / (2 * h)
        target = factor * getattr(hats, hat_name)
        err = abs(fd - target) / max(1.0, abs(target))
        worst = max(worst, err)
    return worst


# --- stabilizer of the O0 normal form ---------------------------------------

# coframe order (dx1, dx2, dx3, dy1, dy2, dy3) -> axes (1, 3, 5, 2, 4, 6)
_BLOCK_TO_AXIS = (1, 3, 5, 2, 4, 6)


def o0_normal_form():
    """e^146 + e^236 + e^245, i.e. dx1^dy2^dy3 + dx2^dy3^dy1 + dx3^dy1^dy2."""
    return basis(1, 4, 6) + basis(2, 3, 6) + basis(2, 4, 5)


def block_matrix_to_map(block):
    """Convert a 6x6 matrix in the (dx, dy) coframe basis into the LinearMap6
    whose pullback realizes it, under dx^j = e^{2j-1}, dy^j = e^{2j}.

    The coframe column transforms by the transpose, g* c^a = sum_b M[b][a] c^b,
    so a lower-triangular block matrix [[A,0],[B,C]] keeps the span of the dy
    covectors invariant (B feeds dy components into the images of the dx)."""
    rows = [[0] * DIM for _ in range(DIM)]
    for a in range(DIM):
        for b in range(DIM):
            rows[_BLOCK_TO_AXIS[a] - 1][_BLOCK_TO_AXIS[b] - 1] = block[b][a]
    return LinearMap6(rows)


class StabilizerCheck(NamedTuple):
    stabilizes_F: bool
    stabilizes_phi: bool
    reason: str = ""


def stabilizer_predicates(block, tol=DEFAULT_TOL):
    """Block conditions for stabilizing F(phi0) and phi0 for the normal form
    phi0 = o0_normal_form(), with block = [[A, 0], [B, C]] in (dx, dy) order.

    Stabilizing F(phi0) (a 3-form twisted by a volume factor) needs the
    lower-triangular shape and det A det^2 C = 1; stabilizing phi0 further
    needs A = C/det C and Tr(B C^{-1}) = 0.
    """
    block = [list(r) for r in block]
    A = [r[:3] for r in block[:3]]
    Z = [r[3:] for r in block[:3]]
    B = [r[:3] for r in block[3:]]
    C = [r[3:] for r in block[3:]]

    exact = linalg.matrix_is_exact(block)

    def near(x, y):
        return x == y if exact else abs(float(x - y)) <= tol * max(1.0, abs(float(y)))

    if any(not near(x, 0) for r in Z for x in r):
        return StabilizerCheck(False, False, "upper-right block is nonzero")
    detC = linalg.det(C)
    if detC == 0 or (not exact and abs(float(detC)) <= tol):
        return StabilizerCheck(False, False, "C block is singular")
    detA = linalg.det(A)
    f_ok = near(detA * detC * detC, 1)
    if not f_ok:
        return StabilizerCheck(False, False, f"det A det^2 C = {detA * detC * detC}")
    Cinv = linalg.inverse(C)
    a_ok = all(near(A[i][j] * detC, C[i][j]) for i in range(3) for j in range(3))
    tr = sum(B[i][k] * Cinv[k][i] for i in range(3) for k in range(3))
    phi_ok = a_ok and near(tr, 0)
    reason = "" if phi_ok else (
        "A != C/det C" if not a_ok else f"Tr(B C^-1) = {tr}")
    return StabilizerCheck(True, phi_ok, reason)


# --- Hitchin data on the stable orbit O- ------------------------------------

class HitchinData(NamedTuple):
    J: LinearMap6
    normsq: object   # |phi|^2 = sqrt(-Q)
    phihat: Form     # J-pullback of phi
    lam: object      # lambda(phi) = Q/4


def _exact_sqrt(x):
    """sqrt of a nonnegative Fraction if it is a perfect square, else float."""
    if is_exact(x):
        fr = Fraction(x)
        rn = math.isqrt(fr.numerator)
        rd = math.isqrt(fr.denominator)
        if rn * rn == fr.numerator and rd * rd == fr.denominator:
            return Fraction(rn, rd)
    return math.sqrt(float(x))


def hitchin_data(phi, omega=None, tol=1e-8):
    """Almost complex structure data for phi with Q(phi) < 0.

    J = K/sqrt(-lambda) squares to -id, phihat = J* phi, and
    F = |phi|^2 phihat with |phi|^2 = sqrt(-Q), lambda = Q/4.
    """
    if omega is None:
        omega = standard_omega()
    Q = compute_Q(phi, omega)
    if _q_is_zero(phi, Q, tol) or Q > 0:
        raise ValueError(f"not in O-: Q(phi) = {Q} >= 0")
    normsq = _exact_sqrt(-Q)
    lam = Q / 4 if not is_exact(Q) else Fraction(Q, 4)
    K = compute_K(phi, omega)
    root = _exact_sqrt(-lam)  # = normsq / 2
    if is_exact(root) and linalg.matrix_is_exact(K.rows):
        J = LinearMap6([[Fraction(x) / root for x in r] for r in K.rows])
    else:
        J = LinearMap6([[float(x) / float(root) for x in r] for r in K.rows])
    phihat = pullback(J, phi)
    return HitchinData(J, normsq, phihat, lam)


# --- normal forms ------------------------------------------------------------

def gl_normal_form(label):
    forms = {
        O_MINUS: basis(1, 3, 5) - basis(1, 4, 6) - basis(2, 3, 6) - basis(2, 4, 5),
        O_PLUS: basis(1, 2, 3) + basis(4, 5, 6),
        O_0: basis(1, 4, 6) + basis(2, 3, 6) + basis(2, 4, 5),
        O_1: basis(1, 3, 5) + basis(2, 4, 5),
        O_3: basis(1, 3, 5),
        O_6: Form.zero(3),
    }
    return forms[label]


def sp_normal_form(label, mu=1):
    """Normal forms of the Sp orbits (standard omega)."""
    e = basis
    forms = {
        "O-+": (e(1, 3, 5) - e(1, 4, 6) - e(2, 3, 6) - e(2, 4, 5)) * mu,
        "O--": (e(1, 3, 5) - e(1, 4, 6) + e(2, 3, 6) + e(2, 4, 5)) * mu,
        "O+": (e(1, 3, 5) + e(2, 4, 6)) * mu,
        "O0+": e(1, 4, 6) + e(2, 3, 6) + e(2, 4, 5),
        "O0-": e(1, 4, 6) - e(2, 3, 6) - e(2, 4, 5),
        "O1+": e(1, 3, 5) - e(2, 4, 5),
        "O1-": e(1, 3, 5) + e(2, 4, 5),
        "O3": e(1, 3, 5),
        "O6": Form.zero(3),
    }
    return forms[label]
