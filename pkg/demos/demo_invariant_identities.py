# Exact polynomial identities of the K, F, Q invariants
# ======================================================
#
# The three invariants of a 3-form phi (after trivializing the top power of
# the symplectic form) satisfy rigid polynomial relations:
#
#     K(phi)^2        = (Q/4) id
#     K(F(phi))       = -Q K(phi)
#     F(F(phi))       = -Q^2 phi
#
# together with a family of contraction identities.  On the rational backend
# every one of them holds on the nose -- no tolerances anywhere.

import random
from fractions import Fraction

from forms6 import invariants as inv
from forms6.exterior import interior, wedge

rng = random.Random(2)
omega = inv.standard_omega()

coords = inv.PrimitiveCoords(*(Fraction(rng.randint(-5, 5), rng.choice((1, 2)))
                               for _ in range(14)))
phi = inv.coords_to_form(coords)
K = inv.compute_K(phi, omega)
F = inv.compute_F(phi, omega)
Q = inv.compute_Q(phi, omega)
print("random primitive 3-form with Q =", Q)

KK = K.compose(K)
print("K^2 == (Q/4) id :", all(
    KK.rows[i][j] == (Fraction(Q, 4) if i == j else 0)
    for i in range(6) for j in range(6)))

KF = inv.compute_K(F, omega)
print("K(F) == -Q K    :", all(
    KF.rows[i][j] == -Q * K.rows[i][j] for i in range(6) for j in range(6)))

FF = inv.compute_F(F, omega)
print("F(F) == -Q^2 phi:", FF == phi.map_coeffs(lambda x: -Q * Q * x))

X = [Fraction(rng.randint(-3, 3)) for _ in range(6)]
lhs = wedge(interior(X, phi), F)
print("iota_X phi ^ F == -phi ^ iota_X F:", lhs == -wedge(phi, interior(X, F)))

# The 14-coefficient parametrization of primitive forms carries closed-form
# shortcuts for F and Q; they agree with the wedge-level computations exactly.
hats = inv.hat_map(coords)
print("closed-form hat coefficients reproduce -F/2:",
      inv.coords_to_form(hats) == F.map_coeffs(lambda x: Fraction(x, -2)))
print("closed-form quartic reproduces Q:", inv.q_from_coords(coords) == Q)

# Finite differences of Q land on the signed hat table (float backend).
c_float = coords.to_floats()
print("worst gradient-relation error:",
      f"{inv.gradient_relations_check(c_float):.3e}")
