# Orbit classification of 3-forms on a symplectic 6-space
# ========================================================
#
# Six GL-orbits stratify the space of 3-forms in dimension six: two open
# ("stable") orbits separated by the sign of the quartic invariant Q, and
# four degenerate orbits told apart by their kernel dimension.  Fixing the
# standard symplectic form refines the picture into Sp-orbits carrying a
# scale modulus mu on the stable ones, plus sign splittings detected by the
# signature of the quadratic form q.

import random
from fractions import Fraction

from forms6 import invariants as inv
from forms6.exterior import pullback
from forms6.invariants import gl_normal_form, sp_normal_form

omega = inv.standard_omega()

print("GL normal forms")
print(f"{'orbit':>6} {'Q':>8} {'dim ker':>8} {'dims (ker phi, ker K, im K, Ann^perp)':>40}")
for label in ("O-", "O+", "O0", "O1", "O3", "O6"):
    phi = gl_normal_form(label)
    Q = inv.compute_Q(phi, omega)
    dims = inv.subspace_dims(phi, omega)
    got = inv.classify_gl(phi)
    assert got == label
    print(f"{got:>6} {str(Q):>8} {dims.ker_phi:>8} {str(tuple(dims)):>40}")

print()
print("Sp normal forms (mu = 3/2 where applicable)")
print(f"{'orbit':>6} {'mu':>10} {'signature':>12}")
mu = Fraction(3, 2)
for label in ("O-+", "O--", "O+", "O0+", "O0-", "O1+", "O1-", "O3"):
    has_mu = label in ("O-+", "O--", "O+")
    phi = sp_normal_form(label, mu) if has_mu else sp_normal_form(label)
    out = inv.classify_sp(phi, omega)
    sig = inv.signature(inv.q_form(phi, omega))
    print(f"{out.label:>6} {str(out.mu or '-'):>10} {str(tuple(sig)):>12}")

# Classification is a property of the orbit, not of the representative:
# push a normal form around by a random invertible map and nothing changes.
rng = random.Random(1)
rows = [[Fraction(rng.randint(-3, 3), rng.choice((1, 2))) for _ in range(6)]
        for _ in range(6)]
from forms6 import linalg
from forms6.exterior import LinearMap6
while linalg.exact_det(rows) == 0:
    rows[0][0] += 1
g = LinearMap6(rows)
moved = pullback(g, gl_normal_form("O0"))
print()
print("random pullback of the O0 normal form classifies as:",
      inv.classify_gl(moved))
