"""A tour of the walk's spectrum
================================

The lazy k-flip kernel is diagonal in the character basis of (Z/2Z)^n.
Level j of the Fourier spectrum carries binomial(n, j) characters, all
with the same rational eigenvalue, so the full 2^n spectrum compresses
to n + 1 exact numbers.
"""

from cubemix import (
    CyclicWalkSpec,
    WalkSpec,
    cube_spectrum,
    verify_eigenvalue_three_quarters,
    zmn_spectrum,
)

# The (6, 3) walk in full: one eigenvalue per level with multiplicity.
table = cube_spectrum(WalkSpec(6, 3))
print("spectrum of the lazy 3-flip walk on the 6-cube")
for row in table.rows:
    print(f"  level {row.level}: eigenvalue {str(row.value):>5}  multiplicity {row.multiplicity}")
print(f"ergodic: {not table.non_ergodic}, largest nontrivial |eigenvalue|: {table.max_nontrivial_magnitude()}")

# Two corners where ergodicity genuinely fails.  Flipping all n
# coordinates traps the walker on a pair of antipodal states even with
# laziness, and an even flip size preserves weight parity at level n.
print()
for n, k in ((5, 5), (6, 2)):
    t = cube_spectrum(WalkSpec(n, k))
    print(f"(n={n}, k={k}) ergodic: {not t.non_ergodic}")

# For the half flip k = n/2 with n = 2 mod 4, every odd level sits
# exactly at the laziness constant 1/2 and nothing exceeds 3/4 in
# absolute value.  The verifier re-derives each eigenvalue three ways
# before certifying.
print()
print("three-quarters certificates for half flips")
for n in (6, 54, 102):
    cert = verify_eigenvalue_three_quarters(n)
    print(
        f"  n={n:>3}: bound holds {cert.bound_holds}, odd levels = 1/2 {cert.odd_levels_equal_p},"
        f" max |eig| = {cert.max_abs}"
    )

# The cyclic cousin randomizes k coordinates of (Z/mZ)^n instead of
# flipping bits.  Its eigenvalues do not depend on m at all; only the
# multiplicities remember the alphabet.
print()
for m in (2, 3, 5):
    t = zmn_spectrum(CyclicWalkSpec(4, m, 2))
    eigs = [str(r.value) for r in t.rows]
    mults = [r.multiplicity for r in t.rows]
    print(f"m={m}: eigenvalues {eigs} multiplicities {mults}")
