"""
Points of C_L G and the action of the units
===========================================

Homomorphisms o_L -> G up to conjugacy are commuting n-tuples of p-elements
up to conjugacy, n = [L : Q_p]. The units of o_L act by precomposition; the
orbits are the closed points, and a point's degree is its orbit size.
"""
from fractions import Fraction

from fglchar.arith import make_field, qp, unramified_field
from fglchar.groups import corpus_groups, cyclic
from fglchar.hkr import (
    all_characters,
    character,
    character_pullback,
    equivariance_check,
    frobenius_orbits,
    hom_classes,
    product_check,
    rank,
    unit_orbits,
)

Q4 = make_field(2, 2, [1, 1, 1], name="Q2(zeta3)")
R2 = make_field(2, 1, [0, 1], 2, [-2, 0, 1], name="Q2(sqrt2)")
groups = corpus_groups()

# %%
# Over Q_3 the units act on Hom(Z_3, Z/3) by powering: degrees [1, 2].
print("Q3, Z/3:", unit_orbits(qp(3), cyclic(3)).degrees)
print("Q2, Z/4:", unit_orbits(qp(2), cyclic(4)).degrees)

# %%
# Over the unramified quadratic extension of Q_2 the units of order 3 move
# the three nonzero homomorphisms to Z/2 around one orbit.
d = unit_orbits(Q4, cyclic(2))
print("Q4, Z/2:", d.degrees, "acting group of order", d.acting_group_order)
print("with Frobenius:", frobenius_orbits(Q4, cyclic(2)).degrees)

# %%
# The rank depends on the field only through n = [L : Q_p].
for name, G in groups.items():
    print(f"{name:6} rank over Q4 = {rank(Q4, G):3}   over Q2(sqrt2) = {rank(R2, G):3}   "
          f"degrees over Q4 = {sorted(unit_orbits(Q4, G).degrees)}")

# %%
# Product formula: points of G0 x G1 match the diagonal action on pairs.
print(product_check(qp(3), cyclic(3), cyclic(3)).line())

# %%
# A character of G pulls back to a section over C_L G. Over an unramified
# field it is compatible with the unit action under the trace pairing.
S3 = groups["S3"]
sign = character(S3, [Fraction(1, 2), 0])
S = hom_classes(qp(2), S3)
for c, value in zip(S.classes, character_pullback(sign, S)):
    print("sign pulled back at", c.rep, "=", [str(v) for v in value])
for chi in all_characters(groups["Q8"]):
    images = [str(v) for v in chi.generator_images]
    print("Q8 character", images, equivariance_check(unramified_field(3, 2), chi).line())
