"""Steiner triple systems, planarity, and the pasted posets.

Every pair of points lies in exactly one 3-element block; x . y is the
third point of that block.  `poset_of` turns a system into the height-1
poset with blocks below their points, and `paste_w(m)` glues the order-7
system's poset to an m-fan along two maximal points.
"""

from palg import (
    collapse_pasting, construct_sts, disjoint_union, enumerate_quasigroup_homs,
    epsilon, find_surjective_ppmorphism, is_planar, make_p1, max_up, paste_w,
    poset_of, to_quasigroup, validate_ppmap, validate_steiner,
)
from palg.steiner import fano_system

# --- systems and quasigroups -------------------------------------------------

for v in (7, 9, 13):
    s = construct_sts(v)
    q = to_quasigroup(s)
    print(f"order {v}: {len(s.blocks)} blocks, valid={validate_steiner(s).ok}, "
          f"planar={is_planar(q)}")

# planar + different orders forces every cross homomorphism to be constant
q7 = to_quasigroup(fano_system())
q13 = to_quasigroup(construct_sts(13))
down = enumerate_quasigroup_homs(q13, q7)
up = enumerate_quasigroup_homs(q7, q13)
print("\nhoms 13 -> 7:", len(down.maps), "all constant:",
      all(h.is_constant() for h in down.maps))
print("homs 7 -> 13:", len(up.maps), "all constant:",
      all(h.is_constant() for h in up.maps))
endo = enumerate_quasigroup_homs(q7, q7)
print("endomorphisms of the order-7 system:", len(endo.maps),
      "(7 constants + the automorphisms)")

# --- the pasted poset ---------------------------------------------------------

w4 = paste_w(4)
print("\nW4 has", w4.size, "points; the fan bottom sees",
      sorted(max_up(w4, w4.size - 1)), "above it")

# the explicit collapse onto the 3-fan is a surjective pp-morphism...
h = collapse_pasting(4)
print("collapse W4 ->> 3-fan valid:", validate_ppmap(h).ok,
      "surjective:", h.is_surjective())

# ...and the search finds exactly that map as its least witness
found = find_surjective_ppmorphism(w4, make_p1(3))
print("search witness equals the explicit map:", found.witness.table == h.table)

# but nothing from triple-system posets can cover a 4-fan: every point of
# a system poset sees at most 3 maximals, and the pasted bottom cannot
# separate the two glued points
src = disjoint_union([poset_of(construct_sts(13)), w4])
res = find_surjective_ppmorphism(src, make_p1(4))
print("P(S13) + W4 onto the 4-fan:", res.status, f"({res.nodes} nodes)")

# the order-7 poset as target, however, is reachable: the pasted copy of
# it maps onto it identically (this is why uniqueness arguments must
# avoid the order-7 system; see the README notes)
res = find_surjective_ppmorphism(src, poset_of(fano_system()))
print("P(S13) + W4 onto P(order-7):", res.status)

# dually: the 4-atom SI is not in the quasivariety of the pasted algebra
from palg import finite_membership, make_bn
w4_algebra = epsilon(w4)
print("\nepsilon(W4) has", w4_algebra.size, "elements")
print("B3 in its quasivariety:", finite_membership(make_bn(3), [w4_algebra]).status)
print("B4 in its quasivariety:", finite_membership(make_bn(4), [w4_algebra]).status)
