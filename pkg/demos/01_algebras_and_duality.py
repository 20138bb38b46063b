"""Finite p-algebras and their poset duals, end to end.

A p-algebra is a bounded distributive lattice with a unary * where
x ^ y = 0 exactly when x <= y*.  The subdirectly irreducible ones are a
Boolean algebra with a fresh top glued on; `make_bn(n)` builds the one
with n atoms.
"""

from palg import (
    delta, enumerate_embeddings, epsilon, is_isomorphic,
    is_subdirectly_irreducible, make_bn, product, generated_subalgebra,
    validate_palgebra,
)
from palg.serialize import algebra_to_dot

# --- construction and validation -------------------------------------------

b2 = make_bn(2)                      # 5 elements: 0, two atoms, e, top
print("B2:", b2)
print("valid p-algebra:", validate_palgebra(b2).ok)

# star on the Boolean part is complementation; 0* = 1 and 1* = 0
print("star table:", b2.star)

# a broken candidate is rejected with a named law and witness
from palg import FiniteAlgebra
bad = FiniteAlgebra(2, [[0, 0], [0, 1]], [[0, 1], [1, 1]], [0, 1], 0, 1)
print("broken candidate:", validate_palgebra(bad).violations)

# --- products and subalgebras ----------------------------------------------

square = product([make_bn(0), make_bn(0)])   # the four-element Boolean algebra
print("\n2 x 2:", square, "subdirectly irreducible?",
      is_subdirectly_irreducible(square))
print("B2 subdirectly irreducible?", is_subdirectly_irreducible(b2))

sub, inclusion = generated_subalgebra(b2, {1, 2})    # the two atoms
print("atoms generate", sub.size, "of", b2.size, "elements;",
      "inclusion is an embedding:", inclusion.is_embedding())

# --- embeddings --------------------------------------------------------------

res = enumerate_embeddings(make_bn(1), b2)
print("\nembeddings of the 3-chain into B2:", [m.table for m in res.maps])

# --- duality -----------------------------------------------------------------

# delta: join-irreducible elements under the converse order (a fan for B_n)
poset, labels = delta(b2)
print("\ndelta(B2) covers:", poset.covers(), "labels:", labels)

# epsilon: upsets with U* = complement of the downset of U
algebra = epsilon(poset)
ok, witness = is_isomorphic(algebra, b2)
print("epsilon(delta(B2)) isomorphic to B2:", ok, "witness:", witness.table)

# Hasse diagrams render via DOT
print("\n" + algebra_to_dot(make_bn(1)).rstrip())
