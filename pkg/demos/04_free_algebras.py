"""Finitely generated free algebras and what their duals look like.

`build_free(m, k)` realizes the k-generated free algebra of the variety
generated by the m-atom subdirectly irreducible; for m >= 2^k it is the
free p-algebra itself.
"""

from palg import (
    build_free, check_free_qb3, check_special_structural, check_under_each,
    cover_fixture_checks, delta, enumerate_homomorphisms, epsilon, make_bn,
    make_p1, make_qb, satisfies,
)

# --- sizes --------------------------------------------------------------------

for m, k in [(1, 1), (2, 1), (3, 1), (2, 2), (3, 2), (4, 2)]:
    f = build_free(m, k)
    print(f"free algebra (m={m}, k={k}): {f.algebra.size} elements")
# m >= 2 stabilizes at 7 for one generator: that is the free p-algebra F(1)

# --- the universal property, concretely ---------------------------------------

f1 = build_free(2, 1)
gen = f1.generators[0]
homs = enumerate_homomorphisms(f1.algebra, make_bn(2))
images = sorted(h.table[gen] for h in homs.maps)
print("\nhoms F(1) -> B2 hit every element exactly once:", images)

# --- dual structure -----------------------------------------------------------

f32 = build_free(3, 2)
poset, _ = delta(f32.algebra)
print(f"\ndual of the (3,2) free algebra: {poset.size} points,",
      bin(poset.maximal_mask).count("1"), "maximal")
rep = check_under_each(f32, 3, 2)
print("dual-structure clauses hold:", rep.ok,
      "(guarded clauses skipped:", rep.full_preimage_is_unique_bottom is None, ")")

# --- free algebras satisfy qb_3 ------------------------------------------------

verdict = check_free_qb3(3, 2, built=f32)
print("\nqb_3 on the (3,2) free algebra:", verdict.status,
      f"(sweep checked {verdict.sweep.checked} valuations;",
      f"pp-morphism search: {verdict.pp_search_status})")
print("sanity: the 3-fan's own algebra falsifies qb_3:",
      satisfies(epsilon(make_p1(3)), make_qb(3)).status)

# --- structural completeness of the special fragment ---------------------------

rep = check_special_structural(1, 50, seed=11)
print("\n50 random special-form quasiequations:",
      "free and variety verdicts agree" if rep.ok else rep.mismatches)

# --- the three cover-candidate posets ------------------------------------------

cov = cover_fixture_checks()
print("\ncover candidates: posets", cov.poset_sizes, "algebras", cov.algebra_sizes)
print("  qb3 verdicts:", cov.qb3, " ib2 verdicts:", cov.ib2,
      " B2 embeds:", cov.bn2_embeds)
