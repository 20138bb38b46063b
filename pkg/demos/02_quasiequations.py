"""The term language and quasiequation checking.

Grammar: postfix * binds tightest, then ^ (meet), then v (join);
equations with =, premises joined by &, implication =>.
"""

from palg import (
    eval_term, format_quasiequation, make_bn, make_ib, make_positive_diagram,
    make_qb, make_splitting_quasieq, parse, satisfies, variety_satisfies,
)

# --- parsing and evaluation --------------------------------------------------

t = parse("x v x*")
b1 = make_bn(1)                     # the 3-chain 0 < e < 1
print("on the 3-chain, e v e* =", eval_term(t, b1, {"x": 1}))   # stays at e

axiom = parse("x ^ (x ^ y)* = x ^ y*")
print("defining identity holds in the whole variety:",
      bool(variety_satisfies(axiom)))

# --- the qb family -----------------------------------------------------------

# qb_n fails in an algebra exactly when the n-atom SI embeds into it
for n in (1, 2, 3):
    q = make_qb(n)
    print(f"\nqb_{n}:", format_quasiequation(q))
    res = satisfies(make_bn(n), q)
    print(f"  B{n} falsifies it at the atoms:", res.falsifier)

print("\nthe 2-element Boolean algebra satisfies qb_1:",
      bool(satisfies(make_bn(0), make_qb(1))))

# --- the ib family -----------------------------------------------------------

# ib_m axiomatizes the variety generated by the m-atom SI: B_k satisfies
# ib_m exactly when k <= m
for k in range(4):
    row = [bool(satisfies(make_bn(k), make_ib(m))) for m in (1, 2, 3)]
    print(f"B{k} |= ib_1..ib_3:", row)

# --- diagrams and splitting --------------------------------------------------

# the positive diagram turns an algebra's tables into premises, one per entry
prem = make_positive_diagram(make_bn(1))
print("\npositive diagram of the 3-chain has", len(prem), "premises")

# the splitting quasiequation of B_m: diagram premises imply x_e = x_top.
# An algebra falsifies it exactly when it admits a homomorphic image of
# B_m that keeps e below the top.
split = make_splitting_quasieq(1)
print("3-chain falsifies its own splitting quasiequation:",
      satisfies(b1, split).status == "falsified")
print("2 satisfies it:", bool(satisfies(make_bn(0), split)))

# --- variety-level checks ----------------------------------------------------

print("\nqb_3 in the whole variety:", variety_satisfies(make_qb(3)).status,
      "(counterexample: the SI with",
      variety_satisfies(make_qb(3)).counterexample_atoms, "atoms)")
