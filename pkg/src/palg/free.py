"""Canonical construction of finitely generated free algebras.

``build_free(m, k)`` realizes the k-generated free algebra of the variety
generated by the m-atom subdirectly irreducible, as the subalgebra of a
product of small subdirectly irreducibles generated by the coordinate
tuples.  Factors with more than ``2^k`` atoms are omitted: a k-generated
subalgebra has only k-generated subdirectly irreducible quotients, and
those have at most ``2^k`` atoms, so the smaller factors already separate
every pair of points.

Internally each product element is a single bitmask: the product algebra
is the upset algebra of the disjoint union of the factors' dual fans, so
meet and join are bitwise and/or.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .core import (
    DEFAULT_SEARCH_BUDGET,
    FiniteAlgebra,
    InconsistentMethodsError,
    MAX_ALGEBRA_SIZE,
    ResourceLimitError,
    is_isomorphic,
    enumerate_embeddings,
)
from .duality import FinitePoset, delta, find_surjective_ppmorphism, epsilon
from .logic import (
    Const,
    Join,
    Meet,
    Quasiequation,
    SatisfactionResult,
    Star,
    Term,
    Var,
    eval_term,
    format_quasiequation,
    make_ib,
    make_qb,
    satisfies,
    variety_satisfies,
)
from .steiner import make_p1


@dataclass(frozen=True)
class AmbientFactor:
    """One product coordinate: the factor's atom count and the element of
    that factor each generator is evaluated at."""

    atoms: int
    generator_values: tuple[int, ...]


@dataclass(frozen=True)
class FreeAlgebraResult:
    algebra: FiniteAlgebra
    generators: tuple[int, ...]
    ambient: tuple[AmbientFactor, ...]


def _local_mask(j: int, element: int) -> int:
    # element indices of the (2^j + 1)-element factor coincide with its
    # upset masks over the j-fan: Boolean part = subsets of the j maximals,
    # top = the full mask including the bottom bit
    return element if element < (1 << j) else (1 << (j + 1)) - 1


def build_free(m: int, k: int, max_size: int = MAX_ALGEBRA_SIZE) -> FreeAlgebraResult:
    """Free algebra on ``k`` generators in the variety of the m-atom
    subdirectly irreducible (``m >= 2^k`` gives the free p-algebra).

    The result is canonically reindexed by (lattice height, lexicographic
    component vector); raises :class:`ResourceLimitError` with partial
    stats when the closure exceeds ``max_size`` elements.
    """
    if m < 0 or k < 1:
        raise ValueError("need m >= 0 and k >= 1")
    js = list(range(min(m, 1 << k) + 1))
    factors: list[tuple[int, tuple[int, ...], int]] = []  # (atoms, tuple, offset)
    offset = 0
    for j in js:
        npts = j + 1 if j >= 1 else 1
        for t in itertools.product(range((1 << j) + 1), repeat=k):
            factors.append((j, t, offset))
            offset += npts
    total_bits = offset
    full = (1 << total_bits) - 1
    downmask = [0] * total_bits
    for j, _t, off in factors:
        if j == 0:
            downmask[off] = 1 << off
        else:
            bot = off + j
            for i in range(j):
                downmask[off + i] = (1 << (off + i)) | (1 << bot)
            downmask[bot] = 1 << bot

    def star_mask(u: int) -> int:
        d = 0
        x = u
        while x:
            b = x & (-x)
            d |= downmask[b.bit_length() - 1]
            x ^= b
        return full & ~d

    gens = []
    for i in range(k):
        g = 0
        for j, t, off in factors:
            g |= _local_mask(j, t[i]) << off
        gens.append(g)

    elements = {0, full} | set(gens)
    frontier = list(elements)
    while frontier:
        fresh = set()
        current = list(elements)
        for x in frontier:
            sx = star_mask(x)
            if sx not in elements:
                fresh.add(sx)
            for y in current:
                lo = x & y
                if lo not in elements:
                    fresh.add(lo)
                hi = x | y
                if hi not in elements:
                    fresh.add(hi)
        fresh -= elements
        elements |= fresh
        if len(elements) > max_size:
            raise ResourceLimitError(
                f"free algebra closure passed {len(elements)} elements "
                f"(cap {max_size}, {total_bits} product coordinates)")
        frontier = list(fresh)

    def components(u: int) -> tuple[int, ...]:
        # per-factor element index; valid local masks are either a subset
        # of the maximals (the Boolean part, index = mask) or the full
        # block mask (the top, index = 2^j)
        out = []
        for j, _t, off in factors:
            npts = j + 1 if j >= 1 else 1
            local = (u >> off) & ((1 << npts) - 1)
            if j == 0:
                out.append(local)
            else:
                out.append(local if local < (1 << j) else (1 << j))
        return tuple(out)

    masks = sorted(elements, key=lambda u: (bin(u).count("1"), components(u)))
    index = {u: i for i, u in enumerate(masks)}
    n = len(masks)
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for i in range(n):
        ui = masks[i]
        mrow, jrow = meet[i], join[i]
        for jx in range(n):
            mrow[jx] = index[ui & masks[jx]]
            jrow[jx] = index[ui | masks[jx]]
    star = [index[star_mask(u)] for u in masks]
    algebra = FiniteAlgebra(n, meet, join, star, index[0], index[full])
    ambient = tuple(AmbientFactor(j, t) for j, t, _ in factors)
    return FreeAlgebraResult(algebra, tuple(index[g] for g in gens), ambient)


# ---------------------------------------------------------------------------
# checks of the free-algebra structure lemmas


@dataclass(frozen=True)
class UnderEachReport:
    m: int
    k: int
    max_points: int
    missing_max_up_sets: tuple[tuple[int, ...], ...]       # clause (2)
    full_preimage_is_unique_bottom: bool | None            # clause (3)
    top_join_irreducible: bool | None                      # clause (4)
    stabilizes: bool | None                                # clause (4)
    ok: bool


def check_under_each(f: FreeAlgebraResult, m: int, k: int,
                     check_stabilization: bool = True) -> UnderEachReport:
    """Clauses (1)-(4) of the free-algebra dual-structure lemma; the
    clauses guarded by ``m >= 2^k`` are skipped (None) when the guard
    fails."""
    poset, labels = delta(f.algebra)
    maximal = [x for x in range(poset.size) if poset.up[x] == 1 << x]
    clause1 = len(maximal) == (1 << k)

    mus = {x: poset.max_up_masks[x] for x in range(poset.size)}
    present = set(mus.values())
    missing = []
    for r in range(1, min(m, len(maximal)) + 1):
        for subset in itertools.combinations(maximal, r):
            mask = 0
            for a in subset:
                mask |= 1 << a
            if mask not in present:
                missing.append(subset)

    guard = m >= (1 << k)
    clause3 = None
    clause4_ji = None
    clause4_stab = None
    if guard:
        full_max = 0
        for a in maximal:
            full_max |= 1 << a
        hits = [x for x in range(poset.size) if mus[x] == full_max]
        bottoms = [x for x in range(poset.size)
                   if all(poset.leq(x, y) for y in range(poset.size))]
        clause3 = len(hits) == 1 and bottoms == hits
        clause4_ji = f.algebra.one in f.algebra.join_irreducibles
        if check_stabilization:
            other = build_free(1 << k, k)
            clause4_stab = is_isomorphic(f.algebra, other.algebra)[0]
    ok = clause1 and not missing and (not guard or (clause3 and clause4_ji
                                                    and clause4_stab is not False))
    return UnderEachReport(m, k, len(maximal), tuple(missing),
                           clause3, clause4_ji, clause4_stab, ok)


@dataclass(frozen=True)
class FreeQb3Report:
    m: int
    k: int
    status: str                    # "satisfied" | "falsified" | "inconclusive"
    sweep: SatisfactionResult
    pp_search_status: str

    def __bool__(self) -> bool:
        return self.status == "satisfied"


def check_free_qb3(m: int, k: int, budget: int = DEFAULT_SEARCH_BUDGET,
                   built: FreeAlgebraResult | None = None) -> FreeQb3Report:
    """Two independent verdicts that the free algebra satisfies qb_3: the
    valuation sweep, and the absence of a surjective pp-morphism from its
    dual onto the 3-fan.  Disagreement raises
    :class:`InconsistentMethodsError`."""
    if m < 3 or k < 2:
        raise ValueError("the free-algebra qb_3 check needs m >= 3 and k >= 2")
    f = built if built is not None else build_free(m, k)
    sweep = satisfies(f.algebra, make_qb(3), budget=budget)
    poset, _ = delta(f.algebra)
    pp = find_surjective_ppmorphism(poset, make_p1(3), budget=budget)
    if sweep.status == "inconclusive" or pp.status == "inconclusive":
        return FreeQb3Report(m, k, "inconclusive", sweep, pp.status)
    sweep_sat = sweep.status == "satisfied"
    pp_sat = pp.status == "none"
    if sweep_sat != pp_sat:
        raise InconsistentMethodsError(
            f"sweep says satisfied={sweep_sat} but pp-morphism search says {pp.status}")
    return FreeQb3Report(m, k, "satisfied" if sweep_sat else "falsified",
                         sweep, pp.status)


# ---------------------------------------------------------------------------
# structural completeness of the special-form fragment


def _random_term(rng: random.Random, names: list[str], depth: int) -> Term:
    if depth <= 0:
        roll = rng.randrange(4)
        if roll == 0:
            return Const(rng.randrange(2))
        return Var(rng.choice(names))
    roll = rng.randrange(8)
    if roll < 2:
        return Var(rng.choice(names))
    if roll == 2:
        return Const(rng.randrange(2))
    if roll < 5:
        return Meet(_random_term(rng, names, depth - 1), _random_term(rng, names, depth - 1))
    if roll < 7:
        return Join(_random_term(rng, names, depth - 1), _random_term(rng, names, depth - 1))
    return Star(_random_term(rng, names, depth - 1))


def random_special_quasiequation(rng: random.Random, nvars: int,
                                 max_depth: int = 4,
                                 max_premises: int = 3) -> Quasiequation:
    """A random quasiequation of the special form
    ``t_1 = 1 & ... & t_j = 1 => s = 1``."""
    names = [f"x{i}" for i in range(1, nvars + 1)]
    one = Const(1)
    premises = tuple((_random_term(rng, names, rng.randrange(max_depth + 1)), one)
                     for _ in range(rng.randrange(max_premises + 1)))
    return Quasiequation(premises, (_random_term(rng, names, rng.randrange(1, max_depth + 1)), one))


@dataclass(frozen=True)
class StructuralReport:
    nvars: int
    trials: int
    seed: int
    mismatches: tuple[str, ...]
    skipped: tuple[str, ...]
    ok: bool


def check_special_structural(n: int, trials: int, seed: int = 2024,
                             budget: int = DEFAULT_SEARCH_BUDGET) -> StructuralReport:
    """Empirical check that special-form quasiequations hold in the free
    algebra exactly when they hold in the whole variety."""
    if n not in (1, 2):
        raise ValueError("only 1 or 2 generators are within the sweep budget")
    free = build_free(1 << n, n)
    rng = random.Random(seed)
    mismatches = []
    skipped = []
    for _ in range(trials):
        q = random_special_quasiequation(rng, n)
        on_free = satisfies(free.algebra, q, budget=budget)
        in_variety = variety_satisfies(q, budget=budget)
        if on_free.status == "inconclusive" or in_variety.status == "inconclusive":
            skipped.append(format_quasiequation(q))
            continue
        if bool(on_free) != bool(in_variety):
            mismatches.append(format_quasiequation(q))
    return StructuralReport(n, trials, seed, tuple(mismatches), tuple(skipped),
                            ok=not mismatches)


# ---------------------------------------------------------------------------
# the cover-candidate fixtures


COVER_POSETS: tuple[FinitePoset, ...] = (
    # bottom, a middle carrying two tops, one extra top over the bottom
    FinitePoset.from_covers(5, [(0, 1), (0, 4), (1, 2), (1, 3)]),
    # bottom, two middles sharing one of three tops
    FinitePoset.from_covers(6, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 4), (2, 5)]),
    # bottom, three middles, three tops, each middle under two tops
    FinitePoset.from_covers(7, [(0, 1), (0, 2), (0, 3),
                                (1, 4), (1, 5), (2, 4), (2, 6), (3, 5), (3, 6)]),
)


@dataclass(frozen=True)
class CoverFixtureReport:
    poset_sizes: tuple[int, ...]
    algebra_sizes: tuple[int, ...]
    valid: tuple[bool, ...]
    qb3: tuple[bool, ...]
    qb3_by_embedding: tuple[bool, ...]
    ib2: tuple[bool, ...]
    bn2_embeds: tuple[bool, ...]

    @property
    def consistent(self) -> bool:
        return self.qb3 == self.qb3_by_embedding


def cover_fixture_checks() -> CoverFixtureReport:
    """Validation plus qb_3 / ib_2 verdicts for the three cover-candidate
    posets; the verdicts are reported, no covering claim is decided."""
    from .core import make_bn
    from .duality import validate_poset

    valid, qb3, qb3_emb, ib2, bn2 = [], [], [], [], []
    sizes = []
    for p in COVER_POSETS:
        valid.append(bool(validate_poset(p)))
        a = epsilon(p)
        sizes.append(a.size)
        qb3.append(bool(satisfies(a, make_qb(3))))
        emb3 = enumerate_embeddings(make_bn(3), a, limit=1)
        qb3_emb.append(len(emb3.maps) == 0 and emb3.complete)
        ib2.append(bool(satisfies(a, make_ib(2))))
        emb2 = enumerate_embeddings(make_bn(2), a, limit=1)
        bn2.append(len(emb2.maps) > 0)
    return CoverFixtureReport(
        tuple(p.size for p in COVER_POSETS), tuple(sizes), tuple(valid),
        tuple(qb3), tuple(qb3_emb), tuple(ib2), tuple(bn2))
