"""Finite posets and the order-theoretic duality for finite p-algebras.

``delta`` sends an algebra to its poset of join-irreducible elements under
the converse order; ``epsilon`` sends a poset to its algebra of upsets
with ``U* = X minus the downset of U``.  Morphisms on the poset side are
pp-morphisms: order-preserving maps with ``f(max up(x)) = max up(f(x))``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .core import (
    DEFAULT_SEARCH_BUDGET,
    MAX_ALGEBRA_SIZE,
    AlgebraMap,
    FiniteAlgebra,
    ResourceLimitError,
    StructureError,
    ValidationReport,
    Violation,
    trivial_algebra,
)


@dataclass(frozen=True)
class FinitePoset:
    """Reflexive order relation over indexed points, one bitmask row per
    point: bit ``y`` of ``up[x]`` is set iff ``x <= y``."""

    size: int
    up: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "up", tuple(int(m) for m in self.up))
        if len(self.up) != self.size:
            raise StructureError("up-mask count does not match size")
        full = (1 << self.size) - 1
        if any(m & ~full for m in self.up):
            raise StructureError("up-mask has bits beyond size")

    @classmethod
    def from_matrix(cls, matrix) -> "FinitePoset":
        """Build from a size x size boolean matrix with ``matrix[x][y]`` = (x <= y)."""
        n = len(matrix)
        masks = []
        for x in range(n):
            row = matrix[x]
            if len(row) != n:
                raise StructureError("matrix is not square")
            m = 0
            for y in range(n):
                if row[y]:
                    m |= 1 << y
            masks.append(m)
        return cls(n, tuple(masks))

    @classmethod
    def from_covers(cls, size: int, covers) -> "FinitePoset":
        """Reflexive-transitive closure of a cover list; rejects cycles."""
        up = [1 << x for x in range(size)]
        adj: list[list[int]] = [[] for _ in range(size)]
        for lo, hi in covers:
            if not (0 <= lo < size and 0 <= hi < size):
                raise StructureError("cover index out of range")
            adj[lo].append(hi)
        for _ in range(size):
            for x in range(size):
                m = up[x]
                for y in adj[x]:
                    m |= up[y]
                up[x] = m
        for x in range(size):
            for y in range(size):
                if x != y and (up[x] >> y) & 1 and (up[y] >> x) & 1:
                    raise StructureError(f"cover list is cyclic through ({x}, {y})")
        return cls(size, tuple(up))

    def leq(self, x: int, y: int) -> bool:
        return bool((self.up[x] >> y) & 1)

    def matrix(self) -> list[list[bool]]:
        return [[self.leq(x, y) for y in range(self.size)] for x in range(self.size)]

    @cached_property
    def down(self) -> tuple[int, ...]:
        masks = [0] * self.size
        for x in range(self.size):
            for y in range(self.size):
                if (self.up[y] >> x) & 1:
                    masks[x] |= 1 << y
        return tuple(masks)

    @cached_property
    def maximal_mask(self) -> int:
        m = 0
        for x in range(self.size):
            if self.up[x] == 1 << x:
                m |= 1 << x
        return m

    @cached_property
    def max_up_masks(self) -> tuple[int, ...]:
        mm = self.maximal_mask
        return tuple(self.up[x] & mm for x in range(self.size))

    def covers(self) -> list[tuple[int, int]]:
        """Hasse edges (lower, upper), sorted."""
        out = []
        for x in range(self.size):
            strict = self.up[x] & ~(1 << x)
            for y in range(self.size):
                if (strict >> y) & 1:
                    between = strict & self.down[y] & ~(1 << y)
                    if between == 0:
                        out.append((x, y))
        return sorted(out)

    def __repr__(self) -> str:
        return f"FinitePoset(size={self.size}, covers={self.covers()})"


EMPTY_POSET = FinitePoset(0, ())


def validate_poset(p: FinitePoset) -> ValidationReport:
    """Reflexivity, antisymmetry and transitivity by exhaustive scan."""
    viol = []
    for x in range(p.size):
        if not p.leq(x, x):
            viol.append(Violation("reflexive", (x,)))
            break
    done = False
    for x in range(p.size):
        for y in range(p.size):
            if x != y and p.leq(x, y) and p.leq(y, x):
                viol.append(Violation("antisymmetric", (x, y)))
                done = True
                break
        if done:
            break
    done = False
    for x in range(p.size):
        for y in range(p.size):
            if x != y and p.leq(x, y) and (p.up[y] & ~p.up[x]):
                gap = p.up[y] & ~p.up[x]
                z = (gap & -gap).bit_length() - 1
                viol.append(Violation("transitive", (x, y, z)))
                done = True
                break
        if done:
            break
    return ValidationReport(ok=not viol, violations=tuple(viol))


def max_up(p: FinitePoset, x: int) -> frozenset[int]:
    """Maximal elements of the upset of ``x``."""
    if not (0 <= x < p.size):
        raise ValueError("point index out of range")
    m = p.max_up_masks[x]
    return frozenset(y for y in range(p.size) if (m >> y) & 1)


def _bits(mask: int):
    while mask:
        b = mask & (-mask)
        yield b.bit_length() - 1
        mask ^= b


# ---------------------------------------------------------------------------
# the dual functors


def delta(a: FiniteAlgebra) -> tuple[FinitePoset, tuple[int, ...]]:
    """Poset of join-irreducible elements under the converse algebra order.

    Points are listed in ascending algebra index; the returned labeling
    maps point index to algebra index.
    """
    labels = a.join_irreducibles
    n = len(labels)
    up = []
    for i in range(n):
        m = 0
        for j in range(n):
            if a.leq(labels[j], labels[i]):  # converse order
                m |= 1 << j
        up.append(m)
    return FinitePoset(n, tuple(up)), labels


def upsets_of(p: FinitePoset) -> list[int]:
    """All upsets as bitmasks, ascending numerically."""
    # decide points from maximal elements downward so the upward-closure
    # constraint only looks at already-decided points
    rank = [0] * p.size
    for _ in range(p.size):
        for x in range(p.size):
            r = 0
            for y in _bits(p.up[x] & ~(1 << x)):
                r = max(r, rank[y] + 1)
            rank[x] = r
    topo = sorted(range(p.size), key=lambda x: rank[x])
    out = []

    def rec(idx: int, acc: int):
        if idx == p.size:
            out.append(acc)
            return
        x = topo[idx]
        rec(idx + 1, acc)
        if (p.up[x] & ~(1 << x)) & ~acc == 0:
            rec(idx + 1, acc | (1 << x))

    rec(0, 0)
    out.sort()
    return out


def epsilon(x: FinitePoset, max_size: int = MAX_ALGEBRA_SIZE) -> FiniteAlgebra:
    """Algebra of upsets of ``x``: meet/join are intersection/union and
    ``U*`` is the complement of the downset of ``U``.

    Elements are the upsets encoded as point bitsets, sorted ascending, so
    zero is index 0 and one is the last index.
    """
    ups = upsets_of(x)
    n = len(ups)
    if n > max_size:
        raise ResourceLimitError(f"{n} upsets exceed the table budget {max_size}")
    index = {u: i for i, u in enumerate(ups)}
    full = (1 << x.size) - 1
    down = x.down

    def star_mask(u: int) -> int:
        d = 0
        for b in _bits(u):
            d |= down[b]
        return full & ~d

    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for i in range(n):
        ui = ups[i]
        mrow, jrow = meet[i], join[i]
        for j in range(n):
            mrow[j] = index[ui & ups[j]]
            jrow[j] = index[ui | ups[j]]
    star = [index[star_mask(u)] for u in ups]
    return FiniteAlgebra(n, meet, join, star, 0, n - 1)


def disjoint_union(parts: list[FinitePoset]) -> FinitePoset:
    """Block-diagonal union; part ``i`` occupies indices starting at the
    sum of the sizes of the earlier parts."""
    if not parts:
        raise ValueError("disjoint_union of an empty list is not supported")
    size = sum(p.size for p in parts)
    up = []
    off = 0
    for p in parts:
        up.extend(m << off for m in p.up)
        off += p.size
    return FinitePoset(size, tuple(up))


# ---------------------------------------------------------------------------
# pp-morphisms


@dataclass(frozen=True)
class PPMap:
    """A candidate morphism between posets, given by an image table."""

    source: FinitePoset
    target: FinitePoset
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if len(self.table) != self.source.size:
            raise StructureError("map table length does not match source size")
        if any(not (0 <= v < self.target.size) for v in self.table):
            raise StructureError("map image out of range")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def is_surjective(self) -> bool:
        return len(set(self.table)) == self.target.size


def validate_ppmap(f: PPMap) -> ValidationReport:
    """Order preservation plus ``f(max up(x)) = max up(f(x))`` pointwise."""
    s, t, tab = f.source, f.target, f.table
    viol = []
    for x in range(s.size):
        for y in _bits(s.up[x]):
            if not t.leq(tab[x], tab[y]):
                viol.append(Violation("order-preserving", (x, y)))
                break
        else:
            continue
        break
    for x in range(s.size):
        img = 0
        for y in _bits(s.max_up_masks[x]):
            img |= 1 << tab[y]
        if img != t.max_up_masks[tab[x]]:
            viol.append(Violation("pp condition f(max up(x)) = max up(f(x))",
                                  (x, tuple(sorted(_bits(img))),
                                   tuple(sorted(_bits(t.max_up_masks[tab[x]]))))))
            break
    return ValidationReport(ok=not viol, violations=tuple(viol))


def compose_ppmaps(g: PPMap, f: PPMap) -> PPMap:
    """g after f."""
    if f.target is not g.source and f.target != g.source:
        raise ValueError("composition mismatch")
    return PPMap(f.source, g.target, tuple(g.table[v] for v in f.table))


@dataclass(frozen=True)
class PPSearchResult:
    status: str                  # "found" | "none" | "inconclusive"
    witness: PPMap | None
    nodes: int

    def __bool__(self) -> bool:
        return self.status == "found"


def _pp_search(src: FinitePoset, dst: FinitePoset, required: int,
               budget: int) -> tuple[str, tuple[int, ...] | None, int]:
    """Complete backtracking over point images in index order with forward
    checking; the first witness found is the lexicographically least table
    whose image covers the ``required`` target mask."""
    ns, nd = src.size, dst.size
    if nd == 0:
        return ("found", (), 0) if ns == 0 else ("none", None, 0)
    up_s, up_d = src.up, dst.up
    down_d = dst.down
    mu_s, mu_d = src.max_up_masks, dst.max_up_masks
    card_s = [bin(m).count("1") for m in mu_s]
    card_d = [bin(m).count("1") for m in mu_d]
    # a point with k maximals above it can only land on a point with at
    # most k maximals above it, since f maps max up(x) onto max up(f(x))
    dom0 = []
    for x in range(ns):
        m = 0
        for t in range(nd):
            if card_s[x] >= card_d[t]:
                m |= 1 << t
        dom0.append(m)
    strict_mu = [mu_s[x] & ~(1 << x) for x in range(ns)]
    below_s = [0] * ns
    for x in range(ns):
        for y in _bits(up_s[x]):
            below_s[y] |= 1 << x
    full_d = (1 << nd) - 1
    f = [-1] * ns
    nodes = 0

    def rec(i: int, dom: list[int], covered: int):
        nonlocal nodes
        if i == ns:
            if (covered & required) != required:
                return None
            for x in range(ns):
                img = 0
                for y in _bits(mu_s[x]):
                    img |= 1 << f[y]
                if img != mu_d[f[x]]:
                    return None
            return tuple(f)
        # a required target still uncoverable by any remaining point is fatal
        reach = covered
        for x in range(i, ns):
            reach |= dom[x]
        if (reach & required) != required:
            return None
        for t in _bits(dom[i]):
            nodes += 1
            if nodes > budget:
                return "budget"
            ndom = dom.copy()
            ndom[i] = 1 << t
            ok = True
            for y in range(i + 1, ns):
                m = ndom[y]
                if (up_s[i] >> y) & 1:
                    m &= up_d[t]
                if (below_s[i] >> y) & 1:
                    m &= down_d[t]
                if (strict_mu[i] >> y) & 1:
                    m &= mu_d[t]
                if m == 0:
                    ok = False
                    break
                ndom[y] = m
            if ok:
                for y in _bits(mu_s[i]):
                    fy = t if y == i else (f[y] if y < i else None)
                    if fy is not None and not ((mu_d[t] >> fy) & 1):
                        ok = False
                        break
            if ok:
                f[i] = t
                res = rec(i + 1, ndom, covered | (1 << t))
                f[i] = -1
                if res is not None:
                    return res
        return None

    res = rec(0, dom0, 0)
    if res == "budget":
        return "inconclusive", None, nodes
    if res is None:
        return "none", None, nodes
    return "found", res, nodes


def find_surjective_ppmorphism(source: FinitePoset, target: FinitePoset,
                               budget: int = DEFAULT_SEARCH_BUDGET) -> PPSearchResult:
    """Search for a surjective pp-morphism source -> target.

    "none" is only reported when the backtracking exhausted within budget,
    so it is a proof of non-existence.
    """
    required = (1 << target.size) - 1
    status, table, nodes = _pp_search(source, target, required, budget)
    if status == "found":
        return PPSearchResult("found", PPMap(source, target, table), nodes)
    return PPSearchResult(status, None, nodes)


def enumerate_ppmorphisms(source: FinitePoset, target: FinitePoset,
                          limit: int | None = None,
                          budget: int = DEFAULT_SEARCH_BUDGET) -> tuple[list[PPMap], bool]:
    """All pp-morphisms source -> target in lexicographic table order;
    the flag reports whether the enumeration is complete."""
    ns, nd = source.size, target.size
    if nd == 0:
        return ([PPMap(source, target, ())], True) if ns == 0 else ([], True)
    out = []
    # reuse the searching core by pinning successive prefixes would be
    # quadratic; sizes here are small enough for a direct scan
    mu_s, mu_d = source.max_up_masks, target.max_up_masks
    card_s = [bin(m).count("1") for m in mu_s]
    card_d = [bin(m).count("1") for m in mu_d]
    nodes = 0
    f = [-1] * ns
    complete = True

    def rec(i: int):
        nonlocal nodes, complete
        if not complete or (limit is not None and len(out) >= limit):
            complete = False
            return
        if i == ns:
            for x in range(ns):
                img = 0
                for y in _bits(mu_s[x]):
                    img |= 1 << f[y]
                if img != mu_d[f[x]]:
                    return
            out.append(PPMap(source, target, tuple(f)))
            return
        for t in range(nd):
            if card_s[i] < card_d[t]:
                continue
            ok = True
            for y in range(i):
                if (source.up[i] >> y) & 1 and not target.leq(t, f[y]):
                    ok = False
                    break
                if (source.up[y] >> i) & 1 and not target.leq(f[y], t):
                    ok = False
                    break
                if (mu_s[y] >> i) & 1 and not ((mu_d[f[y]] >> t) & 1):
                    ok = False
                    break
                if (mu_s[i] >> y) & 1 and not ((mu_d[t] >> f[y]) & 1):
                    ok = False
                    break
            if not ok:
                continue
            nodes += 1
            if nodes > budget:
                complete = False
                return
            f[i] = t
            rec(i + 1)
            f[i] = -1

    rec(0)
    return out, complete


def epsilon_map(f: PPMap) -> AlgebraMap:
    """The algebra homomorphism epsilon(target) -> epsilon(source) taking
    an upset to the upward closure of its preimage."""
    ea = epsilon(f.target)
    eb = epsilon(f.source)
    src_ups = upsets_of(f.target)
    tgt_index = {u: i for i, u in enumerate(upsets_of(f.source))}
    table = []
    for u in src_ups:
        pre = 0
        for x in range(f.source.size):
            if (u >> f.table[x]) & 1:
                pre |= 1 << x
        table.append(tgt_index[pre])  # preimage of an upset is already an upset
    return AlgebraMap(ea, eb, tuple(table))


def delta_map(h: AlgebraMap) -> PPMap:
    """The pp-morphism delta(target) -> delta(source) dual to ``h``: a
    prime filter pulls back along ``h`` to a prime filter."""
    dsrc, src_labels = delta(h.source)
    dtgt, tgt_labels = delta(h.target)
    src_pos = {lab: i for i, lab in enumerate(src_labels)}
    table = []
    for q in tgt_labels:
        # least element of h^{-1}(up(q))
        members = [x for x in range(h.source.size) if h.target.leq(q, h.table[x])]
        p = members[0]
        for x in members[1:]:
            p = h.source.meet[p][x]
        table.append(src_pos[p])
    return PPMap(dtgt, dsrc, tuple(table))


# ---------------------------------------------------------------------------
# poset isomorphism and enumeration


def posets_isomorphic(p: FinitePoset, q: FinitePoset) -> bool:
    """Backtracking order-isomorphism test with degree-profile pruning."""
    if p.size != q.size:
        return False
    n = p.size

    def profile(r: FinitePoset):
        return [(bin(r.up[x]).count("1"), bin(r.down[x]).count("1"),
                 bin(r.max_up_masks[x]).count("1")) for x in range(n)]

    pp, qp = profile(p), profile(q)
    if sorted(pp) != sorted(qp):
        return False
    f = [-1] * n
    used = [False] * n

    def rec(i: int) -> bool:
        if i == n:
            return True
        for t in range(n):
            if used[t] or qp[t] != pp[i]:
                continue
            if any(f[y] >= 0 and (p.leq(i, y) != q.leq(t, f[y]) or p.leq(y, i) != q.leq(f[y], t))
                   for y in range(i)):
                continue
            f[i] = t
            used[t] = True
            if rec(i + 1):
                return True
            f[i] = -1
            used[t] = False
        return False

    return rec(0)


def _canonical_key(p: FinitePoset) -> tuple:
    # minimum relation matrix over profile-respecting relabelings; meant
    # for the small posets produced by all_posets
    n = p.size
    if n == 0:
        return ()
    prof = [(bin(p.up[x]).count("1"), bin(p.down[x]).count("1")) for x in range(n)]
    classes: dict[tuple, list[int]] = {}
    for x in range(n):
        classes.setdefault(prof[x], []).append(x)
    groups = [classes[k] for k in sorted(classes)]
    best = None
    for parts in itertools.product(*[itertools.permutations(g) for g in groups]):
        newidx = {}
        i = 0
        for part in parts:
            for x in part:
                newidx[x] = i
                i += 1
        rows = [0] * n
        for x in range(n):
            for y in _bits(p.up[x]):
                rows[newidx[x]] |= 1 << newidx[y]
        key = tuple(rows)
        if best is None or key < best:
            best = key
    return best


@lru_cache(maxsize=None)
def all_posets(size: int) -> tuple[FinitePoset, ...]:
    """One representative per isomorphism class of posets on exactly
    ``size`` points (1, 1, 2, 5, 16, 63, 318 classes for sizes 0..6)."""
    if size == 0:
        return (EMPTY_POSET,)
    reps = []
    seen = set()
    for smaller in all_posets(size - 1):
        for u in upsets_of(smaller):
            # append a new minimal point lying below exactly the upset u
            up = list(smaller.up) + [u | (1 << smaller.size)]
            cand = FinitePoset(size, tuple(up))
            key = _canonical_key(cand)
            if key not in seen:
                seen.add(key)
                reps.append(cand)
    return tuple(reps)


def posets_up_to(size: int) -> list[FinitePoset]:
    """Representatives of every isomorphism class on at most ``size`` points."""
    out: list[FinitePoset] = []
    for n in range(size + 1):
        out.extend(all_posets(n))
    return out


# ---------------------------------------------------------------------------
# quasivariety membership for finite algebras


@dataclass(frozen=True)
class MembershipResult:
    status: str                    # "yes" | "no" | "inconclusive"
    witness: PPMap | None          # surjective pp-morphism onto delta(a)
    summands: tuple[int, ...]      # generator index used for each summand

    def __bool__(self) -> bool:
        return self.status == "yes"


def finite_membership(a: FiniteAlgebra, generators: list[FiniteAlgebra],
                      max_copies: int | None = None,
                      budget: int = DEFAULT_SEARCH_BUDGET) -> MembershipResult:
    """Decide membership of ``a`` in the quasivariety generated by
    ``generators``, dually: is there a surjective pp-morphism from a
    finite disjoint union of copies of the generators' dual posets onto
    ``delta(a)``?

    A pp-morphism on a disjoint union is exactly one pp-morphism per
    summand, so it suffices to know which target points each generator
    dual can reach: per target point, search for a pp-morphism whose
    image contains it.  At most one summand per point is needed, which
    also bounds the multiplicity of each generator by ``delta(a)``'s
    size; a smaller ``max_copies`` restricts the witness accordingly.
    "no" requires every per-point search to exhaust within budget.
    """
    target, _ = delta(a)
    if target.size == 0:
        return MembershipResult("yes", PPMap(EMPTY_POSET, target, ()), ())
    duals = [delta(g)[0] for g in generators]
    per_point: list[tuple[int, tuple[int, ...]] | None] = [None] * target.size
    inconclusive = False
    for t in range(target.size):
        point_unsettled = False
        for gi, d in enumerate(duals):
            status, table, _ = _pp_search(d, target, 1 << t, budget)
            if status == "found":
                per_point[t] = (gi, table)
                break
            if status == "inconclusive":
                point_unsettled = True
        if per_point[t] is None:
            if point_unsettled:
                inconclusive = True
            else:
                # no generator dual reaches this point: proven non-member
                return MembershipResult("no", None, ())
    if inconclusive:
        return MembershipResult("inconclusive", None, ())
    # assemble the witness, dropping summands whose image is already covered
    chosen: list[tuple[int, tuple[int, ...]]] = []
    covered = 0
    for t in range(target.size):
        if (covered >> t) & 1:
            continue
        gi, table = per_point[t]
        chosen.append((gi, table))
        for v in table:
            covered |= 1 << v
    if max_copies is not None:
        counts = [0] * len(generators)
        for gi, _tab in chosen:
            counts[gi] += 1
        if any(c > max_copies for c in counts):
            return MembershipResult("inconclusive", None, ())
    union = disjoint_union([duals[gi] for gi, _ in chosen])
    table = tuple(v for _, tab in chosen for v in tab)
    return MembershipResult("yes", PPMap(union, target, table),
                            tuple(gi for gi, _ in chosen))
