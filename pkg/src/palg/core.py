"""Finite p-algebras as operation tables.

An algebra here is a bounded distributive lattice with a unary operation
``*`` satisfying ``1* = 0``, ``0* = 1`` and ``x ^ (x ^ y)* = x ^ y*``.
Elements are dense indices ``0..size-1``; all tables are plain integer
tables so that every law is decidable by exhaustive scan.  Values are
immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

MAX_ALGEBRA_SIZE = 5000     # cap on materialized operation tables
MAX_BN_ATOMS = 12           # make_bn bound: 2**12 + 1 = 4097 elements
DEFAULT_SEARCH_BUDGET = 10_000_000


class StructureError(ValueError):
    """Malformed table shape or out-of-range entry (not a law violation)."""


class ResourceLimitError(RuntimeError):
    """A construction or search would exceed the desk-scale budget."""


class InconsistentMethodsError(RuntimeError):
    """Two independent decision methods disagreed; the implementation is broken."""


@dataclass(frozen=True)
class Violation:
    """A single violated law together with the first witness tuple found."""

    law: str
    witness: tuple


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...] = ()

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class FiniteAlgebra:
    """Operation-table representation of a bounded-lattice-with-star candidate.

    The constructor only checks shapes; use :func:`validate_palgebra` to
    decide whether the tables actually satisfy the p-algebra laws.
    """

    size: int
    meet: tuple[tuple[int, ...], ...]
    join: tuple[tuple[int, ...], ...]
    star: tuple[int, ...]
    zero: int
    one: int

    def __post_init__(self):
        object.__setattr__(self, "meet", tuple(tuple(int(v) for v in row) for row in self.meet))
        object.__setattr__(self, "join", tuple(tuple(int(v) for v in row) for row in self.join))
        object.__setattr__(self, "star", tuple(int(v) for v in self.star))
        n = self.size
        if len(self.meet) != n or len(self.join) != n or len(self.star) != n:
            raise StructureError("table length does not match size")
        if any(len(row) != n for row in self.meet) or any(len(row) != n for row in self.join):
            raise StructureError("binary table row length does not match size")

    def leq(self, x: int, y: int) -> bool:
        """Lattice order: ``x <= y`` iff ``x ^ y = x``."""
        return self.meet[x][y] == x

    @cached_property
    def np_meet(self) -> np.ndarray:
        a = np.asarray(self.meet, dtype=np.int32)
        a.flags.writeable = False
        return a

    @cached_property
    def np_join(self) -> np.ndarray:
        a = np.asarray(self.join, dtype=np.int32)
        a.flags.writeable = False
        return a

    @cached_property
    def np_star(self) -> np.ndarray:
        a = np.asarray(self.star, dtype=np.int32)
        a.flags.writeable = False
        return a

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        """``up_masks[x]`` has bit ``y`` set iff ``x <= y``."""
        masks = []
        for x in range(self.size):
            m = 0
            row = self.meet[x]
            for y in range(self.size):
                if row[y] == x:
                    m |= 1 << y
            masks.append(m)
        return tuple(masks)

    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        """``down_masks[x]`` has bit ``y`` set iff ``y <= x``."""
        ups = self.up_masks
        masks = [0] * self.size
        for y in range(self.size):
            m = ups[y]
            while m:
                b = m & (-m)
                masks[b.bit_length() - 1] |= 1 << y
                m ^= b
        return tuple(masks)

    @cached_property
    def join_irreducibles(self) -> tuple[int, ...]:
        """Elements ``x != 0`` with a unique lower cover, ascending."""
        ups = self.up_masks
        downs = self.down_masks
        out = []
        for x in range(self.size):
            if x == self.zero:
                continue
            strictly_below = downs[x] & ~(1 << x)
            covers = 0
            m = strictly_below
            while m and covers < 2:
                b = m & (-m)
                y = b.bit_length() - 1
                m ^= b
                if ups[y] & strictly_below & ~b == 0:  # y maximal below x
                    covers += 1
            if covers == 1:
                out.append(x)
        return tuple(out)

    def __repr__(self) -> str:
        return f"FiniteAlgebra(size={self.size}, zero={self.zero}, one={self.one})"


@dataclass(frozen=True)
class AlgebraMap:
    """A candidate map between algebras, given by an image table."""

    source: FiniteAlgebra
    target: FiniteAlgebra
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if len(self.table) != self.source.size:
            raise StructureError("map table length does not match source size")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def is_homomorphism(self) -> bool:
        s, t, f = self.source, self.target, self.table
        if f[s.zero] != t.zero or f[s.one] != t.one:
            return False
        for x in range(s.size):
            if t.star[f[x]] != f[s.star[x]]:
                return False
            for y in range(s.size):
                if t.meet[f[x]][f[y]] != f[s.meet[x][y]]:
                    return False
                if t.join[f[x]][f[y]] != f[s.join[x][y]]:
                    return False
        return True

    def is_embedding(self) -> bool:
        return len(set(self.table)) == self.source.size and self.is_homomorphism()


@dataclass(frozen=True)
class EnumerationResult:
    """Maps found by a backtracking search.

    ``complete`` is False when the node budget ran out or the requested
    limit truncated the enumeration; an empty ``maps`` with
    ``complete=True`` is a proof that no map exists.
    """

    maps: tuple[AlgebraMap, ...]
    complete: bool
    nodes: int = 0


# ---------------------------------------------------------------------------
# validation


def _first_mismatch2(lhs: np.ndarray, rhs: np.ndarray) -> tuple | None:
    bad = np.argwhere(lhs != rhs)
    if len(bad) == 0:
        return None
    return tuple(int(v) for v in bad[0])


def _first_assoc_violation(t: np.ndarray) -> tuple | None:
    # t[t[x,y],z] == t[x,t[y,z]], chunked over x to bound memory
    n = len(t)
    chunk = max(1, 20_000_000 // max(1, n * n))
    zs = np.arange(n)
    for x0 in range(0, n, chunk):
        xs = np.arange(x0, min(n, x0 + chunk))
        lhs = t[t[xs][:, :, None], zs[None, None, :]]
        rhs = t[xs[:, None, None], t[None, :, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            x, y, z = bad[0]
            return (int(x) + x0, int(y), int(z))
    return None


def _first_distrib_violation(m: np.ndarray, j: np.ndarray) -> tuple | None:
    # m[x, j[y,z]] == j[m[x,y], m[x,z]]
    n = len(m)
    chunk = max(1, 20_000_000 // max(1, n * n))
    for x0 in range(0, n, chunk):
        xs = np.arange(x0, min(n, x0 + chunk))
        lhs = m[xs[:, None, None], j[None, :, :]]
        mx = m[xs]
        rhs = j[mx[:, :, None], mx[:, None, :]]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            x, y, z = bad[0]
            return (int(x) + x0, int(y), int(z))
    return None


def validate_palgebra(candidate: FiniteAlgebra) -> ValidationReport:
    """Decide all p-algebra laws by exhaustive table scan.

    Raises :class:`StructureError` for out-of-range entries; law failures
    are reported, each with the first witness tuple in row-major order.
    """
    n = candidate.size
    if n <= 0:
        raise StructureError("size must be positive")
    m, j, s = candidate.np_meet, candidate.np_join, candidate.np_star
    for name, tab in (("meet", m), ("join", j), ("star", s)):
        if tab.size and (tab.min() < 0 or tab.max() >= n):
            raise StructureError(f"{name} table entry out of range")
    if not (0 <= candidate.zero < n and 0 <= candidate.one < n):
        raise StructureError("zero/one out of range")

    xs = np.arange(n)
    viol: list[Violation] = []

    def check2(law, lhs, rhs):
        w = _first_mismatch2(lhs, rhs)
        if w is not None:
            viol.append(Violation(law, w))

    check2("meet commutative", m, m.T)
    check2("join commutative", j, j.T)
    check2("meet idempotent", np.diagonal(m), xs)
    check2("join idempotent", np.diagonal(j), xs)
    check2("absorption x ^ (x v y) = x", m[xs[:, None], j], np.broadcast_to(xs[:, None], (n, n)))
    check2("absorption x v (x ^ y) = x", j[xs[:, None], m], np.broadcast_to(xs[:, None], (n, n)))
    w = _first_assoc_violation(m)
    if w:
        viol.append(Violation("meet associative", w))
    w = _first_assoc_violation(j)
    if w:
        viol.append(Violation("join associative", w))
    w = _first_distrib_violation(m, j)
    if w:
        viol.append(Violation("distributive", w))
    check2("0 is bottom", m[:, candidate.zero], np.full(n, candidate.zero))
    check2("1 is top", j[:, candidate.one], np.full(n, candidate.one))
    if s[candidate.one] != candidate.zero:
        viol.append(Violation("1* = 0", (candidate.one,)))
    if s[candidate.zero] != candidate.one:
        viol.append(Violation("0* = 1", (candidate.zero,)))
    check2("x ^ (x ^ y)* = x ^ y*", m[xs[:, None], s[m]], m[xs[:, None], s[None, :]])

    return ValidationReport(ok=not viol, violations=tuple(viol))


# ---------------------------------------------------------------------------
# constructions


def trivial_algebra() -> FiniteAlgebra:
    """The one-element algebra (zero = one); all laws hold vacuously."""
    return FiniteAlgebra(1, ((0,),), ((0,),), (0,), 0, 0)


def make_bn(n: int) -> FiniteAlgebra:
    """The subdirectly irreducible algebra with Boolean part of ``n`` atoms
    plus a new top.

    Indexing: ``0..2^n-1`` is the Boolean part as an atom bitmask (so the
    atoms sit at indices ``1, 2, 4, ...`` and the Boolean top ``e`` at
    ``2^n - 1``); index ``2^n`` is the new top.  ``n = 0`` gives the
    two-element Boolean algebra.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > MAX_BN_ATOMS:
        raise ResourceLimitError(f"make_bn bound is {MAX_BN_ATOMS} atoms (2^n+1 elements materialized)")
    b = 1 << n
    size = b + 1
    one = b
    e = b - 1
    meet = [[0] * size for _ in range(size)]
    join = [[0] * size for _ in range(size)]
    for x in range(b):
        for y in range(b):
            meet[x][y] = x & y
            join[x][y] = x | y
    for x in range(b):
        meet[x][one] = meet[one][x] = x
        join[x][one] = join[one][x] = one
    meet[one][one] = one
    join[one][one] = one
    star = [0] * size
    star[0] = one
    star[one] = 0
    for x in range(1, b):
        star[x] = e ^ x
    return FiniteAlgebra(size, meet, join, star, 0, one)


def product(factors: list[FiniteAlgebra]) -> FiniteAlgebra:
    """Direct product with mixed-radix indexing, leftmost factor most
    significant: ``index = (...((t0*n1 + t1)*n2 + t2)...)``."""
    if not factors:
        raise ValueError("product of an empty list is not supported")
    size = 1
    for f in factors:
        size *= f.size
    if size > MAX_ALGEBRA_SIZE:
        raise ResourceLimitError(f"product size {size} exceeds table budget {MAX_ALGEBRA_SIZE}")
    k = len(factors)
    sizes = [f.size for f in factors]
    tuples = list(itertools.product(*[range(s) for s in sizes]))
    index = {t: i for i, t in enumerate(tuples)}  # row-major == mixed radix
    meet = [[0] * size for _ in range(size)]
    join = [[0] * size for _ in range(size)]
    star = [0] * size
    for i, ti in enumerate(tuples):
        star[i] = index[tuple(factors[c].star[ti[c]] for c in range(k))]
        for jx, tj in enumerate(tuples):
            meet[i][jx] = index[tuple(factors[c].meet[ti[c]][tj[c]] for c in range(k))]
            join[i][jx] = index[tuple(factors[c].join[ti[c]][tj[c]] for c in range(k))]
    zero = index[tuple(f.zero for f in factors)]
    one = index[tuple(f.one for f in factors)]
    return FiniteAlgebra(size, meet, join, star, zero, one)


def generated_subalgebra(parent: FiniteAlgebra,
                         generators) -> tuple[FiniteAlgebra, AlgebraMap]:
    """Closure of ``generators | {0, 1}`` under meet, join and star.

    The subalgebra's indices are the closure listed in ascending parent
    order; the returned map is the inclusion embedding.
    """
    gens = set(int(g) for g in generators)
    if any(g < 0 or g >= parent.size for g in gens):
        raise ValueError("generator index out of range")
    closed = gens | {parent.zero, parent.one}
    frontier = list(closed)
    while frontier:
        new = set()
        current = list(closed)
        for x in frontier:
            sx = parent.star[x]
            if sx not in closed:
                new.add(sx)
            for y in current:
                for v in (parent.meet[x][y], parent.join[x][y]):
                    if v not in closed:
                        new.add(v)
        new -= closed
        closed |= new
        frontier = list(new)
    elements = sorted(closed)
    pos = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    meet = [[pos[parent.meet[a][b]] for b in elements] for a in elements]
    join = [[pos[parent.join[a][b]] for b in elements] for a in elements]
    star = [pos[parent.star[a]] for a in elements]
    sub = FiniteAlgebra(n, meet, join, star, pos[parent.zero], pos[parent.one])
    return sub, AlgebraMap(sub, parent, tuple(elements))


# ---------------------------------------------------------------------------
# homomorphism / embedding / isomorphism search


def _unary_profile(a: FiniteAlgebra) -> list[tuple[bool, ...]]:
    # term-equality facts preserved forward by any homomorphism
    out = []
    for x in range(a.size):
        sx = a.star[x]
        out.append((
            x == a.zero,
            x == a.one,
            sx == a.zero,
            a.star[sx] == x,
            a.join[x][sx] == a.one,
        ))
    return out


def _iso_invariant(a: FiniteAlgebra) -> list[tuple]:
    # order-theoretic counts, preserved by isomorphisms only
    ups = a.up_masks
    ji = set(a.join_irreducibles)
    prof = _unary_profile(a)
    out = []
    for x in range(a.size):
        above = bin(ups[x]).count("1")
        below = sum(1 for y in range(a.size) if a.leq(y, x))
        out.append((prof[x], above, below, x in ji))
    return out


def _op_facts_by_max(a: FiniteAlgebra):
    """All operation facts bucketed by the largest index involved, so each
    fact is checked exactly once during index-order assignment."""
    buckets: list[list[tuple]] = [[] for _ in range(a.size)]
    for x in range(a.size):
        for y in range(x + 1):
            zm = a.meet[x][y]
            buckets[max(x, zm)].append(("m", x, y, zm))
            zj = a.join[x][y]
            buckets[max(x, zj)].append(("j", x, y, zj))
        zs = a.star[x]
        buckets[max(x, zs)].append(("s", x, 0, zs))
    return buckets


def _definitions(a: FiniteAlgebra):
    """For each index, an op expression over strictly smaller indices that
    forces its image, when one exists."""
    defs: list[tuple | None] = [None] * a.size
    defs[a.zero] = ("0",)
    defs[a.one] = ("1",)
    for i in range(a.size):
        if defs[i] is not None:
            continue
        done = False
        for x in range(i):
            if a.star[x] == i:
                defs[i] = ("s", x)
                done = True
                break
            for y in range(x + 1):
                if a.meet[x][y] == i:
                    defs[i] = ("m", x, y)
                    done = True
                    break
                if a.join[x][y] == i:
                    defs[i] = ("j", x, y)
                    done = True
                    break
            if done:
                break
    return defs


def _map_search(source: FiniteAlgebra, target: FiniteAlgebra, *,
                injective: bool, iso: bool = False,
                limit: int | None = None,
                budget: int = DEFAULT_SEARCH_BUDGET) -> EnumerationResult:
    """Backtracking over element images in index order, candidates ascending.

    Each operation fact of the source is checked as soon as all indices it
    mentions are assigned, so every complete assignment is a homomorphism.
    """
    n, m = source.size, target.size
    if injective and n > m:
        return EnumerationResult((), True, 0)
    sprof = _unary_profile(source)
    tprof = _unary_profile(target)
    if iso:
        sinv = _iso_invariant(source)
        tinv = _iso_invariant(target)
    facts = _op_facts_by_max(source)
    defs = _definitions(source)
    tm, tj, ts = target.meet, target.join, target.star

    candidates: list[list[int]] = []
    for x in range(n):
        if iso:
            cand = [u for u in range(m) if tinv[u] == sinv[x]]
        elif injective:
            cand = [u for u in range(m) if tprof[u] == sprof[x]]
        else:
            cand = [u for u in range(m)
                    if all((not p) or q for p, q in zip(sprof[x], tprof[u]))]
        candidates.append(cand)

    f = [-1] * n
    used = [False] * m
    found: list[AlgebraMap] = []
    nodes = 0
    aborted = False

    def consistent(i: int) -> bool:
        for op, x, y, z in facts[i]:
            if op == "m":
                if tm[f[x]][f[y]] != f[z]:
                    return False
            elif op == "j":
                if tj[f[x]][f[y]] != f[z]:
                    return False
            else:
                if ts[f[x]] != f[z]:
                    return False
        return True

    def rec(i: int) -> bool:
        nonlocal nodes, aborted
        if i == n:
            found.append(AlgebraMap(source, target, tuple(f)))
            return limit is not None and len(found) >= limit
        d = defs[i]
        if d is None:
            cand = candidates[i]
        elif d[0] == "0":
            cand = [target.zero]
        elif d[0] == "1":
            cand = [target.one]
        elif d[0] == "s":
            cand = [ts[f[d[1]]]]
        elif d[0] == "m":
            cand = [tm[f[d[1]]][f[d[2]]]]
        else:
            cand = [tj[f[d[1]]][f[d[2]]]]
        # both constants must be honoured even when source zero == one
        if i == source.zero:
            cand = [u for u in cand if u == target.zero]
        if i == source.one:
            cand = [u for u in cand if u == target.one]
        for u in cand:
            if injective and used[u]:
                continue
            nodes += 1
            if nodes > budget:
                aborted = True
                return True
            f[i] = u
            used[u] = True
            if consistent(i) and rec(i + 1):
                used[u] = False
                f[i] = -1
                return True
            used[u] = False
            f[i] = -1
        return False

    rec(0)
    found.sort(key=lambda h: h.table)
    complete = not aborted and (limit is None or len(found) < limit)
    return EnumerationResult(tuple(found), complete, nodes)


def enumerate_homomorphisms(source: FiniteAlgebra, target: FiniteAlgebra,
                            limit: int | None = None,
                            budget: int = DEFAULT_SEARCH_BUDGET) -> EnumerationResult:
    """All homomorphisms source -> target, sorted by image table."""
    return _map_search(source, target, injective=False, limit=limit, budget=budget)


def enumerate_embeddings(small: FiniteAlgebra, big: FiniteAlgebra,
                         limit: int | None = None,
                         budget: int = DEFAULT_SEARCH_BUDGET) -> EnumerationResult:
    """All injective homomorphisms small -> big, sorted by image table.

    An empty result with ``complete=True`` proves no embedding exists;
    inspect ``complete`` before trusting emptiness.
    """
    return _map_search(small, big, injective=True, limit=limit, budget=budget)


def is_isomorphic(a: FiniteAlgebra, b: FiniteAlgebra,
                  budget: int = DEFAULT_SEARCH_BUDGET) -> tuple[bool, AlgebraMap | None]:
    """Bijective-homomorphism test with invariant pruning; returns the
    lexicographically least witness when isomorphic."""
    if a.size != b.size:
        return False, None
    res = _map_search(a, b, injective=True, iso=True, limit=1, budget=budget)
    if not res.complete and not res.maps:
        raise ResourceLimitError("isomorphism search budget exhausted")
    if res.maps:
        return True, res.maps[0]
    return False, None


# ---------------------------------------------------------------------------
# subdirect irreducibility


def principal_congruence(a: FiniteAlgebra, x: int, y: int) -> tuple[int, ...]:
    """Congruence generated by identifying ``x`` and ``y``, as a class-id
    vector (pair-generation closure under the basic operations)."""
    parent = list(range(a.size))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    queue = []

    def union(u, v):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)
            queue.append((u, v))

    union(x, y)
    while queue:
        p, q = queue.pop()
        union(a.star[p], a.star[q])
        for z in range(a.size):
            union(a.meet[p][z], a.meet[q][z])
            union(a.join[p][z], a.join[q][z])
    return tuple(find(v) for v in range(a.size))


def _si_by_congruences(a: FiniteAlgebra) -> bool:
    n = a.size
    if n < 2:
        return False
    monolith: set[tuple[int, int]] | None = None
    for x in range(n):
        for y in range(x + 1, n):
            cls = principal_congruence(a, x, y)
            pairs = {(u, v) for u in range(n) for v in range(u + 1, n) if cls[u] == cls[v]}
            monolith = pairs if monolith is None else monolith & pairs
            if not monolith:
                return False
    return bool(monolith)


def _si_by_shape(a: FiniteAlgebra) -> bool:
    # structural test: one is join-irreducible and A \ {1} is a Boolean
    # sublattice whose top e is the unique lower cover of 1, with star
    # acting as complementation on it.
    n = a.size
    if n < 2:
        return False
    one = a.one
    below_one = [x for x in range(n) if x != one]
    covers = [x for x in below_one
              if not any(z != x and a.leq(x, z) for z in below_one if a.leq(z, one))]
    if len(covers) != 1:
        return False
    e = covers[0]
    b = set(below_one)
    for x in below_one:
        if not a.leq(x, e):
            return False
        for y in below_one:
            if a.meet[x][y] not in b or a.join[x][y] not in b:
                return False
    for x in below_one:
        comp = [y for y in below_one
                if a.meet[x][y] == a.zero and a.join[x][y] == e]
        if not comp:
            return False
        if x != a.zero and a.star[x] not in comp:
            return False
    return a.star[a.zero] == one and a.star[one] == a.zero


@dataclass(frozen=True)
class SIReport:
    via_congruences: bool
    via_shape: bool


def is_subdirectly_irreducible(a: FiniteAlgebra, diagnostics: bool = False):
    """Subdirect irreducibility via the congruence monolith.

    With ``diagnostics=True`` also runs the independent shape check and
    raises :class:`InconsistentMethodsError` if the two verdicts differ,
    returning an :class:`SIReport` otherwise.
    """
    verdict = _si_by_congruences(a)
    if not diagnostics:
        return verdict
    shape = _si_by_shape(a)
    if verdict != shape:
        raise InconsistentMethodsError(
            f"congruence method says {verdict}, shape method says {shape}")
    return SIReport(verdict, shape)
