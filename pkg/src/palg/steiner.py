"""Steiner triple systems, their quasigroups, and the derived posets.

``construct_sts`` uses the classic direct constructions: Bose for orders
``6k+3`` and Skolem for ``6k+1``.  Labelings are fixed so every fixture is
reproducible; in particular ``paste_w`` always glues along the two
lexicographically greatest points of the order-7 system.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .core import (
    DEFAULT_SEARCH_BUDGET,
    EnumerationResult,
    StructureError,
    ValidationReport,
    Violation,
)
from .duality import FinitePoset


@dataclass(frozen=True)
class SteinerSystem:
    """Point set 0..order-1 plus 3-element blocks, stored sorted."""

    order: int
    blocks: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "blocks",
            tuple(sorted(tuple(sorted(int(p) for p in b)) for b in self.blocks)))
        for b in self.blocks:
            if len(set(b)) != 3:
                raise StructureError(f"block {b} is not a 3-element set")
            if any(p < 0 or p >= self.order for p in b):
                raise StructureError(f"block {b} has a point out of range")

    def block_set(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(b) for b in self.blocks)


@dataclass(frozen=True)
class SteinerQuasigroup:
    """Idempotent commutative multiplication with x(xy) = y."""

    order: int
    mult: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "mult",
                           tuple(tuple(int(v) for v in row) for row in self.mult))
        if len(self.mult) != self.order or any(len(r) != self.order for r in self.mult):
            raise StructureError("multiplication table shape mismatch")


def validate_steiner(s: SteinerSystem) -> ValidationReport:
    """Every 2-element point set lies in exactly one block."""
    count: dict[tuple[int, int], int] = {}
    for b in s.blocks:
        for pair in itertools.combinations(b, 2):
            count[pair] = count.get(pair, 0) + 1
    viol = []
    for x in range(s.order):
        for y in range(x + 1, s.order):
            c = count.get((x, y), 0)
            if c != 1:
                viol.append(Violation("pair in exactly one block", (x, y, c)))
    if len(s.blocks) != s.order * (s.order - 1) // 6:
        viol.append(Violation("block count v(v-1)/6", (len(s.blocks),)))
    return ValidationReport(ok=not viol, violations=tuple(viol))


def validate_quasigroup(q: SteinerQuasigroup) -> ValidationReport:
    viol = []
    m = q.mult
    for x in range(q.order):
        if m[x][x] != x:
            viol.append(Violation("x . x = x", (x,)))
            break
    done = False
    for x in range(q.order):
        for y in range(q.order):
            if m[x][y] != m[y][x]:
                viol.append(Violation("x . y = y . x", (x, y)))
                done = True
                break
        if done:
            break
    done = False
    for x in range(q.order):
        for y in range(q.order):
            if m[x][m[x][y]] != y:
                viol.append(Violation("x . (x . y) = y", (x, y)))
                done = True
                break
        if done:
            break
    return ValidationReport(ok=not viol, violations=tuple(viol))


# ---------------------------------------------------------------------------
# constructions


def _bose(v: int) -> SteinerSystem:
    # points (x, i) -> 3x + i over the idempotent quasigroup on Z_n,
    # n = 2k+1, x o y = (x+y)/2 mod n
    k = (v - 3) // 6
    n = 2 * k + 1
    half = pow(2, -1, n)
    pt = lambda x, i: 3 * x + i
    blocks = []
    for x in range(n):
        blocks.append((pt(x, 0), pt(x, 1), pt(x, 2)))
    for x in range(n):
        for y in range(x + 1, n):
            q = ((x + y) * half) % n
            for i in range(3):
                blocks.append((pt(x, i), pt(y, i), pt(q, (i + 1) % 3)))
    return SteinerSystem(v, blocks)


def _skolem(v: int) -> SteinerSystem:
    # points (x, i) -> 3x + i for x in Z_2k plus the point at infinity
    # v-1, over the half-idempotent commutative quasigroup on Z_2k
    k = (v - 1) // 6
    n = 2 * k
    inf = v - 1
    pt = lambda x, i: 3 * x + i

    def circ(x, y):
        s = (x + y) % n
        return s // 2 if s % 2 == 0 else (s - 1) // 2 + k

    blocks = []
    for x in range(k):
        blocks.append((pt(x, 0), pt(x, 1), pt(x, 2)))
    for i in range(k):
        for j in range(3):
            blocks.append((inf, pt(k + i, j), pt(i, (j + 1) % 3)))
    for x in range(n):
        for y in range(x + 1, n):
            q = circ(x, y)
            for j in range(3):
                blocks.append((pt(x, j), pt(y, j), pt(q, (j + 1) % 3)))
    return SteinerSystem(v, blocks)


def construct_sts(v: int) -> SteinerSystem:
    """Steiner triple system of order ``v >= 7`` with ``v = 1, 3 (mod 6)``."""
    if v < 7 or v % 6 not in (1, 3):
        raise ValueError(f"no Steiner triple system of order {v} is constructed here")
    return _skolem(v) if v % 6 == 1 else _bose(v)


@lru_cache(maxsize=None)
def fano_system() -> SteinerSystem:
    return construct_sts(7)


def to_quasigroup(s: SteinerSystem) -> SteinerQuasigroup:
    """x . y = the third point of the unique block through x and y; x . x = x."""
    m = [[i for _ in range(s.order)] for i in range(s.order)]
    for a, b, c in s.blocks:
        m[a][b] = m[b][a] = c
        m[a][c] = m[c][a] = b
        m[b][c] = m[c][b] = a
    return SteinerQuasigroup(s.order, tuple(tuple(r) for r in m))


def from_quasigroup(q: SteinerQuasigroup) -> SteinerSystem:
    """Blocks are the 3-element subalgebras {x, y, x.y}."""
    blocks = {tuple(sorted((x, y, q.mult[x][y])))
              for x in range(q.order) for y in range(q.order) if x != y}
    return SteinerSystem(q.order, tuple(blocks))


def _closure(mult, points) -> set[int]:
    out = set(points)
    frontier = list(out)
    while frontier:
        new = set()
        current = list(out)
        for x in frontier:
            for y in current:
                z = mult[x][y]
                if z not in out:
                    new.add(z)
        out |= new
        frontier = list(new)
    return out


def is_planar(q: SteinerQuasigroup) -> bool:
    """Order at least 4 and every non-block triple generates everything."""
    if q.order < 4:
        return False
    blocks = {frozenset((x, y, q.mult[x][y]))
              for x in range(q.order) for y in range(q.order) if x != y}
    for triple in itertools.combinations(range(q.order), 3):
        if frozenset(triple) in blocks:
            continue
        if len(_closure(q.mult, triple)) != q.order:
            return False
    return True


# ---------------------------------------------------------------------------
# homomorphism enumeration


def enumerate_quasigroup_homs(source: SteinerQuasigroup, target: SteinerQuasigroup,
                              budget: int = DEFAULT_SEARCH_BUDGET,
                              limit: int | None = None) -> EnumerationResult:
    """All multiplication-preserving maps, sorted by image table.

    Backtracks over point images in index order; a point that is a product
    of two earlier points is forced, so only a generating prefix branches.
    The constant maps are always present (idempotence).
    """
    n, m = source.order, target.order
    sm, tm = source.mult, target.mult
    defs: list[tuple[int, int] | None] = [None] * n
    for i in range(n):
        for x in range(i):
            for y in range(x + 1, i):
                if sm[x][y] == i:
                    defs[i] = (x, y)
                    break
            if defs[i]:
                break
    facts: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
    for x in range(n):
        for y in range(x + 1, n):
            z = sm[x][y]
            facts[max(x, y, z)].append((x, y, z))
    f = [-1] * n
    found: list[tuple[int, ...]] = []
    nodes = 0
    aborted = False

    def rec(i: int) -> bool:
        nonlocal nodes, aborted
        if i == n:
            found.append(tuple(f))
            return limit is not None and len(found) >= limit
        cand = range(m) if defs[i] is None else (tm[f[defs[i][0]]][f[defs[i][1]]],)
        for u in cand:
            nodes += 1
            if nodes > budget:
                aborted = True
                return True
            f[i] = u
            if all(tm[f[x]][f[y]] == f[z] for x, y, z in facts[i]):
                if rec(i + 1):
                    f[i] = -1
                    return True
            f[i] = -1
        return False

    rec(0)
    found.sort()
    complete = not aborted and (limit is None or len(found) < limit)
    maps = tuple(_QuasigroupHom(source, target, t) for t in found)
    return EnumerationResult(maps, complete, nodes)


@dataclass(frozen=True)
class _QuasigroupHom:
    source: SteinerQuasigroup
    target: SteinerQuasigroup
    table: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.table[x]

    def is_constant(self) -> bool:
        return len(set(self.table)) == 1


# ---------------------------------------------------------------------------
# posets


def poset_of(s: SteinerSystem) -> FinitePoset:
    """The height-1 poset on points plus blocks: points 0..v-1 are the
    maximal elements, blocks follow in lexicographic order as minimal
    elements, each below exactly its three points."""
    v = s.order
    covers = []
    for bi, b in enumerate(s.blocks):
        for p in b:
            covers.append((v + bi, p))
    return FinitePoset.from_covers(v + len(s.blocks), covers)


def make_p1(m: int) -> FinitePoset:
    """One bottom below ``m`` pairwise-incomparable maximal points; the
    maximals are indices 0..m-1 and the bottom is index m."""
    if m < 1:
        raise ValueError("m must be positive")
    return FinitePoset.from_covers(m + 1, [(m, i) for i in range(m)])


PASTE_POINTS = (5, 6)  # the two lexicographically greatest Fano points


def paste_w(m: int) -> FinitePoset:
    """Horizontal pasting of the Fano poset with the m-fan: the fan's first
    two maximals are identified with Fano points 5 and 6, the remaining
    ``m - 2`` maximals are new indices 14..11+m and the fan bottom is the
    last index, giving ``13 + m`` points."""
    if m < 3:
        raise ValueError("m must be at least 3")
    fano = poset_of(fano_system())
    n = fano.size + (m - 2) + 1
    covers = list(fano.covers())
    bot = n - 1
    covers.append((bot, PASTE_POINTS[0]))
    covers.append((bot, PASTE_POINTS[1]))
    for i in range(m - 2):
        covers.append((bot, fano.size + i))
    return FinitePoset.from_covers(n, covers)


def collapse_pasting(m: int):
    """The surjective pp-morphism from the pasted poset onto the
    (m-1)-fan: the whole triple-system part lands on the first maximal,
    the fresh maximals shift down one slot, bottom goes to bottom."""
    from .duality import PPMap

    src = paste_w(m)
    dst = make_p1(m - 1)
    table = [0] * src.size
    for i in range(m - 2):
        table[14 + i] = i + 1
    table[src.size - 1] = dst.size - 1
    return PPMap(src, dst, tuple(table))
