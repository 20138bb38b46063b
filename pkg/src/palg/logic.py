"""Terms and quasiequations over the signature {^, v, *, 0, 1}.

Grammar (whitespace insensitive):

    variables    [a-zA-Z][a-zA-Z0-9_]*   (the bare word ``v`` is the join
                                          operator and cannot be a variable)
    constants    0, 1
    star         postfix *, binds tightest
    meet         infix ^, right-associated
    join         infix v, right-associated, loosest
    equation     term = term
    quasieq      eq & eq & ... => eq     (premises optional)

``parse`` returns a :class:`Term` for plain terms and a
:class:`Quasiequation` as soon as an ``=`` is present; an equation without
premises is the identity case.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .core import FiniteAlgebra, make_bn

DEFAULT_SWEEP_BUDGET = 50_000_000
_GRID_CELLS = 1 << 18


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnboundVariableError(ValueError):
    pass


# ---------------------------------------------------------------------------
# terms


@dataclass(frozen=True)
class Term:
    pass


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Const(Term):
    value: int  # 0 or 1


@dataclass(frozen=True)
class Meet(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Join(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Star(Term):
    arg: Term


ZERO = Const(0)
ONE = Const(1)


@dataclass(frozen=True)
class Quasiequation:
    """Premise equalities implying a conclusion equality; an empty premise
    list is a plain identity."""

    premises: tuple[tuple[Term, Term], ...]
    conclusion: tuple[Term, Term]


def term_variables(t: Term, acc: list[str]) -> None:
    if isinstance(t, Var):
        if t.name not in acc:
            acc.append(t.name)
    elif isinstance(t, Meet) or isinstance(t, Join):
        term_variables(t.left, acc)
        term_variables(t.right, acc)
    elif isinstance(t, Star):
        term_variables(t.arg, acc)


def variables_of(q: Quasiequation) -> list[str]:
    """Variables in order of first occurrence, premises before conclusion."""
    acc: list[str] = []
    for lhs, rhs in q.premises:
        term_variables(lhs, acc)
        term_variables(rhs, acc)
    term_variables(q.conclusion[0], acc)
    term_variables(q.conclusion[1], acc)
    return acc


# ---------------------------------------------------------------------------
# parsing and printing

_TOKEN = re.compile(r"\s*(=>|[a-zA-Z][a-zA-Z0-9_]*|[01()^*=&])")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise ParseError(f"unexpected character {stripped[0]!r}", pos)
        tok = m.group(1)
        at = m.start(1)
        if tok == "v":
            tokens.append(("JOIN", tok, at))
        elif re.fullmatch(r"[a-zA-Z][a-zA-Z0-9_]*", tok):
            tokens.append(("VAR", tok, at))
        elif tok in ("0", "1"):
            tokens.append(("CONST", tok, at))
        else:
            tokens.append((tok, tok, at))
        pos = m.end()
    tokens.append(("END", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind: str):
        k, v, at = self.tokens[self.i]
        if k != kind:
            raise ParseError(f"expected {kind}, found {v!r}", at)
        self.i += 1
        return v

    def term(self) -> Term:
        return self.join()

    def join(self) -> Term:
        left = self.meet()
        if self.peek()[0] == "JOIN":
            self.i += 1
            return Join(left, self.join())
        return left

    def meet(self) -> Term:
        left = self.unary()
        if self.peek()[0] == "^":
            self.i += 1
            return Meet(left, self.meet())
        return left

    def unary(self) -> Term:
        t = self.atom()
        while self.peek()[0] == "*":
            self.i += 1
            t = Star(t)
        return t

    def atom(self) -> Term:
        k, v, at = self.peek()
        if k == "VAR":
            self.i += 1
            return Var(v)
        if k == "CONST":
            self.i += 1
            return Const(int(v))
        if k == "(":
            self.i += 1
            t = self.term()
            self.take(")")
            return t
        raise ParseError(f"expected a term, found {v!r}", at)

    def equation(self) -> tuple[Term, Term]:
        lhs = self.term()
        self.take("=")
        return lhs, self.term()


def parse(text: str) -> Term | Quasiequation:
    """Parse a term, identity or quasiequation; round-trips with the
    formatters below."""
    p = _Parser(text)
    start = p.i
    first = p.term()
    kind = p.peek()[0]
    if kind == "END":
        return first
    p.i = start
    eqs = [p.equation()]
    while p.peek()[0] == "&":
        p.i += 1
        eqs.append(p.equation())
    if p.peek()[0] == "=>":
        p.i += 1
        concl = p.equation()
        q = Quasiequation(tuple(eqs), concl)
    else:
        if len(eqs) != 1:
            raise ParseError("premise list without conclusion", p.peek()[2])
        q = Quasiequation((), eqs[0])
    k, v, at = p.peek()
    if k != "END":
        raise ParseError(f"trailing input {v!r}", at)
    return q


_LEVEL_JOIN, _LEVEL_MEET, _LEVEL_STAR = 1, 2, 3


def format_term(t: Term, level: int = 0) -> str:
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Const):
        return str(t.value)
    if isinstance(t, Star):
        return format_term(t.arg, _LEVEL_STAR) + "*"
    if isinstance(t, Meet):
        s = f"{format_term(t.left, _LEVEL_MEET + 1)} ^ {format_term(t.right, _LEVEL_MEET)}"
        return f"({s})" if level > _LEVEL_MEET else s
    if isinstance(t, Join):
        s = f"{format_term(t.left, _LEVEL_JOIN + 1)} v {format_term(t.right, _LEVEL_JOIN)}"
        return f"({s})" if level > _LEVEL_JOIN else s
    raise TypeError(f"not a term: {t!r}")


def format_quasiequation(q: Quasiequation) -> str:
    concl = f"{format_term(q.conclusion[0])} = {format_term(q.conclusion[1])}"
    if not q.premises:
        return concl
    prem = " & ".join(f"{format_term(l)} = {format_term(r)}" for l, r in q.premises)
    return f"{prem} => {concl}"


# ---------------------------------------------------------------------------
# evaluation


def eval_term(t: Term, a: FiniteAlgebra, valuation: dict[str, int]) -> int:
    """Structural evaluation through the algebra's tables."""
    if isinstance(t, Var):
        try:
            return valuation[t.name]
        except KeyError:
            raise UnboundVariableError(f"unbound variable {t.name!r}") from None
    if isinstance(t, Const):
        return a.zero if t.value == 0 else a.one
    if isinstance(t, Meet):
        return a.meet[eval_term(t.left, a, valuation)][eval_term(t.right, a, valuation)]
    if isinstance(t, Join):
        return a.join[eval_term(t.left, a, valuation)][eval_term(t.right, a, valuation)]
    if isinstance(t, Star):
        return a.star[eval_term(t.arg, a, valuation)]
    raise TypeError(f"not a term: {t!r}")


def _eval_np(t: Term, a: FiniteAlgebra, valuation: dict):
    """Vectorized evaluation; valuation values are scalars or index arrays."""
    if isinstance(t, Var):
        try:
            return valuation[t.name]
        except KeyError:
            raise UnboundVariableError(f"unbound variable {t.name!r}") from None
    if isinstance(t, Const):
        return a.zero if t.value == 0 else a.one
    if isinstance(t, Meet):
        return a.np_meet[_eval_np(t.left, a, valuation), _eval_np(t.right, a, valuation)]
    if isinstance(t, Join):
        return a.np_join[_eval_np(t.left, a, valuation), _eval_np(t.right, a, valuation)]
    if isinstance(t, Star):
        return a.np_star[_eval_np(t.arg, a, valuation)]
    raise TypeError(f"not a term: {t!r}")


# ---------------------------------------------------------------------------
# satisfaction


@dataclass(frozen=True)
class SatisfactionResult:
    status: str                     # "satisfied" | "falsified" | "inconclusive"
    falsifier: dict[str, int] | None = None
    checked: int = 0

    @property
    def satisfied(self) -> bool | None:
        if self.status == "inconclusive":
            return None
        return self.status == "satisfied"

    def __bool__(self) -> bool:
        return self.status == "satisfied"


def _term_vars(t: Term) -> frozenset[str]:
    acc: list[str] = []
    term_variables(t, acc)
    return frozenset(acc)


def _pin_candidates(a: FiniteAlgebra, var: str, lhs: Term, rhs: Term,
                    val: dict[str, int], starinv) -> list[int] | None:
    """Solve a premise for ``var`` when the other side is ground: supports
    the shapes  var = t  and  var* = t  (either orientation)."""
    for mine, other in ((lhs, rhs), (rhs, lhs)):
        if _term_vars(other) - val.keys():
            continue
        if isinstance(mine, Var) and mine.name == var:
            return [eval_term(other, a, val)]
        if isinstance(mine, Star) and isinstance(mine.arg, Var) and mine.arg.name == var:
            return starinv.get(eval_term(other, a, val), [])
    return None


def _sweep_backtrack(a: FiniteAlgebra, q: Quasiequation, names: list[str],
                     budget: int) -> SatisfactionResult:
    n = a.size
    starinv: dict[int, list[int]] = {}
    for x in range(n):
        starinv.setdefault(a.star[x], []).append(x)
    prem_by_level: list[list[tuple[Term, Term]]] = [[] for _ in names]
    seen: set[str] = set()
    for lvl, name in enumerate(names):
        seen.add(name)
        for lhs, rhs in q.premises:
            vs = _term_vars(lhs) | _term_vars(rhs)
            if name in vs and vs <= seen:
                prem_by_level[lvl].append((lhs, rhs))
    ground_prems = [(l, r) for l, r in q.premises if not (_term_vars(l) | _term_vars(r))]
    val: dict[str, int] = {}
    count = 0

    for lhs, rhs in ground_prems:
        if eval_term(lhs, a, val) != eval_term(rhs, a, val):
            return SatisfactionResult("satisfied", None, 0)

    def rec(lvl: int):
        nonlocal count
        if lvl == len(names):
            if eval_term(q.conclusion[0], a, val) != eval_term(q.conclusion[1], a, val):
                return dict(val)
            return None
        name = names[lvl]
        cand: list[int] | range = range(n)
        for lhs, rhs in q.premises:
            pinned = _pin_candidates(a, name, lhs, rhs, val, starinv)
            if pinned is not None:
                cand = pinned
                break
        for u in cand:
            count += 1
            if count > budget:
                return "budget"
            val[name] = u
            ok = all(eval_term(l, a, val) == eval_term(r, a, val)
                     for l, r in prem_by_level[lvl])
            if ok:
                res = rec(lvl + 1)
                if res is not None:
                    del val[name]
                    return res
            del val[name]
        return None

    res = rec(0)
    if res == "budget":
        return SatisfactionResult("inconclusive", None, count)
    if res is None:
        return SatisfactionResult("satisfied", None, count)
    return SatisfactionResult("falsified", res, count)


def _sweep_grid(a: FiniteAlgebra, q: Quasiequation, names: list[str],
                budget: int) -> SatisfactionResult:
    n = a.size
    k = len(names)
    g = 1
    while g < k and n ** (g + 1) <= _GRID_CELLS:
        g += 1
    lead, tail = names[:k - g], names[k - g:]
    cells = n ** g
    grids = {}
    flat = np.arange(cells)
    for i, name in enumerate(tail):
        grids[name] = (flat // (n ** (g - 1 - i))) % n
    checked = 0
    prem_by_level: list[list[tuple[Term, Term]]] = [[] for _ in lead]
    seen: set[str] = set()
    for lvl, name in enumerate(lead):
        seen.add(name)
        for lhs, rhs in q.premises:
            vs = _term_vars(lhs) | _term_vars(rhs)
            if name in vs and vs <= seen:
                prem_by_level[lvl].append((lhs, rhs))
    tail_prems = [(l, r) for l, r in q.premises
                  if (_term_vars(l) | _term_vars(r)) & set(tail)]
    val: dict[str, int] = {}

    def leaf():
        nonlocal checked
        checked += cells
        env = dict(val)
        env.update(grids)
        mask = np.ones(cells, dtype=bool)
        for lhs, rhs in tail_prems:
            mask &= np.equal(_eval_np(lhs, a, env), _eval_np(rhs, a, env))
            if not mask.any():
                return None
        mask &= np.not_equal(_eval_np(q.conclusion[0], a, env),
                             _eval_np(q.conclusion[1], a, env))
        if not mask.any():
            return None
        cell = int(np.argmax(mask))
        out = dict(val)
        for i, name in enumerate(tail):
            out[name] = (cell // (n ** (g - 1 - i))) % n
        return out

    def rec(lvl: int):
        if lvl == len(lead):
            return leaf()
        name = lead[lvl]
        for u in range(n):
            val[name] = u
            if all(eval_term(l, a, val) == eval_term(r, a, val)
                   for l, r in prem_by_level[lvl]):
                res = rec(lvl + 1)
                if res is not None:
                    del val[name]
                    return res
            del val[name]
        return None

    for lhs, rhs in q.premises:
        if not (_term_vars(lhs) | _term_vars(rhs)):
            if eval_term(lhs, a, {}) != eval_term(rhs, a, {}):
                return SatisfactionResult("satisfied", None, 0)
    res = rec(0)
    if res is None:
        return SatisfactionResult("satisfied", None, checked)
    return SatisfactionResult("falsified", res, checked)


def satisfies(a: FiniteAlgebra, q: Quasiequation,
              budget: int = DEFAULT_SWEEP_BUDGET) -> SatisfactionResult:
    """Exhaustive valuation sweep, lexicographic in (variable order,
    element index); reports the least falsifier.

    Small valuation spaces are swept on vectorized grids; larger ones fall
    back to a backtracking sweep that prunes on ground premises and solves
    premises of the shapes ``x = t`` / ``x* = t`` for their variable.  If
    neither finishes within budget the result is inconclusive.
    """
    names = variables_of(q)
    if not names:
        holds = all(eval_term(l, a, {}) == eval_term(r, a, {}) for l, r in q.premises)
        if not holds:
            return SatisfactionResult("satisfied", None, 1)
        if eval_term(q.conclusion[0], a, {}) == eval_term(q.conclusion[1], a, {}):
            return SatisfactionResult("satisfied", None, 1)
        return SatisfactionResult("falsified", {}, 1)
    if a.size ** len(names) <= budget:
        return _sweep_grid(a, q, names, budget)
    return _sweep_backtrack(a, q, names, budget)


# ---------------------------------------------------------------------------
# named quasiequations


def _join_all(terms: list[Term]) -> Term:
    """Right-associated join, empty join = 0."""
    if not terms:
        return ZERO
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Join(t, out)
    return out


def _meet_all(terms: list[Term]) -> Term:
    """Right-associated meet, empty meet = 1."""
    if not terms:
        return ONE
    out = terms[-1]
    for t in reversed(terms[:-1]):
        out = Meet(t, out)
    return out


def make_qb(n: int) -> Quasiequation:
    """The quasiequation whose failure is equivalent to containing the
    n-atom subdirectly irreducible as a subalgebra: premises
    ``x_i* = join of the other variables``, conclusion ``join of all = 1``."""
    if n < 1:
        raise ValueError("n must be positive")
    xs = [Var(f"x{i}") for i in range(1, n + 1)]
    premises = tuple((Star(xs[i]), _join_all([xs[j] for j in range(n) if j != i]))
                     for i in range(n))
    return Quasiequation(premises, (_join_all(xs), ONE))


def make_ib(m: int) -> Quasiequation:
    """The single identity axiomatizing the variety generated by the
    m-atom subdirectly irreducible."""
    if m < 1:
        raise ValueError("m must be positive")
    xs = [Var(f"x{i}") for i in range(1, m + 2)]
    summands = [Star(Meet(xs[i], _meet_all([Star(xs[j]) for j in range(m + 1) if j != i])))
                for i in range(m + 1)]
    return Quasiequation((), (_join_all(summands), ONE))


def make_positive_diagram(a: FiniteAlgebra) -> tuple[tuple[Term, Term], ...]:
    """Positive unnested diagram over variables ``x_<elementIndex>``: one
    equality per meet/join/star table entry plus the two constants, in
    that order (meet rows, join rows, star, constants)."""
    xs = [Var(f"x{i}") for i in range(a.size)]
    prem: list[tuple[Term, Term]] = []
    for i in range(a.size):
        for j in range(a.size):
            prem.append((Meet(xs[i], xs[j]), xs[a.meet[i][j]]))
    for i in range(a.size):
        for j in range(a.size):
            prem.append((Join(xs[i], xs[j]), xs[a.join[i][j]]))
    for i in range(a.size):
        prem.append((Star(xs[i]), xs[a.star[i]]))
    prem.append((xs[a.zero], ZERO))
    prem.append((xs[a.one], ONE))
    return tuple(prem)


def make_splitting_quasieq(m: int) -> Quasiequation:
    """Positive diagram of the m-atom subdirectly irreducible implying
    ``x_e = x_1`` where ``e`` is its Boolean top (index ``2^m - 1``) and
    the top sits at index ``2^m``."""
    bn = make_bn(m)
    e = (1 << m) - 1
    return Quasiequation(make_positive_diagram(bn),
                         (Var(f"x{e}"), Var(f"x{bn.one}")))


@dataclass(frozen=True)
class VarietyResult:
    status: str                      # "satisfied" | "falsified" | "inconclusive"
    counterexample_atoms: int | None = None
    falsifier: dict[str, int] | None = None

    @property
    def satisfied(self) -> bool | None:
        if self.status == "inconclusive":
            return None
        return self.status == "satisfied"

    def __bool__(self) -> bool:
        return self.status == "satisfied"


def variety_satisfies(q: Quasiequation,
                      budget: int = DEFAULT_SWEEP_BUDGET) -> VarietyResult:
    """Whether the whole variety satisfies an n-variable quasiequation.

    A failure anywhere is witnessed in an n-generated algebra, whose
    subdirectly irreducible quotients have at most 2^n atoms, so checking
    the algebras with 0..2^n atoms decides the variety.
    """
    n = len(variables_of(q))
    bound = 1 << n
    inconclusive = False
    for j in range(bound + 1):
        res = satisfies(make_bn(j), q, budget=budget)
        if res.status == "falsified":
            return VarietyResult("falsified", j, res.falsifier)
        if res.status == "inconclusive":
            inconclusive = True
    if inconclusive:
        return VarietyResult("inconclusive")
    return VarietyResult("satisfied")
