"""Root data for the simple Dynkin types.

Cartan matrices use the convention ``C[i][j] = <alpha_j, alpha_i^vee>`` with
Bourbaki numbering, so that the simple reflections act integrally on the root
lattice:

    s_i(alpha_j) = alpha_j - C[i][j] * alpha_i

Every matrix here is a tuple of row tuples of Python ints. Columns of a Weyl
group element are the images of the simple roots.
"""
from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

FAMILIES = "ABCDEFG"

IntMatrix = tuple[tuple[int, ...], ...]


class ParseError(ValueError):
    """A type expression does not match the grammar."""


class RankError(ValueError):
    """A rank is outside the bounds allowed for its family."""


_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4}
_FIXED_RANKS = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


@dataclass(frozen=True, order=True)
class SimpleType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ParseError(f"unknown family {self.family!r}")
        ok = (self.rank >= _MIN_RANK[self.family]
              if self.family in _MIN_RANK
              else self.rank in _FIXED_RANKS[self.family])
        if not ok:
            raise RankError(f"{self.family}{self.rank} is not a valid simple type")

    def __str__(self):
        return f"{self.family}{self.rank}"

    @property
    def label(self) -> str:
        """Label with B and C merged, as used in identification output."""
        if self.family in "BC":
            return f"BC{self.rank}"
        return str(self)

    @property
    def is_exceptional(self) -> bool:
        return self.family in "EFG"


def canonical_simple(family: str, rank: int) -> tuple[SimpleType, ...]:
    """Rewrite low-rank coincidences; the result may have several factors.

    B1, C1, D1 -> A1;  C2 -> B2;  D2 -> A1 x A1;  D3 -> A3.
    """
    family = family.upper()
    if rank < 1:
        raise RankError(f"{family}{rank}: rank must be positive")
    if family in "BCD" and rank == 1:
        return (SimpleType("A", 1),)
    if family == "C" and rank == 2:
        return (SimpleType("B", 2),)
    if family == "D" and rank == 2:
        return (SimpleType("A", 1), SimpleType("A", 1))
    if family == "D" and rank == 3:
        return (SimpleType("A", 3),)
    return (SimpleType(family, rank),)


@dataclass(frozen=True)
class SemisimpleType:
    """A multiset of simple types, stored sorted."""

    factors: tuple[SimpleType, ...]

    def __init__(self, factors):
        object.__setattr__(self, "factors", tuple(sorted(factors)))

    @property
    def total_rank(self) -> int:
        return sum(t.rank for t in self.factors)

    def __str__(self):
        counts = Counter(self.factors)
        terms = []
        for t in sorted(counts):
            k = counts[t]
            terms.append(f"{k}*{t}" if k > 1 else str(t))
        return " x ".join(terms)

    @property
    def key(self) -> str:
        """Canonical whitespace-free type string, e.g. ``2*A1xB2``."""
        return str(self).replace(" ", "")

    def __mul__(self, other: SemisimpleType) -> SemisimpleType:
        return SemisimpleType(self.factors + other.factors)

    def labels(self) -> tuple[str, ...]:
        """Sorted factor labels with B/C merged."""
        return tuple(sorted(t.label for t in self.factors))


_TERM = re.compile(r"^(?:(\d+)\*)?([A-Za-z])(\d+)$")


def parse_type(expr: str) -> SemisimpleType:
    """Parse ``term ("x" term)*`` with ``term := [k*]<Family><rank>``.

    >>> str(parse_type("A3 x B2"))
    'A3 x B2'
    >>> str(parse_type("d3"))
    'A3'
    """
    compact = re.sub(r"\s+", "", expr)
    if not compact:
        raise ParseError("empty type expression")
    factors: list[SimpleType] = []
    for term in re.split(r"[xX]", compact):
        m = _TERM.match(term)
        if m is None:
            raise ParseError(f"bad term {term!r} in {expr!r}")
        count = int(m.group(1)) if m.group(1) else 1
        family = m.group(2).upper()
        if family not in FAMILIES:
            raise ParseError(f"unknown family {m.group(2)!r} in {expr!r}")
        if count < 1:
            raise ParseError(f"multiplicity must be positive in {term!r}")
        factors.extend(canonical_simple(family, int(m.group(3))) * count)
    return SemisimpleType(factors)


def _chain(n: int) -> list[list[int]]:
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
        if i + 1 < n:
            c[i][i + 1] = c[i + 1][i] = -1
    return c


def _link(c: list[list[int]], i: int, j: int) -> None:
    c[i][j] = c[j][i] = -1


@lru_cache(maxsize=None)
def cartan_matrix(t: SimpleType) -> IntMatrix:
    n, f = t.rank, t.family
    if f == "A":
        c = _chain(n)
    elif f == "B":
        c = _chain(n)
        c[n - 1][n - 2] = -2  # alpha_n short
    elif f == "C":
        c = _chain(n)
        c[n - 2][n - 1] = -2  # alpha_n long
    elif f == "D":
        c = _chain(n - 1)
        for row in c:
            row.append(0)
        c.append([0] * n)
        c[n - 1][n - 1] = 2
        _link(c, n - 3, n - 1)  # fork at alpha_{n-2}
    elif f == "E":
        c = [[0] * n for _ in range(n)]
        for i in range(n):
            c[i][i] = 2
        _link(c, 0, 2)
        _link(c, 1, 3)
        for i in range(2, n - 1):
            _link(c, i, i + 1)
    elif f == "F":
        c = _chain(4)
        c[2][1] = -2  # alpha_3, alpha_4 short
    else:
        # alpha_1 long, alpha_2 short
        c = [[2, -1], [-3, 2]]
    return tuple(tuple(row) for row in c)


@lru_cache(maxsize=None)
def simple_reflections(t: SimpleType) -> tuple[IntMatrix, ...]:
    c = cartan_matrix(t)
    n = t.rank
    gens = []
    for i in range(n):
        rows = [[int(r == k) for k in range(n)] for r in range(n)]
        for j in range(n):
            rows[i][j] -= c[i][j]
        gens.append(tuple(tuple(r) for r in rows))
    return tuple(gens)


def reflect(t: SimpleType, i: int, v: tuple[int, ...]) -> tuple[int, ...]:
    """Apply ``s_i`` to a vector in simple-root coordinates."""
    c = cartan_matrix(t)
    out = list(v)
    out[i] -= sum(c[i][j] * v[j] for j in range(t.rank))
    return tuple(out)


@lru_cache(maxsize=None)
def roots(t: SimpleType) -> tuple[tuple[int, ...], ...]:
    """All roots in simple-root coordinates, positive roots first, sorted."""
    n = t.rank
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    seen = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(n):
                w = reflect(t, i, v)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    positive = sorted((v for v in seen if sum(v) > 0), key=lambda v: (sum(v), v))
    return tuple(positive) + tuple(tuple(-x for x in v) for v in positive)


_DEGREES_EXCEPTIONAL = {
    ("E", 6): (2, 5, 6, 8, 9, 12),
    ("E", 7): (2, 6, 8, 10, 12, 14, 18),
    ("E", 8): (2, 8, 12, 14, 18, 20, 24, 30),
    ("F", 4): (2, 6, 8, 12),
    ("G", 2): (2, 6),
}


def degrees(t: SimpleType) -> list[int]:
    n = t.rank
    if t.family == "A":
        return list(range(2, n + 2))
    if t.family in "BC":
        return list(range(2, 2 * n + 1, 2))
    if t.family == "D":
        return sorted(list(range(2, 2 * n - 1, 2)) + [n])
    return list(_DEGREES_EXCEPTIONAL[t.family, n])


def weyl_order(t: SimpleType | SemisimpleType) -> int:
    if isinstance(t, SemisimpleType):
        return math.prod(weyl_order(f) for f in t.factors)
    return math.prod(degrees(t))


def mat_mul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def block_diag(*blocks: IntMatrix) -> IntMatrix:
    n = sum(len(b) for b in blocks)
    rows = []
    offset = 0
    for b in blocks:
        k = len(b)
        for row in b:
            rows.append((0,) * offset + tuple(row) + (0,) * (n - offset - k))
        offset += k
    return tuple(rows)


def coxeter_element(t: SimpleType) -> IntMatrix:
    m = identity(t.rank)
    for s in simple_reflections(t):
        m = mat_mul(m, s)
    return m


def matrix_group(gens: tuple[IntMatrix, ...]) -> set[IntMatrix]:
    """Closure of a set of integer matrices under multiplication (BFS).

    Only for small groups; this is the brute-force oracle path.
    """
    n = len(gens[0])
    seen = {identity(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = mat_mul(g, s)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def all_simple_types(max_rank: int, *, split_bc: bool = False) -> list[SimpleType]:
    """Canonical simple types of rank <= max_rank.

    With ``split_bc`` false, C_n is omitted (it is represented by B_n).
    """
    out = []
    for n in range(1, max_rank + 1):
        out.append(SimpleType("A", n))
        if n >= 2:
            out.append(SimpleType("B", n))
        if split_bc and n >= 3:
            out.append(SimpleType("C", n))
        if n >= 4:
            out.append(SimpleType("D", n))
        for fam, ranks in _FIXED_RANKS.items():
            if n in ranks:
                out.append(SimpleType(fam, n))
    return out
