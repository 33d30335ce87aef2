"""Recover the simple factors of a Weyl group from its spectrum.

``identify_by_cases`` runs a downward induction on the rank m of the simple
factors. At each rank it reads the multiplicity of every rank-m type off the
residual invariants (the invariants of the input minus those of the factors
already found), in the order exceptional, B/C, D, A, and subtracts each
result before moving on. ``identify_by_search`` is an independent brute-force
oracle and ``verify_uniqueness`` checks that, up to a fixed rank, spectra
separate all types except for the B/C switch.
"""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterator, Protocol

import numpy as np

from .exact_poly import CycloPoly, totient, x_power
from .invariants import ch_star, index_universe, m, m_pair, m_prime, springer_ch_star
from .root_data import SemisimpleType, SimpleType, all_simple_types
from .spectra import Spectrum, spectrum_simple, unit_spectrum

DEFAULT_SEARCH_BOUND = 8


class InconsistentSpectrum(ValueError):
    """The spectrum is not that of a product of simple Weyl groups."""


class SearchBoundExceeded(ValueError):
    pass


class Invariants(Protocol):
    def m(self, i: int) -> int: ...
    def mp(self, i: int) -> int: ...
    def mm(self, i: int, j: int) -> int: ...


class SpectrumInvariants:
    """Invariants of a single spectrum, read off a members x indices multiplicity matrix."""

    def __init__(self, S: Spectrum):
        self.S = S
        index = sorted(ch_star(S))
        self._col = {d: k for k, d in enumerate(index)}
        self._mat = np.zeros((max(len(S.polys), 1), len(index)), dtype=np.int32)
        for r, p in enumerate(S.polys):
            for d, k in p.factors:
                self._mat[r, self._col[d]] = k
        self._zero = np.zeros(self._mat.shape[0], dtype=np.int32)
        self._mm: dict[tuple[int, int], int] = {}

    def _column(self, i: int) -> np.ndarray:
        k = self._col.get(i)
        return self._zero if k is None else self._mat[:, k]

    def m(self, i):
        return int(self._column(i).max())

    def mp(self, i):
        if i == 2:
            return 0
        col = self._column(i)
        return int(self._column(2)[col == col.max()].min())

    def mm(self, i, j):
        if i == j:
            return m_pair(self.S, i, j)
        key = (min(i, j), max(i, j))
        if key not in self._mm:
            self._mm[key] = int((self._column(i) + self._column(j)).max())
        return self._mm[key]


_E8_MODE = {"mode": "bundled"}


@lru_cache(maxsize=None)
def type_invariants(t: SimpleType) -> SpectrumInvariants:
    return SpectrumInvariants(spectrum_simple(t, e8_mode=_E8_MODE["mode"]))


class Residual:
    """Invariants of the input minus those of the factors removed so far."""

    def __init__(self, S: Spectrum):
        self.whole = SpectrumInvariants(S)
        self.removed: Counter[SimpleType] = Counter()

    def _minus(self, value: int, get: Callable[[SpectrumInvariants], int]) -> int:
        for t, k in self.removed.items():
            value -= k * get(type_invariants(t))
        return value

    def m(self, i):
        return self._minus(self.whole.m(i), lambda inv: inv.m(i))

    def mp(self, i):
        return self._minus(self.whole.mp(i), lambda inv: inv.mp(i))

    def mm(self, i, j):
        return self._minus(self.whole.mm(i, j), lambda inv: inv.mm(i, j))

    def remove(self, t: SimpleType, k: int) -> None:
        if k:
            self.removed[t] += k


E6, E7, E8 = SimpleType("E", 6), SimpleType("E", 7), SimpleType("E", 8)
F4, G2 = SimpleType("F", 4), SimpleType("G", 2)


def _both_minus_pair(r: Invariants, i: int, j: int) -> int:
    """m_i + m_j - m_{i,j}: counts factors that carry Phi_i and Phi_j but never together."""
    return r.m(i) + r.m(j) - r.mm(i, j)


# Exceptional factors of rank m, each read off one index that no other
# simple factor of rank <= m carries.
EXCEPTIONAL_RECIPES: dict[int, tuple[SimpleType, Callable[[Invariants], int]]] = {
    8: (E8, lambda r: r.m(30)),
    7: (E7, lambda r: r.m(18)),
    6: (E6, lambda r: r.m(9)),
    4: (F4, lambda r: r.m(12)),
    2: (G2, lambda r: r.m(6)),
}


def b_count(r: Invariants, rank: int) -> int:
    """Multiplicity of B_m (= C_m), exceptional rank-m factors removed.

    Phi_{2m} marks B_m among classical factors of rank <= m; the low ranks
    correct for exceptional factors that also carry it.
    """
    if rank >= 16:
        return r.m(2 * rank)
    if rank == 3:
        # B3, G2, B2 multiplicities p, q, r:  m6 = p+q, m4 = p+r, m_{4,6} = p+q+r
        return _both_minus_pair(r, 4, 6)
    if rank == 6:
        # B6, D6, B5, F4 as p, q, r, s:  m12 = p+s, m10 = p+q+r, m_{10,12} = p+q+r+s
        return _both_minus_pair(r, 10, 12)
    if rank == 9:
        # m18 = B9+E7+E8, m16 = B9+B8+D9, m_{16,18} = all five
        return _both_minus_pair(r, 16, 18)
    if rank in (10, 12):
        # Phi_20 / Phi_24 also occur in E8, which alone carries Phi_30 here
        return r.m(2 * rank) - r.m(30)
    if rank == 15:
        # m30 = B15+E8, m28 = B15+B14+D15, m_{28,30} = all four
        return _both_minus_pair(r, 28, 30)
    return r.m(2 * rank)


def _d_by_prime(r: Invariants, rank: int, nuisance: list[tuple[SimpleType, int]]) -> int:
    """D_m against B_{m-1} through k = 2m-2.

    (x+1)(x^{m-1}+1) is the only member of ch(D_m) with Phi_k, and x^{m-1}+1 the
    only one of ch(B_{m-1}), so with p, q their multiplicities:
    m_k = p + q, and m'_k = 2p + q for even m, m'_k = p for odd m.
    Exceptional factors that also carry Phi_k are subtracted first.
    """
    k = 2 * rank - 2
    nuisance = [(t, c) for t, c in nuisance if c]
    total = r.m(k) - sum(c * type_invariants(t).m(k) for t, c in nuisance)
    prime = r.mp(k) - sum(c * type_invariants(t).mp(k) for t, c in nuisance)
    return prime - total if rank % 2 == 0 else prime


def d_count(r: Invariants, rank: int) -> int:
    """Multiplicity of D_m, exceptional and B_m factors removed."""
    if rank == 4:
        # G2 from m4, m6, m_{4,6}: m_{4,6} - m4 counts exactly the G2 factors
        return _d_by_prime(r, 4, [(G2, r.mm(4, 6) - r.m(4))])
    if rank == 5:
        # D5 is the only factor with Phi5 and Phi8 that cannot hold both
        return _both_minus_pair(r, 5, 8)
    if rank == 7:
        return _both_minus_pair(r, 7, 12)
    if rank == 8:
        return _d_by_prime(r, 8, [(E7, r.m(18))])
    if rank == 9:
        return _d_by_prime(r, 9, [(E8, r.m(30))])
    if rank == 10:
        e8 = r.m(30)
        # m_{16,18} - m16 = E7 + E8
        e7 = r.mm(16, 18) - r.m(16) - e8
        return _d_by_prime(r, 10, [(E8, e8), (E7, e7)])
    if 11 <= rank <= 15:
        return _d_by_prime(r, rank, [(E8, r.m(30))])
    if rank == 16:
        # m30 = D16+B15+E8, m28 = B14+B15+D15+D16, m_{28,30} = all of them
        return _d_by_prime(r, 16, [(E8, r.mm(28, 30) - r.m(28))])
    return _d_by_prime(r, rank, [])


def a_count(r: Invariants, rank: int) -> int:
    """Multiplicity of A_m once every other rank-m factor is removed."""
    if rank == 1:
        return r.m(2)
    if rank in (2, 4, 6):
        return r.m(rank + 1)
    if rank in (3, 5, 7):
        return _both_minus_pair(r, rank, rank + 1)
    if rank == 8:
        # E7 (counted by m18) is the only other factor with Phi7 and Phi9
        return _both_minus_pair(r, 7, 9) - r.m(18)
    if rank == 9:
        # E7 + E8 carry Phi9 and Phi10 as well; together they are m18
        return _both_minus_pair(r, 9, 10) - r.m(18)
    if rank == 14:
        return _both_minus_pair(r, 13, 15)
    if rank % 2 == 0:
        return r.m(rank + 1)
    return _both_minus_pair(r, rank, rank + 1)


def d_witness(rank: int) -> CycloPoly:
    """Factorization of (x+1)(x^{m-1}+1)."""
    return x_power(1, +1) * x_power(rank - 1, +1)


def rank_stage(rank: int) -> list[tuple[SimpleType, Callable[[Invariants], int]]]:
    """The recipes applied at rank m, in order."""
    out = []
    if rank in EXCEPTIONAL_RECIPES:
        out.append(EXCEPTIONAL_RECIPES[rank])
    if rank >= 2:
        out.append((SimpleType("B", rank), lambda r: b_count(r, rank)))
    if rank >= 4:
        out.append((SimpleType("D", rank), lambda r: d_count(r, rank)))
    out.append((SimpleType("A", rank), lambda r: a_count(r, rank)))
    return out


@dataclass
class FactorReport:
    factors: tuple[str, ...]
    residual_ok: bool
    trace: list[tuple[str, int]] = field(default_factory=list)

    @property
    def total_rank(self) -> int:
        return sum(label_rank(x) for x in self.factors)


def label_rank(label: str) -> int:
    return int(label.lstrip("ABCDEFG"))


def _residual_clean(res: Residual, S: Spectrum, *, pairs: bool) -> tuple[bool, bool]:
    """(all residual invariants >= 0, all == 0) over the index universe."""
    universe = index_universe(S.n) if S.n else []
    values = [res.m(d) for d in universe] + [res.mp(d) for d in universe]
    if pairs:
        star = sorted(ch_star(S) | {d for t in res.removed for d in springer_ch_star(t)})
        values += [res.mm(i, j) for a, i in enumerate(star) for j in star[a + 1:]]
    return all(v >= 0 for v in values), all(v == 0 for v in values)


def identify_by_cases(S: Spectrum, n: int | None = None, *, strict: bool = True,
                      e8_mode: str = "bundled") -> FactorReport:
    """Simple factors (B/C merged) of the Weyl group whose spectrum is S.

    With ``strict`` false an inconsistent input yields ``residual_ok=False``
    and the factors found so far, instead of raising.
    """
    n = S.n if n is None else n
    if n != S.n:
        raise InconsistentSpectrum(f"rank {n} does not match spectrum degree {S.n}")
    _E8_MODE["mode"] = e8_mode
    res = Residual(S)
    trace: list[tuple[str, int]] = []

    def report(ok: bool, why: str) -> FactorReport:
        labels = tuple(sorted(t.label for t in res.removed.elements()))
        if strict and not ok:
            raise InconsistentSpectrum(why)
        return FactorReport(labels, ok, trace)

    for rank in range(n, 0, -1):
        for t, recipe in rank_stage(rank):
            k = recipe(res)
            if k < 0:
                return report(False, f"negative multiplicity {k} for {t.label}")
            if k and t.family == "D" and not any((d_witness(rank) ** k).divides(p) for p in S.polys):
                return report(False, f"no member divisible by the D{rank} witness")
            res.remove(t, k)
            trace.append((t.label, k))
        nonneg, _ = _residual_clean(res, S, pairs=False)
        if not nonneg:
            return report(False, f"negative residual invariant after rank {rank}")
    _, zero = _residual_clean(res, S, pairs=True)
    ok = zero and sum(t.rank for t in res.removed.elements()) == n
    if ok:
        rebuilt = unit_spectrum()
        for t in res.removed.elements():
            rebuilt = rebuilt * spectrum_simple(t, e8_mode=e8_mode)
        ok = rebuilt == S
    found = " x ".join(sorted(t.label for t in res.removed.elements())) or "nothing"
    return report(ok, f"residual is nonzero after removing {found}")


def _collapsed_types(max_rank: int) -> list[SimpleType]:
    return all_simple_types(max_rank)


def identify_by_search(S: Spectrum, n: int | None = None, *, bound: int = DEFAULT_SEARCH_BOUND,
                       e8_mode: str = "bundled") -> set[tuple[str, ...]]:
    """Every B/C-merged factor multiset of total rank n whose spectrum is S."""
    n = S.n if n is None else n
    if n > bound:
        raise SearchBoundExceeded(f"rank {n} exceeds search bound {bound}")
    if n != S.n:
        return set()
    star = ch_star(S)
    if any(totient(d) > n for d in star):
        return set()
    candidates = [t for t in _collapsed_types(n) if springer_ch_star(t) <= star]
    target_m = {d: m(S, d) for d in star}
    found: set[tuple[str, ...]] = set()

    def walk(start: int, left: int, chosen: list[SimpleType], acc: Spectrum):
        if left == 0:
            got = set().union(*(springer_ch_star(t) for t in chosen)) if chosen else set()
            if got == star and acc == S:
                found.add(tuple(sorted(t.label for t in chosen)))
            return
        for idx in range(start, len(candidates)):
            t = candidates[idx]
            if t.rank > left:
                continue
            nxt = acc * spectrum_simple(t, e8_mode=e8_mode)
            if any(m(nxt, d) > v for d, v in target_m.items()):
                continue
            walk(idx, left - t.rank, chosen + [t], nxt)

    walk(0, n, [], unit_spectrum())
    return found


def semisimple_types(max_rank: int, *, split_bc: bool = True,
                     min_rank: int = 1) -> Iterator[SemisimpleType]:
    """All semisimple types with total rank in [min_rank, max_rank]."""
    simple = all_simple_types(max_rank, split_bc=split_bc)

    def walk(start: int, left: int, chosen: list[SimpleType]):
        total = max_rank - left
        if chosen and total >= min_rank:
            yield SemisimpleType(chosen)
        for idx in range(start, len(simple)):
            t = simple[idx]
            if t.rank <= left:
                yield from walk(idx, left - t.rank, chosen + [t])

    yield from walk(0, max_rank, [])


@dataclass
class CollisionReport:
    classes: list[list[SemisimpleType]]
    unexpected: list[list[SemisimpleType]]

    @property
    def ok(self) -> bool:
        return not self.unexpected

    def lines(self) -> list[str]:
        out = []
        for cls in self.classes:
            first = str(cls[0])
            out.extend(f"COLLIDE {first} == {other}" for other in cls[1:])
        return sorted(out)


def bc_orbit(T: SemisimpleType) -> set[SemisimpleType]:
    """All types obtained by switching B_n <-> C_n (n >= 3) factors."""
    orbit = {SemisimpleType(())}
    for f in T.factors:
        options = [f]
        if f.family in "BC" and f.rank >= 3:
            options = [SimpleType("B", f.rank), SimpleType("C", f.rank)]
        orbit = {SemisimpleType(o.factors + (g,)) for o in orbit for g in options}
    return orbit


def verify_uniqueness(max_rank: int, *, e8_mode: str = "bundled",
                      bound: int = DEFAULT_SEARCH_BOUND) -> CollisionReport:
    """Group all types of rank <= max_rank (B and C distinct) by spectrum.

    A collision class is expected exactly when it is one full B/C orbit.
    """
    if max_rank > bound:
        raise SearchBoundExceeded(f"max rank {max_rank} exceeds bound {bound}")
    simple = all_simple_types(max_rank, split_bc=True)
    groups: dict[Spectrum, list[SemisimpleType]] = defaultdict(list)

    def walk(start: int, left: int, chosen: list[SimpleType], acc: Spectrum):
        if chosen:
            groups[acc].append(SemisimpleType(chosen))
        for idx in range(start, len(simple)):
            t = simple[idx]
            if t.rank <= left:
                walk(idx, left - t.rank, chosen + [t], acc * spectrum_simple(t, e8_mode=e8_mode))

    walk(0, max_rank, [], unit_spectrum())
    classes = sorted((sorted(v, key=str) for v in groups.values() if len(v) > 1),
                     key=lambda c: str(c[0]))
    unexpected = []
    for members in groups.values():
        orbit = bc_orbit(members[0])
        if set(members) != orbit:
            unexpected.append(sorted(members, key=str))
    return CollisionReport(classes, sorted(unexpected, key=lambda c: str(c[0])))
