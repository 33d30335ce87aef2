"""Spectra: the set of characteristic polynomials of a Weyl group's elements.

Classical types come from signed cycle types; exceptional types are either
enumerated exhaustively or loaded from the shipped data files (validated on
load). Products multiply pointwise.
"""
from __future__ import annotations

import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterable, Iterator

from . import cache as cachefmt
from .cache import DataCorrupt, SpectrumCache
from .exact_poly import CycloPoly, IntPoly, char_poly, cyclo_factor, divisors, x_power
from .root_data import (
    SemisimpleType,
    SimpleType,
    degrees,
    matrix_group,
    simple_reflections,
)

log = logging.getLogger(__name__)

PROVENANCES = ("combinatorial", "enumerated", "bundled", "product")
E8_MODES = ("bundled", "enumerate", "forbid")
CACHE_ENV = "WEYLSPEC_CACHE_DIR"


class StrategyUnavailable(RuntimeError):
    """The requested computation path is not permitted or not available."""


@dataclass(frozen=True, eq=False)
class Spectrum:
    n: int
    polys: frozenset[CycloPoly]
    provenance: str = "product"

    def __post_init__(self):
        for p in self.polys:
            if p.degree != self.n:
                raise ValueError(f"{p.canonical()} has degree {p.degree}, expected {self.n}")

    def __eq__(self, other):
        if not isinstance(other, Spectrum):
            return NotImplemented
        return self.n == other.n and self.polys == other.polys

    def __hash__(self):
        return hash((self.n, self.polys))

    def __len__(self):
        return len(self.polys)

    def __iter__(self) -> Iterator[CycloPoly]:
        return iter(sorted(self.polys, key=CycloPoly.canonical))

    def __contains__(self, p: CycloPoly):
        return p in self.polys

    def lines(self) -> list[str]:
        return sorted(p.canonical() for p in self.polys)

    def __mul__(self, other: Spectrum) -> Spectrum:
        polys = frozenset(a * b for a in self.polys for b in other.polys)
        return Spectrum(self.n + other.n, polys, "product")


def unit_spectrum() -> Spectrum:
    return Spectrum(0, frozenset([CycloPoly()]), "product")


def partitions(n: int, largest: int | None = None) -> Iterator[tuple[int, ...]]:
    """Partitions of n as non-increasing tuples."""
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            yield (k,) + rest


def signed_cycle_types(n: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Pairs (lambda, mu) with |lambda| + |mu| = n: positive and negative cycles."""
    for k in range(n + 1):
        for lam in partitions(k):
            for mu in partitions(n - k):
                yield lam, mu


def cycle_type_poly(lam: Iterable[int], mu: Iterable[int] = ()) -> CycloPoly:
    """prod (x^l - 1) * prod (x^m + 1), factored."""
    out = CycloPoly()
    for part in lam:
        out = out * x_power(part, -1)
    for part in mu:
        out = out * x_power(part, +1)
    return out


def spectrum_A(n: int) -> Spectrum:
    if n < 1:
        raise ValueError("A_n needs n >= 1")
    polys = set()
    for lam in partitions(n + 1):
        f = cycle_type_poly(lam).as_dict()
        f[1] -= 1  # the trivial summand of the permutation representation
        polys.add(CycloPoly(f))
    return Spectrum(n, frozenset(polys), "combinatorial")


def spectrum_BC(n: int) -> Spectrum:
    if n < 2:
        raise ValueError("B_n / C_n needs n >= 2")
    polys = frozenset(cycle_type_poly(lam, mu) for lam, mu in signed_cycle_types(n))
    return Spectrum(n, polys, "combinatorial")


def spectrum_D(n: int) -> Spectrum:
    if n < 4:
        raise ValueError("D_n needs n >= 4")
    polys = frozenset(cycle_type_poly(lam, mu)
                      for lam, mu in signed_cycle_types(n) if len(mu) % 2 == 0)
    return Spectrum(n, polys, "combinatorial")


def _springer(t: SimpleType) -> set[int]:
    return {d for deg in degrees(t) for d in divisors(deg)}


def _has_minus_one(t: SimpleType) -> bool:
    # -1 lies in W iff every degree is even
    return all(d % 2 == 0 for d in degrees(t))


# Spot values that the shipped E8 table must reproduce.
E8_SPOT_VALUES = {30: 1, 24: 1, 20: 1, 18: 1}


def validate_exceptional(t: SimpleType, polys: frozenset[CycloPoly]) -> None:
    n = t.rank
    for p in polys:
        if p.degree != n:
            raise DataCorrupt(f"{t}: {p.canonical()} is not of degree {n}")
    star = set().union(*(p.indices() for p in polys)) if polys else set()
    if star != _springer(t):
        raise DataCorrupt(f"{t}: factor indices {sorted(star)} != divisors of degrees")
    if CycloPoly({1: n}) not in polys:
        raise DataCorrupt(f"{t}: identity polynomial missing")
    if _has_minus_one(t) and CycloPoly({2: n}) not in polys:
        raise DataCorrupt(f"{t}: (x+1)^{n} missing")
    if t == SimpleType("E", 8):
        for d, want in E8_SPOT_VALUES.items():
            got = max(p.mult(d) for p in polys)
            if got != want:
                raise DataCorrupt(f"E8: max multiplicity of Phi{d} is {got}, expected {want}")


def load_bundled(t: SimpleType) -> Spectrum:
    name = f"{t}.spec"
    try:
        text = resources.files("weylspec.data").joinpath(name).read_text()
    except FileNotFoundError as exc:
        raise StrategyUnavailable(f"no bundled data for {t}") from exc
    key, n, polys = cachefmt.parse(text)
    if key != str(t) or n != t.rank:
        raise DataCorrupt(f"bundled file {name} describes {key} n={n}")
    validate_exceptional(t, polys)
    return Spectrum(n, polys, "bundled")


def coeff_row_to_cyclo(row: list[int]) -> CycloPoly:
    return cyclo_factor(IntPoly(list(reversed(row)) + [1]))


def enumerate_exceptional(t: SimpleType, *, threads: int = 1, allow_long: bool = False) -> Spectrum:
    from .enumeration import enumerate_charpolys

    if t == SimpleType("E", 8) and not allow_long:
        raise StrategyUnavailable("E8 enumeration visits 696729600 elements; pass allow_long")
    rows, visited = enumerate_charpolys(t, threads=threads, progress=t.rank >= 8)
    from .root_data import weyl_order

    if visited != weyl_order(t):
        raise RuntimeError(f"{t}: visited {visited} elements, expected {weyl_order(t)}")
    polys = frozenset(coeff_row_to_cyclo(r) for r in rows)
    return Spectrum(t.rank, polys, "enumerated")


_enumerated: dict[SimpleType, Spectrum] = {}


def spectrum_exceptional(t: SimpleType, strategy: str = "enumerate", *,
                         threads: int = 1, allow_long: bool = False) -> Spectrum:
    if not t.is_exceptional:
        raise ValueError(f"{t} is not exceptional")
    if strategy == "bundled":
        return load_bundled(t)
    if strategy != "enumerate":
        raise ValueError(f"unknown strategy {strategy!r}")
    if t not in _enumerated:
        _enumerated[t] = enumerate_exceptional(t, threads=threads, allow_long=allow_long)
    return _enumerated[t]


@lru_cache(maxsize=None)
def _classical(t: SimpleType) -> Spectrum:
    if t.family == "A":
        return spectrum_A(t.rank)
    if t.family in "BC":
        return spectrum_BC(t.rank)
    return spectrum_D(t.rank)


def spectrum_simple(t: SimpleType, *, e8_mode: str = "bundled", threads: int = 1,
                    cache: SpectrumCache | None = None) -> Spectrum:
    if not t.is_exceptional:
        return _classical(t)
    if t == SimpleType("E", 8):
        if e8_mode == "forbid":
            raise StrategyUnavailable("E8 spectrum requested with e8 mode 'forbid'")
        if e8_mode == "bundled":
            return load_bundled(t)
        if e8_mode != "enumerate":
            raise ValueError(f"unknown e8 mode {e8_mode!r}")
    if cache is not None:
        hit = cache.get(str(t))
        if hit is not None:
            n, polys = hit
            validate_exceptional(t, polys)
            return Spectrum(n, polys, "enumerated")
    s = spectrum_exceptional(t, "enumerate", threads=threads, allow_long=True)
    if cache is not None:
        cache.put(str(t), s.n, s.polys)
    return s


def default_cache() -> SpectrumCache | None:
    root = os.environ.get(CACHE_ENV)
    return SpectrumCache(root) if root else None


def spectrum(T: SemisimpleType | SimpleType, *, e8_mode: str = "bundled", threads: int = 1,
             cache: SpectrumCache | None = None) -> Spectrum:
    """Spectrum of a semisimple type: pointwise products of the factor spectra.

    With a cache, the result is looked up and stored under the canonical type key.
    """
    if isinstance(T, SimpleType):
        T = SemisimpleType([T])
    if cache is not None and T.factors:
        hit = cache.get(T.key)
        if hit is not None:
            n, polys = hit
            prov = "product"
            if len(T.factors) == 1:
                f = T.factors[0]
                prov = "combinatorial" if not f.is_exceptional else "enumerated"
            return Spectrum(n, polys, prov)
    out = None
    for f in T.factors:
        s = spectrum_simple(f, e8_mode=e8_mode, threads=threads, cache=cache)
        out = s if out is None else out * s
    if out is None:
        out = unit_spectrum()
    if cache is not None and T.factors:
        cache.put(T.key, out.n, out.polys)
    return out


def spectrum_by_matrices(t: SimpleType) -> Spectrum:
    """Oracle: close the simple reflections into the full matrix group and
    factor each element's characteristic polynomial (Berkowitz)."""
    group = matrix_group(simple_reflections(t))
    polys = frozenset(cyclo_factor(char_poly(m)) for m in group)
    return Spectrum(t.rank, polys, "enumerated")
