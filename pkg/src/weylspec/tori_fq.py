"""Maximal tori of split groups over finite fields.

For a split group over F_q the G(F_q)-classes of maximal tori correspond to the
conjugacy classes of W, and the torus attached to the class of w has
``f_w(q)`` rational points, f_w the characteristic polynomial of w on the
character lattice. Torus sharing between two types is decided by spectrum
equality, i.e. elementwise conjugacy in GL_n(Q).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

from .exact_poly import CycloPoly, char_poly, cyclo_factor, eval_poly
from .root_data import SemisimpleType, SimpleType
from .spectra import (
    Spectrum,
    cycle_type_poly,
    partitions,
    signed_cycle_types,
    spectrum,
)

PRIME_CHECK_LIMIT = 10**6

SHARING_NOTE = ("finite-order integer matrices are semisimple over Q, so the characteristic "
                "polynomial fixes the GL_n(Q)-class; spectrum equality is elementwise "
                "GL_n(Q)-conjugacy of the Weyl groups")


class DataUnavailable(RuntimeError):
    """Class data for this type is neither shipped nor computable here."""


class NotPrimePower(ValueError):
    pass


@dataclass(frozen=True)
class WeylClass:
    label: str
    charpoly: CycloPoly
    size: int | None


def _z(parts: tuple[int, ...], base: int = 1) -> int:
    """Centralizer factor prod (base*i)^{a_i} a_i! over the multiplicities a_i."""
    out = 1
    for i in set(parts):
        a = parts.count(i)
        out *= (base * i) ** a * math.factorial(a)
    return out


def _fmt(parts: tuple[int, ...]) -> str:
    return ",".join(map(str, parts))


def _classes_A(n: int) -> list[WeylClass]:
    order = math.factorial(n + 1)
    out = []
    for lam in partitions(n + 1):
        f = cycle_type_poly(lam).as_dict()
        f[1] -= 1
        out.append(WeylClass(f"[{_fmt(lam)}]", CycloPoly(f), order // _z(lam)))
    return out


def _classes_BD(n: int, even_only: bool) -> list[WeylClass]:
    order = 2**n * math.factorial(n)
    out = []
    for lam, mu in signed_cycle_types(n):
        if even_only and len(mu) % 2:
            continue
        size = order // (_z(lam, 2) * _z(mu, 2))
        f = cycle_type_poly(lam, mu)
        label = f"[{_fmt(lam)}|{_fmt(mu)}]"
        if even_only and not mu and all(p % 2 == 0 for p in lam):
            # splits into two D_n classes with the same characteristic polynomial
            out.append(WeylClass(label + "+", f, size // 2))
            out.append(WeylClass(label + "-", f, size // 2))
        else:
            out.append(WeylClass(label, f, size))
    return out


@lru_cache(maxsize=None)
def _classes_exceptional(t: SimpleType) -> tuple[WeylClass, ...]:
    from .enumeration import conjugacy_classes

    if t == SimpleType("E", 8):
        raise DataUnavailable("E8 class data is not shipped and fusion over 696729600 elements "
                              "is out of reach here")
    found = []
    for rep, size in conjugacy_classes(t):
        found.append((cyclo_factor(char_poly(rep)), size, rep))
    found.sort(key=lambda x: (x[0].canonical(), x[1], x[2]))
    return tuple(WeylClass(f"{t}#{i:02d}/o{f.element_order()}", f, size)
                 for i, (f, size, _) in enumerate(found, 1))


def weyl_classes(t: SimpleType) -> list[WeylClass]:
    """Conjugacy classes of W(t) with characteristic polynomial and size."""
    if t.family == "A":
        return _classes_A(t.rank)
    if t.family in "BC":
        return _classes_BD(t.rank, even_only=False)
    if t.family == "D":
        return _classes_BD(t.rank, even_only=True)
    return list(_classes_exceptional(t))


def product_classes(T: SemisimpleType) -> list[WeylClass]:
    per_factor = [weyl_classes(f) for f in T.factors]
    out = []
    for combo in itertools.product(*per_factor):
        label = " x ".join(f"{f}{c.label}" if not c.label.startswith(str(f)) else c.label
                           for f, c in zip(T.factors, combo))
        poly = CycloPoly()
        size = 1
        for c in combo:
            poly = poly * c.charpoly
            size = None if size is None or c.size is None else size * c.size
        out.append(WeylClass(label, poly, size))
    return out


def prime_power_base(q: int) -> tuple[int | None, bool]:
    """``(p, verified)`` with q = p^k.

    Trial division runs up to 10^6; when it finds no factor of a q beyond
    10^12 the base is unknown and ``verified`` is False.
    """
    if q < 2:
        raise NotPrimePower(f"q = {q} is not a prime power")
    limit = min(PRIME_CHECK_LIMIT, math.isqrt(q))
    for p in range(2, limit + 1):
        if q % p == 0:
            r = q
            while r % p == 0:
                r //= p
            if r != 1:
                raise NotPrimePower(f"q = {q} has distinct prime factors")
            return p, True
    if q <= PRIME_CHECK_LIMIT**2:
        return q, True
    return None, False


@dataclass
class TorusReport:
    q: int
    entries: list[tuple[str, CycloPoly, int]] = field(default_factory=list)
    warning: str | None = None

    def orders(self) -> list[int]:
        return [o for _, _, o in self.entries]


def torus_orders(T: SemisimpleType, q: int) -> TorusReport:
    """One entry per class of W(T): label, characteristic polynomial, |T_w(F_q)|."""
    _, verified = prime_power_base(q)
    report = TorusReport(q)
    if not verified:
        report.warning = f"q = {q} has no prime factor below {PRIME_CHECK_LIMIT}; not verified"
    for c in product_classes(T):
        report.entries.append((c.label, c.charpoly, eval_poly(c.charpoly.expand(), q)))
    return report


@dataclass
class ShareVerdict:
    shared: bool
    witness: CycloPoly | None
    reason: str


def share_tori(T1: SemisimpleType, T2: SemisimpleType, *, e8_mode: str = "bundled",
               cache=None) -> ShareVerdict:
    """Whether the split groups of types T1 and T2 have the same maximal tori
    up to isogeny over every finite field, witnessed by their spectra."""
    if T1.total_rank != T2.total_rank:
        return ShareVerdict(False, None, f"ranks differ: {T1.total_rank} != {T2.total_rank}")
    s1 = spectrum(T1, e8_mode=e8_mode, cache=cache)
    s2 = spectrum(T2, e8_mode=e8_mode, cache=cache)
    diff = s1.polys ^ s2.polys
    if not diff:
        return ShareVerdict(True, None, SHARING_NOTE)
    witness = min(diff, key=CycloPoly.canonical)
    side = str(T1) if witness in s1.polys else str(T2)
    return ShareVerdict(False, witness, f"{witness.canonical()} occurs only for {side}")


def classes_spectrum(t: SimpleType) -> Spectrum:
    return Spectrum(t.rank, frozenset(c.charpoly for c in weyl_classes(t)), "enumerated")
