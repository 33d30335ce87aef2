"""Multiplicity invariants of a spectrum.

For a spectrum S (a set of products of cyclotomic polynomials):

* ``ch_star(S)``   indices d with Phi_d dividing some member;
* ``m(S, i)``      the largest power of Phi_i dividing a member;
* ``m_prime(S, i)`` the smallest Phi_2 power among members that carry
  Phi_i^m(S, i);
* ``m_pair(S, i, j)`` the largest t + s with Phi_i^t Phi_j^s dividing a member.

All three are additive over direct products of groups.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .exact_poly import divisors, totient
from .root_data import SimpleType, degrees
from .spectra import Spectrum


class InvalidPair(ValueError):
    """``m_pair`` needs two distinct indices."""


def ch_star(S: Spectrum) -> set[int]:
    out: set[int] = set()
    for p in S.polys:
        out |= p.indices()
    return out


def m(S: Spectrum, i: int) -> int:
    if i < 1:
        raise ValueError("index must be positive")
    return max((p.mult(i) for p in S.polys), default=0)


def m_prime(S: Spectrum, i: int) -> int:
    # With m(S, i) == 0 every member qualifies, so this is the global minimum.
    top = m(S, i)
    return min((p.mult(2) for p in S.polys if p.mult(i) == top), default=0) if i != 2 else 0


def m_pair(S: Spectrum, i: int, j: int) -> int:
    if i == j:
        raise InvalidPair(f"m_pair needs distinct indices, got {i} twice")
    return max((p.mult(i) + p.mult(j) for p in S.polys), default=0)


def springer_ch_star(t: SimpleType) -> set[int]:
    """Indices d dividing some fundamental degree of W(t)."""
    return {d for deg in degrees(t) for d in divisors(deg)}


def index_universe(n: int) -> list[int]:
    """Every d with totient(d) <= n; invariants vanish outside it."""
    return [d for d in range(1, 2 * n * n + 3) if totient(d) <= n]


@dataclass
class InvariantTable:
    n: int
    ch_star: set[int]
    m: dict[int, int] = field(default_factory=dict)
    m_prime: dict[int, int] = field(default_factory=dict)
    m_pair: dict[tuple[int, int], int] = field(default_factory=dict)

    def as_records(self) -> list[tuple[str, int]]:
        """``(name, value)`` pairs such as ``("m[30]", 1)``, in a fixed order."""
        out = [(f"m[{d}]", v) for d, v in sorted(self.m.items())]
        out += [(f"m'[{d}]", v) for d, v in sorted(self.m_prime.items())]
        out += [(f"m[{i},{j}]", v) for (i, j), v in sorted(self.m_pair.items())]
        return out


def invariant_table(S: Spectrum, indices: Iterable[int] = (),
                    pairs: Iterable[tuple[int, int]] = ()) -> InvariantTable:
    idx = sorted(set(indices))
    table = InvariantTable(S.n, ch_star(S))
    for d in idx:
        table.m[d] = m(S, d)
        table.m_prime[d] = m_prime(S, d)
    for i, j in pairs:
        table.m_pair[(i, j)] = m_pair(S, i, j)
    return table
