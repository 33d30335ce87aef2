"""Exact integer polynomials and their cyclotomic factorizations."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence


class NotCyclotomicProduct(ValueError):
    """The polynomial has an irreducible factor that is not cyclotomic."""


@dataclass(frozen=True)
class IntPoly:
    """Dense integer polynomial, constant term first, no trailing zeros."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int]):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def x_power_minus(cls, k: int, sign: int = -1) -> IntPoly:
        """``x^k + sign``."""
        return cls([sign] + [0] * (k - 1) + [1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __mul__(self, other: IntPoly) -> IntPoly:
        if not self or not other:
            return IntPoly(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPoly(out)

    def __pow__(self, k: int) -> IntPoly:
        out = IntPoly((1,))
        for _ in range(k):
            out = out * self
        return out

    def divmod_monic(self, d: IntPoly) -> tuple[IntPoly, IntPoly]:
        """Long division by a monic divisor; stays in Z[x]."""
        if not d or d.coeffs[-1] != 1:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        k = d.degree
        if len(rem) - 1 < k:
            return IntPoly(()), self
        quot = [0] * (len(rem) - k)
        for i in range(len(rem) - 1, k - 1, -1):
            c = rem[i]
            if c:
                quot[i - k] = c
                for j, b in enumerate(d.coeffs):
                    rem[i - k + j] -= c * b
        return IntPoly(quot), IntPoly(rem[:k])

    def exact_div(self, d: IntPoly) -> IntPoly:
        q, r = self.divmod_monic(d)
        if r:
            raise ArithmeticError("division is not exact")
        return q

    def __call__(self, x: int) -> int:
        return eval_poly(self, x)

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out


def totient(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> IntPoly:
    """Phi_d, by exact division of x^d - 1 by Phi_e for the proper divisors e."""
    if d < 1:
        raise ValueError("cyclotomic index must be positive")
    p = IntPoly.x_power_minus(d)
    for e in divisors(d)[:-1]:
        p = p.exact_div(cyclotomic(e))
    return p


def eval_poly(p: IntPoly, q: int) -> int:
    acc = 0
    for c in reversed(p.coeffs):
        acc = acc * q + c
    return acc


def char_poly(m: Sequence[Sequence[int]]) -> IntPoly:
    """det(xI - M) by Berkowitz's division-free algorithm."""
    n = len(m)
    if n == 0:
        return IntPoly((1,))
    # Berkowitz: vectors of coefficients, highest degree first.
    c = [1, -m[0][0]]
    for r in range(1, n):
        a = m[r][r]
        row = [m[r][j] for j in range(r)]  # R
        col = [m[i][r] for i in range(r)]  # S
        sub = [[m[i][j] for j in range(r)] for i in range(r)]
        # Toeplitz entries: 1, -a, -R S, -R A S, -R A^2 S, ...
        t = [1, -a]
        v = col
        for _ in range(r):
            t.append(-sum(x * y for x, y in zip(row, v)))
            v = [sum(sub[i][j] * v[j] for j in range(r)) for i in range(r)]
        new = []
        for k in range(r + 2):
            new.append(sum(t[k - j] * c[j] for j in range(min(k, r) + 1) if k - j < len(t)))
        c = new
    return IntPoly(reversed(c))


def _totient_le(bound: int) -> list[int]:
    # phi(d) >= sqrt(d/2), so every d with phi(d) <= bound has d <= 2*bound^2.
    return [d for d in range(1, 2 * bound * bound + 3) if totient(d) <= bound]


@dataclass(frozen=True, order=True)
class CycloPoly:
    """A product of cyclotomic polynomials as sorted ``(index, multiplicity)`` pairs."""

    factors: tuple[tuple[int, int], ...]

    def __init__(self, factors: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = factors.items() if isinstance(factors, Mapping) else factors
        merged: dict[int, int] = {}
        for d, k in items:
            if d < 1 or k < 0:
                raise ValueError(f"bad cyclotomic factor {d}:{k}")
            if k:
                merged[d] = merged.get(d, 0) + k
        object.__setattr__(self, "factors", tuple(sorted(merged.items())))

    @property
    def degree(self) -> int:
        return sum(k * totient(d) for d, k in self.factors)

    def mult(self, d: int) -> int:
        for e, k in self.factors:
            if e == d:
                return k
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)

    def indices(self) -> set[int]:
        return {d for d, _ in self.factors}

    def __mul__(self, other: CycloPoly) -> CycloPoly:
        return CycloPoly(self.factors + other.factors)

    def __pow__(self, k: int) -> CycloPoly:
        return CycloPoly((d, e * k) for d, e in self.factors)

    def divides(self, other: CycloPoly) -> bool:
        return all(other.mult(d) >= k for d, k in self.factors)

    def expand(self) -> IntPoly:
        p = IntPoly((1,))
        for d, k in self.factors:
            p = p * cyclotomic(d) ** k
        return p

    def canonical(self) -> str:
        """Text form ``d1:m1,d2:m2,...`` used for caching and hashing."""
        return ",".join(f"{d}:{k}" for d, k in self.factors)

    @classmethod
    def parse(cls, text: str) -> CycloPoly:
        text = text.strip()
        if not text:
            return cls()
        pairs = []
        for item in text.split(","):
            d, k = item.split(":")
            pairs.append((int(d), int(k)))
        out = cls(pairs)
        if out.canonical() != text:
            raise ValueError(f"non-canonical cyclotomic form {text!r}")
        return out

    def element_order(self) -> int:
        """Multiplicative order of a finite-order matrix with this char poly."""
        from math import lcm
        return lcm(*(d for d, _ in self.factors)) if self.factors else 1

    def __str__(self):
        if not self.factors:
            return "1"
        return "".join(f"Phi{d}" + (f"^{k}" if k > 1 else "") for d, k in self.factors)


def x_power(k: int, sign: int) -> CycloPoly:
    """Factorization of ``x^k - 1`` (sign=-1) or ``x^k + 1`` (sign=+1)."""
    if sign < 0:
        return CycloPoly({d: 1 for d in divisors(k)})
    return CycloPoly({d: 1 for d in divisors(2 * k) if k % d != 0})


def cyclo_factor(p: IntPoly) -> CycloPoly:
    """Factor a monic polynomial completely into cyclotomic polynomials."""
    if not p or p.coeffs[-1] != 1:
        raise ValueError("cyclo_factor needs a monic nonzero polynomial")
    found: dict[int, int] = {}
    rest = p
    for d in _totient_le(p.degree):
        if totient(d) > rest.degree:
            continue
        phi = cyclotomic(d)
        while rest.degree >= phi.degree:
            q, r = rest.divmod_monic(phi)
            if r:
                break
            found[d] = found.get(d, 0) + 1
            rest = q
    if rest.coeffs != (1,):
        raise NotCyclotomicProduct(f"{p} has non-cyclotomic factor {rest}")
    return CycloPoly(found)
