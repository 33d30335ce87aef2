"""Permutation groups: a deterministic Schreier-Sims stabilizer chain and
streamed enumeration of all group elements as transversal products.

Permutations are tuples ``p`` with ``p[x]`` the image of ``x``; composition
``mul(p, q)`` is "apply q, then p".
"""
from __future__ import annotations

import itertools
import math
from typing import Iterator, Sequence

import numpy as np

Perm = tuple[int, ...]


def mul(p: Perm, q: Perm) -> Perm:
    return tuple(p[x] for x in q)


def inv(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def is_identity(p: Perm) -> bool:
    return all(i == x for i, x in enumerate(p))


class StabilizerChain:
    """Base and strong generating set, with explicit transversals.

    ``transversals[i][x]`` maps ``base[i]`` to ``x`` and fixes ``base[:i]``.
    Every group element factors uniquely as ``u_0 * u_1 * ... * u_{k-1}``
    with ``u_i`` taken from ``transversals[i]``.
    """

    def __init__(self, gens: Sequence[Perm], degree: int, base_hint: Sequence[int] = ()):
        self.degree = degree
        self.base: list[int] = []
        self.strong: list[list[Perm]] = []
        self.transversals: list[dict[int, Perm]] = []
        self._hint = list(base_hint)
        gens = [tuple(g) for g in gens if not is_identity(g)]
        if gens:
            self._extend_base(gens[0], 0)
            self.strong[0].extend(gens)
        self._build()

    def _extend_base(self, g: Perm, level: int) -> None:
        while len(self.base) <= level:
            moved = [p for p in self._hint if g[p] != p and p not in self.base]
            if not moved:
                moved = [p for p in range(self.degree) if g[p] != p and p not in self.base]
            self.base.append(moved[0])
            self.strong.append([])
            self.transversals.append({})

    def _orbit(self, level: int) -> None:
        b = self.base[level]
        ident = tuple(range(self.degree))
        trans = {b: ident}
        frontier = [b]
        while frontier:
            nxt = []
            for x in frontier:
                u = trans[x]
                for s in self.strong[level]:
                    y = s[x]
                    if y not in trans:
                        trans[y] = mul(s, u)
                        nxt.append(y)
            frontier = nxt
        self.transversals[level] = trans

    def sift(self, g: Perm, start: int = 0) -> tuple[Perm, int]:
        for i in range(start, len(self.base)):
            x = g[self.base[i]]
            u = self.transversals[i].get(x)
            if u is None:
                return g, i
            g = mul(inv(u), g)
        return g, len(self.base)

    def _build(self) -> None:
        level = len(self.base) - 1
        for i in range(len(self.base)):
            self._orbit(i)
        while level >= 0:
            restart = None
            trans = self.transversals[level]
            for x, u in list(trans.items()):
                for s in self.strong[level]:
                    h = mul(inv(trans[s[x]]), mul(s, u))
                    residue, j = self.sift(h, level + 1)
                    if is_identity(residue):
                        continue
                    if j == len(self.base):
                        self._extend_base(residue, j)
                    for lev in range(level + 1, j + 1):
                        self.strong[lev].append(residue)
                        self._orbit(lev)
                    restart = j
                    break
                if restart is not None:
                    break
            if restart is None:
                level -= 1
            else:
                level = restart

    @property
    def order(self) -> int:
        return math.prod(len(t) for t in self.transversals)

    def level_arrays(self) -> list[np.ndarray]:
        """Transversal elements per level as ``(|U_i|, degree)`` arrays, in a fixed order."""
        dtype = np.uint8 if self.degree <= 256 else np.uint16
        out = []
        for trans in self.transversals:
            rows = [trans[x] for x in sorted(trans)]
            out.append(np.array(rows, dtype=dtype))
        return out

    def element_batches(self, target: int = 1 << 17) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        """Stream the whole group as ``(head, body)`` pairs.

        The elements of a pair are ``head o body[b]`` for every row ``b``; the
        body block (a product of the trailing transversals) is built once and
        reused, so memory stays bounded by ``target`` rows.
        """
        for head_index, head, body in self._iter_blocks(target):
            yield head, body

    def split(self, target: int) -> int:
        """Index of the first level that goes into the body block."""
        sizes = [len(t) for t in self.transversals]
        split = len(sizes)
        body = 1
        while split > 0 and body * sizes[split - 1] <= max(target, sizes[-1] if sizes else 1):
            split -= 1
            body *= sizes[split]
        return split

    def body_block(self, split: int) -> np.ndarray:
        levels = self.level_arrays()
        dtype = levels[0].dtype if levels else np.uint8
        body = np.arange(self.degree, dtype=dtype)[None, :]
        for lev in reversed(levels[split:]):
            # rows ordered with the outer (earlier) level varying slowest
            body = lev[:, body].reshape(-1, self.degree)
        return body

    def head_perms(self, split: int) -> Iterator[np.ndarray]:
        levels = self.level_arrays()
        dtype = levels[0].dtype if levels else np.uint8
        ident = np.arange(self.degree, dtype=dtype)
        for combo in itertools.product(*(range(len(lev)) for lev in levels[:split])):
            h = ident
            for lev, idx in zip(levels[:split], combo):
                h = h[lev[idx]]
            yield h

    def _iter_blocks(self, target: int):
        split = self.split(target)
        body = self.body_block(split)
        for i, head in enumerate(self.head_perms(split)):
            yield i, head, body
