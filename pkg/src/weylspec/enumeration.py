"""Exhaustive enumeration of a Weyl group through its permutation action on roots.

Elements stream as transversal products of a stabilizer chain; for each batch
the characteristic polynomials on the root lattice are computed from the power
sums ``tr(w^k)`` (read off by chasing the simple roots through ``w``) and
Newton's identities. Everything is exact integer arithmetic.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .permgroup import StabilizerChain
from .root_data import IntMatrix, SimpleType, reflect, roots, simple_reflections

log = logging.getLogger(__name__)


@dataclass
class RootAction:
    """The faithful permutation action of W(t) on its roots."""

    t: SimpleType
    root_table: np.ndarray  # (R, n) simple-root coordinates
    simple_idx: np.ndarray  # root index of each simple root
    gens: list[tuple[int, ...]]
    chain: StabilizerChain

    @property
    def n(self) -> int:
        return self.t.rank

    def matrix(self, perm) -> IntMatrix:
        cols = [self.root_table[perm[s]] for s in self.simple_idx]
        return tuple(tuple(int(c[i]) for c in cols) for i in range(self.n))


@lru_cache(maxsize=None)
def root_action(t: SimpleType) -> RootAction:
    rs = roots(t)
    index = {r: i for i, r in enumerate(rs)}
    gens = [tuple(index[reflect(t, i, r)] for r in rs) for i in range(t.rank)]
    simple = [index[tuple(int(i == j) for j in range(t.rank))] for i in range(t.rank)]
    chain = StabilizerChain(gens, len(rs), base_hint=simple)
    return RootAction(t, np.array(rs, dtype=np.int64), np.array(simple), gens, chain)


def simple_images(head: np.ndarray, body: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Images ``(head o body[b])(p)`` for each row b and point p."""
    return head[body[:, points]].astype(np.intp)


def charpoly_coeffs(action: RootAction, head: np.ndarray, body: np.ndarray) -> np.ndarray:
    """Coefficient rows ``c_1..c_n`` of ``det(xI - w) = x^n + c_1 x^{n-1} + ... + c_n``."""
    n = action.n
    nb = body.shape[0]
    rows = np.arange(nb)[:, None]
    cols = np.arange(n)[None, :]
    cur = np.broadcast_to(action.simple_idx, (nb, n))
    power_sums = []
    for _ in range(n):
        cur = head[body[rows, cur]].astype(np.intp)
        power_sums.append(action.root_table[cur, cols].sum(axis=1))
    # Newton: k e_k = sum_{i=1..k} (-1)^(i-1) e_{k-i} p_i
    e = [np.ones(nb, dtype=np.int64)]
    for k in range(1, n + 1):
        acc = np.zeros(nb, dtype=np.int64)
        for i in range(1, k + 1):
            term = e[k - i] * power_sums[i - 1]
            acc += term if i % 2 else -term
        if np.any(acc % k):
            raise ArithmeticError("Newton identity produced a non-integer coefficient")
        e.append(acc // k)
    signs = np.array([(-1) ** k for k in range(1, n + 1)], dtype=np.int64)
    return np.stack(e[1:], axis=1) * signs


def pack_rows(coeffs: np.ndarray) -> np.ndarray:
    """Pack small signed coefficient rows (|c| < 128, n <= 8) into uint64 keys."""
    shifted = (coeffs + 128).astype(np.uint64)
    key = np.zeros(coeffs.shape[0], dtype=np.uint64)
    for k in range(coeffs.shape[1]):
        key |= shifted[:, k] << np.uint64(8 * k)
    return key


def unpack_key(key: int, n: int) -> list[int]:
    return [((key >> (8 * k)) & 0xFF) - 128 for k in range(n)]


def _scan_heads(t: SimpleType, target: int, start: int, stop: int) -> tuple[set[int], int]:
    action = root_action(t)
    chain = action.chain
    split = chain.split(target)
    body = chain.body_block(split)
    keys: set[int] = set()
    visited = 0
    for i, head in enumerate(chain.head_perms(split)):
        if i < start:
            continue
        if i >= stop:
            break
        coeffs = charpoly_coeffs(action, head, body)
        keys.update(int(k) for k in np.unique(pack_rows(coeffs)))
        visited += body.shape[0]
    return keys, visited


def enumerate_charpolys(t: SimpleType, *, threads: int = 1, target: int = 1 << 16,
                        progress: bool = False) -> tuple[list[list[int]], int]:
    """All distinct characteristic polynomials of W(t), as coefficient rows.

    Returns ``(rows, visited)`` where each row is ``[c_1, ..., c_n]`` (monic,
    highest degree first, leading 1 omitted) and ``visited`` counts elements.
    The result is sorted and independent of ``threads``.
    """
    action = root_action(t)
    chain = action.chain
    split = chain.split(target)
    heads = 1
    for trans in chain.transversals[:split]:
        heads *= len(trans)
    keys: set[int] = set()
    visited = 0
    if threads <= 1 or heads < 2 * threads:
        step = max(1, heads // 100)
        for lo in range(0, heads, step):
            k, v = _scan_heads(t, target, lo, min(lo + step, heads))
            keys |= k
            visited += v
            if progress:
                log.info("%s: %d/%d head blocks, %d polys", t, min(lo + step, heads), heads, len(keys))
    else:
        chunks = threads * 8
        bounds = [heads * i // chunks for i in range(chunks + 1)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(_scan_heads, t, target, lo, hi)
                       for lo, hi in zip(bounds, bounds[1:]) if hi > lo]
            for f in futures:
                k, v = f.result()
                keys |= k
                visited += v
    rows = sorted(unpack_key(k, t.rank) for k in keys)
    return rows, visited


def _root_codes(action: RootAction) -> tuple[np.ndarray, np.ndarray, int]:
    """Sorted integer codes of the root vectors, with the matching root indices."""
    span = int(np.abs(action.root_table).max()) * 2 + 1
    weights = span ** np.arange(action.n, dtype=np.int64)
    codes = (action.root_table + span // 2) @ weights
    order = np.argsort(codes)
    return codes[order], order, span


def _columns_to_roots(action: RootAction, mats: np.ndarray, codes, order, span) -> np.ndarray:
    weights = span ** np.arange(action.n, dtype=np.int64)
    # mats: (B, n, n); column j is the image of alpha_j
    col_codes = np.einsum("bij,i->bj", mats + span // 2, weights)
    pos = np.searchsorted(codes, col_codes)
    if np.any(codes[np.minimum(pos, len(codes) - 1)] != col_codes):
        raise ArithmeticError("image of a simple root is not a root")
    return order[pos]


def _pack_indices(idx: np.ndarray) -> np.ndarray:
    key = np.zeros(idx.shape[0], dtype=np.uint64)
    for j in range(idx.shape[1]):
        key |= idx[:, j].astype(np.uint64) << np.uint64(8 * j)
    return key


def conjugacy_classes(t: SimpleType, *, target: int = 1 << 16) -> list[tuple[IntMatrix, int]]:
    """Conjugacy classes of W(t) as ``(representative matrix, size)``.

    Every element is keyed by the root indices of the images of the simple
    roots; conjugation by each simple reflection links keys, and the classes
    are the connected components of that graph. Memory is linear in |W|.
    """
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    action = root_action(t)
    chain = action.chain
    if action.root_table.shape[0] > 255 or t.rank > 8:
        raise ValueError(f"{t}: too large for keyed class fusion")
    split = chain.split(target)
    body = chain.body_block(split)
    parts = [simple_images(head, body, action.simple_idx) for head in chain.head_perms(split)]
    images = np.concatenate(parts).astype(np.uint8)
    del parts
    keys = _pack_indices(images)
    order = np.argsort(keys)
    keys = keys[order]
    images = images[order]
    if np.any(keys[1:] == keys[:-1]):
        raise ArithmeticError("two elements share a key; the action is not faithful")
    total = keys.shape[0]
    codes, code_order, span = _root_codes(action)
    refl = [np.array(s, dtype=np.int64) for s in simple_reflections(t)]
    src, dst = [], []
    for lo in range(0, total, target):
        hi = min(lo + target, total)
        mats = np.transpose(action.root_table[images[lo:hi].astype(np.intp)], (0, 2, 1))
        for s in refl:
            conj = s @ mats @ s
            new_keys = _pack_indices(_columns_to_roots(action, conj, codes, code_order, span))
            pos = np.searchsorted(keys, new_keys)
            src.append(np.arange(lo, hi, dtype=np.int64))
            dst.append(pos.astype(np.int64))
    src = np.concatenate(src)
    dst = np.concatenate(dst)
    graph = coo_matrix((np.ones(src.shape[0], dtype=np.int8), (src, dst)), shape=(total, total))
    ncomp, labels = connected_components(graph, directed=True, connection="weak")
    sizes = np.bincount(labels, minlength=ncomp)
    first = np.full(ncomp, total, dtype=np.int64)
    np.minimum.at(first, labels, np.arange(total))
    out = []
    for c in range(ncomp):
        cols = action.root_table[images[first[c]].astype(np.intp)]
        rep = tuple(tuple(int(cols[j][i]) for j in range(t.rank)) for i in range(t.rank))
        out.append((rep, int(sizes[c])))
    return out
