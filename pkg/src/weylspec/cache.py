"""On-disk spectrum cache.

One file per type key, named by the SHA-256 of the key. File format::

    weylspec v1 <type-key> n=<rank>
    <d1:m1,d2:m2,...>        one line per polynomial, sorted

Writes go to a temporary file in the same directory and are renamed into place.
"""
from __future__ import annotations

import hashlib
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .exact_poly import CycloPoly

HEADER = "weylspec v1"
SUFFIX = ".spec"


class DataCorrupt(ValueError):
    """A spectrum file is malformed or fails validation."""


def render(key: str, n: int, polys) -> str:
    lines = sorted(p.canonical() for p in polys)
    return "\n".join([f"{HEADER} {key} n={n}", *lines]) + "\n"


def parse(text: str) -> tuple[str, int, frozenset[CycloPoly]]:
    lines = text.splitlines()
    if not lines:
        raise DataCorrupt("empty spectrum file")
    head = lines[0].split(" ")
    if len(head) != 4 or " ".join(head[:2]) != HEADER or not head[3].startswith("n="):
        raise DataCorrupt(f"bad header {lines[0]!r}")
    key, n = head[2], int(head[3][2:])
    body = lines[1:]
    if body != sorted(body) or len(set(body)) != len(body):
        raise DataCorrupt("polynomial lines are not sorted and distinct")
    try:
        polys = frozenset(CycloPoly.parse(line) for line in body)
    except ValueError as exc:
        raise DataCorrupt(str(exc)) from exc
    for p in polys:
        if p.degree != n:
            raise DataCorrupt(f"{p.canonical()} has degree {p.degree}, expected {n}")
    return key, n, polys


def file_hash(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


@dataclass
class SpectrumCache:
    root: Path

    def __post_init__(self):
        self.root = Path(self.root)

    def path(self, key: str) -> Path:
        return self.root / (hashlib.sha256(key.encode()).hexdigest()[:32] + SUFFIX)

    def get(self, key: str) -> tuple[int, frozenset[CycloPoly]] | None:
        p = self.path(key)
        if not p.exists():
            return None
        found_key, n, polys = parse(p.read_text())
        if found_key != key:
            raise DataCorrupt(f"{p} holds {found_key!r}, expected {key!r}")
        return n, polys

    def put(self, key: str, n: int, polys) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        target = self.path(key)
        fd, tmp = tempfile.mkstemp(dir=self.root, prefix=".tmp-", suffix=SUFFIX)
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(render(key, n, polys))
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target

    def entries(self) -> list[tuple[str, Path]]:
        """Cached ``(key, path)`` pairs, sorted by key."""
        if not self.root.exists():
            return []
        out = []
        for p in self.root.glob("*" + SUFFIX):
            if p.name.startswith(".tmp-"):
                continue
            with p.open() as fh:
                head = fh.readline().split(" ")
            if len(head) == 4:
                out.append((head[2], p))
        return sorted(out)

    def clear(self) -> int:
        entries = self.entries()
        for _, p in entries:
            p.unlink()
        return len(entries)
