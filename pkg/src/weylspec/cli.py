"""Command-line front end.

Exit status: 0 on success, 2 on usage errors (including malformed type
expressions), 1 on computation errors, which also print a single line
``ERROR <code>: <detail>`` to standard error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import cache as cachefmt
from .cache import DataCorrupt, SpectrumCache
from .exact_poly import CycloPoly
from .identify import (
    InconsistentSpectrum,
    SearchBoundExceeded,
    identify_by_cases,
    verify_uniqueness,
)
from .invariants import ch_star, invariant_table, springer_ch_star
from .root_data import ParseError, RankError, SemisimpleType, all_simple_types, parse_type
from .spectra import CACHE_ENV, Spectrum, StrategyUnavailable, spectrum
from .tori_fq import DataUnavailable, NotPrimePower, product_classes, share_tori, torus_orders

COMMANDS = ("spectrum", "invariants", "identify", "verify", "springer-check",
            "classes", "tori", "share")
FORMATS = ("table", "json", "tsv")
E8_MODES = ("bundled", "enumerate", "forbid")

ERROR_CODES = [
    (InconsistentSpectrum, "INCONSISTENT_SPECTRUM"),
    (DataUnavailable, "DATA_UNAVAILABLE"),
    (StrategyUnavailable, "DATA_UNAVAILABLE"),
    (DataCorrupt, "DATA_CORRUPT"),
    (NotPrimePower, "NOT_PRIME_POWER"),
    (SearchBoundExceeded, "SEARCH_BOUND"),
    (OSError, "IO"),
    (Exception, "INTERNAL"),
]


class UsageError(Exception):
    pass


@dataclass
class CommandConfig:
    command: str
    type_exprs: list[str] = field(default_factory=list)
    q: int | None = None
    max_rank: int | None = None
    format: str = "table"
    cache_dir: Path = Path(".")
    e8_mode: str = "bundled"
    threads: int = 1
    spectrum_file: Path | None = None

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if (self.q is not None) != (self.command == "tori"):
            raise UsageError("--q is required for tori and accepted only there")
        arity = {"spectrum": 1, "invariants": 1, "classes": 1, "tori": 1, "share": 2, "verify": 0}
        want = arity.get(self.command)
        if self.command == "identify":
            want = 0 if self.spectrum_file else 1
        if want is not None and len(self.type_exprs) != want:
            raise UsageError(f"{self.command} takes {want} type expression(s), got {len(self.type_exprs)}")


def default_cache_dir() -> Path:
    env = os.environ.get(CACHE_ENV)
    return Path(env) if env else Path.home() / ".cache" / "weylspec"


@dataclass
class Report:
    """Rows for table/tsv output plus the JSON document."""

    rows: list[list[str]]
    doc: object
    status: int = 0
    notes: list[str] = field(default_factory=list)

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.doc, indent=2, sort_keys=True) + "\n"
        if not self.rows:
            return ""
        if fmt == "tsv":
            return "".join("\t".join(r) + "\n" for r in self.rows)
        widths = [max(len(r[i]) for r in self.rows if i < len(r))
                  for i in range(max(map(len, self.rows)))]
        out = []
        for r in self.rows:
            cells = [c.ljust(widths[i]) for i, c in enumerate(r)]
            out.append("  ".join(cells).rstrip())
        return "\n".join(out) + "\n"


def _parse(expr: str) -> SemisimpleType:
    try:
        return parse_type(expr)
    except (ParseError, RankError) as exc:
        raise UsageError(f"bad type expression {expr!r}: {exc}") from exc


def _factors_json(p: CycloPoly) -> list[list[int]]:
    return [[d, k] for d, k in p.factors]


class Runner:
    def __init__(self, cfg: CommandConfig):
        self.cfg = cfg
        self.cache = SpectrumCache(cfg.cache_dir)

    def spectrum_of(self, T: SemisimpleType) -> Spectrum:
        return spectrum(T, e8_mode=self.cfg.e8_mode, threads=self.cfg.threads, cache=self.cache)

    def run(self) -> Report:
        handler = getattr(self, "cmd_" + self.cfg.command.replace("-", "_"))
        return handler()

    def cmd_spectrum(self) -> Report:
        T = _parse(self.cfg.type_exprs[0])
        S = self.spectrum_of(T)
        polys = list(S)
        if self.cfg.format == "table":
            rows = [[p.canonical(), str(p)] for p in polys]
        else:
            rows = [[p.canonical()] for p in polys]
        doc = {"type": str(T), "rank": S.n, "polys": [_factors_json(p) for p in polys]}
        return Report(rows, doc)

    def cmd_invariants(self) -> Report:
        T = _parse(self.cfg.type_exprs[0])
        S = self.spectrum_of(T)
        star = sorted(ch_star(S))
        pairs = [(i, j) for a, i in enumerate(star) for j in star[a + 1:]]
        table = invariant_table(S, star, pairs)
        records = table.as_records()
        rows = [["ch*", ",".join(map(str, star))]] + [[k, str(v)] for k, v in records]
        doc = {"type": str(T), "rank": S.n, "ch_star": star,
               "invariants": {k: v for k, v in records}}
        return Report(rows, doc)

    def cmd_identify(self) -> Report:
        if self.cfg.spectrum_file:
            key, n, polys = cachefmt.parse(Path(self.cfg.spectrum_file).read_text())
            S, source = Spectrum(n, polys), key
        else:
            T = _parse(self.cfg.type_exprs[0])
            S, source = self.spectrum_of(T), str(T)
        rep = identify_by_cases(S, e8_mode=self.cfg.e8_mode)
        rows = [[label] for label in rep.factors]
        doc = {"source": source, "rank": S.n, "factors": list(rep.factors),
               "trace": [[label, k] for label, k in rep.trace if k]}
        return Report(rows, doc)

    def cmd_verify(self) -> Report:
        max_rank = self.cfg.max_rank or 5
        rep = verify_uniqueness(max_rank, e8_mode=self.cfg.e8_mode)
        rows = [[line] for line in rep.lines()]
        for cls in rep.unexpected:
            rows.append(["UNEXPECTED " + " == ".join(map(str, cls))])
        rows.append([f"{len(rep.classes)} collision classes, {len(rep.unexpected)} unexpected"])
        doc = {"max_rank": max_rank,
               "collisions": [[str(t) for t in cls] for cls in rep.classes],
               "unexpected": [[str(t) for t in cls] for cls in rep.unexpected]}
        return Report(rows, doc, status=0 if rep.ok else 1)

    def cmd_springer_check(self) -> Report:
        if self.cfg.type_exprs:
            types = []
            for expr in self.cfg.type_exprs:
                types.extend(_parse(expr).factors)
        else:
            types = all_simple_types(self.cfg.max_rank or 8, split_bc=True)
            if self.cfg.e8_mode == "forbid":
                types = [t for t in types if str(t) != "E8"]
        rows, doc, failed = [], [], 0
        for t in types:
            got = ch_star(self.spectrum_of(SemisimpleType([t])))
            want = springer_ch_star(t)
            ok = got == want
            failed += not ok
            rows.append(["PASS" if ok else "FAIL", str(t), ",".join(map(str, sorted(got)))])
            doc.append({"type": str(t), "ok": ok, "ch_star": sorted(got), "predicted": sorted(want)})
        return Report(rows, doc, status=1 if failed else 0)

    def cmd_classes(self) -> Report:
        T = _parse(self.cfg.type_exprs[0])
        classes = product_classes(T)
        rows = [[c.label, c.charpoly.canonical(), "" if c.size is None else str(c.size)]
                for c in classes]
        doc = [{"label": c.label, "factors": _factors_json(c.charpoly), "size": c.size}
               for c in classes]
        return Report(rows, doc)

    def cmd_tori(self) -> Report:
        T = _parse(self.cfg.type_exprs[0])
        rep = torus_orders(T, self.cfg.q)
        rows = [[label, p.canonical(), str(order)] for label, p, order in rep.entries]
        doc = {"q": rep.q, "warning": rep.warning,
               "tori": [{"label": label, "factors": _factors_json(p), "order": order}
                        for label, p, order in rep.entries]}
        return Report(rows, doc, notes=[rep.warning] if rep.warning else [])

    def cmd_share(self) -> Report:
        T1, T2 = (_parse(e) for e in self.cfg.type_exprs)
        v = share_tori(T1, T2, e8_mode=self.cfg.e8_mode, cache=self.cache)
        witness = v.witness.canonical() if v.witness else ""
        rows = [["true" if v.shared else "false", witness, v.reason]]
        doc = {"types": [str(T1), str(T2)], "shared": v.shared,
               "witness": _factors_json(v.witness) if v.witness else None, "reason": v.reason}
        return Report(rows, doc)


def cache_admin(action: str, cache_dir: Path) -> Report:
    store = SpectrumCache(cache_dir)
    if action == "status":
        entries = store.entries()
        rows = [[_count(len(entries))]] + [[key, cachefmt.file_hash(p)] for key, p in entries]
        doc = {"entries": [{"key": key, "sha256": cachefmt.file_hash(p)} for key, p in entries]}
        return Report(rows, doc)
    if action == "clear":
        removed = store.clear()
        return Report([[f"removed {_count(removed)}"]], {"removed": removed})
    drift = []
    entries = store.entries()
    for key, p in entries:
        store.get(key)
        fresh = spectrum(parse_type(key), e8_mode="bundled")
        if cachefmt.render(key, fresh.n, fresh.polys) != p.read_text():
            drift.append(key)
    rows = [[f"DRIFT {key}"] for key in drift]
    rows.append([f"{_count(len(entries) - len(drift))} verified"])
    doc = {"verified": len(entries) - len(drift), "drift": drift}
    return Report(rows, doc, status=1 if drift else 0)


def _count(k: int) -> str:
    return f"{k} entry" if k == 1 else f"{k} entries"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="table")
    common.add_argument("--cache-dir", type=Path, default=None)
    common.add_argument("--e8-mode", choices=E8_MODES, default="bundled")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--q", type=int, default=None)
    common.add_argument("--max-rank", type=int, default=None)

    parser = argparse.ArgumentParser(prog="weylspec",
                                     description="Spectra of Weyl groups, invariants and tori.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        p.add_argument("types", nargs="*", metavar="TYPE")
        if name == "identify":
            p.add_argument("--spectrum-file", type=Path, default=None)
    c = sub.add_parser("cache", parents=[common])
    c.add_argument("action", choices=("status", "clear", "rebuild"))
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cache_dir = args.cache_dir or default_cache_dir()
    try:
        if args.command == "cache":
            report = cache_admin(args.action, cache_dir)
        else:
            cfg = CommandConfig(args.command, args.types, args.q, args.max_rank, args.format,
                                cache_dir, args.e8_mode, max(1, args.threads),
                                getattr(args, "spectrum_file", None))
            cfg.validate()
            report = Runner(cfg).run()
    except UsageError as exc:
        parser.error(str(exc))
    except Exception as exc:
        for kind, code in ERROR_CODES:
            if isinstance(exc, kind):
                print(f"ERROR {code}: {exc}", file=sys.stderr)
                return 1
    for note in report.notes:
        print(f"WARNING: {note}", file=sys.stderr)
    sys.stdout.write(report.render(args.format))
    return report.status


if __name__ == "__main__":
    sys.exit(main())
