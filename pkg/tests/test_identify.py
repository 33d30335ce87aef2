import random
from collections import defaultdict

import pytest

from weylspec.exact_poly import CycloPoly, char_poly, cyclo_factor
from weylspec.identify import (
    InconsistentSpectrum,
    SearchBoundExceeded,
    bc_orbit,
    d_witness,
    identify_by_cases,
    identify_by_search,
    semisimple_types,
    verify_uniqueness,
)
from weylspec.root_data import SimpleType, all_simple_types, matrix_group, parse_type, simple_reflections
from weylspec.spectra import Spectrum, spectrum


def ident(expr, **kw):
    return identify_by_cases(spectrum(parse_type(expr)), **kw).factors


def test_examples():
    assert ident("B3 x G2") == ("BC3", "G2")
    assert ident("A1") == ("A1",)
    assert ident("E8") == ("E8",)


def test_search_examples():
    assert identify_by_search(spectrum(parse_type("B2"))) == {("BC2",)}
    assert len(identify_by_search(spectrum(parse_type("A2 x A1")))) == 1
    phi7 = Spectrum(6, frozenset([CycloPoly({7: 1})]))
    assert identify_by_search(phi7, 2) == set()
    with pytest.raises(SearchBoundExceeded):
        identify_by_search(spectrum(parse_type("A9")))


def test_rank_two_candidates_distinct():
    spectra = {t: spectrum(parse_type(t)) for t in ("2*A1", "A2", "B2", "G2")}
    assert len(set(spectra.values())) == 4


def test_verify_small():
    rep = verify_uniqueness(2)
    assert rep.classes == [] and rep.ok
    rep = verify_uniqueness(5)
    assert rep.ok
    assert "COLLIDE B3 == C3" in rep.lines()
    for cls in rep.classes:
        assert set(cls) == bc_orbit(cls[0])


@pytest.mark.parametrize("n", range(3, 9))
def test_bc_same_spectrum(n):
    assert spectrum(parse_type(f"B{n}")) == spectrum(parse_type(f"C{n}"))


def test_bc_orbit():
    assert bc_orbit(parse_type("B3 x C4")) == {parse_type(e) for e in
                                             ("B3 x B4", "B3 x C4", "C3 x B4", "C3 x C4")}
    assert bc_orbit(parse_type("B2 x A1")) == {parse_type("B2 x A1")}


def test_d_witness():
    for m in range(4, 12):
        w = d_witness(m)
        assert [p for p in spectrum(parse_type(f"D{m}")) if p.mult(2 * m - 2)] == [w]


@pytest.mark.parametrize("t", [t for t in all_simple_types(16) if t.rank >= 8], ids=str)
def test_simple_types_round_trip(t):
    rep = identify_by_cases(spectrum(parse_type(str(t))))
    assert rep.factors == (t.label,) and rep.residual_ok
    assert [x for x in rep.trace if x[1]] == [(t.label, 1)]


@pytest.mark.parametrize("expr", [
    "E8 x D9", "E8 x B10", "E8 x B12", "E8 x A9", "E8 x D10", "E7 x D10", "E8 x B15",
    "E8 x D16", "E8 x A15", "E7 x A8", "E7 x D8", "E7 x B9", "2*E8", "E8 x E7 x A1",
    "B14 x D15", "D13 x A15", "B13 x A12", "A15 x B14", "G2 x D4 x B3", "F4 x B6 x D6 x B5",
    "A17 x A3", "D17 x A2", "B16 x A1", "A9 x B7", "A9 x B8 x E7", "A9 x D8 x E8",
])
def test_mixed_round_trip(expr):
    T = parse_type(expr)
    assert ident(expr) == T.labels()


def test_random_products_round_trip():
    rng = random.Random(20261019)
    pool = [t for t in all_simple_types(12)]
    for _ in range(40):
        chosen, left = [], 16
        while left > 0:
            options = [t for t in pool if t.rank <= left]
            t = rng.choice(options)
            chosen.append(t)
            left -= t.rank
        expr = " x ".join(map(str, chosen))
        assert ident(expr) == parse_type(expr).labels(), expr


def test_inconsistent_spectrum():
    fake = Spectrum(2, frozenset([CycloPoly({1: 2}), CycloPoly({4: 1})]))
    with pytest.raises(InconsistentSpectrum):
        identify_by_cases(fake)
    rep = identify_by_cases(fake, strict=False)
    assert not rep.residual_ok
    with pytest.raises(InconsistentSpectrum):
        identify_by_cases(spectrum(parse_type("A2")), n=3)


def test_missing_member_detected():
    s = spectrum(parse_type("B3 x A2"))
    for drop in sorted(s.polys)[:10]:
        broken = Spectrum(s.n, s.polys - {drop})
        if broken.polys == s.polys:
            continue
        rep = identify_by_cases(broken, strict=False)
        assert not rep.residual_ok


def test_equal_char_poly_gives_equal_factorization():
    by_poly = defaultdict(set)
    for g in matrix_group(simple_reflections(SimpleType("B", 3))):
        by_poly[char_poly(g)].add(cyclo_factor(char_poly(g)))
    assert all(len(v) == 1 for v in by_poly.values())


def test_semisimple_type_counts():
    assert sum(1 for _ in semisimple_types(2)) == 5
    assert sum(1 for _ in semisimple_types(2, split_bc=False)) == 5
    assert sum(1 for _ in semisimple_types(3, split_bc=False)) == 11
