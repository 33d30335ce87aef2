import itertools
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from weylspec.exact_poly import CycloPoly, char_poly, cyclo_factor
from weylspec.root_data import SimpleType, all_simple_types, matrix_group, parse_type, simple_reflections, weyl_order
from weylspec.spectra import spectrum
from weylspec.tori_fq import (
    DataUnavailable,
    NotPrimePower,
    classes_spectrum,
    prime_power_base,
    product_classes,
    share_tori,
    torus_orders,
    weyl_classes,
)


def test_A1_classes():
    cl = weyl_classes(SimpleType("A", 1))
    assert len(cl) == 2
    assert {c.charpoly for c in cl} == {CycloPoly({1: 1}), CycloPoly({2: 1})}


def test_B2_classes():
    cl = weyl_classes(SimpleType("B", 2))
    assert len(cl) == 5 and len({c.charpoly for c in cl}) == 4


def test_D4_split_classes():
    cl = weyl_classes(SimpleType("D", 4))
    split = [c for c in cl if c.label.startswith("[2,2|]")]
    assert len(split) == 2
    assert {c.charpoly for c in split} == {CycloPoly({1: 2, 2: 2})}
    assert len(cl) == 13


def conjugacy_sizes(t):
    """Class sizes by closing each element under conjugation by the generators."""
    gens = simple_reflections(t)
    n = t.rank

    def mm(a, b):
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))

    left = set(matrix_group(gens))
    out = Counter()
    while left:
        g = left.pop()
        orbit, todo = {g}, [g]
        while todo:
            x = todo.pop()
            for s in gens:
                y = mm(mm(s, x), s)
                if y not in orbit:
                    orbit.add(y)
                    todo.append(y)
        left -= orbit
        out[(cyclo_factor(char_poly(g)), len(orbit))] += 1
    return out


@pytest.mark.parametrize("name", ["A3", "B3", "C3", "D4", "G2", "F4"])
def test_class_sizes_match_brute_force(name):
    t = parse_type(name).factors[0]
    got = Counter((c.charpoly, c.size) for c in weyl_classes(t))
    assert got == conjugacy_sizes(t)


@pytest.mark.parametrize("t", [t for t in all_simple_types(10, split_bc=True)
                               if not t.is_exceptional] + [SimpleType("G", 2), SimpleType("F", 4),
                                                            SimpleType("E", 6), SimpleType("E", 7)],
                         ids=str)
def test_sizes_sum_to_order(t):
    cl = weyl_classes(t)
    assert sum(c.size for c in cl) == weyl_order(t)
    assert len({c.label for c in cl}) == len(cl)


@pytest.mark.parametrize("t", all_simple_types(7, split_bc=True), ids=str)
def test_class_polys_equal_spectrum(t):
    assert classes_spectrum(t) == spectrum(parse_type(str(t)))


def test_exceptional_labels():
    labels = [c.label for c in weyl_classes(SimpleType("G", 2))]
    assert labels == sorted(labels) and labels[0].startswith("G2#01/o")
    assert weyl_classes(SimpleType("E", 6)) == weyl_classes(SimpleType("E", 6))


def test_E8_classes_unavailable():
    with pytest.raises(DataUnavailable):
        weyl_classes(SimpleType("E", 8))


def test_torus_examples():
    assert torus_orders(parse_type("A1"), 5).orders() == [6, 4]
    assert sorted(torus_orders(parse_type("B2"), 3).orders()) == [4, 8, 8, 10, 16]
    for expr in ("A1", "B3 x G2", "D4", "E6"):
        rep = torus_orders(parse_type(expr), 2)
        split = [o for _, p, o in rep.entries if p == CycloPoly({1: parse_type(expr).total_rank})]
        assert split == [1]


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 27, 1024])
def test_orders_positive(q):
    rep = torus_orders(parse_type("B3 x A2"), q)
    assert all(o > 0 for o in rep.orders())
    assert rep.warning is None


def test_prime_power_check():
    assert prime_power_base(9) == (3, True)
    assert prime_power_base(7) == (7, True)
    assert prime_power_base(2**40) == (2, True)
    for bad in (1, 6, 12, 100):
        with pytest.raises(NotPrimePower):
            prime_power_base(bad)
    big = (10**6 + 3) * (10**6 + 33)
    assert prime_power_base(big) == (None, False)
    rep = torus_orders(parse_type("A1"), big)
    assert rep.warning and rep.orders() == [big + 1, big - 1]


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(all_simple_types(3, split_bc=True)), st.sampled_from(all_simple_types(3, split_bc=True)),
       st.sampled_from([2, 3, 4, 5, 7, 8, 9]))
def test_orders_multiply_under_products(a, b, q):
    oa = torus_orders(parse_type(str(a)), q).orders()
    ob = torus_orders(parse_type(str(b)), q).orders()
    oab = torus_orders(parse_type(f"{a} x {b}"), q).orders()
    assert Counter(oab) == Counter(x * y for x, y in itertools.product(oa, ob))


def test_product_class_count():
    assert len(product_classes(parse_type("B2 x G2"))) == 5 * 6


def test_share_examples():
    assert share_tori(parse_type("B4"), parse_type("C4")).shared
    v = share_tori(parse_type("B2"), parse_type("2*A1"))
    assert not v.shared and v.witness == CycloPoly({4: 1})
    assert share_tori(parse_type("E6"), parse_type("E6")).shared
    v = share_tori(parse_type("A2"), parse_type("A3"))
    assert not v.shared and v.witness is None and "rank" in v.reason


def test_share_is_equivalence():
    from weylspec.identify import semisimple_types
    types = list(semisimple_types(6))
    rel = {(a, b): share_tori(a, b).shared for a in types for b in types}
    for a in types:
        assert rel[a, a]
        for b in types:
            assert rel[a, b] == rel[b, a]
            if rel[a, b]:
                assert all(rel[a, c] == rel[b, c] for c in types)
