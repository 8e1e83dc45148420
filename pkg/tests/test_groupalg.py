import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from twistcheck import groupalg, rep
from twistcheck.catalog import builtin_catalog
from twistcheck.errors import CapExceeded, DimensionMismatch, TwistcheckError
from twistcheck.rep import RepMatrix
from twistcheck.suitefiles import load_suite_file
from twistcheck.surface import F2, F3, SurfaceParams
from twistcheck.words import parse_word

# [DERIVED] orders of the F2 images of Omori's twists, from breadth-first closure
OMORI_F2_ORDER = {5: 720, 6: 23040}


def rm(rows, coeff=F2):
    return RepMatrix(coeff, np.array(rows, dtype=np.int64) % coeff.p)


def as_tuple(m):
    return tuple(tuple(int(x) for x in row) for row in np.asarray(m.entries))


def omori_images(g):
    c = builtin_catalog(g)
    inst = load_suite_file("common").instantiate(SurfaceParams(g))
    return [rep.evaluate(c, parse_word(w, catalog=c), F2) for w in inst.sets["omori"]]


def random_invertible(rng, n, p=2):
    while True:
        m = tuple(tuple(rng.randrange(p) for _ in range(n)) for _ in range(n))
        if oracles.det_mod(m, p):
            return m


def random_matrix(rng, n, p=2):
    return tuple(tuple(rng.randrange(p) for _ in range(n)) for _ in range(n))


def test_trivial_chain():
    ch = groupalg.build_chain([], p=2, n=3)
    assert ch.order() == 1
    assert ch.contains(rm(np.eye(3)))
    assert not ch.contains(rm([[0, 1, 0], [1, 0, 0], [0, 0, 1]]))


def test_empty_generators_need_field():
    with pytest.raises(TwistcheckError):
        groupalg.build_chain([])


def test_single_transvection():
    t = rm(oracles.transvection_f2((1, 1, 0, 0)))
    assert groupalg.build_chain([t]).order() == 2
    assert groupalg.brute_force_closure([t]) == {
        tuple(int(x) for x in groupalg.to_codes(np.eye(4, dtype=np.int64), 2)),
        tuple(int(x) for x in groupalg.to_codes(t.entries, 2))}


def test_minus_identity_over_f3():
    assert groupalg.build_chain([rm([[-1, 0], [0, -1]], F3)]).order() == 2


def test_gl22_order():
    whole = oracles.all_invertible(2, 2)
    assert len(whole) == 6
    gens = [rm([[1, 1], [0, 1]]), rm([[0, 1], [1, 0]])]
    assert groupalg.build_chain(gens).order() == len(whole)


def test_gl32_order():
    gens = [rm([[1, 1, 0], [0, 1, 0], [0, 0, 1]]), rm([[0, 0, 1], [1, 0, 0], [0, 1, 0]])]
    n = len(oracles.closure([as_tuple(g) for g in gens], 2, 3))
    assert n == 168 == oracles.gl_order(3, 2)
    assert groupalg.build_chain(gens).order() == 168
    assert len(groupalg.brute_force_closure(gens)) == 168


def test_generators_and_identity_are_members():
    gens = [rm([[1, 1, 0], [0, 1, 0], [0, 0, 1]]), rm([[1, 0, 0], [0, 0, 1], [0, 1, 0]])]
    ch = groupalg.build_chain(gens)
    assert ch.contains(rm(np.eye(3)))
    assert all(ch.contains(g) for g in gens)


def _random_case(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 4)
    k = rng.randint(1, 3)
    return n, [random_invertible(rng, n) for _ in range(k)], rng


@pytest.mark.parametrize("seed", range(100))
def test_chain_agrees_with_oracle(seed):
    n, gens, rng = _random_case(seed)
    elems = oracles.closure(gens, 2, n)
    assert len(elems) <= 20160
    ch = groupalg.build_chain([rm(g) for g in gens])
    assert ch.order() == len(elems)
    for e in elems:
        assert ch.contains(rm(e))
    tried = 0
    while tried < 100:
        m = random_matrix(rng, n)
        if m in elems:
            continue
        tried += 1
        assert not ch.contains(rm(m)), m


@pytest.mark.parametrize("g", [5, 6])
def test_omori_image_orders(g):
    gens = omori_images(g)
    ch = groupalg.build_chain(gens)
    assert ch.order() == OMORI_F2_ORDER[g]
    assert len(groupalg.brute_force_closure(gens)) == OMORI_F2_ORDER[g]


def test_omori_order_g5_by_independent_closure():
    gens = [as_tuple(m) for m in omori_images(5)]
    assert len(oracles.closure(gens, 2, 5)) == OMORI_F2_ORDER[5]


def test_matrix_moving_w_is_not_in_omori_image():
    ch = groupalg.build_chain(omori_images(6))
    m = np.eye(6, dtype=np.int64)
    m[1, 0] = 1  # x1 -> x1 + x2, moves w
    assert not ch.contains(rm(m))


def test_omori_membership_against_oracle_g5():
    gens = omori_images(5)
    ch = groupalg.build_chain(gens)
    elems = groupalg.brute_force_closure(gens)
    for codes in elems:
        assert ch.contains_codes(np.array(codes, dtype=np.int64))
    rng = random.Random(5)
    tried = 0
    while tried < 100:
        m = rm(random_matrix(rng, 5))
        codes = tuple(int(x) for x in groupalg.to_codes(m.entries, 2))
        if codes in elems:
            continue
        tried += 1
        assert not ch.contains(m)


def test_chain_is_deterministic():
    gens = omori_images(6)
    a, b = groupalg.build_chain(gens), groupalg.build_chain(gens)
    assert list(a.base) == list(b.base)
    assert a.orbit_sizes() == b.orbit_sizes()
    for lvl in range(len(a.base)):
        assert list(a.orbit(lvl)) == list(b.orbit(lvl))


def test_orbit_product_is_order():
    ch = groupalg.build_chain(omori_images(6))
    prod = 1
    for s in ch.orbit_sizes():
        prod *= s
    assert prod == ch.order()


def test_codes_round_trip():
    rng = np.random.default_rng(3)
    for p, n in ((2, 6), (3, 4), (7, 3)):
        m = rng.integers(0, p, size=(n, n))
        assert np.array_equal(groupalg.from_codes(groupalg.to_codes(m, p), p, n), m)


def test_same_subgroup_examples():
    x = [rm([[1, 1, 0], [0, 1, 0], [0, 0, 1]]), rm([[1, 0, 0], [0, 0, 1], [0, 1, 0]])]
    assert groupalg.same_subgroup(x, x)
    assert groupalg.same_subgroup(x, x + [x[0] @ x[1]])
    assert not groupalg.same_subgroup(x[:1], x)
    cmp = groupalg.compare(x[:1], x)
    assert cmp.a_in_b and not cmp.b_in_a and cmp.order_a == 2


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_same_subgroup_is_an_equivalence(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 4)
    a = [rm(random_invertible(rng, n)) for _ in range(2)]
    # two more generating sets of <a>: a shuffled product form and a with redundancy
    b = [a[1], a[0] @ a[1]]
    c = a + [a[1] @ a[0] @ a[0]]
    assert groupalg.same_subgroup(a, a)
    assert groupalg.same_subgroup(a, b) == groupalg.same_subgroup(b, a) is True
    assert groupalg.same_subgroup(b, c) and groupalg.same_subgroup(a, c)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        groupalg.build_chain([rm(np.eye(2)), rm(np.eye(3))])
    with pytest.raises(DimensionMismatch):
        groupalg.build_chain([rm(np.eye(2)), rm(np.eye(2), F3)])


def test_point_cap():
    with pytest.raises(CapExceeded):
        groupalg.build_chain([rm(np.eye(10))], max_points=512)


def test_oracle_cap():
    gens = [rm([[1, 1, 0], [0, 1, 0], [0, 0, 1]]), rm([[0, 0, 1], [1, 0, 0], [0, 1, 0]])]
    with pytest.raises(CapExceeded):
        groupalg.brute_force_closure(gens, cap=100)
    assert groupalg.brute_force_closure([], p=2, n=3) == {
        tuple(int(x) for x in groupalg.to_codes(np.eye(3, dtype=np.int64), 2))}
