import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
import sampling
from twistcheck import rep
from twistcheck.catalog import CurveSpec, SUPPORTED_GENERA, builtin_catalog
from twistcheck.errors import OneSidedCurve, TwistcheckError
from twistcheck.surface import F2, F3, Q, CoeffSystem, HomologyClass, reduce_lift
from twistcheck.words import Word, inverse, multiply, parse_word

F5, F7 = CoeffSystem("Fp", 5), CoeffSystem("Fp", 7)
COEFFS = [Q, F2, F3, F5, F7]


def ev(c, text, coeff=Q, macros=None):
    return rep.evaluate(c, parse_word(text, macros, catalog=c), coeff)


def test_f2_twist_of_x1_plus_x2():
    c = builtin_catalog(8)
    local = CurveSpec("s", "two-sided", HomologyClass((1, 1) + (0,) * 6), (1, -1) + (0,) * 6)
    c2 = c.with_curves([local])
    m = rep.twist_matrix(c2, "s", F2)
    expect = oracles.transvection_f2((1, 1, 0, 0, 0, 0, 0, 0))
    assert tuple(map(tuple, m.tolist())) == expect
    swap = np.eye(8, dtype=int)
    swap[[0, 1]] = swap[[1, 0]]
    assert np.array_equal(m.entries, swap)


@pytest.mark.parametrize("g", [5, 8, 12])
def test_twists_are_unimodular_and_f2_involutions(g):
    c = builtin_catalog(g)
    for name, cv in c.curves.items():
        if not cv.two_sided:
            continue
        assert rep.twist_matrix(c, name, Q).det() == 1
        m2 = rep.twist_matrix(c, name, F2)
        assert (m2 @ m2).is_identity()
        # independent F2 transvection from the lift alone
        assert tuple(map(tuple, m2.tolist())) == oracles.transvection_f2(cv.lift.lift)


def test_one_sided_twist_rejected():
    with pytest.raises(OneSidedCurve):
        rep.twist_matrix(builtin_catalog(6), "x1", Q)


def test_sigma_and_tau_determinants():
    c = builtin_catalog(12)
    assert rep.symmetry_matrix(c, "sigma", Q).det() == 1
    assert rep.symmetry_matrix(c, "tau", Q).det() == -1


def test_xi1_is_a_transposition_mod_2():
    m = rep.symmetry_matrix(builtin_catalog(6), "xi1", F2)
    perm = np.eye(6, dtype=int)
    perm[[1, 2]] = perm[[2, 1]]
    assert np.array_equal(m.entries, perm)


def test_empty_word_is_identity():
    c = builtin_catalog(7)
    for coeff in COEFFS:
        assert rep.evaluate(c, Word(), coeff).is_identity()


def test_rotation_is_rho2_rho1():
    c = builtin_catalog(12)
    for coeff in (Q, F2):
        assert ev(c, "rho2*rho1", coeff) == rep.symmetry_matrix(c, "rotR", coeff)


def test_e5_e3_inverse():
    from twistcheck.words import builtin_macros
    from twistcheck.surface import SurfaceParams
    c = builtin_catalog(12)
    m = builtin_macros("g12", SurfaceParams(12))
    for coeff in (Q, F2, F3):
        assert ev(c, "E5*E3^-1", coeff, m) == ev(c, "A5*C5^-1", coeff)


def test_d_values_stated_on_single_generators():
    c = builtin_catalog(12)
    for text in ("A1", "B3", "C4", "D5", "E", "F"):
        assert rep.d_value(c, parse_word(text, catalog=c)) == 1
    assert rep.d_value(c, parse_word("rho1p", catalog=c)) == -1
    assert rep.d_value(c, parse_word("rho2p", catalog=c)) == -1
    for g in (5, 7, 9, 11):
        cc = builtin_catalog(g)
        assert rep.d_value(cc, parse_word("beta", catalog=cc)) == 1


def test_image_of_class():
    c = builtin_catalog(12)
    rho1 = parse_word("rho1", catalog=c)
    img = rep.image_of_class(c, rho1, "a1", Q)
    a3 = reduce_lift(c.curve("a3").lift.lift, Q)
    assert img in (a3, tuple(-x for x in a3))
    for name in ("a1", "e", "x4"):
        assert rep.image_of_class(c, Word(), name, Q) == reduce_lift(c.curve(name).lift.lift, Q)
    img = rep.image_of_class(c, parse_word("sigma", catalog=c), "f", Q)
    a1 = reduce_lift(c.curve("a1").lift.lift, Q)
    assert img in (a1, tuple(-x for x in a1))


def test_reduce_to_matches_direct_fp():
    c = builtin_catalog(9)
    w = parse_word("A1*beta*B2^-1*rho1", catalog=c)
    q = rep.evaluate(c, w, Q)
    for p in (F3, F5, F7):
        assert q.reduce_to(p) == rep.evaluate(c, w, p)
    with pytest.raises(TwistcheckError):
        q.reduce_to(F2)


def test_rep_matrix_is_read_only():
    m = rep.twist_matrix(builtin_catalog(6), "a1", Q)
    with pytest.raises(ValueError):
        m.entries[0, 0] = 5


def test_conjugation_sign_helper():
    c = builtin_catalog(12)
    assert rep.conjugation_sign(c, parse_word("tau", catalog=c), "a1", "a1") == -1
    assert rep.conjugation_sign(c, Word(), "a1", "a1") == 1
    assert rep.conjugation_sign(c, Word(), "a1", "b1") == 0


# properties ------------------------------------------------------------------

def _catalog_words(g, n=40, seed=0):
    c = builtin_catalog(g)
    return c, sampling.random_words(c, n, seed + g, max_len=5)


@settings(max_examples=60)
@given(st.sampled_from(list(SUPPORTED_GENERA)), st.integers(0, 10_000), st.sampled_from(COEFFS))
def test_evaluate_is_a_homomorphism(g, seed, coeff):
    c, ws = _catalog_words(g, 2, seed)
    u, v = ws
    assert rep.evaluate(c, multiply(u, v), coeff) == rep.evaluate(c, u, coeff) @ rep.evaluate(c, v, coeff)
    assert rep.evaluate(c, inverse(u), coeff) == rep.evaluate(c, u, coeff).inverse()


@settings(max_examples=60)
@given(st.sampled_from(list(SUPPORTED_GENERA)), st.integers(0, 10_000))
def test_d_value_multiplicative(g, seed):
    c, (u, v) = _catalog_words(g, 2, seed)
    assert rep.d_value(c, multiply(u, v)) == rep.d_value(c, u) * rep.d_value(c, v)


@settings(max_examples=40)
@given(st.sampled_from(list(SUPPORTED_GENERA)), st.integers(0, 10_000))
def test_positive_d_generators_give_positive_words(g, seed):
    c = builtin_catalog(g)
    import random
    rng = random.Random(seed)
    sym = [name for name, s in c.symmetries.items() if s.declared_d == 1]
    twists = [n[0].upper() + n[1:] for n, cv in c.curves.items() if cv.two_sided]
    text = sampling.random_word_text(rng, twists + sym, 6)
    assert rep.d_value(c, parse_word(text, catalog=c)) == 1


@pytest.mark.parametrize("g", sorted(SUPPORTED_GENERA))
def test_determinant_matches_oracle(g):
    c, ws = _catalog_words(g, 5, 7)
    for w in ws:
        m = rep.evaluate(c, w, Q)
        assert int(oracles.det(tuple(map(tuple, m.tolist())))) == m.det()
