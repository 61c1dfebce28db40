"""Truncated modules: Taylor shifts, series inversion, the completed action,
and the freeness certificate."""

import random
from fractions import Fraction

import pytest

from heckeklr.completion import (
    act_exact_then_truncate,
    completed_act,
    completed_basis_check,
    completed_sym_act,
    diagonal_embed,
    hecke_unit,
    invert_series,
    klr_unit,
    orbit,
    series_inverse,
    truncate,
)
from heckeklr.errors import NotInvertible
from heckeklr.hecke_core import HeckeAlgebra, add_into, random_word
from heckeklr.klr_core import KLRAlgebra
from heckeklr.params import ParamSet
from heckeklr.permutations import Permutation
from heckeklr.superrings import SuperPoly, sym_act_hecke


def deg_params(d=2, Q=(0,), a=(0, 1), I=(0, 1)):
    return ParamSet.make("degenerate", d, Q=Q, a=a, I=I)


def q_params(d=2, q=2, Q=(1,), a=(1, 2), I=(1, 2)):
    return ParamSet.make("q", d, q=q, Q=Q, a=a, I=I)


def random_poly(rng, kind, d, max_deg=3, ext_odds=0.3):
    coeffs = {}
    for _ in range(5):
        exps = tuple(rng.randint(0, max_deg) for _ in range(d))
        if sum(exps) > max_deg:
            exps = tuple(0 for _ in range(d))
        ext = tuple(sorted(rng.sample(range(1, d + 1), rng.randint(0, d))))
        if rng.random() > ext_odds:
            ext = ()
        coeffs[(exps, ext)] = Fraction(rng.randint(-4, 4))
    return SuperPoly(kind, d, coeffs)


def test_orbit_examples():
    assert orbit((0, 1)) == [(0, 1), (1, 0)]
    assert orbit((0, 0)) == [(0, 0)]
    assert len(orbit((0, 0, 1))) == 3
    assert orbit((0, 0, 1))[0] == (0, 0, 1)


def test_truncate_taylor_shift():
    X1 = SuperPoly.var("P", 1, 1)
    t = truncate(X1, (3,), 2)
    f = t.component((3,))
    assert f.coeffs == {((0,), ()): Fraction(3), ((1,), ()): Fraction(1)}
    t1 = truncate(X1, (3,), 1)
    assert t1.component((3,)).coeffs == {((0,), ()): Fraction(3)}
    sq = (X1 - SuperPoly.const("P", 1, 3)) ** 2
    assert truncate(sq, (3,), 2).is_zero()


def test_truncate_is_ring_map_mod_N():
    rng = random.Random(7)
    for _ in range(10):
        f = random_poly(rng, "P", 2)
        g = random_poly(rng, "P", 2)
        N = 3
        lhs = truncate(f * g, (0, 1), N).component((0, 1))
        tf = truncate(f, (0, 1), N).component((0, 1))
        tg = truncate(g, (0, 1), N).component((0, 1))
        rhs = (tf * tg).truncate_above(N)
        assert lhs == rhs


def test_truncate_laurent_series():
    Xm = SuperPoly.var("Pl", 1, 1, -1)
    t = truncate(Xm, (2,), 3)
    assert t.component((2,)).coeffs == {
        ((0,), ()): Fraction(1, 2),
        ((1,), ()): Fraction(-1, 4),
        ((2,), ()): Fraction(1, 8),
    }
    with pytest.raises(NotInvertible):
        truncate(Xm, (0,), 3)


def test_invert_series_examples():
    f = SuperPoly.var("P", 2, 1) - SuperPoly.var("P", 2, 2) + SuperPoly.one("P", 2)
    t = truncate(f, (0, 0), 2)
    inv = invert_series(t).component((0, 0))
    assert inv.coeffs == {
        ((0, 0), ()): Fraction(1),
        ((1, 0), ()): Fraction(-1),
        ((0, 1), ()): Fraction(1),
    }
    c = truncate(SuperPoly.const("P", 1, Fraction(5, 3)), (0,), 4)
    assert invert_series(c).component((0,)).coeffs == {((0,), ()): Fraction(3, 5)}
    with pytest.raises(NotInvertible):
        invert_series(truncate(SuperPoly.var("P", 1, 1), (0,), 3))


def test_invert_series_roundtrip():
    rng = random.Random(11)
    for _ in range(10):
        f = random_poly(rng, "P", 2) + SuperPoly.const("P", 2, 1000)
        N = 4
        t = truncate(f, (1, 2), N)
        g = invert_series(t)
        prod = (t.component((1, 2)) * g.component((1, 2))).truncate_above(N)
        assert prod == SuperPoly.one("P", 2)


def test_completed_act_x_on_unit():
    ps = deg_params()
    v = hecke_unit(ps, (0, 1), 2)
    elem = {((1, 0), Permutation.identity(2), ()): Fraction(1)}
    out = completed_act(elem, v, 2)
    f = out.component((0, 1))
    assert f.coeffs == {((1, 0), ()): Fraction(1)}
    v3 = hecke_unit(ps, (1, 0), 2)
    out3 = completed_act(elem, v3, 2)
    assert out3.component((1, 0)).coeffs == {
        ((0, 0), ()): Fraction(1),
        ((1, 0), ()): Fraction(1),
    }


def test_idempotent_projection():
    ps = deg_params()
    v = hecke_unit(ps, (0, 1), 3).add(hecke_unit(ps, (1, 0), 3))
    out = completed_act([("idem", (0, 1))], v, 3)
    assert list(out.components) == [(0, 1)]


def test_completed_T_matches_uncompleted_oracle():
    rng = random.Random(3)
    ps = deg_params()
    T1 = {((0, 0), Permutation.s(1, 2), ()): Fraction(1)}
    for _ in range(6):
        g = random_poly(rng, "P", 2)
        v = diagonal_embed(ps, g, 4)
        assert completed_act(T1, v, 4) == act_exact_then_truncate(ps, T1, g, 4)


def test_completed_act_q_variant_oracle():
    rng = random.Random(5)
    ps = q_params()
    alg = HeckeAlgebra.from_params(ps)
    for _ in range(6):
        word = random_word(alg, rng, 3)
        elem = alg.straighten(word)
        g = random_poly(rng, "Pl", 2, ext_odds=0.5)
        v = diagonal_embed(ps, g, 3)
        assert completed_act(elem, v, 3) == act_exact_then_truncate(ps, elem, g, 3)


def test_completed_act_degenerate_word_oracle():
    rng = random.Random(13)
    ps = deg_params(d=3, Q=(0, 1), a=(0, 0, 1), I=(0, 1))
    alg = HeckeAlgebra.from_params(ps)
    for _ in range(4):
        word = random_word(alg, rng, 3)
        elem = alg.straighten(word)
        g = random_poly(rng, "P", 3)
        v = diagonal_embed(ps, g, 3)
        assert completed_act(elem, v, 3) == act_exact_then_truncate(ps, elem, g, 3)


def test_equivariance_of_truncation():
    rng = random.Random(17)
    ps = deg_params()
    for _ in range(8):
        f = random_poly(rng, "P", 2, ext_odds=0.6)
        for b in [(0, 1), (1, 0)]:
            t = truncate(f, b, 4, ps)
            lhs = completed_sym_act(t, 1)
            sb = (b[1], b[0])
            rhs = truncate(sym_act_hecke(1, f), sb, 4, ps)
            assert lhs == rhs


def test_differential_linear_over_central_symmetric():
    # the reason the differential descends to the truncation tower
    rng = random.Random(19)
    ps = deg_params()
    alg = HeckeAlgebra.from_params(ps)
    e1 = SuperPoly.var("P", 2, 1) + SuperPoly.var("P", 2, 2)
    e2 = SuperPoly.var("P", 2, 1) * SuperPoly.var("P", 2, 2)
    for _ in range(20):
        m = alg.poly_ring_one()
        for _ in range(2):
            pick = e1 if rng.random() < 0.5 else e2
            shift = SuperPoly.const("P", 2, rng.randint(-2, 2))
            m = m * (pick - shift)
        m_elem = {((0, 0), Permutation.identity(2), ()): Fraction(1)}
        m_elem = alg.prepend_poly(m, m_elem)
        g = alg.straighten(random_word(alg, rng, 3))
        lhs = alg.differential(alg.multiply(m_elem, g))
        rhs = alg.multiply(m_elem, alg.differential(g))
        assert lhs == rhs


def test_completed_basis_check_rank_two_d1():
    ps = deg_params(d=1, Q=(0,), a=(0,), I=(0,))
    checks = completed_basis_check(ps, 2)
    assert len(checks) == 1
    assert checks[0][1] and "rank 2 of 2" in checks[0][2]


def test_completed_basis_check_rank_eight():
    checks = completed_basis_check(deg_params(), 2)
    assert len(checks) == 2
    for _tag, ok, witness in checks:
        assert ok and "rank 8 of 8" in witness


def test_completed_basis_check_q_variant():
    checks = completed_basis_check(q_params(), 2)
    for _tag, ok, witness in checks:
        assert ok and "rank 8 of 8" in witness


def test_completed_act_klr_side():
    ps = deg_params()
    alg = KLRAlgebra(ps)
    v = klr_unit(ps, (0, 1), 3)
    key = (Permutation.s(1, 2), (), (0, 0), (0, 1))
    out = completed_act({key: Fraction(1)}, v, 3)
    exact = alg.act_key(key, alg.module_monomial((0, 1)))
    for lab, f in exact.items():
        assert out.component(lab) == f.truncate_above(3)


def test_completed_act_requires_params():
    X1 = SuperPoly.var("P", 1, 1)
    t = truncate(X1, (3,), 2)
    from heckeklr.errors import InvalidParam

    with pytest.raises(InvalidParam):
        completed_act([("theta",)], t, 2)
