"""Super-polynomial rings, symmetric actions, divided differences."""

from fractions import Fraction

import pytest

from heckeklr.errors import InternalError, LabelMismatch, RingMismatch
from heckeklr.permutations import Permutation
from heckeklr.superrings import (
    SuperPoly,
    demazure_hecke,
    demazure_klr,
    div_diff_with_remainder,
    exact_div_diff,
    ext_subsets,
    map_vars,
    merge_ext,
    poly_exponents,
    sym_act_hecke,
    sym_act_klr,
)

F = Fraction


def X(r, d=2, kind="P"):
    return SuperPoly.var(kind, d, r)


def th(r, d=2, kind="P"):
    return SuperPoly.ext(kind, d, r)


def test_merge_ext_signs():
    assert merge_ext((), (1,)) == (1, (1,))
    assert merge_ext((1,), (2,)) == (1, (1, 2))
    assert merge_ext((2,), (1,)) == (-1, (1, 2))
    assert merge_ext((1,), (1,)) is None
    assert merge_ext((1, 3), (2,)) == (-1, (1, 2, 3))


def test_anticommutation_and_square_zero():
    d = 3
    t1, t2 = th(1, d), th(2, d)
    assert t1 * t2 == -(t2 * t1)
    assert (t1 * t1).is_zero()
    s = t1 + t2
    assert (s * s).is_zero()


def test_mixed_product():
    d = 2
    f = X(1, d) * th(1, d) + 2 * th(2, d)
    g = X(2, d) * th(2, d)
    prod = f * g
    expect = SuperPoly.monomial("P", d, (1, 1), (1, 2))
    assert prod == expect


def test_laurent_exponents():
    f = SuperPoly.monomial("Pl", 2, (-2, 1))
    g = SuperPoly.monomial("Pl", 2, (2, 0))
    assert f * g == SuperPoly.monomial("Pl", 2, (0, 1))
    with pytest.raises(RingMismatch):
        SuperPoly.monomial("P", 2, (-1, 0))


def test_label_discipline():
    lab = (F(0), F(1))
    f = SuperPoly.var("PR", 2, 1, label=lab)
    g = SuperPoly.var("PR", 2, 2, label=(F(1), F(0)))
    with pytest.raises(LabelMismatch):
        _ = f + g
    with pytest.raises(LabelMismatch):
        SuperPoly.one("PR", 2)
    with pytest.raises(LabelMismatch):
        SuperPoly.one("P", 2, label=lab)


def test_sym_act_polynomial_part():
    d = 3
    g = SuperPoly.monomial("P", d, (2, 1, 0))
    assert sym_act_hecke(1, g) == SuperPoly.monomial("P", d, (1, 2, 0))
    assert sym_act_hecke(2, g) == SuperPoly.monomial("P", d, (2, 0, 1))


def test_sym_act_theta_twist():
    d = 2
    # s_1(theta_1) = theta_1 + (X_1 - X_2) theta_2
    got = sym_act_hecke(1, th(1, d))
    expect = th(1, d) + (X(1, d) - X(2, d)) * th(2, d)
    assert got == expect
    # s_1(theta_2) = theta_2
    assert sym_act_hecke(1, th(2, d)) == th(2, d)


def test_sym_act_involution():
    d = 3
    probes = [
        th(1, d),
        X(1, d) * th(1, d) + th(3, d),
        X(2, d) ** 2 * th(1, d) * th(2, d),
        (X(1, d) + X(3, d)) * th(2, d) * th(3, d),
    ]
    for r in (1, 2):
        for f in probes:
            assert sym_act_hecke(r, sym_act_hecke(r, f)) == f


def test_sym_act_braid():
    d = 3
    probes = [
        th(1, d) * th(2, d),
        X(1, d) * th(1, d),
        th(1, d) * th(2, d) * th(3, d),
        X(2, d) ** 2 * th(3, d),
    ]
    for f in probes:
        lhs = sym_act_hecke(1, sym_act_hecke(2, sym_act_hecke(1, f)))
        rhs = sym_act_hecke(2, sym_act_hecke(1, sym_act_hecke(2, f)))
        assert lhs == rhs


def test_sym_act_ring_homomorphism():
    d = 3
    f = X(1, d) * th(1, d) + X(3, d)
    g = th(2, d) + X(2, d) * th(3, d)
    for r in (1, 2):
        assert sym_act_hecke(r, f * g) == sym_act_hecke(r, f) * sym_act_hecke(r, g)


def test_sym_act_permutation_composition():
    d = 3
    w = Permutation.from_word([1, 2], d)
    f = X(1, d) * th(1, d)
    step = sym_act_hecke(1, sym_act_hecke(2, f))
    assert sym_act_hecke(w, f) == step


def test_exact_division():
    d = 2
    f = X(1, d) ** 2 - X(2, d) ** 2
    q = exact_div_diff(f, 1)
    assert q == X(1, d) + X(2, d)
    with pytest.raises(InternalError):
        exact_div_diff(X(1, d), 1)


def test_division_with_remainder_identity():
    d = 3
    f = (
        X(1, d) ** 2 * X(2, d)
        + 3 * X(2, d) * X(3, d)
        + X(1, d) * th(1, d) * th(2, d)
        + SuperPoly.const("P", d, 7)
    )
    quo, rem = div_diff_with_remainder(f, 1)
    diff = X(1, d) - X(2, d)
    assert quo * diff + rem == f


def test_division_with_remainder_laurent():
    d = 2
    f = SuperPoly.monomial("Pl", d, (-1, 0)) + SuperPoly.monomial("Pl", d, (2, -2))
    quo, rem = div_diff_with_remainder(f, 1)
    diff = SuperPoly.var("Pl", d, 1) - SuperPoly.var("Pl", d, 2)
    assert quo * diff + rem == f


def test_demazure_basic_values():
    d = 2
    assert demazure_hecke(1, X(1, d)) == SuperPoly.one("P", d)
    assert demazure_hecke(1, X(2, d)) == -SuperPoly.one("P", d)
    assert demazure_hecke(1, th(1, d)) == -th(2, d)
    assert demazure_hecke(1, th(2, d)).is_zero()
    assert demazure_hecke(1, SuperPoly.one("P", d)).is_zero()


def test_demazure_squares_to_zero():
    d = 3
    probes = [
        X(1, d) ** 3 * th(1, d),
        X(1, d) * X(2, d) * th(2, d) * th(3, d),
        X(2, d) ** 2 + X(1, d) * th(1, d) * th(2, d),
    ]
    for r in (1, 2):
        for f in probes:
            assert demazure_hecke(r, demazure_hecke(r, f)).is_zero()


def test_demazure_twisted_leibniz():
    d = 3
    pairs = [
        (X(1, d) * th(1, d), th(2, d)),
        (th(1, d), X(1, d) ** 2),
        (X(2, d) * th(2, d), X(1, d) * th(3, d)),
    ]
    for r in (1, 2):
        for g, f in pairs:
            lhs = demazure_hecke(r, g * f)
            rhs = demazure_hecke(r, g) * f + sym_act_hecke(r, g) * demazure_hecke(r, f)
            assert lhs == rhs


def test_demazure_intertwining():
    d = 2
    probes = [X(1, d) ** 2 * th(1, d), X(1, d) * X(2, d), th(1, d) * th(2, d)]
    for f in probes:
        assert sym_act_hecke(1, demazure_hecke(1, f)) == demazure_hecke(1, f)
        assert demazure_hecke(1, sym_act_hecke(1, f)) == -demazure_hecke(1, f)


def test_klr_action_equal_labels():
    lab = (F(1), F(1))
    om1 = SuperPoly.ext("PR", 2, 1, label=lab)
    om2 = SuperPoly.ext("PR", 2, 2, label=lab)
    y1 = SuperPoly.var("PR", 2, 1, label=lab)
    y2 = SuperPoly.var("PR", 2, 2, label=lab)
    got = sym_act_klr(1, om1)
    assert got == om1 + (y1 - y2) * om2
    assert got.label == lab
    assert sym_act_klr(1, om2) == om2


def test_klr_action_distinct_labels():
    lab = (F(0), F(1))
    flipped = (F(1), F(0))
    om1 = SuperPoly.ext("PR", 2, 1, label=lab)
    om2 = SuperPoly.ext("PR", 2, 2, label=lab)
    got1 = sym_act_klr(1, om1)
    assert got1.label == flipped
    assert got1 == SuperPoly.ext("PR", 2, 2, label=flipped)
    both = sym_act_klr(1, om1 * om2)
    assert both == -(
        SuperPoly.ext("PR", 2, 1, label=flipped) * SuperPoly.ext("PR", 2, 2, label=flipped)
    )


def test_klr_action_involution_all_labels():
    for lab in [(F(1), F(1)), (F(0), F(1))]:
        for key_ext in [(), (1,), (2,), (1, 2)]:
            f = SuperPoly.monomial("PR", 2, (1, 2), key_ext, label=lab)
            assert sym_act_klr(1, sym_act_klr(1, f)) == f


def test_klr_demazure_needs_equal_labels():
    lab = (F(0), F(1))
    f = SuperPoly.var("PR", 2, 1, label=lab)
    with pytest.raises(LabelMismatch):
        demazure_klr(1, f)
    lab2 = (F(1), F(1))
    g = SuperPoly.var("PR", 2, 1, label=lab2)
    assert demazure_klr(1, g) == SuperPoly.one("PR", 2, label=lab2)


def test_map_vars_affine():
    d = 2
    f = X(1, d) ** 2 + th(1, d)
    lab = (F(0), F(1))
    g = map_vars(
        f,
        scale=(F(1), F(1)),
        shift=(F(3), F(0)),
        kind="PR",
        label=lab,
    )
    y1 = SuperPoly.var("PR", d, 1, label=lab)
    om1 = SuperPoly.ext("PR", d, 1, label=lab)
    expect = (y1 + SuperPoly.const("PR", d, 3, lab)) ** 2 + om1
    assert g == expect


def test_enumeration_helpers():
    assert len(list(poly_exponents(2, 2))) == 6
    assert len(list(poly_exponents(1, 2, laurent=True))) == 5
    assert list(ext_subsets(2)) == [(), (1,), (2,), (1, 2)]
