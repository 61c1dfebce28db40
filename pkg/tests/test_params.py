"""Parameter sets, quivers, scalar serialization."""

from fractions import Fraction

import pytest

from heckeklr.errors import InvalidParam
from heckeklr.params import (
    ParamSet,
    build_quiver_degenerate,
    build_quiver_q,
    parse_scalar,
    scalar_str,
)


def test_scalar_roundtrip():
    for text in ["3", "-2", "5/7", "-11/4", "0"]:
        x = parse_scalar(text)
        assert isinstance(x, Fraction)
        assert parse_scalar(scalar_str(x)) == x
    assert parse_scalar("4/2") == 2
    assert scalar_str(Fraction(4, 2)) == "2"


def test_scalar_rejects_garbage():
    for text in ["", "1.5", "a", "1/0"]:
        with pytest.raises((InvalidParam, ZeroDivisionError)):
            parse_scalar(text)


def test_quiver_degenerate_edges():
    I = frozenset(Fraction(k) for k in (0, 1, 2))
    quiv = build_quiver_degenerate(I)
    assert quiv.has_edge(Fraction(1), Fraction(0))
    assert quiv.has_edge(Fraction(2), Fraction(1))
    assert not quiv.has_edge(Fraction(0), Fraction(1))
    assert not quiv.has_edge(Fraction(2), Fraction(0))
    assert quiv.h(Fraction(1), Fraction(0)) == 1
    assert quiv.h(Fraction(0), Fraction(1)) == 0
    assert quiv.h(Fraction(2), Fraction(0)) == 0


def test_quiver_degenerate_loopless():
    I = frozenset([Fraction(0)])
    quiv = build_quiver_degenerate(I)
    assert not quiv.has_edge(Fraction(0), Fraction(0))


def test_quiver_q_edges():
    q = Fraction(2)
    I = frozenset(Fraction(k) for k in (1, 2, 4))
    quiv = build_quiver_q(I, q)
    assert quiv.has_edge(Fraction(2), Fraction(1))
    assert quiv.has_edge(Fraction(4), Fraction(2))
    assert not quiv.has_edge(Fraction(1), Fraction(2))
    assert not quiv.has_edge(Fraction(4), Fraction(1))


def test_quiver_q_rejects_bad_q_and_zero_vertex():
    I = frozenset([Fraction(1)])
    with pytest.raises(InvalidParam):
        build_quiver_q(I, Fraction(0))
    with pytest.raises(InvalidParam):
        build_quiver_q(I, Fraction(1))
    with pytest.raises(InvalidParam):
        build_quiver_q(frozenset([Fraction(0), Fraction(2)]), Fraction(2))


def test_paramset_make_and_multiplicities():
    ps = ParamSet.make("degenerate", 2, Q=(0,), a=(0, 1))
    assert ps.ell == 1
    assert ps.nu[Fraction(0)] == 1
    assert ps.nu[Fraction(1)] == 1
    assert ps.lam[Fraction(0)] == 1
    assert ps.lam.get(Fraction(1), 0) == 0
    assert Fraction(0) in ps.I and Fraction(1) in ps.I


def test_paramset_validation():
    with pytest.raises(InvalidParam):
        ParamSet.make("degenerate", 0, Q=(0,), a=())
    with pytest.raises(InvalidParam):
        ParamSet.make("degenerate", 1, Q=(), a=(0,))
    with pytest.raises(InvalidParam):
        ParamSet.make("q", 1, Q=(1,), a=(1,))  # missing q
    with pytest.raises(InvalidParam):
        ParamSet.make("q", 1, Q=(1,), a=(1,), q=1)
    with pytest.raises(InvalidParam):
        ParamSet.make("q", 1, Q=(1,), a=(0,), q=2)  # 0 not allowed in I
    with pytest.raises(InvalidParam):
        ParamSet.make("degenerate", 1, Q=(0,), a=(5,), I={0})  # a outside I
    with pytest.raises(InvalidParam):
        ParamSet.make("weird", 1, Q=(0,), a=(0,))


def test_paramset_json_roundtrip():
    ps = ParamSet.make("q", 3, Q=(1, 2), a=(1, 2, 4), q=2)
    blob = ps.to_json()
    back = ParamSet.from_json(blob)
    assert back == ps
    assert back.q == 2
    assert back.variant == "q"


def test_paramset_json_rejects_unknown_keys():
    with pytest.raises(InvalidParam):
        ParamSet.from_json(
            '{"variant":"degenerate","d":1,"Q":["0"],"a":["0"],"I":["0"],"bogus":1}'
        )


def test_paramset_label_tuples():
    ps = ParamSet.make("degenerate", 3, Q=(0,), a=(0, 0, 1))
    labels = list(ps.labels())
    assert len(labels) == 2 ** 3
    assert all(len(lab) == 3 for lab in labels)
    assert tuple(Fraction(x) for x in (0, 0, 1)) in labels
