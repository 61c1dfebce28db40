"""Finite complexes, quasi-isomorphism checks, and the cyclotomic oracle."""

from fractions import Fraction

import pytest

from heckeklr.errors import (
    FiltrationLeak,
    InternalError,
    InvalidParam,
    NotStabilized,
    VariantMismatch,
)
from heckeklr.homology import (
    FiniteComplex,
    build_filtration_complex,
    build_quotient_complex,
    cyclotomic_dim_hecke,
    homology_ranks,
    key_weight,
    transition_homology_ranks,
    transition_vec,
    verify_quasi_iso,
)
from heckeklr.klr_core import KLRAlgebra
from heckeklr.params import ParamSet
from heckeklr.permutations import Permutation


def deg_params(d=2, Q=(0,), a=(0, 1), I=(0, 1)):
    return ParamSet.make("degenerate", d, Q=Q, a=a, I=I)


def q_params(d=2, q=2, Q=(1,), a=(1, 2), I=(1, 2)):
    return ParamSet.make("q", d, q=q, Q=Q, a=a, I=I)


def all_pass(checks):
    return all(ok for _, ok, _ in checks)


# -- filtration complexes ----------------------------------------------------------


def test_filtration_single_strand_basis():
    ps = deg_params(d=1, Q=(0,), a=(0,), I=(0, 1))
    c = build_filtration_complex(ps, 3)
    e = Permutation.identity(1)
    assert c.basis[0] == [((k,), e, ()) for k in range(4)]
    assert c.basis[1] == [((k,), e, (1,)) for k in range(3)]
    for k in range(3):
        col = c.column(1, ((k,), e, (1,)))
        assert col == {((k + 1,), e, ()): Fraction(1)}
    rep = homology_ranks(c)
    assert rep.homology == {0: 1, 1: 0}
    assert rep.euler_ok()


def test_filtration_dim_matches_enumeration():
    ps = deg_params()
    c = build_filtration_complex(ps, 6)
    count = 0
    for a1 in range(7):
        for a2 in range(7):
            for _w in range(2):
                for b1 in (0, 1):
                    for b2 in (0, 1):
                        if a1 + a2 + b1 + b2 <= 6:
                            count += 1
    assert count == 170
    assert c.total_dim() == 170


def test_filtration_bound_zero():
    ps = deg_params()
    c = build_filtration_complex(ps, 0)
    assert c.dim(0) == 2
    assert c.dim(1) == 0 and c.dim(2) == 0
    rep = homology_ranks(c)
    assert rep.homology[0] == 2
    assert rep.cycles[0] == 2 and rep.boundaries[0] == 0


def test_filtration_rejects_q_variant():
    with pytest.raises(VariantMismatch):
        build_filtration_complex(q_params(), 4)


def test_filtration_rejects_negative_bound():
    with pytest.raises(InvalidParam):
        build_filtration_complex(deg_params(), -1)


def test_filtration_leak_detected(monkeypatch):
    import heckeklr.homology as ho

    def bad_differential(self, elem, P=None):
        e = Permutation.identity(2)
        return {((7, 0), e, ()): Fraction(1)}

    monkeypatch.setattr(ho.HeckeAlgebra, "differential", bad_differential)
    with pytest.raises(FiltrationLeak):
        build_filtration_complex(deg_params(), 4)


def test_square_zero_checked_at_build():
    basis = {0: ["u"], 1: ["v"], 2: ["w"]}
    diff = {
        1: {"v": {"u": Fraction(1)}},
        2: {"w": {"v": Fraction(1)}},
    }
    with pytest.raises(InternalError):
        FiniteComplex("bad", basis, diff)


# -- quotient complexes ------------------------------------------------------------


def test_quotient_single_strand():
    ps = deg_params(d=1, Q=(0,), a=(0,), I=(0, 1))
    c = build_quotient_complex(ps, 3)
    assert c.dim(0) == 3 and c.dim(1) == 3
    rep = homology_ranks(c)
    assert rep.homology == {0: 1, 1: 1}


def test_quotient_transition_kills_h1():
    ps = deg_params(d=1, Q=(0,), a=(0,), I=(0, 1))
    c4 = build_quotient_complex(ps, 4)
    c3 = build_quotient_complex(ps, 3)
    assert homology_ranks(c4).homology[1] == 1
    ranks = transition_homology_ranks(c4, c3, "hecke", 3)
    assert ranks[1] == 0
    assert ranks[0] == 1


def test_quotient_q_variant_shifted():
    ps = q_params(d=1, Q=(1,), a=(1,), I=(1, 2))
    c = build_quotient_complex(ps, 3)
    assert c.dim(0) == 3 and c.dim(1) == 3
    rep = homology_ranks(c)
    assert rep.homology == {0: 1, 1: 1}
    pt = (Fraction(1),)
    col = c.column(1, (pt, (0,), Permutation.identity(1), (1,)))
    assert col == {(pt, (1,), Permutation.identity(1), ()): Fraction(1)}


def test_quotient_klr_single_strand():
    ps = deg_params(d=1, Q=(0,), a=(0,), I=(0, 1))
    c = build_quotient_complex(ps, 3, side="klr")
    assert c.dim(0) == 3 and c.dim(1) == 3
    rep = homology_ranks(c)
    assert rep.homology == {0: 1, 1: 1}


def test_quotient_rejects_bad_inputs():
    with pytest.raises(InvalidParam):
        build_quotient_complex(deg_params(), 0)
    with pytest.raises(InvalidParam):
        build_quotient_complex(deg_params(), 3, side="middle")


def test_tower_coherence():
    for side, ps in (("hecke", q_params()), ("klr", deg_params())):
        c4 = build_quotient_complex(ps, 4, side=side)
        for k in range(1, 3):
            for key in c4.basis[k]:
                col = c4.column(k, key)
                direct = transition_vec(side, col, 2)
                via_mid = transition_vec(side, transition_vec(side, col, 3), 2)
                assert direct == via_mid


def test_tower_chain_map_on_columns():
    ps = q_params()
    c4 = build_quotient_complex(ps, 4)
    c3 = build_quotient_complex(ps, 3)
    keys3 = {k: set(c3.basis.get(k, ())) for k in c3.basis}
    for k in (1, 2):
        for key in c4.basis[k]:
            lhs = transition_vec("hecke", c4.column(k, key), 3)
            rhs = c3.column(k, key) if key in keys3[k] else {}
            assert lhs == rhs


def test_key_weight_conventions():
    assert key_weight("hecke", ((Fraction(1),), (2,), None, ())) == 2
    assert key_weight("klr", (None, (), (1, 2), (Fraction(0),))) == 3


# -- quasi-isomorphism routes ------------------------------------------------------


def test_verify_filtration_level_two():
    ps = deg_params(d=1, Q=(0, 0), a=(0,), I=(0, 1))
    checks = verify_quasi_iso(ps)
    assert all_pass(checks)
    assert cyclotomic_dim_hecke(ps).total == 2


def test_verify_filtration_two_strands():
    ps = deg_params()
    checks = verify_quasi_iso(ps)
    assert all_pass(checks)
    ids = [cid for cid, _ok, _w in checks]
    assert ids[-3:] == ["h0_stable", "h0_oracle", "euler"]
    assert cyclotomic_dim_hecke(ps).total == 2


def test_verify_tower_q_single_strand():
    ps = q_params(d=1, Q=(1,), a=(1,), I=(1, 2))
    assert all_pass(verify_quasi_iso(ps, N_list=[2, 3, 4]))
    assert all_pass(verify_quasi_iso(ps, N_list=[2, 3, 4], side="klr"))


def test_verify_tower_q_two_strands_hecke():
    ps = q_params()
    checks = verify_quasi_iso(ps, N_list=[2, 3, 4])
    assert all_pass(checks)


def test_verify_klr_single_strand_level():
    # single strand with lam = l: degree zero has dimension l and the
    # positive-degree classes die along the tower
    for ell in (1, 2):
        ps = deg_params(d=1, Q=(0,) * ell, a=(0,), I=(0, 1))
        c = build_quotient_complex(ps, 4, side="klr")
        assert homology_ranks(c).homology[0] == ell
        checks = verify_quasi_iso(ps, N_list=[2, 3, 4], side="klr")
        assert all_pass(checks)


def test_verify_route_selection_errors():
    with pytest.raises(InvalidParam):
        verify_quasi_iso(deg_params(), D_list=[2, 4], N_list=[2, 3])
    with pytest.raises(InvalidParam):
        verify_quasi_iso(deg_params(), D_list=[2, 4], side="klr")
    with pytest.raises(InvalidParam):
        verify_quasi_iso(q_params(), N_list=[3])
    ps2 = deg_params(d=1, Q=(0, 0), a=(0,), I=(0, 1))
    with pytest.raises(InvalidParam):
        # no pair of listed orders is ell apart
        verify_quasi_iso(ps2, N_list=[3, 4], side="klr")
    with pytest.raises(VariantMismatch):
        verify_quasi_iso(q_params(), D_list=[2, 4])


def test_default_route_follows_variant():
    checks = verify_quasi_iso(deg_params(d=1, Q=(0,), a=(0,), I=(0, 1)))
    assert any(cid.startswith("vanish_D") for cid, _ok, _w in checks)
    checks = verify_quasi_iso(q_params(d=1, Q=(1,), a=(1,), I=(1, 2)))
    assert any(cid.startswith("tower_vanish") for cid, _ok, _w in checks)


def test_euler_identity_on_samples():
    ps = deg_params()
    for D in (2, 4, 6):
        assert homology_ranks(build_filtration_complex(ps, D)).euler_ok()
    psq = q_params(d=1, Q=(1,), a=(1,), I=(1, 2))
    for N in (2, 3):
        assert homology_ranks(build_quotient_complex(psq, N)).euler_ok()


# -- cyclotomic dimension oracle ---------------------------------------------------


def test_cyclotomic_dim_single_strand():
    out = cyclotomic_dim_hecke(deg_params(d=1, Q=(0,), a=(0,), I=(0, 1)))
    assert out.total == 1
    assert out.blocks == {(Fraction(0),): 1}
    assert out.leftover() == 0


def test_cyclotomic_dim_level_two_split():
    out = cyclotomic_dim_hecke(deg_params(d=1, Q=(0, 1), a=(0,), I=(0, 1)))
    assert out.total == 2
    assert out.blocks == {(Fraction(0),): 1, (Fraction(1),): 1}


def test_cyclotomic_dim_two_strands():
    out = cyclotomic_dim_hecke(deg_params())
    assert out.total == 2
    assert out.blocks == {(Fraction(0), Fraction(1)): 1}
    # the second block sits at eigenvalues outside I and is not searched
    assert out.leftover() == 1


def test_cyclotomic_dim_q_variant():
    out = cyclotomic_dim_hecke(q_params(d=1, Q=(1,), a=(1,), I=(1, 2)))
    assert out.total == 1
    assert out.blocks == {(Fraction(1),): 1}
    out2 = cyclotomic_dim_hecke(q_params())
    assert out2.total == 2
    assert out2.blocks == {(Fraction(1), Fraction(2)): 1}


def test_cyclotomic_dim_not_stabilized():
    with pytest.raises(NotStabilized):
        cyclotomic_dim_hecke(deg_params(d=1, Q=(0, 0), a=(0,), I=(0, 1)), cap=0)


def test_blocks_match_klr_single_strand():
    ps = deg_params(d=1, Q=(0,), a=(0,), I=(0, 1))
    oracle = cyclotomic_dim_hecke(ps)
    for i in sorted(ps.I):
        ps_i = ParamSet.make("degenerate", 1, Q=(0,), a=(i,), I=(0, 1))
        assert oracle.blocks.get((i,), 0) == KLRAlgebra(ps_i).cyclotomic_dim()
