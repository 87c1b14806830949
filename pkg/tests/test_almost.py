from fractions import Fraction

import pytest

from wittkit.almost import (
    ALMOST_ZERO_AT_SCALE,
    NOT_ALMOST_ZERO,
    ZERO,
    NotPIdeal,
    PIdealWitness,
    almost_zero_defect,
    colon_defect,
    is_p_ideal,
)
from wittkit.exactalg import (
    FracMonomial,
    RewriteRule,
    TruncatedAlgebra,
    colon_submodule,
)
from wittkit.presentations import SubquotientModule, module_colon
from wittkit.towers import TowerSpec, build_level, p_big_sequence


def vspec(p=2, N=4, D=6):
    return TowerSpec(kind="valuation", p=p, d=1, precision=N, degree_cap=D)


def uspec(p=2, d=2, N=3, D=4):
    return TowerSpec(kind="unramified", p=p, d=d, precision=N, degree_cap=D)


def xy_ring(p=2, D=4):
    rule = RewriteRule(FracMonomial((1, 1), 0), ())
    return TruncatedAlgebra(
        p=p, precision=1, degree_cap=D, variables=("x", "y"), relations=(rule,)
    )


class TestPIdeal:
    @pytest.mark.parametrize("p", [2, 3])
    def test_root_of_p_needs_exponent_p(self, p):
        lvl = build_level(vspec(p=p), 1)
        pi1 = lvl.pi()
        wit = is_p_ideal(lvl.algebra, [pi1], m_max=p + 1)
        assert isinstance(wit, PIdealWitness)
        assert wit.exponent == p
        assert wit.verify()

    def test_p_itself(self):
        lvl = build_level(vspec(p=2), 1)
        wit = is_p_ideal(lvl.algebra, [lvl.algebra.from_int(2)], m_max=3)
        assert isinstance(wit, PIdealWitness) and wit.exponent == 1

    def test_series_variable_is_not(self):
        A = TruncatedAlgebra(p=2, precision=3, degree_cap=4, variables=("x",))
        res = is_p_ideal(A, [A.var("x")], m_max=A.degree_cap)
        assert isinstance(res, NotPIdeal)
        assert res.checked_up_to == 4


class TestAlmostZeroDefect:
    def test_zero_module(self):
        pbig = p_big_sequence(vspec(p=2), 2)
        A = pbig.level.algebra
        rep = almost_zero_defect([A.zero], [], pbig)
        assert rep.verdict == ZERO

    def test_quotient_by_first_root_fails_at_scale_two(self):
        pbig = p_big_sequence(vspec(p=2), 2)
        A = pbig.level.algebra
        pi1 = A.mono({"p": Fraction(1, 2)})
        rep = almost_zero_defect([A.one], [pi1], pbig)
        assert rep.verdict == NOT_ALMOST_ZERO
        assert rep.killers == {1: True, 2: False}
        assert rep.witness_level == 2
        assert rep.witness == A.mono({"p": Fraction(1, 4)})

    def test_scaled_class_is_killed_everywhere(self):
        pbig = p_big_sequence(vspec(p=2), 2)
        A = pbig.level.algebra
        # class of p^(3/4) over (p): pi_2 * p^(3/4) = p, and deeper roots too
        u = A.mono({"p": Fraction(3, 4)})
        rep = almost_zero_defect([u], [A.from_int(2)], pbig)
        assert rep.verdict == ALMOST_ZERO_AT_SCALE
        assert rep.killers == {1: True, 2: True}


class TestColonDefect:
    def test_unramified_canonical_sop_is_regular(self):
        spec = uspec(p=2, d=2)
        lvl = build_level(spec, 1)
        pbig = p_big_sequence(spec, 1)
        for i in range(2):
            rep = colon_defect(lvl, i=i, pbig=pbig)
            assert rep.verdict == ZERO, i

    def test_zero_divisor_shows_at_i_zero(self):
        A = xy_ring()
        rep = colon_defect(A, sop=(A.var("x"), A.var("y")), i=0)
        assert rep.verdict == NOT_ALMOST_ZERO
        assert rep.colon_basis
        # the annihilator of x is generated by y
        from wittkit.exactalg import solve_linear_membership

        assert solve_linear_membership(A.var("y"), rep.colon_basis).is_member

    def test_zero_divisor_gone_at_i_one(self):
        A = xy_ring()
        rep = colon_defect(A, sop=(A.var("x"), A.var("y")), i=1)
        assert rep.verdict == ZERO

    def test_transfer_multipliers_certified(self):
        A = xy_ring()
        rep = colon_defect(
            A,
            sop=(A.var("x"), A.var("y")),
            i=0,
            transfer=(A.var("x"), A.one),
        )
        assert rep.verdict == NOT_ALMOST_ZERO
        assert rep.transfer_ok  # x * ann(x) = 0 lands in the zero ideal
        for cert in rep.transfer_certificates:
            assert cert.verify() or cert.target.is_zero


class TestFreeModules:
    def test_free_module_colon_matches_ring_colon(self):
        spec = uspec(p=2, d=2)
        lvl = build_level(spec, 1)
        A = lvl.algebra
        F = SubquotientModule(
            A,
            slots=(0, 1),
            gens=[
                SubquotientModule(A, (0, 1), [], []).vector({0: A.one}),
                SubquotientModule(A, (0, 1), [], []).vector({1: A.one}),
            ],
            rels=[],
        )
        sop = lvl.sop()
        assert colon_submodule(A, [sop[0]], sop[1]) == []
        assert module_colon(F, [sop[0]], sop[1]) == []

    def test_free_module_over_zero_divisor_ring(self):
        A = xy_ring()
        F = SubquotientModule(A, slots=(0,), gens=[], rels=[])
        F = SubquotientModule(A, (0,), [F.vector({0: A.one})], [])
        found = module_colon(F, [], A.var("x"))
        assert found  # y in the annihilator shows up componentwise
