import itertools

import numpy as np
import pytest

import quasivar as qv
from quasivar import (Answer, QuasiEquation, Term, admissible_upto,
                      direct_product, excludes, free_algebra, jep_check,
                      kollar_check, minimal_quasivariety_check, passive,
                      psc_check, q_membership, ret_membership, sc_check,
                      unifiable, v_membership, valid)
from quasivar.brouwer import (five_element_si_heyting_algebras, hat, k_poset,
                              p6, up_algebra)
from quasivar.deciders import v_membership_free
from quasivar.demorgan import dunn_reduct, reflect, x_construction
from quasivar.kernel import find_generators, trivial_algebra
from quasivar.morphisms import separates, _search_maps
from quasivar.parsing import parse_qe, resolve_qe


@pytest.fixture(scope="module")
def cat():
    return {n: qv.catalog(n) for n in ("two", "s3", "s5", "c4", "d4", "x-trivial")}


@pytest.fixture(scope="module")
def brouwer_gen():
    return up_algebra(hat(p6())).algebra


def qe(text, sig):
    return resolve_qe(parse_qe(text), sig)


# ---------------------------------------------------------------------------
# free algebras


def test_boolean_free_rank1_has_four_elements(cat):
    # closure of the projection pair inside 2^2: {x, ~x, bottom, top}
    F = free_algebra([cat["two"]], 1)
    assert F.algebra.size == 4


def test_free_rank0_over_c4_is_c4(cat):
    F = free_algebra([cat["c4"]], 0)
    assert qv.are_isomorphic(F.algebra, cat["c4"]) is not None


def test_free_rank0_over_two_element_brouwerian_chain():
    chain2 = up_algebra(k_poset(1).subposet([2, 3])).algebra  # a 2-chain
    assert chain2.size == 2
    F = free_algebra([chain2], 0)
    assert F.algebra.size == 1  # the constant e alone is closed


def test_free_rank0_needs_constant():
    sig = qv.Signature((("f", 1),))
    A = qv.FiniteAlgebra(sig, 2, {"f": [1, 0]})
    with pytest.raises(ValueError):
        free_algebra([A], 0)


def test_free_algebra_separates_and_is_generated(cat):
    for gens, rank in [([cat["two"]], 2), ([cat["c4"]], 1),
                       ([cat["two"], cat["s3"]], 1)]:
        F = free_algebra(gens, rank)
        ok, _ = separates(F.algebra, gens)
        assert ok
        from quasivar.kernel import close_subset
        assert close_subset(F.algebra, F.generators).all()


def test_universal_property_exhaustive(cat):
    # exactly one homomorphism F(n) -> G per assignment of the generators
    for gens, rank in [([cat["two"]], 2), ([cat["s3"]], 1)]:
        F = free_algebra(gens, rank)
        for G in gens:
            for image in itertools.product(range(G.size), repeat=rank):
                fixed = {g: v for g, v in zip(F.generators, image)}
                found = _search_maps(F.algebra, G, fixed=fixed)
                assert len(found) == 1


def test_free_term_provenance(cat):
    F = free_algebra([cat["two"]], 1)
    terms = [str(F.term_for(i)) for i in range(F.algebra.size)]
    assert "x0" in terms
    # reconstructed terms evaluate back to their element
    from quasivar.kernel import eval_term
    for i in range(F.algebra.size):
        t = F.term_for(i)
        env = {f"x{j}": g for j, g in enumerate(F.generators)}
        assert eval_term(t, F.algebra, env) == i


# ---------------------------------------------------------------------------
# validity


def test_reflexive_equation_everywhere(cat):
    for gens in ([cat["two"]], [cat["c4"], cat["d4"]]):
        q = qe("x = x", gens[0].sig)
        assert valid(q, gens).is_yes


def test_e_below_f_in_c4(cat):
    q = qe("e <= ~e", cat["c4"].sig)
    assert valid(q, [cat["c4"]]).is_yes
    assert not valid(q, [cat["two"]]).is_yes


def test_mints_rule_fails_in_up_p6_but_not_up_hat_p6(brouwer_gen):
    # Up(P6) is the classic frame falsifying the rule; the hat points give
    # depth-2 pairs common lower bounds and the extended algebra satisfies
    # it (verified against an independent brute-force scan).
    UP6 = up_algebra(p6()).algebra
    mints = qe("x -> y <= x v z => ((x->y)->x) v ((x->y)->z) = e", UP6.sig)
    v = valid(mints, [UP6])
    assert v.answer is Answer.NO
    assert "assignment" in v.witness
    assert valid(mints, [brouwer_gen]).is_yes


def test_validity_preserved_in_products_and_subalgebras(cat):
    # quasi-equations valid in the generators hold in products of two
    # generators and their subalgebras
    gens = [cat["c4"]]
    q = qe("e <= ~e", cat["c4"].sig)
    assert valid(q, gens).is_yes
    P = direct_product([cat["c4"], cat["c4"]])
    assert valid(q, [P]).is_yes
    for S in qv.enumerate_subalgebras(P, up_to_iso=True):
        assert valid(q, [S]).is_yes


# ---------------------------------------------------------------------------
# unifiability and passivity


def test_brouwerian_systems_always_unifiable(brouwer_gen):
    sig = brouwer_gen.sig
    eqs = [tuple(qe("x = y", sig).conclusion),
           tuple(qe("x -> y = y -> x", sig).conclusion)]
    v = unifiable(eqs, [brouwer_gen])
    assert v.is_yes


def test_x_equals_not_x_not_unifiable_over_two(cat):
    sig = cat["two"].sig
    eqs = [qe("x = ~x", sig).conclusion]
    v = unifiable(eqs, [cat["two"]])
    assert v.answer is Answer.NO
    assert v.witness["free_algebra_size"] == 4


def test_constants_not_unifiable_when_distinct(cat):
    sig = cat["c4"].sig
    eqs = [qe("e = ~e", sig).conclusion]
    assert unifiable(eqs, [cat["c4"]]).answer is Answer.NO


def test_passivity(cat, brouwer_gen):
    sig = cat["two"].sig
    q = qe("x = ~x => x = e", sig)
    assert passive(q, [cat["two"]])
    q2 = qe("x = y => x = e", brouwer_gen.sig)
    assert not passive(q2, [brouwer_gen])
    q3 = qe("x = e", sig)
    assert not passive(q3, [cat["two"]])  # equations are active


# ---------------------------------------------------------------------------
# Kollár property


def test_kollar(cat):
    assert kollar_check([A for A in five_element_si_heyting_algebras()])
    assert not kollar_check([cat["s3"]])
    assert kollar_check([cat["two"]])


# ---------------------------------------------------------------------------
# JEP / PSC / minimality / SC (spot checks; the acceptance suite is the
# full strength run)


def test_jep_witnesses(cat):
    v = jep_check([cat["two"], cat["s3"]])
    assert v.answer is Answer.NO
    assert {v.witness["left"], v.witness["right"]} == {"2", "S3"}

    assert jep_check([cat["c4"]]).is_yes
    assert jep_check([trivial_algebra(cat["two"].sig)]).is_yes


def test_psc_stage_reasons(cat):
    assert "trivial" in psc_check([trivial_algebra(cat["two"].sig)]).reason
    assert "passive" in psc_check([cat["s3"]]).reason
    assert psc_check([cat["two"], cat["s3"]]).reason.startswith("stage 3")
    assert psc_check([cat["c4"], cat["d4"]]).reason.startswith("stage 4")
    assert psc_check([cat["c4"]]).reason.startswith("stage 5")


def test_psc_brouwerian_vacuous(brouwer_gen):
    v = psc_check([brouwer_gen])
    assert v.is_yes and "passive" in v.reason
    v2 = psc_check([up_algebra(p6()).algebra])
    assert v2.is_yes and "passive" in v2.reason


def test_minimality(cat):
    assert minimal_quasivariety_check([cat["two"]]).is_yes
    assert not minimal_quasivariety_check([cat["s5"]]).is_yes
    assert not minimal_quasivariety_check(
        [trivial_algebra(cat["two"].sig)]).is_yes


def test_sc_three_outcomes(cat):
    assert sc_check([cat["s3"]]).answer is Answer.CERTIFIED
    v = sc_check([cat["two"]])
    assert v.answer is Answer.CERTIFIED and v.bound == 1
    unknown = sc_check([cat["two"]], assume_cd=False)
    assert unknown.answer is Answer.UNKNOWN


def test_sc_refutation_requires_cd_flag(brouwer_gen):
    UhK3 = up_algebra(hat(k_poset(3))).algebra
    g = qv.Guards(subalgebra_enum=40)
    with pytest.raises(ValueError):
        sc_check([brouwer_gen, UhK3], assume_cd=False, guards=g)


# ---------------------------------------------------------------------------
# admissibility


def test_admissible_reflexivity(cat):
    q = qe("x = x", cat["two"].sig)
    v = admissible_upto(q, [cat["two"]], max_rank=2)
    assert v.answer is Answer.CERTIFIED and v.bound == 2


def test_mints_admissible_at_low_rank(brouwer_gen):
    # invalid in the generator Up(P6), yet all its low-rank substitution
    # instances hold: the per-rank report shows the distinction
    UP6 = up_algebra(p6()).algebra
    mints = qe("x -> y <= x v z => ((x->y)->x) v ((x->y)->z) = e", UP6.sig)
    assert not valid(mints, [UP6]).is_yes
    v = admissible_upto(mints, [UP6], max_rank=1)
    assert v.answer is Answer.CERTIFIED
    assert all(entry["holds"] for entry in v.witness["per_rank"])
    v2 = admissible_upto(mints, [brouwer_gen], max_rank=1)
    assert v2.answer is Answer.CERTIFIED


def test_passive_quasi_equation_admissible_vacuously(cat):
    q = qe("x = ~x => e = ~e", cat["two"].sig)
    v = admissible_upto(q, [cat["two"]], max_rank=2)
    assert v.answer is Answer.CERTIFIED


def test_non_admissible_has_replayable_witness(cat):
    q = qe("x <= ~x", cat["two"].sig)  # fails under x -> top
    v = admissible_upto(q, [cat["two"]], max_rank=1)
    assert v.answer is Answer.NO
    assert "assignment" in v.witness


# ---------------------------------------------------------------------------
# membership predicates


def test_q_membership(cat):
    assert q_membership(cat["s3"], [cat["s3"]])
    assert not q_membership(cat["s3"], [cat["two"]])


def test_v_membership_sugihara_chain(cat):
    assert v_membership(cat["s3"], [cat["s5"]])
    assert not v_membership(cat["s5"], [cat["s3"]])


def test_v_membership_agrees_with_free_route(cat):
    cases = [(cat["two"], [cat["c4"]]), (cat["s3"], [cat["s5"]]),
             (cat["two"], [cat["two"]]),
             (direct_product([cat["two"], cat["two"]]), [cat["two"]])]
    for A, gens in cases:
        assert v_membership(A, gens) == v_membership_free(A, gens)


def test_ret_membership(cat):
    R = reflect(dunn_reduct(cat["s3"]))
    assert ret_membership(R, [R], cat["c4"])
    assert ret_membership(trivial_algebra(cat["two"].sig),
                          [cat["two"], cat["c4"]], cat["c4"])
    assert not ret_membership(cat["two"], [cat["two"], cat["c4"]], cat["c4"])
    with pytest.raises(ValueError):
        ret_membership(cat["s3"], [cat["two"]], cat["two"])


def test_excludes(cat):
    assert not excludes(cat["c4"], cat["c4"])
    assert excludes(cat["two"], cat["c4"])
    UK4 = up_algebra(k_poset(4)).algebra
    UhK3 = up_algebra(hat(k_poset(3))).algebra
    assert excludes(UK4, UhK3)
    with pytest.raises(ValueError):
        excludes(direct_product([cat["two"], cat["two"]]), cat["two"])


def test_hierarchy_psc_implies_jep(cat):
    for gens in ([cat["two"]], [cat["s3"]], [cat["c4"]], [cat["s3"], cat["s5"]]):
        if psc_check(gens).is_yes:
            assert jep_check(gens).is_yes
