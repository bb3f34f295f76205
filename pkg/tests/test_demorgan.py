import numpy as np
import pytest

import quasivar as qv
from quasivar import (PscClass, Term, amendment, are_isomorphic, catalog,
                      classify_psc_variety, direct_product, dmm_facts_suite,
                      dunn_reduct, in_m, in_n, is_brouwerian,
                      is_demorgan_monoid, is_dunn_monoid,
                      jep_classification_conditions, reflect,
                      reflect_congruence, si_status, x_construction)
from quasivar.brouwer import p6, up_algebra
from quasivar.congruence import SiStatus, all_congruences
from quasivar.demorgan import (CATALOG_NAMES, leq_matrix,
                               random_demorgan_monoids, trivial_demorgan,
                               trivial_dunn)
from quasivar.errors import SignatureMismatch
from quasivar.kernel import FiniteAlgebra, enumerate_subalgebras, quotient


def idx(A, name):
    return A.names.index(name)


# ---------------------------------------------------------------------------
# axiom checkers


def test_catalog_all_demorgan():
    for name in CATALOG_NAMES:
        ok, fail = is_demorgan_monoid(catalog(name))
        assert ok, f"{name}: {fail}"


def test_broken_fusion_fails_at_associativity():
    c4 = catalog("c4")
    fuse = c4.tables["fuse"].copy()
    # keep e neutral and commutativity, break associativity:
    # f*f = bottom while f*top = top gives (f*f)*top = bottom != top = f*(f*top)
    fuse[2, 2] = 0
    broken = FiniteAlgebra(c4.sig, 4, {**{n: c4.tables[n] for n, _ in c4.sig.ops},
                                       "fuse": fuse}, names=c4.names)
    ok, fail = is_demorgan_monoid(broken)
    assert not ok and "associative" in fail


def test_wrong_signature_rejected():
    with pytest.raises(SignatureMismatch):
        is_demorgan_monoid(up_algebra(p6()).algebra)


def test_dunn_reduct_of_c4_is_dunn_but_not_brouwerian():
    D = dunn_reduct(catalog("c4"))
    ok, _ = is_dunn_monoid(D)
    assert ok
    ok, fail = is_brouwerian(D)
    assert not ok and "top" in fail


def test_up_algebra_is_brouwerian():
    ok, _ = is_brouwerian(up_algebra(p6()).algebra)
    assert ok


# ---------------------------------------------------------------------------
# catalog shapes


def test_sugihara_sizes():
    assert catalog("s1").size == 1
    for n in (1, 2, 3):
        assert catalog(f"s{2 * n + 1}").size == 2 * n + 1


def test_d4_shape():
    d4 = catalog("d4")
    leq = leq_matrix(d4)
    e, f = idx(d4, "e"), idx(d4, "f")
    bot, top = idx(d4, "-f2"), idx(d4, "f2")
    assert not leq[e, f] and not leq[f, e]
    assert leq[bot, e] and leq[bot, f] and leq[e, top] and leq[f, top]


def test_two_shape():
    two = catalog("two")
    leq = leq_matrix(two)
    assert leq[idx(two, "f"), idx(two, "e")]
    assert (two.tables["fuse"] == two.tables["meet"]).all()


def test_unknown_catalog_name():
    with pytest.raises(ValueError):
        catalog("s4")
    with pytest.raises(ValueError):
        catalog("nonsense")


# ---------------------------------------------------------------------------
# facts


def test_c4_fact_f_cubed():
    report = dmm_facts_suite(catalog("c4"))
    assert report["f_cubed_equals_f_squared"]


def test_s3_is_odd_sugihara_fact():
    s3 = catalog("s3")
    e = s3.constant("e")
    assert int(s3.tables["neg"][e]) == e
    assert dmm_facts_suite(s3)["sugihara_iff_f_below_e"]


def test_facts_on_random_members():
    for A in random_demorgan_monoids(25, max_size=6, seed=5):
        ok, fail = is_demorgan_monoid(A)
        assert ok, fail
        report = dmm_facts_suite(A)
        assert all(report.values()), [k for k, v in report.items() if not v]


def test_si_bridge_on_catalog():
    # FSI iff e join-irreducible; simple iff exactly one strict lower bound
    for name in CATALOG_NAMES:
        A = catalog(name)
        r = dmm_facts_suite(A)
        assert r["fsi_iff_e_join_irreducible"]
        assert r["simple_iff_one_strict_lower_bound_of_e"]


def test_sugihara_si_for_all_ranks():
    for n in (1, 2, 3):
        assert si_status(catalog(f"s{2 * n + 1}")) in (SiStatus.SIMPLE, SiStatus.SI)


# ---------------------------------------------------------------------------
# reflection


def test_reflection_of_trivial_is_c4():
    assert are_isomorphic(reflect(trivial_dunn()), catalog("c4")) is not None


def test_reflection_size_and_c4_corner():
    R = reflect(dunn_reduct(catalog("s3")))
    assert R.size == 8
    n = 3
    from quasivar.kernel import subalgebra_on
    e = catalog("s3").constant("e")
    corner = subalgebra_on(R, [e, n + e, 2 * n, 2 * n + 1])
    assert are_isomorphic(corner, catalog("c4")) is not None


def test_reflection_congruences():
    A = dunn_reduct(catalog("s3"))
    R = reflect(A)
    thetas = all_congruences(A)
    reflected = {reflect_congruence(A, t).key() for t in thetas}
    everything = {c.key() for c in all_congruences(R)}
    total = np.zeros(R.size, dtype=np.int32).tobytes()
    assert everything == reflected | {total}
    # R(A)/R(total) is the reflection of the trivial algebra, i.e. C4
    t_total = [t for t in thetas if t.is_total][0]
    Q, _ = quotient(R, reflect_congruence(A, t_total).labels)
    assert are_isomorphic(Q, catalog("c4")) is not None


def test_reflection_preserves_si_status_except_trivial():
    cases = [(trivial_dunn(), SiStatus.NONE),
             (dunn_reduct(catalog("two")), SiStatus.SIMPLE),
             (dunn_reduct(catalog("s3")), SiStatus.SIMPLE),
             (dunn_reduct(direct_product([catalog("two"), catalog("s3")])),
              SiStatus.NONE)]
    si_like = (SiStatus.SIMPLE, SiStatus.SI)
    for A, base in cases:
        got = si_status(reflect(A))
        if base is SiStatus.NONE and A.is_trivial:
            assert got in si_like  # the reflection of the trivial algebra is SI
        else:
            assert (got in si_like) == (base in si_like)


# ---------------------------------------------------------------------------
# X construction


def test_x_construction_sizes():
    P = direct_product([catalog("two"), catalog("s3")])
    assert x_construction(P).size == 2 * 6 + 3


def test_x_of_trivial_is_simple_with_c4_core():
    X = catalog("x-trivial")
    assert X.size == 5
    assert si_status(X) is SiStatus.SIMPLE
    Z = qv.zero_generated_subalgebra(X)
    assert are_isomorphic(Z, catalog("c4")) is not None


def test_x_requires_demorgan():
    with pytest.raises(qv.QuasivarError):
        x_construction(dunn_reduct(catalog("two")))  # wrong signature
    c4 = catalog("c4")
    fuse = c4.tables["fuse"].copy()
    fuse[2, 2] = 0
    broken = FiniteAlgebra(c4.sig, 4, {**{n: c4.tables[n] for n, _ in c4.sig.ops},
                                       "fuse": fuse}, names=c4.names)
    with pytest.raises(ValueError):
        x_construction(broken)  # right signature, broken axioms


# ---------------------------------------------------------------------------
# the varieties M and N


def test_m_membership():
    assert in_m(reflect(dunn_reduct(catalog("s3"))))
    assert in_m(catalog("c4"))
    assert not in_m(catalog("s3"))   # idempotent, so x <= f*f fails
    assert not in_m(catalog("x-trivial"))


def test_n_membership():
    # reflections retract onto their C4 corner; the trivial algebra is in
    # by definition; 2 admits no map from C4 at all.  X(E) is *not* in
    # Ret(., C4): it is simple and C4 has no trivial subalgebra, so no
    # homomorphism X(E) -> C4 exists, let alone a retraction.
    assert in_n(reflect(dunn_reduct(catalog("s3"))))
    assert in_n(trivial_demorgan())
    assert not in_n(catalog("two"))
    assert qv.hom_exists(catalog("x-trivial"), catalog("c4")) is None
    assert not in_n(catalog("x-trivial"))


# ---------------------------------------------------------------------------
# classifications


def test_classify_psc(subtests=None):
    X = x_construction(direct_product([catalog("two"), catalog("s3")]))
    cases = [([catalog("two")], PscClass.BOOLEAN),
             ([catalog("d4")], PscClass.D4),
             ([catalog("s3")], PscClass.ODD_SUGIHARA),
             ([catalog("s3"), catalog("s5")], PscClass.ODD_SUGIHARA),
             ([catalog("c4")], PscClass.SUB_M),
             ([catalog("two"), catalog("s3")], PscClass.NOT_PSC),
             ([X], PscClass.NOT_PSC),
             ([trivial_demorgan()], PscClass.ODD_SUGIHARA)]
    for gens, want in cases:
        assert classify_psc_variety(gens) is want


def test_jep_conditions_x_2xs3():
    X = x_construction(direct_product([catalog("two"), catalog("s3")]))
    report = jep_classification_conditions([X])
    assert not report["psc"]["holds"]
    assert not report["simple_generator_extending_d4"]["holds"]
    assert report["q_generator_with_simple_extension_of_c4"]["holds"]
    assert qv.jep_check([X]).is_yes


def test_jep_conditions_boolean():
    report = jep_classification_conditions([catalog("two")])
    assert report["psc"]["holds"] and report["psc"]["class"] == "boolean"


def test_jep_conditions_c4_d4_none():
    report = jep_classification_conditions([catalog("c4"), catalog("d4")])
    assert not report["psc"]["holds"]
    assert not report["simple_generator_extending_d4"]["holds"]
    assert not report["q_generator_with_simple_extension_of_c4"]["holds"]
    assert not qv.jep_check([catalog("c4"), catalog("d4")]).is_yes


# ---------------------------------------------------------------------------
# the diamond amendment


def test_amendment_base_cases():
    assert str(amendment(Term.apply("e"))) == "e"
    assert str(amendment(Term.var("x"))) == "meet(x, e)"


def test_amendment_implication():
    t = Term.apply("imp", Term.var("x"), Term.var("y"))
    got = amendment(t)
    want = Term.apply("meet",
                      Term.apply("imp",
                                 Term.apply("meet", Term.var("x"), Term.apply("e")),
                                 Term.apply("meet", Term.var("y"), Term.apply("e"))),
                      Term.apply("e"))
    assert got == want


def test_amendment_rejects_involution():
    with pytest.raises(ValueError):
        amendment(Term.apply("neg", Term.var("x")))


def test_amended_mints_rule_evaluates_in_dunn_monoids():
    # the amendment of a positive quasi-equation is a Dunn-signature
    # quasi-equation; it can be evaluated in any Dunn monoid
    from quasivar.demorgan import amendment_qe
    from quasivar.parsing import parse_qe
    mints = parse_qe("x -> y <= x v z => ((x->y)->x) v ((x->y)->z) = e")
    amended = amendment_qe(mints)
    D = dunn_reduct(catalog("c4"))
    v = qv.valid(amended, [D])
    assert v.answer in (qv.Answer.YES, qv.Answer.NO)


# ---------------------------------------------------------------------------
# the subvariety chain of odd Sugihara monoids


def test_sugihara_chain_memberships():
    assert not qv.v_membership(catalog("s5"), [catalog("s3")])
    assert qv.v_membership(catalog("s3"), [catalog("s5")])


def test_classify_agrees_with_psc_check():
    X = x_construction(direct_product([catalog("two"), catalog("s3")]))
    gen_sets = [[catalog(n)] for n in CATALOG_NAMES] + \
        [[catalog("two"), catalog("s3")], [X]]
    for gens in gen_sets:
        assert (classify_psc_variety(gens) is not PscClass.NOT_PSC) == \
            qv.psc_check(gens).is_yes
