"""The acceptance suite: every checkable claim the library is built
around, run end to end at full strength.  `quasivar verify-paper` and
tests/test_acceptance.py both execute this registry; each criterion
prints one pass/fail line.

All checks are exact (no numeric tolerances).  Randomized items take an
explicit seed and print it.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .brouwer import (hat, k_poset, p6, poset_isomorphic, prime_filter_poset,
                      random_brouwerian_algebra, random_dominated_poset,
                      surjective_pmorphism_exists, sh_membership_dual,
                      up_algebra, up_set_inclusion_dual, up_sets,
                      five_element_si_heyting_algebras)
from .config import DEFAULT_GUARDS, Guards
from .congruence import SiStatus, all_congruences, si_status
from .deciders import (hs_closure_classes, jep_check,
                       minimal_quasivariety_check, psc_check, q_membership,
                       sc_check, si_members_of_variety, v_membership)
from .demorgan import (CATALOG_NAMES, PscClass, catalog, classify_psc_variety,
                       dmm_facts_suite, dunn_reduct, in_m, is_demorgan_monoid,
                       random_demorgan_monoids, reflect, reflect_congruence,
                       trivial_dunn, x_construction)
from .kernel import (are_isomorphic, canonical_key, dedupe_up_to_iso,
                     direct_product, enumerate_subalgebras, quotient,
                     subuniverses)
from .morphisms import embedding_exists, enumerate_homs
from .brouwer import dual_of_hom

SEED = 20260809


def _x_2xs3():
    return x_construction(direct_product([catalog("two"), catalog("s3")]))


def criterion_catalog_validity():
    """2, S3, S5, S7, C4, D4, X(E) are De Morgan monoids; 2, C4, D4, X(E)
    are simple."""
    problems = []
    for name in CATALOG_NAMES:
        A = catalog(name)
        ok, fail = is_demorgan_monoid(A)
        if not ok:
            problems.append(f"{name}: {fail}")
    for name in ("two", "c4", "d4", "x-trivial"):
        if si_status(catalog(name)) is not SiStatus.SIMPLE:
            problems.append(f"{name} not simple")
    return not problems, "; ".join(problems) or "7 catalog algebras valid, 4 simple"


def criterion_minimality():
    """{2}, {S3}, {C4}, {D4} each generate a minimal quasivariety."""
    problems = []
    for name in ("two", "s3", "c4", "d4"):
        v = minimal_quasivariety_check([catalog(name)])
        if not v.is_yes:
            problems.append(f"{name}: {v.summary()}")
    return not problems, "; ".join(problems) or "4 minimal quasivarieties"


def criterion_psc_classification():
    """The PSC classification on six generator sets, agreeing with the
    staged PSC decision procedure."""
    cases = [([catalog("two")], PscClass.BOOLEAN),
             ([catalog("d4")], PscClass.D4),
             ([catalog("s3")], PscClass.ODD_SUGIHARA),
             ([catalog("c4")], PscClass.SUB_M),
             ([catalog("two"), catalog("s3")], PscClass.NOT_PSC),
             ([_x_2xs3()], PscClass.NOT_PSC)]
    problems = []
    for gens, want in cases:
        got = classify_psc_variety(gens)
        label = "+".join(g.describe() for g in gens)
        if got is not want:
            problems.append(f"{label}: {got.value} != {want.value}")
        agree = (got is not PscClass.NOT_PSC) == psc_check(gens).is_yes
        if not agree:
            problems.append(f"{label}: classification disagrees with psc_check")
    return not problems, "; ".join(problems) or "6 classifications, all agree with psc_check"


def criterion_jep():
    """JEP holds for {X(2xS3)} and the two five-element subdirectly
    irreducible Heyting algebras; fails for {2, S3} and {C4, D4}."""
    HA, HB = five_element_si_heyting_algebras()
    cases = [([_x_2xs3()], True), ([HA, HB], True),
             ([catalog("two"), catalog("s3")], False),
             ([catalog("c4"), catalog("d4")], False)]
    problems = []
    for gens, want in cases:
        got = jep_check(gens).is_yes
        if got != want:
            label = "+".join(g.describe() for g in gens)
            problems.append(f"{label}: jep={got}, want {want}")
    return not problems, "; ".join(problems) or "4 JEP verdicts"


def criterion_no_single_fsi_generator():
    """In V(five-element Heyting pair) and V(X(2xS3)): no finitely
    subdirectly irreducible member contains all the others in its
    HS-closure; in the second case all nontrivial ones embed into the
    generator."""
    problems = []
    HA, HB = five_element_si_heyting_algebras()
    X = _x_2xs3()
    for gens, embed_into in (([HA, HB], None), ([X], X)):
        fsis = si_members_of_variety(gens, include_fsi=True)
        fsis = [W for W in fsis if not W.is_trivial]
        keys = {canonical_key(W): W for W in fsis}
        for C in fsis:
            hs_keys = {canonical_key(Q) for Q in hs_closure_classes(C)}
            if all(k in hs_keys for k in keys):
                problems.append(f"{C.describe()} HS-contains every FSI member")
        if embed_into is not None:
            for W in fsis:
                if embedding_exists(W, embed_into) is None:
                    problems.append(f"{W.describe()} does not embed into the generator")
    return not problems, "; ".join(problems) or \
        "no FSI member dominates; X(2xS3) absorbs all FSI members"


def criterion_reflection():
    """For A in {trivial, 2+, S3+, (2xS3)+}: R(A) lies in M, subalgebras
    and congruences of R(A) are exactly the reflected ones, and the
    reflected quotients match; R(trivial) is C4."""
    problems = []
    duns = [trivial_dunn(),
            dunn_reduct(catalog("two")),
            dunn_reduct(catalog("s3")),
            dunn_reduct(direct_product([catalog("two"), catalog("s3")]))]
    for A in duns:
        R = reflect(A)
        if not in_m(R):
            problems.append(f"R({A.describe()}) not in M")
        n = A.size
        want = sorted(tuple(sorted(list(u) + [n + i for i in u] +
                                   [2 * n, 2 * n + 1]))
                      for u in subuniverses(A))
        got = sorted(subuniverses(R))
        if want != got:
            problems.append(f"subalgebra correspondence fails for R({A.describe()})")
        thetas = all_congruences(A)
        reflected = {reflect_congruence(A, t).key() for t in thetas}
        all_of_R = {c.key() for c in all_congruences(R)}
        total_key = np.zeros(R.size, dtype=np.int32).tobytes()
        if reflected | {total_key} != all_of_R:
            problems.append(f"congruence correspondence fails for R({A.describe()})")
        for t in thetas:
            lhs, _ = quotient(R, reflect_congruence(A, t).labels)
            rq, _ = quotient(A, t.labels)
            rhs = reflect(rq, check=False)
            if are_isomorphic(lhs, rhs) is None:
                problems.append(f"R(A)/R(theta) mismatch for R({A.describe()})")
    if are_isomorphic(reflect(trivial_dunn()), catalog("c4")) is None:
        problems.append("R(trivial) is not C4")
    return not problems, "; ".join(problems) or \
        "reflection lemma instances hold on 4 Dunn monoids"


def criterion_duality_roundtrip():
    """200 seeded random dominated posets and Brouwerian algebras round
    trip through the duality; 200 homomorphism instances satisfy
    `surjective iff dual injective` (and the injective/surjective dual)."""
    rng = np.random.default_rng(SEED)
    problems = []
    for i in range(200):
        X = random_dominated_poset(rng, max_points=7)
        back = prime_filter_poset(up_algebra(X).algebra)
        if poset_isomorphic(X, back) is None:
            problems.append(f"poset round trip #{i} fails")
            break
    for i in range(200):
        A = random_brouwerian_algebra(rng, max_size=12, max_points=7)
        back = up_algebra(prime_filter_poset(A)).algebra
        if are_isomorphic(A, back) is None:
            problems.append(f"algebra round trip #{i} fails")
            break
    checked = 0
    while checked < 200:
        X = random_dominated_poset(rng, max_points=5)
        Xstar = up_algebra(X)
        masks = up_sets(X)
        if int(rng.integers(0, 2)):
            U = masks[int(rng.integers(0, len(masks)))]
            h = up_set_inclusion_dual(X, U, Xstar=Xstar)
        else:
            Y = random_dominated_poset(rng, max_points=5)
            homs = enumerate_homs(Xstar.algebra, up_algebra(Y).algebra, limit=8)
            if not homs:
                continue
            h = homs[int(rng.integers(0, len(homs)))]
        dual = dual_of_hom(h)
        if h.is_surjective != dual.is_injective or \
           h.is_injective != dual.is_surjective:
            problems.append(f"dual hom instance #{checked} fails")
            break
        checked += 1
    return not problems, "; ".join(problems) or \
        f"200+200 round trips and 200 dual-hom instances (seed {SEED})"


def criterion_hard_part():
    """For Y, Z, W in {P6, K3, K4} with Y outside {P6, Z}: Y* is not in
    SH(hat(Z)*) (dually: no up-set of hat(Z) maps p-onto Y) and W* is not
    in IS(hat(Z)*) (dually: hat(Z) does not map p-onto W)."""
    posets = {"p6": p6(), "k3": k_poset(3), "k4": k_poset(4)}
    hats = {k: hat(v) for k, v in posets.items()}
    problems = []
    for zname, Z in posets.items():
        for yname, Y in posets.items():
            if yname in ("p6", zname):
                continue
            if sh_membership_dual(Y, hats[zname]):
                problems.append(f"{yname}* in SH(hat({zname})*)")
        for wname, W in posets.items():
            if surjective_pmorphism_exists(hats[zname], W) is not None:
                problems.append(f"hat({zname}) maps p-onto {wname}")
    return not problems, "; ".join(problems) or \
        "4 SH exclusions and 9 IS exclusions hold"


def criterion_structural_incompleteness():
    """sc_check on {Up(hat P6), Up(hat K3)} refutes structural
    completeness, and Up(P6) is a verified witness: subdirectly
    irreducible, inside the variety, outside the quasivariety of the
    product of the generators."""
    g = Guards(subalgebra_enum=40)
    UhP6 = up_algebra(hat(p6())).algebra
    UhK3 = up_algebra(hat(k_poset(3))).algebra
    UP6 = up_algebra(p6()).algebra
    problems = []
    v = sc_check([UhP6, UhK3], guards=g)
    if not v.is_no:
        problems.append(f"sc_check returned {v.summary()}")
    if si_status(UP6) not in (SiStatus.SIMPLE, SiStatus.SI):
        problems.append("Up(P6) is not subdirectly irreducible")
    if embedding_exists(UP6, UhP6) is not None or \
       embedding_exists(UP6, UhK3) is not None:
        problems.append("Up(P6) embeds into a generator")
    if not v_membership(UP6, [UhP6], g):
        problems.append("Up(P6) not in the variety of Up(hat P6)")
    D = direct_product([UhP6, UhK3])
    if q_membership(UP6, [D], g):
        problems.append("Up(P6) wrongly inside the quasivariety of the product")
    return not problems, "; ".join(problems) or \
        "NotSC with Up(P6) verified as witness (least witness has 9 elements)"


def criterion_kuznetsov_separation():
    """V(Up(K3)) and V(Up(K4)) are incomparable."""
    UK3 = up_algebra(k_poset(3)).algebra
    UK4 = up_algebra(k_poset(4)).algebra
    problems = []
    if v_membership(UK3, [UK4]):
        problems.append("Up(K3) in V(Up(K4))")
    if v_membership(UK4, [UK3]):
        problems.append("Up(K4) in V(Up(K3))")
    return not problems, "; ".join(problems) or "both memberships refuted"


def criterion_facts_suite():
    """The nine De Morgan monoid facts hold on the catalog and on 100
    seeded random members of size at most 6."""
    problems = []
    pool = [catalog(n) for n in CATALOG_NAMES]
    pool += random_demorgan_monoids(100, max_size=6, seed=SEED)
    for A in pool:
        report = dmm_facts_suite(A)
        for fact, holds in report.items():
            if not holds:
                problems.append(f"{A.describe()}: {fact}")
    return not problems, "; ".join(problems[:4]) or \
        f"9 facts x {len(pool)} algebras (seed {SEED})"


def criterion_oracle_equivalence():
    """jep_check and psc_check agree with the bounded brute-force oracles
    on every generator set of at most two catalog algebras."""
    import itertools as it
    from .oracles import jep_oracle, psc_oracle
    problems = []
    names = list(CATALOG_NAMES)
    gen_sets = [[n] for n in names] + [list(p) for p in it.combinations(names, 2)]
    for namelist in gen_sets:
        gens = [catalog(n) for n in namelist]
        label = "+".join(namelist)
        jep = jep_check(gens).is_yes
        jep_b, _ = jep_oracle(gens)
        if jep != jep_b:
            problems.append(f"{label}: jep {jep} vs oracle {jep_b}")
        psc = psc_check(gens).is_yes
        psc_b, _ = psc_oracle(gens)
        if psc != psc_b:
            problems.append(f"{label}: psc {psc} vs oracle {psc_b}")
    return not problems, "; ".join(problems) or \
        f"{len(gen_sets)} generator sets agree with both oracles"


def criterion_hierarchy():
    """Definite verdicts respect SC => PSC => JEP on every tested
    generator set."""
    import itertools as it
    problems = []
    gen_sets = [[catalog(n)] for n in CATALOG_NAMES]
    gen_sets += [[catalog(a), catalog(b)]
                 for a, b in it.combinations(CATALOG_NAMES, 2)]
    HA, HB = five_element_si_heyting_algebras()
    gen_sets += [[_x_2xs3()], [HA, HB]]
    for gens in gen_sets:
        label = "+".join(g.describe() for g in gens)
        sc = sc_check(gens, bound=1)
        psc = psc_check(gens)
        jep = jep_check(gens)
        if sc.answer.value == "certified" and not psc.is_yes:
            problems.append(f"{label}: SC but not PSC")
        if psc.is_yes and not jep.is_yes:
            problems.append(f"{label}: PSC but no JEP")
        if psc.is_no and sc.answer.value == "certified":
            problems.append(f"{label}: SC certified though PSC fails")
    return not problems, "; ".join(problems) or \
        f"{len(gen_sets)} generator sets respect SC => PSC => JEP"


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    budget_seconds: float
    run: callable


REGISTRY = (
    Criterion(1, "catalog validity and simplicity", 1, criterion_catalog_validity),
    Criterion(2, "minimal quasivarieties", 30, criterion_minimality),
    Criterion(3, "PSC classification", 120, criterion_psc_classification),
    Criterion(4, "joint embedding property", 300, criterion_jep),
    Criterion(5, "no single FSI generator", 600, criterion_no_single_fsi_generator),
    Criterion(6, "reflection lemma instances", 60, criterion_reflection),
    Criterion(7, "duality round trips", 120, criterion_duality_roundtrip),
    Criterion(8, "hard-part lemma instances", 300, criterion_hard_part),
    Criterion(9, "structural incompleteness witness", 600,
              criterion_structural_incompleteness),
    Criterion(10, "Kuznetsov-style separation", 300, criterion_kuznetsov_separation),
    Criterion(11, "De Morgan facts suite", 120, criterion_facts_suite),
    Criterion(12, "oracle equivalence", 900, criterion_oracle_equivalence),
    Criterion(13, "SC => PSC => JEP hierarchy", 900, criterion_hierarchy),
)


def run_all(selected=None, out=print):
    results = []
    for crit in REGISTRY:
        if selected and crit.number not in selected:
            continue
        t0 = time.time()
        try:
            ok, detail = crit.run()
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"exception: {exc!r}"
        dt = time.time() - t0
        status = "PASS" if ok else "FAIL"
        out(f"[{status}] {crit.number:2d}. {crit.title:36s} "
            f"({dt:7.2f}s / budget {crit.budget_seconds:.0f}s)  {detail}")
        results.append({"criterion": crit.number, "title": crit.title,
                        "pass": ok, "seconds": round(dt, 2),
                        "budget_seconds": crit.budget_seconds,
                        "detail": detail})
    return results
