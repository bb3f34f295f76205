import itertools

import numpy as np
import pytest

import quasivar as qv
from quasivar import (FiniteAlgebra, Signature, Term, are_isomorphic,
                      canonical_key, direct_product, enumerate_subalgebras,
                      eval_term, quotient, subalgebra_generated, trivial_algebra)
from quasivar.demorgan import DMM_SIG
from quasivar.errors import GuardExceeded, SignatureMismatch
from quasivar.kernel import close_subset, find_generators, subuniverses
from quasivar.morphisms import Homomorphism


@pytest.fixture(scope="module")
def cat():
    return {n: qv.catalog(n) for n in ("two", "s3", "s5", "c4", "d4")}


def idx(A, name):
    return A.names.index(name)


# ---------------------------------------------------------------------------
# signatures and terms


def test_signature_validation():
    with pytest.raises(ValueError):
        Signature((("f", 2), ("f", 1)))
    with pytest.raises(ValueError):
        Signature((("f", -1),))
    sig = Signature((("f", 2), ("c", 0)))
    assert sig.arity("f") == 2 and sig.has_constant
    assert sig.constants() == ("c",)


def test_eval_sugihara_fusion(cat):
    # fuse(1, -1) = -1: equal absolute values take the meet
    s3 = cat["s3"]
    t = Term.apply("fuse", Term.var("x"), Term.var("y"))
    got = eval_term(t, s3, {"x": idx(s3, "1"), "y": idx(s3, "-1")})
    assert got == idx(s3, "-1")


def test_eval_constant(cat):
    assert eval_term(Term.apply("e"), cat["s3"], {}) == idx(cat["s3"], "0")


def test_eval_c4_f_squared_is_top(cat):
    c4 = cat["c4"]
    f = idx(c4, "f")
    t = Term.apply("fuse", Term.var("x"), Term.var("x"))
    assert eval_term(t, c4, {"x": f}) == idx(c4, "f2") == c4.size - 1


def test_eval_errors(cat):
    with pytest.raises(ValueError):
        eval_term(Term.var("x"), cat["two"], {})
    with pytest.raises(KeyError):
        eval_term(Term.apply("nonsense", Term.var("x")), cat["two"], {"x": 0})
    with pytest.raises(ValueError):
        eval_term(Term.apply("fuse", Term.var("x")), cat["two"], {"x": 0})


# ---------------------------------------------------------------------------
# products


def test_empty_product_is_trivial():
    P = direct_product([], sig=DMM_SIG)
    assert P.size == 1


def test_product_of_two_twos(cat):
    P = direct_product([cat["two"], cat["two"]])
    assert P.size == 4


def test_product_two_s3_is_demorgan(cat):
    P = direct_product([cat["two"], cat["s3"]])
    assert P.size == 6
    ok, fail = qv.is_demorgan_monoid(P)
    assert ok, fail


def test_product_mixed_signature_rejected(cat):
    B = trivial_algebra(Signature((("op", 1),)))
    with pytest.raises(SignatureMismatch):
        direct_product([cat["two"], B])


def test_product_projections_are_homomorphisms(cat):
    from quasivar.kernel import product_projection
    P = direct_product([cat["two"], cat["s3"]])
    for i, factor in enumerate((cat["two"], cat["s3"])):
        h = Homomorphism(P, factor, product_projection(P, i))
        assert h.verify() and h.is_surjective


def test_diagonal_embeds_into_square(cat):
    A = cat["s3"]
    P = direct_product([A, A])
    diag = np.arange(A.size) * A.size + np.arange(A.size)
    h = Homomorphism(A, P, diag)
    assert h.verify() and h.is_injective


def test_product_guard():
    big = qv.catalog("s7")
    with pytest.raises(GuardExceeded):
        direct_product([big] * 5)  # 7**5 > 4096


# ---------------------------------------------------------------------------
# subalgebras


def test_zero_generated_of_s3_is_trivial(cat):
    # closure of the constant e = 0 under neg, fuse, meet, join stays {0}
    sub, incl = subalgebra_generated(cat["s3"], [])
    assert sub.size == 1 and list(incl) == [idx(cat["s3"], "0")]


def test_zero_generated_of_c4_is_everything(cat):
    sub, incl = subalgebra_generated(cat["c4"], [])
    assert sub.size == 4


def test_full_seed_returns_whole_algebra(cat):
    sub, incl = subalgebra_generated(cat["d4"], range(4))
    assert sub == cat["d4"].relabel(sub.label) and list(incl) == [0, 1, 2, 3]


def test_empty_seed_needs_constant():
    sig = Signature((("f", 1),))
    A = FiniteAlgebra(sig, 2, {"f": [1, 0]})
    with pytest.raises(ValueError):
        subalgebra_generated(A, [])


def test_closure_is_closed(cat):
    for A in cat.values():
        for r in range(A.size):
            mask = close_subset(A, [r])
            members = list(np.flatnonzero(mask))
            for name, arity in A.sig.ops:
                for args in itertools.product(members, repeat=arity):
                    assert mask[A.apply(name, *args)]


def test_enumerate_subalgebras_c4(cat):
    # every element regenerates the chain together with the constants
    subs = enumerate_subalgebras(cat["c4"])
    assert [s.size for s in subs] == [4]


def test_enumerate_subalgebras_s5_contains_s3(cat):
    subs = enumerate_subalgebras(cat["s5"])
    assert any(s.size == 3 and are_isomorphic(s, cat["s3"]) is not None
               for s in subs)


def test_enumerate_subalgebras_trivial():
    T = trivial_algebra(DMM_SIG)
    assert [s.size for s in enumerate_subalgebras(T)] == [1]


def test_subuniverse_guard(cat):
    big = direct_product([cat["s5"], cat["s5"]])  # 25 > 24
    with pytest.raises(GuardExceeded):
        subuniverses(big)


# ---------------------------------------------------------------------------
# quotients


def test_quotient_by_identity(cat):
    A = cat["d4"]
    Q, proj = quotient(A, np.arange(A.size))
    assert are_isomorphic(Q, A) is not None


def test_quotient_by_total(cat):
    Q, proj = quotient(cat["d4"], np.zeros(4, dtype=int))
    assert Q.size == 1


def test_quotient_of_square_by_projection_kernel(cat):
    two = cat["two"]
    P = direct_product([two, two])
    labels = np.arange(P.size) // two.size  # kernel of the first projection
    Q, proj = quotient(P, labels)
    assert are_isomorphic(Q, two) is not None
    h = Homomorphism(P, Q, proj)
    assert h.verify() and h.is_surjective


def test_quotient_incompatible_partition(cat):
    # gluing e with f in C4 but not the rest breaks compatibility
    with pytest.raises(ValueError):
        quotient(cat["c4"], np.asarray([0, 1, 1, 2]))


def test_quotient_round_trip_all_congruences(cat):
    from quasivar.congruence import all_congruences
    for A in (cat["two"], cat["c4"], direct_product([cat["two"], cat["two"]])):
        for theta in all_congruences(A):
            Q, proj = quotient(A, theta.labels)
            h = Homomorphism(A, Q, proj)
            assert h.verify() and h.is_surjective
            assert (h.kernel_labels() == theta.labels).all()


# ---------------------------------------------------------------------------
# isomorphism


def test_isomorphic_reflexive(cat):
    for A in cat.values():
        w = are_isomorphic(A, A)
        assert w is not None
        assert Homomorphism(A, A, w).verify()


def test_c4_not_isomorphic_to_d4(cat):
    # C4 is a chain, D4 is not
    assert are_isomorphic(cat["c4"], cat["d4"]) is None


def test_isomorphic_after_permutation(cat):
    A = direct_product([cat["two"], cat["two"]])
    perm = np.asarray([2, 0, 3, 1], dtype=np.int32)
    tables = {}
    for name, arity in A.sig.ops:
        tab = A.tables[name]
        if arity == 0:
            tables[name] = np.asarray(perm[int(tab)])
        elif arity == 1:
            out = np.empty(4, dtype=np.int32)
            out[perm] = perm[tab]
            tables[name] = out
        else:
            out = np.empty((4, 4), dtype=np.int32)
            out[perm[:, None], perm[None, :]] = perm[tab]
            tables[name] = out
    B = FiniteAlgebra(A.sig, 4, tables)
    w = are_isomorphic(A, B)
    assert w is not None and Homomorphism(A, B, w).verify()
    assert canonical_key(A) == canonical_key(B)


def test_isomorphism_is_equivalence_on_random_triples(cat):
    rng = np.random.default_rng(7)
    from quasivar.demorgan import random_demorgan_monoids
    pool = random_demorgan_monoids(9, max_size=5, seed=11)
    for i in range(0, 9, 3):
        A, B, C = pool[i:i + 3]
        ab = are_isomorphic(A, B)
        bc = are_isomorphic(B, C)
        ac = are_isomorphic(A, C)
        if ab is not None and bc is not None:
            assert ac is not None
        if ab is not None:
            assert are_isomorphic(B, A) is not None


def test_find_generators(cat):
    assert find_generators(cat["c4"]) == ()          # 0-generated
    gens = find_generators(cat["s5"])
    sub, _ = subalgebra_generated(cat["s5"], gens)
    assert sub.size == 5
