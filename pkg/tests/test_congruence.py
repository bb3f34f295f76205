import numpy as np
import pytest

import quasivar as qv
from quasivar import (SiStatus, all_congruences, direct_product,
                      principal_congruence, relative_congruences,
                      relatively_simple_image, si_status)
from quasivar.brouwer import five_element_si_heyting_algebras
from quasivar.congruence import identity_congruence, total_congruence
from quasivar.kernel import quotient, trivial_algebra
from quasivar.morphisms import Homomorphism


@pytest.fixture(scope="module")
def cat():
    return {n: qv.catalog(n) for n in ("two", "s3", "s5", "c4", "d4")}


def idx(A, name):
    return A.names.index(name)


def test_principal_reflexive_pair_is_identity(cat):
    A = cat["d4"]
    assert principal_congruence(A, 2, 2).is_identity


def test_principal_collapses_c4(cat):
    # identifying e and f propagates through fusion and negation and
    # collapses the whole chain: consistent with C4 being simple
    c4 = cat["c4"]
    theta = principal_congruence(c4, idx(c4, "e"), idx(c4, "f"))
    assert theta.is_total


def test_principal_projection_kernel(cat):
    two = cat["two"]
    P = direct_product([two, two])
    theta = principal_congruence(P, 0, 1)  # (0,0) ~ (0,1)
    want = np.asarray([0, 0, 1, 1])
    assert (theta.labels == want).all()


def test_all_congruences_two(cat):
    lat = all_congruences(cat["two"])
    assert len(lat) == 2


def test_all_congruences_square(cat):
    P = direct_product([cat["two"], cat["two"]])
    assert len(all_congruences(P)) == 4  # bounds plus two projection kernels


def test_all_congruences_d4_simple(cat):
    lat = all_congruences(cat["d4"])
    assert len(lat) == 2


def test_congruences_are_compatible_everywhere(cat):
    for A in cat.values():
        for theta in all_congruences(A):
            Q, proj = quotient(A, theta.labels)
            h = Homomorphism(A, Q, proj)
            assert h.verify() and h.is_surjective


def test_relative_contains_identity_for_own_generator(cat):
    lat = relative_congruences(cat["s3"], [cat["s3"]])
    assert lat.has_identity


def test_relative_two_in_s3_only_total(cat):
    lat = relative_congruences(cat["two"], [cat["s3"]])
    assert len(lat) == 1 and lat[0].is_total


def test_relative_meet_closed_and_total_present(cat):
    for A, gens in [(cat["s5"], [cat["s5"]]),
                    (cat["c4"], [cat["c4"], cat["d4"]])]:
        lat = relative_congruences(A, gens)
        assert any(c.is_total for c in lat)
        for a in lat:
            for b in lat:
                assert a.meet(b).key() in {c.key() for c in lat}
        from quasivar.morphisms import separates
        assert lat.has_identity == separates(A, gens)[0]


def test_relative_subset_of_absolute(cat):
    for A, gens in [(cat["two"], [cat["s3"]]), (cat["s3"], [cat["s3"]]),
                    (cat["s5"], [cat["s3"]])]:
        rel = {c.key() for c in relative_congruences(A, gens)}
        abs_ = {c.key() for c in all_congruences(A)}
        assert rel <= abs_


def test_heyting_relative_equals_absolute():
    # each algebra generates a variety containing itself, so the relative
    # and absolute lattices agree
    for A in five_element_si_heyting_algebras():
        rel = {c.key() for c in relative_congruences(A, [A])}
        abs_ = {c.key() for c in all_congruences(A)}
        assert rel == abs_


def test_si_statuses(cat):
    assert si_status(cat["c4"]) is SiStatus.SIMPLE
    assert si_status(cat["s3"]) is SiStatus.SIMPLE
    assert si_status(cat["s5"]) is SiStatus.SI
    assert si_status(direct_product([cat["two"], cat["two"]])) is SiStatus.NONE
    assert si_status(trivial_algebra(cat["two"].sig)) is SiStatus.NONE


def test_relatively_simple_image_of_simple(cat):
    Q, theta, proj = relatively_simple_image(cat["s3"], [cat["s3"]])
    assert qv.are_isomorphic(Q, cat["s3"]) is not None
    assert theta.is_identity


def test_relatively_simple_image_of_square(cat):
    two = cat["two"]
    P = direct_product([two, two])
    Q, theta, proj = relatively_simple_image(P, [two])
    assert qv.are_isomorphic(Q, two) is not None


def test_relatively_simple_image_errors(cat):
    with pytest.raises(ValueError):
        relatively_simple_image(trivial_algebra(cat["two"].sig), [cat["two"]])
    with pytest.raises(ValueError):
        relatively_simple_image(cat["s3"], [cat["two"]])  # S3 not in Q(2)


def test_congruence_lattice_order():
    A = direct_product([qv.catalog("two"), qv.catalog("two")])
    lat = all_congruences(A)
    assert lat[0].is_identity and lat[-1].is_total
    blocks = [c.num_blocks for c in lat]
    assert blocks == sorted(blocks, reverse=True)


def test_meet_join_of_congruences(cat):
    A = direct_product([cat["two"], cat["two"]])
    lat = all_congruences(A)
    k1, k2 = [c for c in lat if 1 < c.num_blocks < 4]
    assert k1.meet(k2).is_identity
    assert k1.join(k2).is_total
    assert identity_congruence(A).leq(k1) and k1.leq(total_congruence(A))
