"""Seeded randomized property checks that cut across the modules."""

import itertools

import numpy as np
import pytest

import quasivar as qv
from quasivar.brouwer import random_dominated_poset, up_algebra
from quasivar.congruence import all_congruences
from quasivar.demorgan import random_demorgan_monoids
from quasivar.kernel import quotient
from quasivar.morphisms import Homomorphism, enumerate_homs
from quasivar.oracles import all_homs_bruteforce

SEED = 20260809


def test_enumerate_homs_matches_bruteforce_on_random_pairs():
    pool = random_demorgan_monoids(8, max_size=4, seed=SEED)
    rng = np.random.default_rng(SEED)
    for _ in range(12):
        A = pool[int(rng.integers(0, len(pool)))]
        B = pool[int(rng.integers(0, len(pool)))]
        smart = [h.mapping.tolist() for h in enumerate_homs(A, B)]
        dumb = [h.mapping.tolist() for h in all_homs_bruteforce(A, B)]
        assert smart == dumb


def test_congruence_quotients_verify_on_random_algebras():
    for A in random_demorgan_monoids(10, max_size=5, seed=SEED + 1):
        for theta in all_congruences(A):
            Q, proj = quotient(A, theta.labels)
            assert Homomorphism(A, Q, proj).verify()


def test_relative_congruences_subset_of_absolute_random():
    pool = random_demorgan_monoids(6, max_size=4, seed=SEED + 2)
    gens = [qv.catalog("c4"), qv.catalog("s3")]
    for A in pool:
        rel = {c.key() for c in qv.relative_congruences(A, gens)}
        absolute = {c.key() for c in all_congruences(A)}
        assert rel <= absolute


def test_up_algebra_tables_match_set_operations():
    rng = np.random.default_rng(SEED + 3)
    for _ in range(15):
        X = random_dominated_poset(rng, max_points=6)
        U = up_algebra(X)
        A = U.algebra
        for i, mi in enumerate(U.masks):
            for j, mj in enumerate(U.masks):
                assert U.masks[A.tables["meet"][i, j]] == mi & mj
                assert U.masks[A.tables["join"][i, j]] == mi | mj


def test_jep_pairs_admit_explicit_joint_embedding():
    # when jep_check says yes on a two-generator set, each RSI pair embeds
    # jointly into an explicit product certificate
    from quasivar.oracles import joint_embedding_bruteforce
    gens = [qv.catalog("s3"), qv.catalog("s5")]
    assert qv.jep_check(gens).is_yes
    ok, _ = joint_embedding_bruteforce(qv.catalog("s3"), qv.catalog("s5"), gens)
    assert ok


def test_canonical_key_iso_invariance():
    from quasivar.kernel import canonical_key
    pool = random_demorgan_monoids(10, max_size=5, seed=SEED + 4)
    for A in pool:
        for B in pool:
            iso = qv.are_isomorphic(A, B) is not None
            assert iso == (canonical_key(A) == canonical_key(B))
