"""Bounded brute-force oracles, independent of the derived criteria in
`deciders`.  The acceptance suite replays the smart deciders against
these on everything drawn from the catalog.

- homomorphism sets by dumb enumeration of all |B|^|A| maps (vectorized);
- joint embeddability of a pair decided coordinatewise from the dumb hom
  sets, with an explicitly verified embedding certificate on success;
- the quasivariety membership sample: all small subalgebras of bounded
  products of the generators.
"""

from __future__ import annotations

import itertools

import numpy as np

from .config import DEFAULT_GUARDS
from .errors import GuardExceeded
from .kernel import (FiniteAlgebra, close_subset, dedupe_up_to_iso,
                     direct_product, subalgebra_on)
from .morphisms import Homomorphism, hom_exists


def all_homs_bruteforce(A, B, max_maps=20_000_000):
    """Every homomorphism A -> B, found by checking all |B|^|A| maps."""
    nA, nB = A.size, B.size
    total = nB ** nA
    if total > max_maps:
        raise GuardExceeded(f"brute force over {total} maps refused")
    maps = np.stack(np.unravel_index(np.arange(total), (nB,) * nA),
                    axis=1).astype(np.int32)
    ok = np.ones(total, dtype=bool)
    for name, arity in A.sig.ops:
        ta, tb = A.tables[name], B.tables[name]
        if arity == 0:
            ok &= maps[:, int(ta)] == int(tb)
        elif arity == 1:
            for i in range(nA):
                ok &= maps[:, int(ta[i])] == tb[maps[:, i]]
        elif arity == 2:
            for i in range(nA):
                for j in range(nA):
                    ok &= maps[:, int(ta[i, j])] == tb[maps[:, i], maps[:, j]]
        else:
            raise GuardExceeded("brute force supports arity <= 2")
        maps = maps[ok]
        ok = np.ones(maps.shape[0], dtype=bool)
    return [Homomorphism(A, B, m) for m in maps]


def joint_embedding_bruteforce(A, B, gens):
    """Can A and B be embedded jointly into a member of Q(gens)?

    A coordinate of a product of generators carries a pair (f, g) of
    homomorphisms from A and B.  Joint embeddability holds iff every pair
    of distinct elements of A is separated by some f whose coordinate also
    admits a g (and symmetrically).  On success the embedding certificate
    (one coordinate per separated pair) is verified: components are
    verified homomorphisms, and joint injectivity is the separation.
    """
    hom_sets = {}
    for gi, G in enumerate(gens):
        hom_sets[gi] = (all_homs_bruteforce(A, G), all_homs_bruteforce(B, G))

    def cover(P, Q, side):
        coords = []
        for a in range(P.size):
            for b in range(a + 1, P.size):
                found = None
                for gi, (fa, fb) in hom_sets.items():
                    own, other = (fa, fb) if side == 0 else (fb, fa)
                    if not other:
                        continue
                    for h in own:
                        if h.mapping[a] != h.mapping[b]:
                            found = (gi, h, other[0])
                            break
                    if found:
                        break
                if found is None:
                    return None, (a, b)
                coords.append(found)
        return coords, None

    coords_a, pair = cover(A, B, 0)
    if coords_a is None:
        return False, {"side": "left", "pair": pair}
    coords_b, pair = cover(B, A, 1)
    if coords_b is None:
        return False, {"side": "right", "pair": pair}
    # verify the certificate
    for gi, h, partner in coords_a:
        assert h.verify() and partner.verify()
    acc = np.zeros(A.size, dtype=np.int64)
    mult = 1
    for gi, h, partner in coords_a:
        acc = acc * gens[gi].size + h.mapping
        mult *= gens[gi].size
    if A.size > 1 and np.unique(acc).size != A.size:
        raise AssertionError("certificate failed to embed the left algebra")
    return True, None


def quasivariety_sample(gens, fold=3, size_cap=8, guards=DEFAULT_GUARDS):
    """All members of Q(gens) of size <= size_cap arising as subalgebras
    of products of at most `fold` generators, up to isomorphism."""
    algs = []
    for k in range(1, fold + 1):
        for combo in itertools.combinations_with_replacement(range(len(gens)), k):
            factors = [gens[i] for i in combo]
            P = factors[0] if k == 1 else direct_product(factors, guards=guards)
            algs.extend(_small_subalgebras(P, size_cap))
    return dedupe_up_to_iso(algs, guards)


def _small_subalgebras(P, cap):
    found = {}
    frontier = []

    def add(mask):
        key = mask.tobytes()
        if key not in found:
            found[key] = mask
            frontier.append(mask)

    if P.sig.has_constant:
        base = close_subset(P, [], bound=cap)
        if base.sum() <= cap:
            add(base)
    else:
        for a in range(P.size):
            m = close_subset(P, [a], bound=cap)
            if m.sum() <= cap:
                add(m)
    while frontier:
        current = frontier.pop()
        idx = list(np.flatnonzero(current))
        for a in range(P.size):
            if current[a]:
                continue
            m = close_subset(P, idx + [a], bound=cap)
            if m.sum() <= cap:
                add(m)
    return [subalgebra_on(P, np.flatnonzero(m)) for m in found.values()]


def psc_oracle(gens, fold=3, size_cap=8, guards=DEFAULT_GUARDS):
    """Exhaustive pairwise homomorphism existence over the bounded member
    sample: PSC demands a homomorphism from every nontrivial member into
    every member.  Returns (True, None) or (False, witness)."""
    sample = quasivariety_sample(gens, fold, size_cap, guards)
    for C in sample:
        if C.is_trivial:
            continue
        for D in sample:
            if hom_exists(C, D) is None:
                return False, {"source": C.describe(), "target": D.describe()}
    return True, None


def jep_oracle(gens, guards=DEFAULT_GUARDS):
    """Pairwise joint embeddability over all subalgebras of single
    generators (every relatively subdirectly irreducible member lives
    there, so a failure anywhere implies one here)."""
    sample = quasivariety_sample(gens, fold=1, size_cap=max(g.size for g in gens),
                                 guards=guards)
    sample = [s for s in sample if not s.is_trivial]
    for A, B in itertools.product(sample, repeat=2):
        ok, witness = joint_embedding_bruteforce(A, B, gens)
        if not ok:
            witness["left"] = A.describe()
            witness["right"] = B.describe()
            return False, witness
    return True, None
