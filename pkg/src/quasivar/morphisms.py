"""Homomorphism, embedding and retraction search; separation tests;
trivial-subalgebra detection; 0-generated subalgebras.

The search engine assigns images to a greedily chosen generating set and
propagates forced images eagerly after each assignment, so the naive
|B|^|A| search collapses to |B|^(number of generators) with pruning.
All enumerations are deterministic and sorted by the map's lexicographic
table; early-exit searches report the deterministic first witness.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import _kernels as K
from .config import DEFAULT_GUARDS
from .errors import GuardExceeded, SignatureMismatch
from .kernel import (FiniteAlgebra, close_subset, find_generators,
                     normalize_labels, subalgebra_generated)


class Homomorphism:
    """A structure-preserving map between algebras of one signature."""

    __slots__ = ("dom", "cod", "mapping")

    def __init__(self, dom, cod, mapping, check=False):
        if dom.sig != cod.sig:
            raise SignatureMismatch("homomorphism endpoints must share a signature")
        self.dom = dom
        self.cod = cod
        m = np.asarray(mapping, dtype=np.int32)
        if m.shape != (dom.size,):
            raise ValueError("mapping must be total on the domain")
        if m.size and (m.min() < 0 or m.max() >= cod.size):
            raise ValueError("mapping has out-of-range values")
        m.setflags(write=False)
        self.mapping = m
        if check and not self.verify():
            raise ValueError("map does not preserve the operations")

    def __call__(self, x):
        return int(self.mapping[x])

    def verify(self):
        """Exhaustive table-preservation scan."""
        m = self.mapping
        for name, arity in self.dom.sig.ops:
            ta, tb = self.dom.tables[name], self.cod.tables[name]
            if arity == 0:
                if int(m[int(ta)]) != int(tb):
                    return False
            else:
                grids = np.indices(ta.shape)
                lhs = m[ta]
                rhs = tb[tuple(m[g] for g in grids)]
                if not (lhs == rhs).all():
                    return False
        return True

    @property
    def is_injective(self):
        return np.unique(self.mapping).size == self.dom.size

    @property
    def is_surjective(self):
        return np.unique(self.mapping).size == self.cod.size

    def kernel_labels(self):
        return normalize_labels(self.mapping)

    def compose(self, first):
        """self after `first` (first: A->B, self: B->C gives A->C)."""
        if first.cod is not self.dom and first.cod != self.dom:
            raise SignatureMismatch("composition endpoints do not match")
        return Homomorphism(first.dom, self.cod, self.mapping[first.mapping])

    def separated_pairs(self):
        m = self.mapping
        return m[:, None] != m[None, :]

    def __eq__(self, other):
        return (isinstance(other, Homomorphism) and self.dom == other.dom
                and self.cod == other.cod
                and (self.mapping == other.mapping).all())

    def __hash__(self):
        return hash((self.dom, self.cod, self.mapping.tobytes()))

    def __repr__(self):
        return f"Homomorphism({self.dom.describe()} -> {self.cod.describe()}, {list(self.mapping)})"


# ---------------------------------------------------------------------------
# the search engine


def _propagate(A, B, mapping, injective, allowed):
    if A.sig.max_arity <= 2:
        aritiesA, offA, flatA = A.flat()
        _, offB, flatB = B.flat()
        dummy = allowed if allowed is not None else np.zeros((1, 1), dtype=np.bool_)
        return K.propagate_map(A.size, B.size, aritiesA, offA, flatA, offB, flatB,
                               mapping, injective, allowed is not None, dummy)
    return _propagate_generic(A, B, mapping, injective, allowed)


def _propagate_generic(A, B, mapping, injective, allowed):
    if allowed is not None:
        defined = np.flatnonzero(mapping >= 0)
        if defined.size and not allowed[defined, mapping[defined]].all():
            return 1
    changed = True
    while changed:
        changed = False
        for name, arity in A.sig.ops:
            ta, tb = A.tables[name], B.tables[name]
            if arity == 0:
                pairs = [(int(ta), int(tb))]
            else:
                idx = np.flatnonzero(mapping >= 0)
                if not idx.size:
                    continue
                rs = ta[np.ix_(*([idx] * arity))].ravel()
                ts = tb[np.ix_(*([mapping[idx]] * arity))].ravel()
                pairs = zip(rs.tolist(), ts.tolist())
            for r, t in pairs:
                cur = mapping[r]
                if cur < 0:
                    if allowed is not None and not allowed[r, t]:
                        return 1
                    mapping[r] = t
                    changed = True
                elif cur != t:
                    return 1
    if injective:
        imgs = mapping[mapping >= 0]
        if np.unique(imgs).size != imgs.size:
            return 1
    return 0


def _search_maps(A, B, *, injective=False, allowed=None, diseq=None,
                 fixed=None, limit=None, require_surjective=False):
    """All total homomorphisms A -> B meeting the side constraints, as raw
    index arrays in discovery order (generator-image lexicographic)."""
    if A.sig != B.sig:
        raise SignatureMismatch("homomorphism search needs equal signatures")
    nA, nB = A.size, B.size
    if injective and nA > nB:
        return []
    if require_surjective and nB > nA:
        return []
    base = np.full(nA, -1, dtype=np.int32)
    if fixed:
        for k, v in fixed.items():
            base[int(k)] = int(v)
    if _propagate(A, B, base, injective, allowed) != 0:
        return []
    gens = [g for g in find_generators(A)]
    results = []

    def viable(mapping):
        if diseq is not None:
            a, b = diseq
            if mapping[a] >= 0 and mapping[a] == mapping[b]:
                return False
        return True

    def finish(mapping):
        if (mapping < 0).any():
            raise AssertionError("generators did not generate the domain")
        if diseq is not None and mapping[diseq[0]] == mapping[diseq[1]]:
            return
        if require_surjective and np.unique(mapping).size != nB:
            return
        results.append(mapping.copy())

    def rec(k, mapping):
        if limit is not None and len(results) >= limit:
            return
        while k < len(gens) and mapping[gens[k]] >= 0:
            k += 1
        if k == len(gens):
            finish(mapping)
            return
        g = gens[k]
        for img in range(nB):
            if allowed is not None and not allowed[g, img]:
                continue
            m2 = mapping.copy()
            m2[g] = img
            if _propagate(A, B, m2, injective, allowed) == 0 and viable(m2):
                rec(k + 1, m2)
                if limit is not None and len(results) >= limit:
                    return

    if not viable(base):
        return []
    rec(0, base)
    return results


def _flat_factors(B):
    """Flatten nested product provenance into a list of plain algebras."""
    if not B.factors:
        return None
    out = []
    for f in B.factors:
        sub = _flat_factors(f)
        out.extend(sub if sub else [f])
    return out


def _combine_factor_maps(B, factors, maps):
    sizes = [f.size for f in factors]
    strides = np.ones(len(sizes), dtype=np.int64)
    for i in range(len(sizes) - 2, -1, -1):
        strides[i] = strides[i + 1] * sizes[i + 1]
    acc = np.zeros(maps[0].shape, dtype=np.int64)
    for m, st in zip(maps, strides):
        acc += m.astype(np.int64) * st
    return acc.astype(np.int32)


def enumerate_homs(A, B, limit=None, guards=DEFAULT_GUARDS):
    """All homomorphisms A -> B in deterministic order (lexicographic by
    the full map).  `limit` short-circuits the enumeration."""
    factors = _flat_factors(B)
    if factors and len(factors) > 1:
        per = [enumerate_homs(A, f, guards=guards) for f in factors]
        total = 1
        for p in per:
            total *= len(p)
            if total > guards.hom_combo:
                raise GuardExceeded("too many combined homomorphisms into the product")
        combos = []
        for choice in itertools.product(*per):
            combos.append(_combine_factor_maps(B, factors,
                                               [h.mapping for h in choice]))
        combos.sort(key=lambda m: m.tobytes())
        if limit is not None:
            combos = combos[:limit]
        return [Homomorphism(A, B, m) for m in combos]
    raw = _search_maps(A, B, limit=limit)
    raw.sort(key=lambda m: m.tobytes())
    return [Homomorphism(A, B, m) for m in raw]


def hom_exists(A, B):
    """The deterministic first homomorphism A -> B, or None."""
    factors = _flat_factors(B)
    if factors and len(factors) > 1:
        parts = []
        for f in factors:
            h = hom_exists(A, f)
            if h is None:
                return None
            parts.append(h.mapping)
        return Homomorphism(A, B, _combine_factor_maps(B, factors, parts))
    maps = _search_maps(A, B, limit=1)
    return Homomorphism(A, B, maps[0]) if maps else None


def embedding_exists(A, B):
    """The deterministic first embedding (injective homomorphism), or None.

    Algebras carry no relations, so injective homomorphism = embedding.
    """
    if A.size > B.size:
        return None
    factors = _flat_factors(B)
    if factors and len(factors) > 1:
        per = [None] * len(factors)  # lazy per-factor enumerations

        def homs_into(i):
            if per[i] is None:
                per[i] = enumerate_homs(A, factors[i])
            return per[i]

        identity = np.arange(A.size, dtype=np.int32)

        def rec(i, labels, chosen):
            if (labels == identity).all():
                parts = list(chosen)
                for j in range(len(parts), len(factors)):
                    h = hom_exists(A, factors[j])
                    if h is None:
                        return None
                    parts.append(h.mapping)
                return _combine_factor_maps(B, factors, parts)
            if i == len(factors):
                return None
            for h in homs_into(i):
                merged = normalize_labels(
                    labels.astype(np.int64) * B.size + h.mapping)
                got = rec(i + 1, merged, chosen + [h.mapping])
                if got is not None:
                    return got
            return None

        start = np.zeros(A.size, dtype=np.int32)
        m = rec(0, start, [])
        return Homomorphism(A, B, m) if m is not None else None
    maps = _search_maps(A, B, injective=True, limit=1)
    return Homomorphism(A, B, maps[0]) if maps else None


# ---------------------------------------------------------------------------
# derived searches


def trivial_subalgebra_points(A):
    """All c whose singleton {c} is a subalgebra: every operation is
    idempotent at c, and c equals every constant's value."""
    candidates = range(A.size)
    consts = [A.constant(c) for c in A.sig.constants()]
    if consts:
        if len(set(consts)) > 1:
            return []
        candidates = [consts[0]]
    out = []
    for c in candidates:
        ok = True
        for name, arity in A.sig.ops:
            if A.apply(name, *([c] * arity)) != c:
                ok = False
                break
        if ok:
            out.append(int(c))
    return out


def zero_generated_subalgebra(A):
    """The unique smallest subalgebra (requires a constant)."""
    if not A.sig.has_constant:
        raise ValueError("0-generated subalgebra needs a constant symbol")
    sub, _ = subalgebra_generated(A, [])
    return sub


def is_zero_generated(A):
    if not A.sig.has_constant:
        return False
    return bool(close_subset(A, []).all())


def is_retract(A, B):
    """A pair (g: A -> B embedding, h: B -> A) with h∘g = id, or None.

    Fast path: when A is 0-generated, any pair of homomorphisms works
    (homomorphisms preserve distinguished elements, and every element of A
    is a constant term), so existence of both directions suffices.
    """
    if A.sig != B.sig:
        raise SignatureMismatch("retract test needs equal signatures")
    if is_zero_generated(A):
        g = hom_exists(A, B)
        if g is None:
            return None
        h = hom_exists(B, A)
        if h is None:
            return None
        if not (h.mapping[g.mapping] == np.arange(A.size)).all():
            raise AssertionError("0-generated retract fast path violated")
        return g, h
    for h in enumerate_homs(B, A):
        if not h.is_surjective:
            continue
        allowed = (h.mapping[None, :] == np.arange(A.size, dtype=np.int32)[:, None])
        sec = _search_maps(A, B, allowed=allowed, limit=1)
        if sec:
            return Homomorphism(A, B, sec[0]), h
    return None


def _find_separating_hom(A, G, pair):
    """A homomorphism A -> G with h(a) != h(b), or None (product-aware)."""
    factors = _flat_factors(G)
    if factors and len(factors) > 1:
        parts = [hom_exists(A, f) for f in factors]
        if any(p is None for p in parts):
            return None
        for i, f in enumerate(factors):
            h = _find_separating_hom(A, f, pair)
            if h is not None:
                return h
        return None
    maps = _search_maps(A, G, diseq=pair, limit=1)
    return Homomorphism(A, G, maps[0]) if maps else None


def separates(A, gens):
    """Decide A ∈ ISP(gens): do homomorphisms into the generators separate
    all points?  Returns (True, None) or (False, first failing pair)."""
    gens = list(gens)
    for G in gens:
        if G.sig != A.sig:
            raise SignatureMismatch("separation needs a shared signature")
    n = A.size
    sep = np.zeros((n, n), dtype=bool)
    for a in range(n):
        for b in range(a + 1, n):
            if sep[a, b]:
                continue
            witness = None
            for G in gens:
                witness = _find_separating_hom(A, G, (a, b))
                if witness is not None:
                    break
            if witness is None:
                return False, (a, b)
            split = witness.separated_pairs()
            sep |= split
    return True, None
