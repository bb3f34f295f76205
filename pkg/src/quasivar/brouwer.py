"""Finite posets, the up-set / prime-filter duality for Brouwerian
algebras, p-morphisms, depth, the hat construction, the K_n family and
P6, plus the dual-side membership tests used for the structural
incompleteness witnesses.

Up-sets are machine-word bitmasks; posets are capped at 30 points.  The
category-level facts (dualized injectivity/surjectivity, depth transport)
are exercised by the test suite rather than assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_GUARDS
from .demorgan import BROUWER_SIG, HEYTING_SIG, lattice_tables_from_leq, is_brouwerian
from .errors import GuardExceeded
from .kernel import FiniteAlgebra
from .morphisms import Homomorphism


class Poset:
    """An immutable finite poset given by its full order matrix."""

    __slots__ = ("n", "leq", "names", "tags", "_depths")

    def __init__(self, leq, names=None, tags=None, guards=DEFAULT_GUARDS):
        leq = np.asarray(leq, dtype=bool)
        n = leq.shape[0]
        if leq.shape != (n, n):
            raise ValueError("order matrix must be square")
        if n > guards.poset_points:
            raise GuardExceeded(f"posets are capped at {guards.poset_points} points")
        if not leq[np.arange(n), np.arange(n)].all():
            raise ValueError("order must be reflexive")
        if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
            raise ValueError("order must be antisymmetric")
        closure = leq.copy()
        for k in range(n):
            closure |= np.outer(closure[:, k], closure[k, :])
        if (closure != leq).any():
            raise ValueError("order must be transitive")
        leq.setflags(write=False)
        self.n = n
        self.leq = leq
        self.names = tuple(names) if names is not None else None
        self.tags = tuple(tags) if tags is not None else None
        self._depths = None

    def element_name(self, i):
        return self.names[i] if self.names else str(i)

    def up_mask(self, x):
        mask = 0
        for y in np.flatnonzero(self.leq[x]):
            mask |= 1 << int(y)
        return mask

    def down_mask(self, x):
        mask = 0
        for y in np.flatnonzero(self.leq[:, x]):
            mask |= 1 << int(y)
        return mask

    def strict_ups(self, x):
        return [int(y) for y in np.flatnonzero(self.leq[x]) if y != x]

    def maximal_elements(self):
        return [x for x in range(self.n)
                if not any(self.leq[x, y] and y != x for y in range(self.n))]

    def top(self):
        m = self.maximal_elements()
        return m[0] if len(m) == 1 else None

    def bottom(self):
        m = [x for x in range(self.n) if self.leq[x].all()]
        return m[0] if m else None

    @property
    def is_dominated(self):
        return self.top() is not None

    @property
    def is_bounded(self):
        return self.is_dominated and self.bottom() is not None

    def element_depth(self, x):
        if self._depths is None:
            order = sorted(range(self.n),
                           key=lambda v: int(self.leq[v].sum()))
            depths = [0] * self.n
            for v in order:  # few elements above first
                ups = [w for w in self.strict_ups(v)]
                depths[v] = 1 + max((depths[w] for w in ups), default=-1)
            self._depths = tuple(depths)
        return self._depths[x]

    def depth(self):
        return max(self.element_depth(x) for x in range(self.n))

    def subposet(self, indices):
        indices = sorted(int(i) for i in indices)
        sub = self.leq[np.ix_(indices, indices)]
        names = [self.element_name(i) for i in indices] if self.names else None
        return Poset(sub, names=names)

    def __eq__(self, other):
        return (isinstance(other, Poset) and self.n == other.n
                and (self.leq == other.leq).all())

    def __hash__(self):
        return hash(self.leq.tobytes())

    def __repr__(self):
        return f"Poset(n={self.n})"


def poset_isomorphic(X, Y):
    """A witness order-isomorphism (index list) or None."""
    if X.n != Y.n:
        return None

    def profile(P, x):
        return (int(P.leq[x].sum()), int(P.leq[:, x].sum()), P.element_depth(x))

    px = [profile(X, x) for x in range(X.n)]
    py = [profile(Y, y) for y in range(Y.n)]
    if sorted(px) != sorted(py):
        return None
    mapping = [-1] * X.n
    used = [False] * Y.n

    def rec(i):
        if i == X.n:
            return True
        for y in range(Y.n):
            if used[y] or px[i] != py[y]:
                continue
            ok = True
            for j in range(i):
                if bool(X.leq[i, j]) != bool(Y.leq[y, mapping[j]]) or \
                   bool(X.leq[j, i]) != bool(Y.leq[mapping[j], y]):
                    ok = False
                    break
            if ok:
                mapping[i] = y
                used[y] = True
                if rec(i + 1):
                    return True
                used[y] = False
                mapping[i] = -1
        return False

    return mapping if rec(0) else None


# ---------------------------------------------------------------------------
# up-sets and the up-set algebra


def up_sets(X, nonempty=True, guards=DEFAULT_GUARDS):
    """All (non-empty) up-sets of X as bitmasks, ascending."""
    order = sorted(range(X.n), key=lambda v: (X.element_depth(v), v))
    out = []

    def rec(i, mask):
        if len(out) > guards.carrier:
            raise GuardExceeded(f"more than {guards.carrier} up-sets")
        if i == len(order):
            if mask or not nonempty:
                out.append(mask)
            return
        x = order[i]
        rec(i + 1, mask)
        need = 0
        for w in X.strict_ups(x):
            need |= 1 << w
        if need & mask == need:
            rec(i + 1, mask | (1 << x))

    rec(0, 0)
    out.sort()
    return out


def _mask_name(X, mask):
    return "{" + ",".join(X.element_name(i) for i in range(X.n)
                          if mask >> i & 1) + "}"


@dataclass(frozen=True)
class UpSetAlgebra:
    """The Brouwerian algebra of non-empty up-sets of a dominated poset,
    with the element <-> bitmask correspondence kept around."""

    algebra: FiniteAlgebra
    masks: tuple
    poset: Poset

    @property
    def size(self):
        return self.algebra.size

    def index_of(self, mask):
        return self.masks.index(mask)


def up_algebra(X, guards=DEFAULT_GUARDS):
    """X* = (Up(X); ->, meet, join, X): meet and join are intersection and
    union, U -> V = X minus the down-set of U minus V."""
    if not X.is_dominated:
        raise ValueError("up-set algebras need a dominated poset")
    masks = up_sets(X, nonempty=True, guards=guards)
    if len(masks) > guards.carrier:
        raise GuardExceeded("up-set algebra carrier exceeds the guard")
    index = {m: i for i, m in enumerate(masks)}
    full = (1 << X.n) - 1
    down = [X.down_mask(x) for x in range(X.n)]
    m = len(masks)
    meet = np.empty((m, m), dtype=np.int32)
    join = np.empty((m, m), dtype=np.int32)
    imp = np.empty((m, m), dtype=np.int32)
    for i, U in enumerate(masks):
        for j, V in enumerate(masks):
            meet[i, j] = index[U & V] if (U & V) in index else -1
            join[i, j] = index[U | V]
            diff = U & ~V
            dset = 0
            for x in range(X.n):
                if diff >> x & 1:
                    dset |= down[x]
            imp[i, j] = index[full & ~dset]
            if meet[i, j] < 0:
                raise ValueError("up-sets not closed under intersection: "
                                 "poset is not dominated")
    names = [_mask_name(X, u) for u in masks]
    label = f"Up(poset{X.n})"
    alg = FiniteAlgebra(BROUWER_SIG, m,
                        {"imp": imp, "meet": meet, "join": join,
                         "e": np.asarray(index[full])},
                        names=names, label=label)
    ok, fail = is_brouwerian(alg)
    if not ok:
        raise AssertionError(f"up-set algebra failed an axiom: {fail}")
    return UpSetAlgebra(alg, tuple(masks), X)


# ---------------------------------------------------------------------------
# prime filters (the reverse functor)


def prime_filter_poset(A):
    """The poset of prime filters of a Brouwerian algebra, ordered by
    inclusion and including the improper filter A.

    In a finite lattice every meet-closed non-empty up-set is a principal
    filter, and a principal filter is prime iff its generator is
    join-prime, so the enumeration is over elements, not subsets.
    """
    ok, fail = is_brouwerian(A)
    if not ok:
        raise ValueError(f"not a Brouwerian algebra: {fail}")
    n = A.size
    meet, join = A.tables["meet"], A.tables["join"]
    leq = meet == np.arange(n, dtype=np.int32)[:, None]
    bottom = next(i for i in range(n) if leq[i].all())
    masks = []
    for a in range(n):
        if a == bottom:
            continue
        la = leq[a]
        if (la[join] & ~(la[:, None] | la[None, :])).any():
            continue  # not join-prime
        mask = 0
        for x in np.flatnonzero(leq[a, :]):
            mask |= 1 << int(x)
        masks.append(mask)
    masks.append((1 << n) - 1)  # the improper filter
    masks = sorted(set(masks), key=lambda m: (bin(m).count("1"), m))
    k = len(masks)
    order = np.zeros((k, k), dtype=bool)
    for i in range(k):
        for j in range(k):
            order[i, j] = masks[i] & ~masks[j] == 0
    names = ["{" + ",".join(A.element_name(x) for x in range(n)
                            if m >> x & 1) + "}" for m in masks]
    return Poset(order, names=names, tags=masks)


# ---------------------------------------------------------------------------
# p-morphisms and the contravariant maps


class PMorphism:
    """An isotone map with the back condition: up-sets of images are
    images of up-sets (↑g(x) = g[↑x])."""

    __slots__ = ("dom", "cod", "mapping")

    def __init__(self, dom, cod, mapping, check=True):
        self.dom = dom
        self.cod = cod
        m = np.asarray(mapping, dtype=np.int32)
        if m.shape != (dom.n,):
            raise ValueError("mapping must be total")
        m.setflags(write=False)
        self.mapping = m
        if check and not self.verify():
            raise ValueError("not a p-morphism")

    def __call__(self, x):
        return int(self.mapping[x])

    def verify(self):
        X, Y, g = self.dom, self.cod, self.mapping
        for x in range(X.n):
            for y in range(X.n):
                if X.leq[x, y] and not Y.leq[g[x], g[y]]:
                    return False
        for x in range(X.n):
            above = {int(g[z]) for z in range(X.n) if X.leq[x, z]}
            needed = {y for y in range(Y.n) if Y.leq[g[x], y]}
            if above != needed:
                return False
        return True

    @property
    def is_injective(self):
        return np.unique(self.mapping).size == self.dom.n

    @property
    def is_surjective(self):
        return np.unique(self.mapping).size == self.cod.n

    def compose(self, first):
        return PMorphism(first.dom, self.cod, self.mapping[first.mapping],
                         check=False)

    def __repr__(self):
        return f"PMorphism({list(self.mapping)})"


def dual_of_hom(h, dom_dual=None, cod_dual=None):
    """For h: A -> B between finite Brouwerian algebras, the p-morphism
    B_* -> A_* taking a prime filter to its preimage."""
    Bstar = cod_dual if cod_dual is not None else prime_filter_poset(h.cod)
    Astar = dom_dual if dom_dual is not None else prime_filter_poset(h.dom)
    lookup = {m: i for i, m in enumerate(Astar.tags)}
    mapping = []
    for Q in Bstar.tags:
        pre = 0
        for i in range(h.dom.size):
            if Q >> int(h.mapping[i]) & 1:
                pre |= 1 << i
        if pre not in lookup:
            raise ValueError("preimage of a prime filter is not prime: "
                             "input is not a homomorphism")
        mapping.append(lookup[pre])
    return PMorphism(Bstar, Astar, mapping)


def dual_of_pmorphism(g, dom_dual=None, cod_dual=None):
    """For g: X -> Y between dominated posets, the homomorphism
    Y* -> X* taking an up-set to its preimage."""
    Ystar = cod_dual if cod_dual is not None else up_algebra(g.cod)
    Xstar = dom_dual if dom_dual is not None else up_algebra(g.dom)
    lookup = {m: i for i, m in enumerate(Xstar.masks)}
    mapping = []
    for V in Ystar.masks:
        pre = 0
        for x in range(g.dom.n):
            if V >> int(g.mapping[x]) & 1:
                pre |= 1 << x
        mapping.append(lookup[pre])
    return Homomorphism(Ystar.algebra, Xstar.algebra, mapping)


def up_set_inclusion_dual(X, U_mask, Xstar=None, Ustar=None):
    """The surjective homomorphism X* -> U* induced by an up-set U of X
    (V maps to U ∩ V)."""
    Xstar = Xstar if Xstar is not None else up_algebra(X)
    indices = [i for i in range(X.n) if U_mask >> i & 1]
    U = X.subposet(indices)
    Ustar = Ustar if Ustar is not None else up_algebra(U)
    shrink = {g: j for j, g in enumerate(indices)}
    lookup = {m: i for i, m in enumerate(Ustar.masks)}
    mapping = []
    for V in Xstar.masks:
        inter = 0
        for g in indices:
            if V >> g & 1:
                inter |= 1 << shrink[g]
        mapping.append(lookup[inter])
    return Homomorphism(Xstar.algebra, Ustar.algebra, mapping)


# ---------------------------------------------------------------------------
# depth, hats, and the named posets


def depth(X):
    if not X.is_dominated:
        raise ValueError("depth is defined for dominated posets")
    return X.depth()


def element_depth(X, x):
    return X.element_depth(x)


def hat(X):
    """Add, for each unordered pair of distinct depth-2 elements, a new
    minimal point whose strict upper bounds are exactly the ups of the
    pair.  X is an up-set of the result."""
    if not X.is_dominated:
        raise ValueError("the hat construction needs a dominated poset")
    depth2 = [x for x in range(X.n) if X.element_depth(x) == 2]
    pairs = [(a, b) for i, a in enumerate(depth2) for b in depth2[i + 1:]]
    pairs.sort()
    n = X.n
    N = n + len(pairs)
    leq = np.zeros((N, N), dtype=bool)
    leq[:n, :n] = X.leq
    for k, (a, b) in enumerate(pairs):
        idx = n + k
        leq[idx, idx] = True
        for y in range(n):
            if X.leq[a, y] or X.leq[b, y]:
                leq[idx, y] = True
    names = None
    if X.names:
        names = list(X.names) + [f"e_{X.element_name(a)}{X.element_name(b)}"
                                 for a, b in pairs]
    return Poset(leq, names=names)


def k_poset(n):
    """K_n: inside the n-th power of the two-element chain, the poset of
    the least element, the n atoms, the n co-atoms and the greatest
    element (2n+2 points, bounded, depth 3)."""
    if n < 1:
        raise ValueError("K_n needs n >= 1")
    N = 2 * n + 2
    BOT, TOP = 0, N - 1
    leq = np.eye(N, dtype=bool)
    leq[BOT, :] = True
    leq[:, TOP] = True
    for i in range(n):          # atoms 1..n, co-atoms n+1..2n
        for j in range(n):
            if i != j:
                leq[1 + i, 1 + n + j] = True
    names = ["0"] + [f"a{i + 1}" for i in range(n)] + \
            [f"c{i + 1}" for i in range(n)] + ["1"]
    return Poset(leq, names=names)


def p6():
    """The six-point dominated poset 0 < a,b,c < 1 < top."""
    leq = np.eye(6, dtype=bool)
    # elements: 0, a, b, c, 1, top
    leq[0, :] = True
    for x in (1, 2, 3):
        leq[x, 4] = True
        leq[x, 5] = True
    leq[4, 5] = True
    return Poset(leq, names=["0", "a", "b", "c", "1", "T"])


NAMED_POSETS = {"p6": p6}


def named_poset(name):
    key = name.strip().lower()
    if key in NAMED_POSETS:
        return NAMED_POSETS[key]()
    if key.startswith("k") and key[1:].isdigit():
        return k_poset(int(key[1:]))
    raise ValueError(f"unknown poset name {name!r}")


# ---------------------------------------------------------------------------
# surjective p-morphism search (the dual of subalgebra membership)


def surjective_pmorphism_exists(U, Y, guards=DEFAULT_GUARDS):
    """A surjective p-morphism U -> Y (as an index array), or None.

    Elements of U are assigned in order of increasing depth, so each
    element's strict upper set is fully mapped when it is assigned and the
    back condition can be enforced exactly, not just pruned."""
    if not (U.is_dominated and Y.is_dominated):
        raise ValueError("p-morphism search needs dominated posets")
    if U.n < Y.n:
        return None
    for d in range(Y.depth() + 1):
        have = sum(1 for x in range(U.n) if U.element_depth(x) >= d)
        need = sum(1 for y in range(Y.n) if Y.element_depth(y) >= d)
        if have < need:
            return None
    order = sorted(range(U.n), key=lambda x: (U.element_depth(x), x))
    strict_ups_U = [U.strict_ups(x) for x in range(U.n)]
    strict_ups_Y = [set(Y.strict_ups(y)) for y in range(Y.n)]
    gmap = np.full(U.n, -1, dtype=np.int32)
    covered = [0] * Y.n

    def rec(i):
        if i == len(order):
            return all(covered)
        x = order[i]
        remaining = len(order) - i
        missing = sum(1 for c in covered if not c)
        if missing > remaining:
            return False
        up_imgs = {int(gmap[w]) for w in strict_ups_U[x]}
        for y in range(Y.n):
            if Y.element_depth(y) > U.element_depth(x):
                continue
            if any(not Y.leq[y, g] for g in up_imgs):
                continue
            # exact back condition: ups of y = images of the ups of x
            if strict_ups_Y[y] != up_imgs - {y}:
                continue
            gmap[x] = y
            covered[y] += 1
            if rec(i + 1):
                return True
            covered[y] -= 1
            gmap[x] = -1
        return False

    if rec(0):
        return gmap.copy()
    return None


def sh_membership_dual(Y, Z, guards=DEFAULT_GUARDS):
    """Dual criterion for Y* ∈ SH(Z*): some non-empty up-set of Z admits a
    surjective p-morphism onto Y."""
    if not (Y.is_dominated and Z.is_dominated):
        raise ValueError("dual membership needs dominated posets")
    for mask in up_sets(Z, nonempty=True, guards=guards):
        if bin(mask).count("1") < Y.n:
            continue
        sub = Z.subposet([i for i in range(Z.n) if mask >> i & 1])
        if surjective_pmorphism_exists(sub, Y, guards) is not None:
            return True
    return False


# ---------------------------------------------------------------------------
# random instances (seeded; used by the round-trip suites)


def random_dominated_poset(rng, max_points=7):
    n = int(rng.integers(1, max_points))
    prob = float(rng.uniform(0.15, 0.6))
    leq = np.eye(n + 1, dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < prob:
                leq[i, j] = True
    for k in range(n + 1):  # transitive closure
        leq |= np.outer(leq[:, k], leq[k, :])
    leq[:, n] = True  # adjoin a top
    return Poset(leq)


def random_brouwerian_algebra(rng, max_size=12, max_points=7):
    while True:
        X = random_dominated_poset(rng, max_points)
        try:
            count = len(up_sets(X))
        except GuardExceeded:
            continue
        if count <= max_size:
            return up_algebra(X).algebra


# ---------------------------------------------------------------------------
# the two five-element subdirectly irreducible Heyting algebras


def heyting_from_leq(leq, names=None, label=None):
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]
    meet, join = lattice_tables_from_leq(leq)
    imp = np.empty((n, n), dtype=np.int32)
    for i in range(n):
        for j in range(n):
            cands = [k for k in range(n) if leq[meet[k, i], j]]
            tops = [k for k in cands if all(leq[c, k] for c in cands)]
            if len(tops) != 1:
                raise ValueError("lattice is not relatively pseudocomplemented")
            imp[i, j] = tops[0]
    top = next(i for i in range(n) if leq[:, i].all())
    bot = next(i for i in range(n) if leq[i, :].all())
    alg = FiniteAlgebra(HEYTING_SIG, n,
                        {"imp": imp, "meet": meet, "join": join,
                         "e": np.asarray(top), "bot": np.asarray(bot)},
                        names=names, label=label)
    ok, fail = is_brouwerian(alg)
    if not ok:
        raise AssertionError(f"Heyting construction failed: {fail}")
    return alg


def five_element_si_heyting_algebras():
    """The only two non-isomorphic subdirectly irreducible five-element
    Heyting algebras: the five-chain, and the diamond with a new top."""
    chain = np.tri(5, dtype=bool).T  # i <= j iff i <= j numerically
    A = heyting_from_leq(chain, names=["0", "1", "2", "3", "4"],
                         label="H5-chain")
    leq = np.eye(5, dtype=bool)
    # 0 < a,b < c < 1
    leq[0, :] = True
    leq[1, 3] = leq[1, 4] = True
    leq[2, 3] = leq[2, 4] = True
    leq[3, 4] = True
    B = heyting_from_leq(leq, names=["0", "a", "b", "c", "1"],
                         label="H5-diamond")
    return A, B
