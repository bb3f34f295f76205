"""Congruences and congruence lattices, absolute and relative to a
generator set; subdirect irreducibility and simplicity in both senses;
relatively simple images.

A congruence is stored as a flat block-id array (block ids in order of
least member).  Lattices are explicit lists: everything here is small.
"""

from __future__ import annotations

import enum

import numpy as np

from . import _kernels as K
from .config import DEFAULT_GUARDS
from .errors import GuardExceeded
from .kernel import normalize_labels, quotient
from .morphisms import enumerate_homs, separates


class Congruence:
    """A compatible partition of an algebra's carrier."""

    __slots__ = ("algebra", "labels")

    def __init__(self, algebra, labels, check=True):
        self.algebra = algebra
        lab = normalize_labels(np.asarray(labels, dtype=np.int32))
        if lab.shape != (algebra.size,):
            raise ValueError("labels must cover the carrier")
        lab.setflags(write=False)
        self.labels = lab
        if check and not self.is_compatible():
            raise ValueError("partition is not compatible with the operations")

    def is_compatible(self):
        try:
            quotient(self.algebra, self.labels)
        except ValueError:
            return False
        return True

    @property
    def num_blocks(self):
        return int(self.labels.max()) + 1

    @property
    def is_identity(self):
        return self.num_blocks == self.algebra.size

    @property
    def is_total(self):
        return self.num_blocks == 1

    def relates(self, a, b):
        return self.labels[a] == self.labels[b]

    def blocks(self):
        out = [[] for _ in range(self.num_blocks)]
        for i, b in enumerate(self.labels):
            out[int(b)].append(i)
        return out

    def key(self):
        return self.labels.tobytes()

    def leq(self, other):
        """Refinement order: self finer-or-equal other."""
        seen = {}
        for s, o in zip(self.labels, other.labels):
            s, o = int(s), int(o)
            if s in seen:
                if seen[s] != o:
                    return False
            else:
                seen[s] = o
        return True

    def meet(self, other):
        pair = self.labels.astype(np.int64) * (other.labels.max() + 1) + other.labels
        return Congruence(self.algebra, normalize_labels(pair), check=False)

    def join(self, other):
        """Join of two congruences = their equivalence join (the union's
        transitive closure), which is automatically compatible."""
        n = self.algebra.size
        parent = np.arange(n, dtype=np.int32)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for lab in (self.labels, other.labels):
            first = {}
            for i in range(n):
                b = int(lab[i])
                if b in first:
                    ra, rb = find(first[b]), find(i)
                    if ra != rb:
                        parent[rb] = ra
                else:
                    first[b] = i
        labels = np.asarray([find(i) for i in range(n)], dtype=np.int32)
        return Congruence(self.algebra, labels, check=False)

    def quotient(self):
        return quotient(self.algebra, self.labels)

    def __eq__(self, other):
        return (isinstance(other, Congruence) and self.algebra == other.algebra
                and (self.labels == other.labels).all())

    def __hash__(self):
        return hash((self.algebra, self.labels.tobytes()))

    def __repr__(self):
        return f"Congruence({self.num_blocks} blocks of {self.algebra.describe()})"


def identity_congruence(A):
    return Congruence(A, np.arange(A.size, dtype=np.int32), check=False)


def total_congruence(A):
    return Congruence(A, np.zeros(A.size, dtype=np.int32), check=False)


def congruence_generated_by(A, pairs):
    """Least congruence relating every pair in `pairs` (union-find closure
    propagated through all operation tables)."""
    n = A.size
    parent = np.arange(n, dtype=np.int32)
    for a, b in pairs:
        ra, rb = int(a), int(b)
        while parent[ra] != ra:
            ra = parent[ra]
        while parent[rb] != rb:
            rb = parent[rb]
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    if A.sig.max_arity <= 2:
        arities, offsets, flat = A.flat()
        K.congruence_close(n, arities, offsets, flat, parent)
    else:
        K.IMPLS["congruence_close"]["python"](
            n, *[x for x in A.flat()], parent)
    return Congruence(A, parent, check=False)


def principal_congruence(A, a, b):
    """The least congruence identifying a and b."""
    return congruence_generated_by(A, [(a, b)])


class CongruenceLattice:
    """An explicit finite congruence lattice, closed under meet and join,
    listed identity-first (finer congruences before coarser ones)."""

    __slots__ = ("algebra", "congruences")

    def __init__(self, algebra, congruences):
        uniq = {}
        for c in congruences:
            uniq.setdefault(c.key(), c)
        items = sorted(uniq.values(), key=lambda c: (-c.num_blocks, c.key()))
        self.algebra = algebra
        self.congruences = tuple(items)

    def __len__(self):
        return len(self.congruences)

    def __iter__(self):
        return iter(self.congruences)

    def __getitem__(self, i):
        return self.congruences[i]

    @property
    def has_identity(self):
        return any(c.is_identity for c in self.congruences)

    def proper(self):
        return [c for c in self.congruences if not c.is_total]

    def strictly_above_identity(self):
        return [c for c in self.congruences if not c.is_identity]


def all_congruences(A, guards=DEFAULT_GUARDS):
    """The full congruence lattice: all principal congruences, closed
    under join (meet-closure is automatic for a finite closure system that
    contains the principals and joins: we close under meet as well for
    safety, both closures are cheap here)."""
    n = A.size
    if n > guards.congruence_enum:
        raise GuardExceeded(
            f"congruence lattice on {n} elements exceeds the guard "
            f"({guards.congruence_enum})")
    found = {identity_congruence(A).key(): identity_congruence(A)}
    work = []
    for a in range(n):
        for b in range(a + 1, n):
            c = principal_congruence(A, a, b)
            if c.key() not in found:
                found[c.key()] = c
                work.append(c)
    # close under join
    while work:
        c = work.pop()
        for other in list(found.values()):
            j = c.join(other)
            if j.key() not in found:
                found[j.key()] = j
                work.append(j)
    return CongruenceLattice(A, found.values())


def relative_congruences(A, gens, guards=DEFAULT_GUARDS):
    """The lattice of congruences θ with A/θ in ISP(gens): exactly the
    meets of kernels of homomorphisms from A into the generators, plus the
    total relation.  The identity belongs iff the homomorphisms separate
    the points of A."""
    kernels = {}
    for G in gens:
        for h in enumerate_homs(A, G, guards=guards):
            c = Congruence(A, h.kernel_labels(), check=False)
            kernels.setdefault(c.key(), c)
    found = {total_congruence(A).key(): total_congruence(A)}
    found.update(kernels)
    work = list(kernels.values())
    while work:
        c = work.pop()
        for other in list(found.values()):
            m = c.meet(other)
            if m.key() not in found:
                found[m.key()] = m
                work.append(m)
    return CongruenceLattice(A, found.values())


class SiStatus(enum.Enum):
    SIMPLE = "simple"
    SI = "subdirectly-irreducible"
    FSI = "finitely-subdirectly-irreducible"
    NONE = "none"


def si_status(A, gens=None, guards=DEFAULT_GUARDS):
    """Classify A in the absolute lattice (gens=None) or the lattice
    relative to Q(gens).

    Simple: the identity is a co-atom.  SI: the meet of all congruences
    strictly above the identity is still strictly above it (the finite
    reading of complete meet-irreducibility).  FSI: no two congruences
    strictly above the identity meet to it.  Trivial algebras: NONE.
    """
    if A.is_trivial:
        return SiStatus.NONE
    if gens is None:
        lattice = all_congruences(A, guards)
    else:
        lattice = relative_congruences(A, gens, guards)
        if not lattice.has_identity:
            raise ValueError("algebra is not in the quasivariety generated "
                             "by the given algebras")
    above = lattice.strictly_above_identity()
    if len(above) == 1:  # only the total relation
        return SiStatus.SIMPLE
    monolith = above[0]
    for c in above[1:]:
        monolith = monolith.meet(c)
    if not monolith.is_identity:
        return SiStatus.SI
    for i in range(len(above)):
        for j in range(i + 1, len(above)):
            if above[i].meet(above[j]).is_identity:
                return SiStatus.NONE
    return SiStatus.FSI


def relatively_simple_image(A, gens, guards=DEFAULT_GUARDS):
    """A/θ for the canonically least maximal proper relative congruence θ.

    Requires A nontrivial and A in ISP(gens)."""
    if A.is_trivial:
        raise ValueError("trivial algebras have no relatively simple image")
    ok, pair = separates(A, gens)
    if not ok:
        raise ValueError(f"algebra is not in the quasivariety: pair {pair} "
                         "cannot be separated")
    lattice = relative_congruences(A, gens, guards)
    proper = lattice.proper()
    maximal = [c for c in proper
               if not any(c is not d and c.leq(d) for d in proper)]
    theta = min(maximal, key=lambda c: (-c.num_blocks, c.key()))
    q, proj = quotient(A, theta.labels)
    return q, theta, proj
