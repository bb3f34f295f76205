"""Finite signatures, operation-table algebras, terms, and the basic
constructions everything else builds on: products, subalgebras, quotients,
and canonical isomorphism testing.

Elements are dense integer indices 0..n-1; optional names are display
metadata only.  All values are immutable after construction, so they are
safe to share between threads.  Ties are always broken toward the
lexicographically least candidate, which keeps every reported witness
reproducible.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .config import DEFAULT_GUARDS, Guards
from .errors import GuardExceeded, SignatureMismatch


@dataclass(frozen=True)
class Signature:
    """An ordered list of (name, arity) pairs; the order is canonical and
    used by every serialization and search."""

    ops: tuple

    def __post_init__(self):
        ops = tuple((str(n), int(a)) for n, a in self.ops)
        object.__setattr__(self, "ops", ops)
        names = [n for n, _ in ops]
        if len(set(names)) != len(names):
            raise ValueError("operation names must be pairwise distinct")
        if any(a < 0 for _, a in ops):
            raise ValueError("arities must be non-negative")

    def names(self):
        return tuple(n for n, _ in self.ops)

    def arity(self, name):
        for n, a in self.ops:
            if n == name:
                return a
        raise KeyError(f"unknown operation {name!r}")

    def constants(self):
        return tuple(n for n, a in self.ops if a == 0)

    @property
    def has_constant(self):
        return any(a == 0 for _, a in self.ops)

    @property
    def max_arity(self):
        return max((a for _, a in self.ops), default=0)

    def __str__(self):
        return ", ".join(f"{n}/{a}" for n, a in self.ops)


@dataclass(frozen=True)
class Term:
    """A term: either a variable or an operation applied to subterms."""

    head: str
    args: tuple = ()
    is_var: bool = False

    @staticmethod
    def var(name):
        return Term(name, (), True)

    @staticmethod
    def apply(op, *args):
        return Term(op, tuple(args), False)

    def variables(self):
        if self.is_var:
            return (self.head,)
        seen, out = set(), []
        stack = [self]
        while stack:
            t = stack.pop()
            if t.is_var:
                if t.head not in seen:
                    seen.add(t.head)
                    out.append(t.head)
            else:
                stack.extend(reversed(t.args))
        return tuple(sorted(out))

    def __str__(self):
        if self.is_var:
            return self.head
        if not self.args:
            return self.head
        return f"{self.head}({', '.join(map(str, self.args))})"


class FiniteAlgebra:
    """A finite algebra given by total operation tables over {0..n-1}."""

    __slots__ = ("sig", "size", "tables", "names", "label", "factors",
                 "_flat", "_bytes", "_colors", "_canon", "_gens", "_sub_cache")

    def __init__(self, sig, size, tables, names=None, label=None, factors=None):
        if size < 1:
            raise ValueError("algebras are non-empty: size must be >= 1")
        self.sig = sig
        self.size = int(size)
        coerced = {}
        for name, arity in sig.ops:
            if name not in tables:
                raise ValueError(f"missing table for operation {name!r}")
            arr = np.asarray(tables[name], dtype=np.int32)
            want = (size,) * arity
            if arr.shape != want:
                raise ValueError(
                    f"table for {name!r} has shape {arr.shape}, expected {want}")
            if arr.size and (arr.min() < 0 or arr.max() >= size):
                raise ValueError(f"table for {name!r} has out-of-range entries")
            arr.setflags(write=False)
            coerced[name] = arr
        extra = set(tables) - set(sig.names())
        if extra:
            raise ValueError(f"tables for unknown operations: {sorted(extra)}")
        self.tables = coerced
        self.names = tuple(names) if names is not None else None
        if self.names is not None and len(self.names) != size:
            raise ValueError("names must match the carrier size")
        self.label = label
        self.factors = tuple(factors) if factors else None
        self._flat = None
        self._bytes = None
        self._colors = None
        self._canon = None
        self._gens = None
        self._sub_cache = None

    # -- basic queries ------------------------------------------------

    def op(self, name):
        return self.tables[name]

    def constant(self, name):
        if self.sig.arity(name) != 0:
            raise ValueError(f"{name!r} is not a constant")
        return int(self.tables[name])

    def apply(self, name, *args):
        arity = self.sig.arity(name)
        if len(args) != arity:
            raise ValueError(f"{name!r} expects {arity} arguments")
        t = self.tables[name]
        return int(t[args]) if arity else int(t)

    @property
    def is_trivial(self):
        return self.size == 1

    def element_name(self, i):
        return self.names[i] if self.names else str(i)

    def describe(self):
        return self.label or f"<algebra n={self.size} sig=({self.sig})>"

    def relabel(self, label):
        out = FiniteAlgebra(self.sig, self.size, self.tables, self.names,
                            label, self.factors)
        return out

    # -- caches ---------------------------------------------------------

    def flat(self):
        """(arities, offsets, flat) concatenation of all tables, sig order."""
        if self._flat is None:
            arities, offsets, chunks = [], [], []
            pos = 0
            for name, arity in self.sig.ops:
                arities.append(arity)
                offsets.append(pos)
                chunk = self.tables[name].ravel()
                if arity == 0:
                    chunk = np.asarray([int(self.tables[name])], dtype=np.int32)
                chunks.append(chunk.astype(np.int32, copy=False))
                pos += chunk.size
            self._flat = (np.asarray(arities, dtype=np.int64),
                          np.asarray(offsets, dtype=np.int64),
                          np.concatenate(chunks) if chunks else np.zeros(0, np.int32))
        return self._flat

    def table_bytes(self):
        if self._bytes is None:
            parts = [str(self.sig).encode(), self.size.to_bytes(4, "big")]
            for name, _ in self.sig.ops:
                parts.append(np.ascontiguousarray(self.tables[name]).tobytes())
            self._bytes = b"".join(parts)
        return self._bytes

    def __eq__(self, other):
        return (isinstance(other, FiniteAlgebra)
                and self.sig == other.sig
                and self.table_bytes() == other.table_bytes())

    def __hash__(self):
        return hash((self.sig, self.table_bytes()))

    def __repr__(self):
        return f"FiniteAlgebra({self.describe()!r}, size={self.size})"


# ---------------------------------------------------------------------------
# term evaluation


def eval_term(term, algebra, assignment):
    """Evaluate `term` in `algebra` under a total variable assignment."""
    if term.is_var:
        try:
            return int(assignment[term.head])
        except KeyError:
            raise ValueError(f"unassigned variable {term.head!r}") from None
    arity = algebra.sig.arity(term.head)
    if arity != len(term.args):
        raise ValueError(f"arity mismatch for {term.head!r}")
    args = tuple(eval_term(a, algebra, assignment) for a in term.args)
    return algebra.apply(term.head, *args)


def eval_term_columns(term, algebra, columns):
    """Vectorized evaluation: `columns` maps each variable to an int array;
    returns the array of values, one per assignment row."""
    if term.is_var:
        return columns[term.head]
    arity = algebra.sig.arity(term.head)
    if arity != len(term.args):
        raise ValueError(f"arity mismatch for {term.head!r}")
    tab = algebra.tables[term.head]
    if arity == 0:
        some = next(iter(columns.values()), None)
        n_rows = len(some) if some is not None else 1
        return np.full(n_rows, int(tab), dtype=np.int32)
    args = [eval_term_columns(a, algebra, columns) for a in term.args]
    if arity == 1:
        return tab[args[0]]
    if arity == 2:
        return tab[args[0], args[1]]
    return tab[tuple(args)]


# ---------------------------------------------------------------------------
# closure helpers


def close_subset(algebra, seed, bound=None):
    """Least subuniverse containing `seed` and all constants, as a bool mask.

    `bound` aborts the closure early; the returned mask is then partial and
    only its popcount > bound matters to the caller.
    """
    n = algebra.size
    member = np.zeros(n, dtype=np.bool_)
    for s in seed:
        member[int(s)] = True
    if algebra.sig.max_arity > 2:
        return _close_subset_generic(algebra, member, bound)
    arities, offsets, flat = algebra.flat()
    K.close_members(n, arities, offsets, flat, member, n if bound is None else bound)
    return member


def _close_subset_generic(algebra, member, bound):
    n = algebra.size
    changed = True
    while changed:
        changed = False
        for name, arity in algebra.sig.ops:
            tab = algebra.tables[name]
            if arity == 0:
                hits = [int(tab)]
            else:
                idx = np.flatnonzero(member)
                hits = tab[np.ix_(*([idx] * arity))].ravel()
            for r in np.unique(hits):
                if not member[r]:
                    member[r] = True
                    changed = True
        if bound is not None and member.sum() > bound:
            return member
    return member


def subalgebra_generated(algebra, seed):
    """The subalgebra generated by `seed` (plus all constants), together
    with the inclusion map into the parent (an index array)."""
    seed = sorted(int(s) for s in seed)
    if any(s < 0 or s >= algebra.size for s in seed):
        raise ValueError("seed contains out-of-range elements")
    if not seed and not algebra.sig.has_constant:
        raise ValueError("empty seed needs a constant in the signature: "
                         "no subalgebra exists on the empty set")
    member = close_subset(algebra, seed)
    indices = np.flatnonzero(member).astype(np.int32)
    return subalgebra_on(algebra, indices), indices


def subalgebra_on(algebra, indices):
    """The subalgebra on the given closed element set (not re-checked)."""
    indices = np.asarray(sorted(int(i) for i in indices), dtype=np.int32)
    n = len(indices)
    back = np.full(algebra.size, -1, dtype=np.int32)
    back[indices] = np.arange(n, dtype=np.int32)
    tables = {}
    for name, arity in algebra.sig.ops:
        tab = algebra.tables[name]
        if arity == 0:
            tables[name] = np.asarray(back[int(tab)])
            if back[int(tab)] < 0:
                raise ValueError("element set is not closed (constant missing)")
        else:
            sub = back[tab[np.ix_(*([indices] * arity))]]
            if (sub < 0).any():
                raise ValueError("element set is not closed under "
                                 f"operation {name!r}")
            tables[name] = sub
    names = [algebra.element_name(int(i)) for i in indices] if algebra.names else None
    label = None
    if algebra.label:
        if n == algebra.size:
            label = algebra.label
        else:
            label = f"{algebra.label}|{{{','.join(str(int(i)) for i in indices)}}}"
    return FiniteAlgebra(algebra.sig, n, tables, names, label)


def subuniverses(algebra, guards=DEFAULT_GUARDS, max_size=None):
    """All subuniverses (as sorted index tuples), smallest first.

    Every subuniverse is reachable by adding one generator at a time, so a
    breadth-first growth over closures enumerates them all.  `max_size`
    restricts the output (and prunes the growth) to small subuniverses.
    """
    n = algebra.size
    if max_size is None and n > guards.subalgebra_enum:
        raise GuardExceeded(
            f"subuniverse enumeration on {n} elements exceeds the guard "
            f"({guards.subalgebra_enum}); raise Guards.subalgebra_enum to force")
    cap = n if max_size is None else min(max_size, n)
    found = {}
    frontier = []

    def add(mask):
        key = mask.tobytes()
        if key not in found:
            found[key] = mask
            frontier.append(mask)

    if algebra.sig.has_constant:
        base = close_subset(algebra, [], bound=cap)
        if base.sum() <= cap:
            add(base)
    else:
        for a in range(n):
            m = close_subset(algebra, [a], bound=cap)
            if m.sum() <= cap:
                add(m)
    while frontier:
        current = frontier.pop()
        idx = np.flatnonzero(current)
        for a in range(n):
            if current[a]:
                continue
            m = close_subset(algebra, list(idx) + [a], bound=cap)
            if m.sum() <= cap:
                add(m)
    result = [tuple(int(i) for i in np.flatnonzero(m)) for m in found.values()]
    result.sort(key=lambda t: (len(t), t))
    return result


def enumerate_subalgebras(algebra, up_to_iso=True, guards=DEFAULT_GUARDS):
    """All subalgebras; one representative per isomorphism class if asked.

    Deterministic order: by size, then canonical form.
    """
    subs = [subalgebra_on(algebra, idx) for idx in subuniverses(algebra, guards)]
    if up_to_iso:
        subs = dedupe_up_to_iso(subs, guards)
    else:
        subs.sort(key=lambda a: (a.size, a.table_bytes()))
    return subs


# ---------------------------------------------------------------------------
# products and quotients


def trivial_algebra(sig, label="trivial"):
    tables = {}
    for name, arity in sig.ops:
        tables[name] = np.zeros((1,) * arity, dtype=np.int32)
    return FiniteAlgebra(sig, 1, tables, label=label)


def direct_product(algebras, sig=None, guards=DEFAULT_GUARDS):
    """Direct product with componentwise tables.

    The empty product is the one-element algebra of the signature (which
    must then be supplied).  Element order is lexicographic in factor
    order.  The factor list is kept as metadata so homomorphism searches
    into a product can work factor by factor.
    """
    algebras = list(algebras)
    if not algebras:
        if sig is None:
            raise ValueError("empty product needs an explicit signature")
        return trivial_algebra(sig, label="empty-product")
    sig0 = algebras[0].sig
    if any(a.sig != sig0 for a in algebras):
        raise SignatureMismatch("product factors must share one signature")
    sizes = [a.size for a in algebras]
    total = 1
    for s in sizes:
        total *= s
        if total > guards.carrier:
            raise GuardExceeded(
                f"product carrier would exceed {guards.carrier} elements")
    digits = np.stack(np.unravel_index(np.arange(total), sizes), axis=0)
    strides = np.ones(len(sizes), dtype=np.int64)
    for i in range(len(sizes) - 2, -1, -1):
        strides[i] = strides[i + 1] * sizes[i + 1]
    tables = {}
    for name, arity in sig0.ops:
        if arity == 0:
            idx = sum(int(a.tables[name]) * int(st)
                      for a, st in zip(algebras, strides))
            tables[name] = np.asarray(idx, dtype=np.int32)
        elif arity == 1:
            acc = np.zeros(total, dtype=np.int64)
            for f, a in enumerate(algebras):
                acc += a.tables[name][digits[f]].astype(np.int64) * strides[f]
            tables[name] = acc.astype(np.int32)
        elif arity == 2:
            acc = np.zeros((total, total), dtype=np.int64)
            for f, a in enumerate(algebras):
                d = digits[f]
                acc += a.tables[name][np.ix_(d, d)].astype(np.int64) * strides[f]
            tables[name] = acc.astype(np.int32)
        else:
            shape = (total,) * arity
            acc = np.zeros(shape, dtype=np.int64)
            for f, a in enumerate(algebras):
                d = digits[f]
                acc += a.tables[name][np.ix_(*([d] * arity))].astype(np.int64) * strides[f]
            tables[name] = acc.astype(np.int32)
    names = None
    if total <= 4096 and all(a.names for a in algebras):
        names = ["(" + ",".join(a.element_name(int(d[i])) for a, d in
                 zip(algebras, digits)) + ")" for i in range(total)]
    label = " x ".join(a.describe() for a in algebras)
    return FiniteAlgebra(sig0, total, tables, names, label, factors=algebras)


def product_projection(product, factor_index):
    """The projection map of a product built by `direct_product`."""
    if not product.factors:
        raise ValueError("algebra does not carry product provenance")
    sizes = [a.size for a in product.factors]
    digits = np.stack(np.unravel_index(np.arange(product.size), sizes), axis=0)
    return digits[factor_index].astype(np.int32)


def quotient(algebra, labels):
    """Quotient by a compatible partition (labels normalized by least
    member).  Returns (quotient algebra, projection array).

    Raises ValueError when the partition is not compatible with some
    operation.
    """
    labels = normalize_labels(np.asarray(labels, dtype=np.int32))
    n_blocks = int(labels.max()) + 1 if len(labels) else 0
    reps = np.zeros(n_blocks, dtype=np.int32)
    seen = np.zeros(n_blocks, dtype=bool)
    for i, b in enumerate(labels):
        if not seen[b]:
            seen[b] = True
            reps[b] = i
    tables = {}
    for name, arity in algebra.sig.ops:
        tab = algebra.tables[name]
        if arity == 0:
            tables[name] = np.asarray(labels[int(tab)])
        else:
            sub = labels[tab[np.ix_(*([reps] * arity))]]
            full = labels[tab]
            expect = sub[tuple(labels[g] for g in np.indices(tab.shape))]
            if not (full == expect).all():
                raise ValueError(f"partition is not compatible with {name!r}")
            tables[name] = sub
    names = None
    if algebra.names:
        names = []
        for b in range(n_blocks):
            block = [algebra.element_name(i) for i in np.flatnonzero(labels == b)]
            names.append("{" + ",".join(block) + "}")
    label = f"{algebra.describe()}/~{n_blocks}"
    return FiniteAlgebra(algebra.sig, n_blocks, tables, names, label), labels


def normalize_labels(labels):
    """Relabel blocks in order of least member (block 0 contains element 0)."""
    labels = np.asarray(labels, dtype=np.int32)
    remap = {}
    out = np.empty_like(labels)
    for i, b in enumerate(labels):
        b = int(b)
        if b not in remap:
            remap[b] = len(remap)
        out[i] = remap[b]
    return out


# ---------------------------------------------------------------------------
# generators


def find_generators(algebra):
    """A small generating set, found greedily (largest closure gain first,
    least element on ties).  Cached on the algebra."""
    if algebra._gens is not None:
        return algebra._gens
    n = algebra.size
    chosen = []
    if algebra.sig.has_constant:
        member = close_subset(algebra, [])
    else:
        member = np.zeros(n, dtype=bool)
    while member.sum() < n:
        best_gain, best_a, best_mask = -1, None, None
        missing = np.flatnonzero(~member)
        for a in missing:
            m = close_subset(algebra, list(np.flatnonzero(member)) + [int(a)])
            gain = int(m.sum())
            if gain > best_gain:
                best_gain, best_a, best_mask = gain, int(a), m
            if gain == n:
                break
        chosen.append(best_a)
        member = best_mask
    algebra._gens = tuple(chosen)
    return algebra._gens


# ---------------------------------------------------------------------------
# isomorphism and canonical forms


def _initial_invariants(algebra):
    n = algebra.size
    rows = []
    for name, arity in algebra.sig.ops:
        tab = algebra.tables[name]
        if arity == 0:
            col = np.zeros(n, dtype=np.int64)
            col[int(tab)] = 1
            rows.append(col)
        elif arity == 1:
            rows.append((tab == np.arange(n)).astype(np.int64))
            counts = np.zeros(n, dtype=np.int64)
            np.add.at(counts, tab, 1)
            rows.append(counts)
        elif arity == 2:
            diag = tab[np.arange(n), np.arange(n)]
            rows.append((diag == np.arange(n)).astype(np.int64))
            counts = np.zeros(n, dtype=np.int64)
            np.add.at(counts, tab.ravel(), 1)
            rows.append(counts)
        else:
            counts = np.zeros(n, dtype=np.int64)
            np.add.at(counts, tab.ravel(), 1)
            rows.append(counts)
    return list(zip(*[r.tolist() for r in rows])) if rows else [()] * n


def color_refinement(algebra):
    """Canonical stable coloring: color ids are derived from sorted
    structural signatures, so they agree across isomorphic algebras."""
    if algebra._colors is not None:
        return algebra._colors
    n = algebra.size
    sigs = _initial_invariants(algebra)
    palette = {s: i for i, s in enumerate(sorted(set(sigs)))}
    colors = [palette[s] for s in sigs]
    while True:
        new_sigs = []
        for x in range(n):
            parts = [colors[x]]
            for name, arity in algebra.sig.ops:
                tab = algebra.tables[name]
                if arity == 1:
                    parts.append(colors[int(tab[x])])
                elif arity == 2:
                    row = tuple(sorted((colors[y], colors[int(tab[x, y])],
                                        colors[int(tab[y, x])]) for y in range(n)))
                    parts.append(row)
                elif arity > 2:
                    parts.append(())
            new_sigs.append(tuple(map(repr, parts)))
        palette = {s: i for i, s in enumerate(sorted(set(new_sigs)))}
        new_colors = [palette[s] for s in new_sigs]
        stable = normalize_labels(np.asarray(new_colors))
        if (stable == normalize_labels(np.asarray(colors))).all():
            colors = new_colors  # ids are canonical; partition stopped refining
            break
        colors = new_colors
    algebra._colors = tuple(colors)
    return algebra._colors


def _permuted_bytes(algebra, perm):
    """Serialized tables after renumbering element i to perm[i]."""
    n = algebra.size
    p = np.asarray(perm, dtype=np.int32)
    parts = []
    for name, arity in algebra.sig.ops:
        tab = algebra.tables[name]
        if arity == 0:
            parts.append(int(p[int(tab)]).to_bytes(4, "big"))
        elif arity == 1:
            out = np.empty(n, dtype=np.int32)
            out[p] = p[tab]
            parts.append(out.tobytes())
        elif arity == 2:
            out = np.empty((n, n), dtype=np.int32)
            out[p[:, None], p[None, :]] = p[tab]
            parts.append(np.ascontiguousarray(out).tobytes())
        else:
            idx = np.argsort(p)
            out = p[tab[np.ix_(*([idx] * arity))]]
            parts.append(np.ascontiguousarray(out).tobytes())
    return b"".join(parts)


def canonical_key(algebra, guards=DEFAULT_GUARDS):
    """Minimal table serialization over all color-respecting renumberings.

    Isomorphic algebras share the key; cached.  The candidate count is the
    product of the color-class factorials, guarded by `canon_perms`.
    """
    if algebra._canon is not None:
        return algebra._canon
    colors = color_refinement(algebra)
    classes = {}
    for x, c in enumerate(colors):
        classes.setdefault(c, []).append(x)
    ordered = [classes[c] for c in sorted(classes)]
    count = 1
    for cls in ordered:
        for k in range(2, len(cls) + 1):
            count *= k
        if count > guards.canon_perms:
            raise GuardExceeded("canonicalization candidate count exceeds the "
                                f"guard ({guards.canon_perms})")
    best = None
    positions = []
    pos = 0
    for cls in ordered:
        positions.append(list(range(pos, pos + len(cls))))
        pos += len(cls)
    for arrangement in itertools.product(*[itertools.permutations(c) for c in ordered]):
        perm = np.empty(algebra.size, dtype=np.int32)
        for cls_elems, cls_pos in zip(arrangement, positions):
            for e, target in zip(cls_elems, cls_pos):
                perm[e] = target
        b = _permuted_bytes(algebra, perm)
        if best is None or b < best:
            best = b
    key = (str(algebra.sig).encode() + algebra.size.to_bytes(4, "big") + best)
    algebra._canon = key
    return key


def are_isomorphic(algebra, other, guards=DEFAULT_GUARDS):
    """A witness bijection (index array) or None.  Deterministic first
    witness; invariant pruning via canonical color refinement."""
    if algebra.sig != other.sig:
        raise SignatureMismatch("isomorphism needs equal signatures")
    if algebra.size != other.size:
        return None
    ca, cb = color_refinement(algebra), color_refinement(other)
    if sorted(ca) != sorted(cb):
        return None
    allowed = np.zeros((algebra.size, other.size), dtype=np.bool_)
    for i, c in enumerate(ca):
        for j, d in enumerate(cb):
            if c == d:
                allowed[i, j] = True
    from .morphisms import _search_maps  # deferred: avoids an import cycle
    maps = _search_maps(algebra, other, injective=True, allowed=allowed, limit=1)
    return maps[0] if maps else None


def dedupe_up_to_iso(algebras, guards=DEFAULT_GUARDS):
    """One representative per isomorphism class, sorted by (size, canonical
    key).  The first occurrence in the input wins as representative."""
    buckets = {}
    for a in algebras:
        try:
            key = (a.size, canonical_key(a, guards))
        except GuardExceeded:
            key = None
        if key is not None:
            if key not in buckets:
                buckets[key] = a
            continue
        # canonicalizer guard tripped: fall back to pairwise tests
        placed = False
        for k, rep in list(buckets.items()):
            if k[0] == a.size and k[1] is None and are_isomorphic(rep, a) is not None:
                placed = True
                break
        if not placed:
            buckets[(a.size, None, len(buckets))] = a
    reps = list(buckets.values())
    reps.sort(key=lambda a: (a.size,
                             a._canon if a._canon is not None else a.table_bytes()))
    return reps
