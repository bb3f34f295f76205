"""Hot inner loops over flat operation tables.

Each kernel exists twice: a loop version compiled with numba's @njit and a
pure-numpy/python fallback.  Selection happens once at import time: set
``QUASIVAR_NUMBA=0`` in the environment to force the fallback path (numba
missing has the same effect).  ``benchmarks/bench_kernels.py`` compares the
two paths on representative workloads.

Flat table layout: the operations of a signature, in signature order, are
concatenated into one int32 array; an arity-k table over n elements
occupies n**k consecutive entries in row-major order (a constant is a
single entry).  Arities above 2 are handled by the callers in plain
Python; no shipped signature uses them.
"""

import os

import numpy as np


def _numba_requested():
    flag = os.environ.get("QUASIVAR_NUMBA", "").strip().lower()
    if flag in ("0", "false", "off", "no"):
        return False
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


NUMBA_ENABLED = _numba_requested()

if NUMBA_ENABLED:
    from numba import njit
else:  # pragma: no cover - exercised via QUASIVAR_NUMBA=0 runs
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


# ---------------------------------------------------------------------------
# subuniverse closure


def _close_members_loops(n, arities, offsets, flat, member, bound):
    """Close `member` under all (arity <= 2) operations, in place.

    Returns the final member count; stops early once it exceeds `bound`.
    """
    count = 0
    for i in range(n):
        if member[i]:
            count += 1
    changed = True
    while changed:
        changed = False
        for o in range(len(arities)):
            ar = arities[o]
            base = offsets[o]
            if ar == 0:
                r = flat[base]
                if not member[r]:
                    member[r] = True
                    count += 1
                    changed = True
            elif ar == 1:
                for i in range(n):
                    if member[i]:
                        r = flat[base + i]
                        if not member[r]:
                            member[r] = True
                            count += 1
                            changed = True
            elif ar == 2:
                for i in range(n):
                    if member[i]:
                        row = base + i * n
                        for j in range(n):
                            if member[j]:
                                r = flat[row + j]
                                if not member[r]:
                                    member[r] = True
                                    count += 1
                                    changed = True
            if count > bound:
                return count
    return count


def _close_members_numpy(n, arities, offsets, flat, member, bound):
    count = int(member.sum())
    changed = True
    while changed:
        changed = False
        for o in range(len(arities)):
            ar = int(arities[o])
            base = int(offsets[o])
            if ar == 0:
                hits = flat[base:base + 1]
            elif ar == 1:
                table = flat[base:base + n]
                hits = table[member]
            else:
                table = flat[base:base + n * n].reshape(n, n)
                idx = np.flatnonzero(member)
                hits = table[np.ix_(idx, idx)].ravel()
            fresh = hits[~member[hits]]
            if fresh.size:
                member[fresh] = True
                count = int(member.sum())
                changed = True
            if count > bound:
                return count
    return count


# ---------------------------------------------------------------------------
# partial-homomorphism propagation


def _propagate_map_loops(nA, nB, arities, offA, flatA, offB, flatB,
                         mapping, injective, has_allowed, allowed):
    """Propagate forced images of a partial map A -> B (-1 = undefined).

    Returns 0 when consistent, 1 on contradiction.  Mutates `mapping`.
    When every generator of A is defined the result is total and fully
    verified against all operation tables.
    """
    used = np.full(nB, -1, np.int32)
    for i in range(nA):
        m = mapping[i]
        if m >= 0:
            if has_allowed and not allowed[i, m]:
                return 1
            if injective:
                if used[m] >= 0 and used[m] != i:
                    return 1
                used[m] = i
    changed = True
    while changed:
        changed = False
        for o in range(len(arities)):
            ar = arities[o]
            baseA = offA[o]
            baseB = offB[o]
            if ar == 0:
                r = flatA[baseA]
                t = flatB[baseB]
                cur = mapping[r]
                if cur < 0:
                    if has_allowed and not allowed[r, t]:
                        return 1
                    if injective:
                        if used[t] >= 0:
                            return 1
                        used[t] = r
                    mapping[r] = t
                    changed = True
                elif cur != t:
                    return 1
            elif ar == 1:
                for i in range(nA):
                    mi = mapping[i]
                    if mi < 0:
                        continue
                    r = flatA[baseA + i]
                    t = flatB[baseB + mi]
                    cur = mapping[r]
                    if cur < 0:
                        if has_allowed and not allowed[r, t]:
                            return 1
                        if injective:
                            if used[t] >= 0:
                                return 1
                            used[t] = r
                        mapping[r] = t
                        changed = True
                    elif cur != t:
                        return 1
            elif ar == 2:
                for i in range(nA):
                    mi = mapping[i]
                    if mi < 0:
                        continue
                    rowA = baseA + i * nA
                    rowB = baseB + mi * nB
                    for j in range(nA):
                        mj = mapping[j]
                        if mj < 0:
                            continue
                        r = flatA[rowA + j]
                        t = flatB[rowB + mj]
                        cur = mapping[r]
                        if cur < 0:
                            if has_allowed and not allowed[r, t]:
                                return 1
                            if injective:
                                if used[t] >= 0:
                                    return 1
                                used[t] = r
                            mapping[r] = t
                            changed = True
                        elif cur != t:
                            return 1
    return 0


def _propagate_map_numpy(nA, nB, arities, offA, flatA, offB, flatB,
                         mapping, injective, has_allowed, allowed):
    if has_allowed:
        defined = np.flatnonzero(mapping >= 0)
        if defined.size and not allowed[defined, mapping[defined]].all():
            return 1
    changed = True
    while changed:
        changed = False
        if injective:
            imgs = mapping[mapping >= 0]
            if np.unique(imgs).size != imgs.size:
                return 1
        for o in range(len(arities)):
            ar = int(arities[o])
            baseA = int(offA[o])
            baseB = int(offB[o])
            if ar == 0:
                rs = flatA[baseA:baseA + 1]
                ts = flatB[baseB:baseB + 1]
            elif ar == 1:
                idx = np.flatnonzero(mapping >= 0)
                if not idx.size:
                    continue
                rs = flatA[baseA:baseA + nA][idx]
                ts = flatB[baseB:baseB + nB][mapping[idx]]
            else:
                idx = np.flatnonzero(mapping >= 0)
                if not idx.size:
                    continue
                tabA = flatA[baseA:baseA + nA * nA].reshape(nA, nA)
                tabB = flatB[baseB:baseB + nB * nB].reshape(nB, nB)
                rs = tabA[np.ix_(idx, idx)].ravel()
                ts = tabB[np.ix_(mapping[idx], mapping[idx])].ravel()
            cur = mapping[rs]
            if ((cur >= 0) & (cur != ts)).any():
                return 1
            fresh = cur < 0
            if fresh.any():
                rs_f, ts_f = rs[fresh], ts[fresh]
                order = np.argsort(rs_f, kind="stable")
                rs_f, ts_f = rs_f[order], ts_f[order]
                same = rs_f[1:] == rs_f[:-1]
                if (same & (ts_f[1:] != ts_f[:-1])).any():
                    return 1
                if has_allowed and not allowed[rs_f, ts_f].all():
                    return 1
                mapping[rs_f] = ts_f
                changed = True
    if injective:
        imgs = mapping[mapping >= 0]
        if np.unique(imgs).size != imgs.size:
            return 1
    return 0


# ---------------------------------------------------------------------------
# congruence generation (union-find closed under operation compatibility)


def _congruence_close_loops(n, arities, offsets, flat, parent):
    """Close the union-find array `parent` into a congruence, in place."""
    qa = np.empty(2 * n + 2, np.int32)
    qb = np.empty(2 * n + 2, np.int32)
    head = 0
    tail = 0
    # normalize and seed the queue with the pre-merged pairs
    for x in range(n):
        root = x
        while parent[root] != root:
            root = parent[root]
        if root != x:
            qa[tail] = x
            qb[tail] = root
            tail += 1
            while parent[x] != x:
                nxt = parent[x]
                parent[x] = root
                x = nxt
    while head < tail:
        a = qa[head]
        b = qb[head]
        head += 1
        for o in range(len(arities)):
            ar = arities[o]
            base = offsets[o]
            if ar == 1:
                u = flat[base + a]
                v = flat[base + b]
                ru = u
                while parent[ru] != ru:
                    ru = parent[ru]
                rv = v
                while parent[rv] != rv:
                    rv = parent[rv]
                if ru != rv:
                    parent[rv] = ru
                    if tail >= qa.size:
                        qa2 = np.empty(qa.size * 2, np.int32)
                        qb2 = np.empty(qa.size * 2, np.int32)
                        qa2[:tail] = qa[:tail]
                        qb2[:tail] = qb[:tail]
                        qa = qa2
                        qb = qb2
                    qa[tail] = ru
                    qb[tail] = rv
                    tail += 1
            elif ar == 2:
                rowa = base + a * n
                rowb = base + b * n
                for z in range(n):
                    for k in range(2):
                        if k == 0:
                            u = flat[rowa + z]
                            v = flat[rowb + z]
                        else:
                            u = flat[base + z * n + a]
                            v = flat[base + z * n + b]
                        ru = u
                        while parent[ru] != ru:
                            ru = parent[ru]
                        rv = v
                        while parent[rv] != rv:
                            rv = parent[rv]
                        if ru != rv:
                            parent[rv] = ru
                            if tail >= qa.size:
                                qa2 = np.empty(qa.size * 2, np.int32)
                                qb2 = np.empty(qa.size * 2, np.int32)
                                qa2[:tail] = qa[:tail]
                                qb2[:tail] = qb[:tail]
                                qa = qa2
                                qb = qb2
                            qa[tail] = ru
                            qb[tail] = rv
                            tail += 1
    for x in range(n):
        root = x
        while parent[root] != root:
            root = parent[root]
        parent[x] = root
    return 0


def _congruence_close_python(n, arities, offsets, flat, parent):
    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != x:
            parent[x], x = root, parent[x]
        return root

    queue = []
    for x in range(n):
        r = find(x)
        if r != x:
            queue.append((x, r))

    def unite(u, v):
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[rv] = ru
            queue.append((ru, rv))

    while queue:
        a, b = queue.pop()
        for o in range(len(arities)):
            ar = int(arities[o])
            base = int(offsets[o])
            if ar == 1:
                unite(flat[base + a], flat[base + b])
            elif ar == 2:
                rowa, rowb = base + a * n, base + b * n
                for z in range(n):
                    unite(flat[rowa + z], flat[rowb + z])
                    unite(flat[base + z * n + a], flat[base + z * n + b])
    for x in range(n):
        parent[x] = find(x)
    return 0


if NUMBA_ENABLED:
    close_members = njit(cache=True)(_close_members_loops)
    propagate_map = njit(cache=True)(_propagate_map_loops)
    congruence_close = njit(cache=True)(_congruence_close_loops)
else:
    close_members = _close_members_numpy
    propagate_map = _propagate_map_numpy
    congruence_close = _congruence_close_python

# both paths, importable for the benchmark and the equivalence tests
IMPLS = {
    "close_members": {"loops": _close_members_loops, "numpy": _close_members_numpy},
    "propagate_map": {"loops": _propagate_map_loops, "numpy": _propagate_map_numpy},
    "congruence_close": {"loops": _congruence_close_loops, "python": _congruence_close_python},
}
