"""De Morgan and Dunn monoids: axiom checkers, the small catalog (2, S3,
S_{2n+1}, C4, D4, X(E)), the classical facts as testable predicates, the
reflection and X constructions, membership in the varieties M and
N = Ret(·, C4), the PSC and JEP classification of generated varieties,
and the diamond amendment of positive terms.

Signatures are fixed shapes; the residual x -> y of a De Morgan monoid is
the derived term ~(x * ~y) and is expanded at parse/reduct time, never
stored as a table of its own.
"""

from __future__ import annotations

import enum
import itertools

import numpy as np

from .config import DEFAULT_GUARDS
from .congruence import (Congruence, SiStatus, all_congruences,
                         principal_congruence, si_status)
from .deciders import si_members_of_variety, v_membership
from .errors import GuardExceeded, SignatureMismatch
from .kernel import (FiniteAlgebra, Signature, Term, direct_product,
                     enumerate_subalgebras, quotient, subalgebra_generated)
from .morphisms import embedding_exists, is_retract

DMM_SIG = Signature((("fuse", 2), ("meet", 2), ("join", 2), ("neg", 1), ("e", 0)))
DUNN_SIG = Signature((("fuse", 2), ("imp", 2), ("meet", 2), ("join", 2), ("e", 0)))
BROUWER_SIG = Signature((("imp", 2), ("meet", 2), ("join", 2), ("e", 0)))
HEYTING_SIG = Signature((("imp", 2), ("meet", 2), ("join", 2), ("e", 0), ("bot", 0)))


# ---------------------------------------------------------------------------
# lattice helpers


def leq_matrix(A):
    """Order from the meet table: x <= y iff x ∧ y = x."""
    meet = A.tables["meet"]
    n = A.size
    return meet == np.arange(n, dtype=np.int32)[:, None]


def lattice_tables_from_leq(leq):
    """Meet and join tables of a finite lattice given by its order matrix.
    Raises ValueError when some pair lacks a greatest lower or least upper
    bound."""
    leq = np.asarray(leq, dtype=bool)
    n = leq.shape[0]
    meet = np.full((n, n), -1, dtype=np.int32)
    join = np.full((n, n), -1, dtype=np.int32)
    for i in range(n):
        for j in range(n):
            lows = np.flatnonzero(leq[:, i] & leq[:, j])
            tops = [k for k in lows if leq[lows, k].all()]
            if len(tops) != 1:
                raise ValueError(f"no greatest lower bound for ({i},{j})")
            meet[i, j] = tops[0]
            highs = np.flatnonzero(leq[i, :] & leq[j, :])
            bots = [k for k in highs if leq[k, highs].all()]
            if len(bots) != 1:
                raise ValueError(f"no least upper bound for ({i},{j})")
            join[i, j] = bots[0]
    return meet, join


def _lattice_failure(A):
    m, j = A.tables["meet"], A.tables["join"]
    n = A.size
    rng = np.arange(n)
    if not (m == m.T).all():
        return "meet not commutative"
    if not (j == j.T).all():
        return "join not commutative"
    if not (m[rng, rng] == rng).all():
        return "meet not idempotent"
    if not (j[rng, rng] == rng).all():
        return "join not idempotent"
    if not (m[m, :] == m[:, m]).all():
        return "meet not associative"
    if not (j[j, :] == j[:, j]).all():
        return "join not associative"
    if not (m[rng[:, None], j] == rng[:, None]).all():
        return "absorption x ^ (x v y) fails"
    if not (j[rng[:, None], m] == rng[:, None]).all():
        return "absorption x v (x ^ y) fails"
    return None


def _distributivity_failure(A):
    m, j = A.tables["meet"], A.tables["join"]
    lhs = m[:, j]                      # x ^ (y v z)
    rhs = j[m[:, :, None], m[:, None, :]]  # (x^y) v (x^z)
    if not (lhs == rhs).all():
        return "distributivity fails"
    return None


def _monoid_failure(A, op="fuse"):
    f = A.tables[op]
    e = A.constant("e")
    n = A.size
    rng = np.arange(n)
    if not (f == f.T).all():
        return "fusion not commutative"
    if not (f[f, :] == f[:, f]).all():
        return "fusion not associative"
    if not (f[e] == rng).all():
        return "e is not a fusion identity"
    return None


def is_demorgan_monoid(A):
    """(True, None) or (False, first failed axiom name)."""
    if A.sig != DMM_SIG:
        raise SignatureMismatch("expected the De Morgan monoid signature "
                                f"({DMM_SIG}), got ({A.sig})")
    for check in (_lattice_failure, _distributivity_failure, _monoid_failure):
        fail = check(A)
        if fail:
            return False, fail
    n = A.size
    rng = np.arange(n)
    leq = leq_matrix(A)
    f, neg = A.tables["fuse"], A.tables["neg"]
    if not leq[rng, f[rng, rng]].all():
        return False, "square-increasing x <= x*x fails"
    if not (neg[neg] == rng).all():
        return False, "involution ~~x = x fails"
    # x*y <= z  iff  x*~z <= ~y
    lhs = leq[f][:, :, :]
    u = f[:, neg]                       # u[x,z] = x * ~z
    rhs = leq[u][:, :, neg].transpose(0, 2, 1)
    if not (lhs == rhs).all():
        return False, "contraposition biconditional fails"
    return True, None


def is_dunn_monoid(A):
    if A.sig != DUNN_SIG:
        raise SignatureMismatch("expected the Dunn monoid signature "
                                f"({DUNN_SIG}), got ({A.sig})")
    for check in (_lattice_failure, _distributivity_failure, _monoid_failure):
        fail = check(A)
        if fail:
            return False, fail
    n = A.size
    rng = np.arange(n)
    leq = leq_matrix(A)
    f, imp = A.tables["fuse"], A.tables["imp"]
    if not leq[rng, f[rng, rng]].all():
        return False, "square-increasing x <= x*x fails"
    # x*y <= z  iff  y <= x -> z
    lhs = leq[f]                        # [x,y,z]
    rhs = leq[:, imp].transpose(1, 0, 2)  # [x,y,z] = leq[y, imp[x,z]]
    if not (lhs == rhs).all():
        return False, "law of residuation fails"
    return True, None


def is_brouwerian(A):
    """Brouwerian algebras in their own signature, or the test whether a
    Dunn monoid is one (fusion collapses to meet, equivalently x <= e)."""
    if A.sig == DUNN_SIG:
        ok, fail = is_dunn_monoid(A)
        if not ok:
            return False, fail
        leq = leq_matrix(A)
        if not leq[:, A.constant("e")].all():
            return False, "e is not the top element (x <= e fails)"
        if not (A.tables["fuse"] == A.tables["meet"]).all():
            return False, "fusion differs from meet"
        return True, None
    if A.sig not in (BROUWER_SIG, HEYTING_SIG):
        raise SignatureMismatch("expected a Brouwerian-shaped signature, "
                                f"got ({A.sig})")
    for check in (_lattice_failure, _distributivity_failure):
        fail = check(A)
        if fail:
            return False, fail
    leq = leq_matrix(A)
    e = A.constant("e")
    if not leq[:, e].all():
        return False, "e is not the top element"
    m, imp = A.tables["meet"], A.tables["imp"]
    lhs = leq[m]
    rhs = leq[:, imp].transpose(1, 0, 2)
    if not (lhs == rhs).all():
        return False, "relative pseudocomplement law fails"
    if A.sig == HEYTING_SIG:
        if not leq[A.constant("bot")].all():
            return False, "bot is not the least element"
    return True, None


# ---------------------------------------------------------------------------
# catalog


def _sugihara(m):
    """The odd Sugihara chain with m = 2n+1 elements, carrier -n..n."""
    if m < 1 or m % 2 == 0:
        raise ValueError("Sugihara chains have odd size")
    n = (m - 1) // 2
    vals = list(range(-n, n + 1))
    idx = {v: i for i, v in enumerate(vals)}
    meet = np.minimum.outer(np.arange(m), np.arange(m))
    join = np.maximum.outer(np.arange(m), np.arange(m))
    neg = np.asarray([idx[-v] for v in vals])
    fuse = np.empty((m, m), dtype=np.int32)
    for a, b in itertools.product(vals, repeat=2):
        if abs(a) != abs(b):
            c = a if abs(a) > abs(b) else b
        else:
            c = min(a, b)
        fuse[idx[a], idx[b]] = idx[c]
    return FiniteAlgebra(DMM_SIG, m,
                         {"fuse": fuse, "meet": meet, "join": join,
                          "neg": neg, "e": np.asarray(idx[0])},
                         names=[str(v) for v in vals], label=f"S{m}")


def _two():
    meet = np.minimum.outer(np.arange(2), np.arange(2))
    join = np.maximum.outer(np.arange(2), np.arange(2))
    return FiniteAlgebra(DMM_SIG, 2,
                         {"fuse": meet, "meet": meet, "join": join,
                          "neg": np.asarray([1, 0]), "e": np.asarray(1)},
                         names=["f", "e"], label="2")


def _chain_c4():
    # bottom ~(f*f) < e < f < f*f
    meet = np.minimum.outer(np.arange(4), np.arange(4))
    join = np.maximum.outer(np.arange(4), np.arange(4))
    fuse = np.asarray([[0, 0, 0, 0],
                       [0, 1, 2, 3],
                       [0, 2, 3, 3],
                       [0, 3, 3, 3]])
    return FiniteAlgebra(DMM_SIG, 4,
                         {"fuse": fuse, "meet": meet, "join": join,
                          "neg": np.asarray([3, 2, 1, 0]), "e": np.asarray(1)},
                         names=["-f2", "e", "f", "f2"], label="C4")


def _diamond_d4():
    # bottom ~(f*f); e and f incomparable; top f*f
    leq = np.asarray([[1, 1, 1, 1],
                      [0, 1, 0, 1],
                      [0, 0, 1, 1],
                      [0, 0, 0, 1]], dtype=bool)
    meet, join = lattice_tables_from_leq(leq)
    fuse = np.asarray([[0, 0, 0, 0],
                       [0, 1, 2, 3],
                       [0, 2, 3, 3],
                       [0, 3, 3, 3]])
    return FiniteAlgebra(DMM_SIG, 4,
                         {"fuse": fuse, "meet": meet, "join": join,
                          "neg": np.asarray([3, 2, 1, 0]), "e": np.asarray(1)},
                         names=["-f2", "e", "f", "f2"], label="D4")


def trivial_demorgan():
    t = np.zeros((1, 1), dtype=np.int32)
    return FiniteAlgebra(DMM_SIG, 1,
                         {"fuse": t, "meet": t, "join": t,
                          "neg": np.zeros(1, dtype=np.int32),
                          "e": np.asarray(0)},
                         names=["e"], label="E")


def trivial_dunn():
    t = np.zeros((1, 1), dtype=np.int32)
    return FiniteAlgebra(DUNN_SIG, 1,
                         {"fuse": t, "imp": t, "meet": t, "join": t,
                          "e": np.asarray(0)},
                         names=["e"], label="E+")


def dunn_reduct(A):
    """The Dunn monoid reduct of a De Morgan monoid: x -> y := ~(x * ~y)."""
    ok, fail = is_demorgan_monoid(A)
    if not ok:
        raise ValueError(f"not a De Morgan monoid: {fail}")
    neg, fuse = A.tables["neg"], A.tables["fuse"]
    imp = neg[fuse[:, neg]]
    return FiniteAlgebra(DUNN_SIG, A.size,
                         {"fuse": fuse, "imp": imp, "meet": A.tables["meet"],
                          "join": A.tables["join"], "e": A.tables["e"]},
                         names=A.names,
                         label=f"{A.describe()}+")


def catalog(name):
    """Catalog algebras by their stable CLI identifiers: `two`, `s1`,
    `s3`, `s5`, ... (any odd chain), `c4`, `d4`, `x-trivial`."""
    key = name.strip().lower()
    if key == "two":
        alg = _two()
    elif key == "c4":
        alg = _chain_c4()
    elif key == "d4":
        alg = _diamond_d4()
    elif key == "x-trivial":
        alg = x_construction(trivial_demorgan()).relabel("X(E)")
    elif key.startswith("s") and key[1:].isdigit():
        alg = _sugihara(int(key[1:]))
    else:
        raise ValueError(f"unknown catalog name {name!r}")
    ok, fail = is_demorgan_monoid(alg)
    if not ok:
        raise AssertionError(f"catalog algebra {name} failed: {fail}")
    return alg


CATALOG_NAMES = ("two", "s3", "s5", "s7", "c4", "d4", "x-trivial")


# ---------------------------------------------------------------------------
# the classical facts, as finite checks


def _strict_lower_bounds(A, x):
    leq = leq_matrix(A)
    return [i for i in range(A.size) if leq[i, x] and i != x]


def _is_idempotent(A):
    rng = np.arange(A.size)
    return bool((A.tables["fuse"][rng, rng] == rng).all())


def _has_nontrivial_idempotent_in_hs(A, guards=DEFAULT_GUARDS):
    for S in enumerate_subalgebras(A, up_to_iso=True, guards=guards):
        for theta in all_congruences(S, guards):
            Q, _ = quotient(S, theta.labels)
            if Q.size > 1 and _is_idempotent(Q):
                return True
    return False


def dmm_facts_suite(A, guards=DEFAULT_GUARDS):
    """The standard facts about a De Morgan monoid, each as a finite
    biconditional check.  Returns an ordered dict fact-name -> bool."""
    ok, fail = is_demorgan_monoid(A)
    if not ok:
        raise ValueError(f"not a De Morgan monoid: {fail}")
    n = A.size
    rng = np.arange(n)
    leq = leq_matrix(A)
    e = A.constant("e")
    f = int(A.tables["neg"][e])
    fuse = A.tables["fuse"]
    f2 = int(fuse[f, f])
    status = si_status(A, None, guards)
    report = {}

    e_is_least = bool(leq[e].all())
    report["nontrivial_iff_e_not_least"] = (n > 1) == (not e_is_least)

    slb = _strict_lower_bounds(A, e)
    report["simple_iff_one_strict_lower_bound_of_e"] = \
        (status == SiStatus.SIMPLE) == (len(slb) == 1)

    join = A.tables["join"]
    join_irr = (not e_is_least) and all(
        e in (x, y) for x in range(n) for y in range(n) if join[x, y] == e)
    report["fsi_iff_e_join_irreducible"] = \
        (status in (SiStatus.SIMPLE, SiStatus.SI, SiStatus.FSI)) == join_irr

    cji = bool(slb) and any(all(leq[o, m] for o in slb) for m in slb)
    report["si_iff_e_completely_join_irreducible"] = \
        (status in (SiStatus.SIMPLE, SiStatus.SI)) == cji

    bottoms = [i for i in range(n) if leq[i].all()]
    absorbs = True
    if bottoms:
        b = bottoms[0]
        absorbs = bool((fuse[b] == b).all())
    report["least_element_absorbs_under_fusion"] = absorbs

    report["sugihara_iff_f_below_e"] = bool(leq[f, e]) == _is_idempotent(A)

    anti = bool(leq[:, f2].all())
    report["anti_idempotent_iff_no_idempotent_in_hs"] = \
        anti == (not _has_nontrivial_idempotent_in_hs(A, guards))

    neg = A.tables["neg"]
    boolean = (bool((fuse == A.tables["meet"]).all())
               and all(leq[A.tables["meet"][x, neg[x]]].all() for x in range(n))
               and all(leq[:, join[x, neg[x]]].all() for x in range(n)))
    report["boolean_iff_e_top"] = bool(leq[:, e].all()) == boolean

    report["f_cubed_equals_f_squared"] = int(fuse[f2, f]) == f2
    return report


# ---------------------------------------------------------------------------
# reflection and the X construction


def reflect(A, check=True):
    """The reflection of a Dunn monoid: adjoin a mirrored copy A' and
    bounds, with a*b' = (a -> b)', a' * b' = top, and ~a = a'.

    Element order: A's elements, then primes in the same order, then
    bottom, then top."""
    ok, fail = is_dunn_monoid(A)
    if not ok:
        raise ValueError(f"not a Dunn monoid: {fail}")
    n = A.size
    N = 2 * n + 2
    BOT, TOP = 2 * n, 2 * n + 1
    leqA = leq_matrix(A)
    leq = np.zeros((N, N), dtype=bool)
    leq[:n, :n] = leqA
    leq[:n, n:2 * n] = True
    leq[n:2 * n, n:2 * n] = leqA.T
    leq[BOT, :] = True
    leq[:, TOP] = True
    leq[np.arange(N), np.arange(N)] = True
    leq[TOP, :TOP] = False
    leq[1:, BOT] = False
    leq[TOP, TOP] = True
    leq[BOT, BOT] = True
    meet, join = lattice_tables_from_leq(leq)
    fuseA, impA = A.tables["fuse"], A.tables["imp"]
    fuse = np.empty((N, N), dtype=np.int32)
    fuse[:n, :n] = fuseA
    fuse[:n, n:2 * n] = impA + n
    fuse[n:2 * n, :n] = impA.T + n
    fuse[n:2 * n, n:2 * n] = TOP
    fuse[BOT, :] = BOT
    fuse[:, BOT] = BOT
    fuse[TOP, :] = TOP
    fuse[:, TOP] = TOP
    fuse[TOP, BOT] = BOT
    fuse[BOT, TOP] = BOT
    neg = np.empty(N, dtype=np.int32)
    neg[:n] = np.arange(n) + n
    neg[n:2 * n] = np.arange(n)
    neg[BOT] = TOP
    neg[TOP] = BOT
    names = None
    if A.names:
        names = list(A.names) + [f"{x}'" for x in A.names] + ["bot", "top"]
    out = FiniteAlgebra(DMM_SIG, N,
                        {"fuse": fuse, "meet": meet, "join": join,
                         "neg": neg, "e": A.tables["e"]},
                        names=names, label=f"R({A.describe()})")
    if check:
        ok, fail = is_demorgan_monoid(out)
        if not ok:
            raise AssertionError(f"reflection broke an axiom: {fail}")
    return out


def reflect_congruence(A, theta):
    """R(θ): the congruence of R(A) that mirrors θ on the primed copy and
    isolates the bounds."""
    n = A.size
    R = reflect(A, check=False)
    labels = np.empty(2 * n + 2, dtype=np.int32)
    blocks = int(theta.labels.max()) + 1
    labels[:n] = theta.labels
    labels[n:2 * n] = theta.labels + blocks
    labels[2 * n] = 2 * blocks
    labels[2 * n + 1] = 2 * blocks + 1
    return Congruence(R, labels, check=True)


def x_construction(A, check=True):
    """X(A): extend the reflection of A's Dunn reduct by one self-negating
    element x strictly between the unprimed and primed layers."""
    ok, fail = is_demorgan_monoid(A)
    if not ok:
        raise ValueError(f"not a De Morgan monoid: {fail}")
    R = reflect(dunn_reduct(A), check=False)
    n = A.size
    NR = R.size
    BOT, TOP = 2 * n, 2 * n + 1
    X = NR
    N = NR + 1
    leqR = leq_matrix(R)
    leq = np.zeros((N, N), dtype=bool)
    leq[:NR, :NR] = leqR
    leq[X, X] = True
    for a in range(n):
        leq[a, X] = True
        leq[X, n + a] = True
    leq[BOT, X] = True
    leq[X, TOP] = True
    meet, join = lattice_tables_from_leq(leq)
    fuse = np.empty((N, N), dtype=np.int32)
    fuse[:NR, :NR] = R.tables["fuse"]
    fuse[X, X] = X
    for a in range(n):
        fuse[X, a] = fuse[a, X] = X
        fuse[X, n + a] = fuse[n + a, X] = TOP
    fuse[X, BOT] = fuse[BOT, X] = BOT
    fuse[X, TOP] = fuse[TOP, X] = TOP
    neg = np.empty(N, dtype=np.int32)
    neg[:NR] = R.tables["neg"]
    neg[X] = X
    names = list(R.names) + ["x"] if R.names else None
    out = FiniteAlgebra(DMM_SIG, N,
                        {"fuse": fuse, "meet": meet, "join": join,
                         "neg": neg, "e": R.tables["e"]},
                        names=names, label=f"X({A.describe()})")
    if check:
        ok, fail = is_demorgan_monoid(out)
        if not ok:
            raise AssertionError(f"X construction broke an axiom: {fail}")
    return out


# ---------------------------------------------------------------------------
# the varieties M and N


def in_m(A):
    """Membership in the variety axiomatized (relative to De Morgan
    monoids) by e <= f, x <= f*f, and
    f2 * ~((f*x) ^ (f*~x)) = f2."""
    ok, fail = is_demorgan_monoid(A)
    if not ok:
        raise ValueError(f"not a De Morgan monoid: {fail}")
    leq = leq_matrix(A)
    e = A.constant("e")
    neg, fuse, meet = A.tables["neg"], A.tables["fuse"], A.tables["meet"]
    f = int(neg[e])
    f2 = int(fuse[f, f])
    if not leq[e, f]:
        return False
    if not leq[:, f2].all():
        return False
    lhs = fuse[f2, neg[meet[fuse[f], fuse[f, neg]]]]
    return bool((lhs == f2).all())


def in_n(A, gens=None, guards=DEFAULT_GUARDS):
    """Membership in Ret(·, C4): trivial, or C4 is a retract.  When a
    generator set is supplied, membership in its quasivariety is required
    as well."""
    ok, fail = is_demorgan_monoid(A)
    if not ok:
        raise ValueError(f"not a De Morgan monoid: {fail}")
    if gens is not None:
        from .deciders import q_membership
        if not q_membership(A, gens, guards):
            return False
    if A.is_trivial:
        return True
    return is_retract(catalog("c4"), A) is not None


# ---------------------------------------------------------------------------
# classifications


class PscClass(enum.Enum):
    BOOLEAN = "boolean"
    D4 = "d4"
    ODD_SUGIHARA = "odd-sugihara"
    SUB_M = "sub-m"
    NOT_PSC = "not-psc"


def classify_psc_variety(gens, guards=DEFAULT_GUARDS):
    """Which of the four exclusive shapes makes V(gens) passively
    structurally complete: all Boolean (with a nontrivial generator, so
    the variety is exactly the Boolean one), exactly V(D4), odd Sugihara,
    or a nontrivial subvariety of M; anything else is not PSC."""
    gens = list(gens)
    for G in gens:
        ok, fail = is_demorgan_monoid(G)
        if not ok:
            raise ValueError(f"not a De Morgan monoid: {fail}")
    nontrivial = any(not G.is_trivial for G in gens)

    def e_top(G):
        return bool(leq_matrix(G)[:, G.constant("e")].all())

    if nontrivial and all(e_top(G) for G in gens):
        return PscClass.BOOLEAN
    d4 = catalog("d4")
    if v_membership(d4, gens, guards) and \
            all(v_membership(G, [d4], guards) for G in gens):
        return PscClass.D4

    def odd(G):
        e = G.constant("e")
        return int(G.tables["neg"][e]) == e and _is_idempotent(G)

    if all(odd(G) for G in gens):
        return PscClass.ODD_SUGIHARA
    if nontrivial and all(in_m(G) for G in gens):
        return PscClass.SUB_M
    return PscClass.NOT_PSC


def jep_classification_conditions(gens, guards=DEFAULT_GUARDS):
    """Which of the three shapes known to force the joint embedding
    property hold for V(gens) resp. Q(gens):

    - the variety is PSC;
    - the variety is generated by a simple algebra with D4 as a proper
      subalgebra;
    - the quasivariety is generated by an algebra B with a simple
      subalgebra that extends C4 properly, where Q(B) exhausts the variety
      (checked as: every subdirectly irreducible member of HS(B) embeds
      into B).
    """
    gens = list(gens)
    report = {}
    cls = classify_psc_variety(gens, guards)
    report["psc"] = {"holds": cls is not PscClass.NOT_PSC,
                     "class": cls.value}

    d4 = catalog("d4")
    c4 = catalog("c4")
    sis = si_members_of_variety(gens, guards)
    witness = None
    for A in sis:
        if si_status(A, None, guards) is not SiStatus.SIMPLE:
            continue
        if A.size <= 4 or embedding_exists(d4, A) is None:
            continue
        if all(v_membership(G, [A], guards) for G in gens):
            witness = A
            break
    report["simple_generator_extending_d4"] = {
        "holds": witness is not None,
        "witness": witness.describe() if witness else None}

    witness = None
    candidates = list(gens)
    if len(gens) > 1:
        try:
            candidates.append(direct_product(gens, guards=guards))
        except GuardExceeded:
            pass
    for B in candidates:
        try:
            if not all(v_membership(G, [B], guards) for G in gens):
                continue
            if not all(embedding_exists(W, B) is not None
                       for W in si_members_of_variety([B], guards)):
                continue
        except GuardExceeded:
            continue
        simple_sub = None
        for S in enumerate_subalgebras(B, up_to_iso=True, guards=guards):
            if S.size > 4 and si_status(S, None, guards) is SiStatus.SIMPLE \
                    and embedding_exists(c4, S) is not None:
                simple_sub = S
                break
        if simple_sub is not None:
            witness = (B, simple_sub)
            break
    report["q_generator_with_simple_extension_of_c4"] = {
        "holds": witness is not None,
        "witness": {"generator": witness[0].describe(),
                    "simple_subalgebra": witness[1].describe()}
        if witness else None}
    return report


# ---------------------------------------------------------------------------
# the diamond amendment


def amendment(term):
    """The diamond translation of a positive (Brouwerian-signature) term
    into the Dunn signature: variables acquire ^ e, and so does every
    residual."""
    if term.is_var:
        return Term.apply("meet", term, Term.apply("e"))
    if term.head == "e" and not term.args:
        return term
    if term.head in ("meet", "join", "fuse"):
        return Term.apply(term.head, *(amendment(a) for a in term.args))
    if term.head == "imp":
        body = Term.apply("imp", amendment(term.args[0]), amendment(term.args[1]))
        return Term.apply("meet", body, Term.apply("e"))
    raise ValueError(f"not a positive term: operation {term.head!r}")


def amendment_qe(qe):
    from .deciders import QuasiEquation
    prem = tuple((amendment(l), amendment(r)) for l, r in qe.premises)
    concl = (amendment(qe.conclusion[0]), amendment(qe.conclusion[1]))
    return QuasiEquation(prem, concl)


# ---------------------------------------------------------------------------
# seeded random members (for the fact-suite and property tests)


def random_demorgan_monoids(count, max_size=6, seed=0, guards=DEFAULT_GUARDS):
    """Seeded random members of the De Morgan monoid variety, of bounded
    size: random subalgebras of quotients of random products of catalog
    algebras (the variety is closed under all three constructions)."""
    bases = [catalog(n) for n in ("two", "s3", "s5", "c4", "d4", "x-trivial")]
    rng = np.random.default_rng(seed)
    out = []
    attempts = 0
    while len(out) < count and attempts < 400 * count:
        attempts += 1
        k = int(rng.integers(1, 3))
        factors = [bases[int(rng.integers(0, len(bases)))] for _ in range(k)]
        P = direct_product(factors, guards=guards) if k > 1 else factors[0]
        n_seeds = int(rng.integers(0, 3))
        seeds = [int(rng.integers(0, P.size)) for _ in range(n_seeds)]
        S, _ = subalgebra_generated(P, seeds)
        if S.size > 1 and int(rng.integers(0, 2)):
            a = int(rng.integers(0, S.size))
            b = int(rng.integers(0, S.size))
            theta = principal_congruence(S, a, b)
            S, _ = quotient(S, theta.labels)
        if 1 <= S.size <= max_size:
            out.append(S.relabel(f"random-dmm-{len(out)}"))
    return out
