"""Size guards shared by all search procedures.

Everything in this package is exponential somewhere; the guards make the
blow-up an explicit error instead of an open-ended computation.  Callers
that know what they are doing pass a relaxed `Guards` value.
"""

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Guards:
    subalgebra_enum: int = 24        # max carrier size for subuniverse enumeration
    carrier: int = 4096              # max size of any derived carrier (products, free algebras, up-set algebras)
    congruence_enum: int = 64        # max carrier size for full congruence-lattice computation
    poset_points: int = 30           # max poset size (up-sets are machine-word bitmasks)
    assignment_chunk: int = 1 << 17  # assignments evaluated per vectorized block
    search_total: int = 50_000_000   # max assignment tuples for one validity/unification sweep
    canon_perms: int = 200_000       # max permutations tried by the canonicalizer
    hom_combo: int = 1_000_000       # max combined homomorphisms when a codomain is a direct product

    def scaled(self, **kw):
        return replace(self, **kw)


DEFAULT_GUARDS = Guards()
