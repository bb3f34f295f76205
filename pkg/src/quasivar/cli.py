"""Command-line surface.

Exit codes: 0 = definite yes / certified, 1 = definite no, 2 = unknown,
3 = runtime error, 4 = usage error.  Output is deterministic; `--json`
switches every verb to the machine-readable report schema.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import __version__
from .acceptance import run_all
from .brouwer import (hat, named_poset, prime_filter_poset, up_algebra)
from .config import DEFAULT_GUARDS, Guards
from .congruence import all_congruences, relative_congruences
from .deciders import (admissible_upto, jep_check, minimal_quasivariety_check,
                       psc_check, q_membership, sc_check, unifiable,
                       v_membership, valid, free_algebra)
from .demorgan import (catalog, dunn_reduct, is_brouwerian, is_demorgan_monoid,
                       is_dunn_monoid, reflect, x_construction)
from .errors import QuasivarError
from .formats import (algebra_to_dict, build_report, emit, file_digest,
                      load_algebra, load_poset, poset_to_dict)
from .morphisms import enumerate_homs
from .parsing import parse_equation_system, parse_qe, resolve_equations, resolve_qe


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        sys.exit(4)


def _load_gen(spec):
    """A generator argument: a JSON file path or a catalog name."""
    import os
    if os.path.exists(spec):
        return load_algebra(spec), {spec: file_digest(spec)}
    try:
        return catalog(spec), {}
    except ValueError:
        raise QuasivarError(f"no such file or catalog name: {spec}")


def _load_poset_arg(spec):
    import os
    if os.path.exists(spec):
        return load_poset(spec), {spec: file_digest(spec)}
    return named_poset(spec), {}


def _gens(args):
    algebras, digests = [], {}
    for spec in args.gen:
        a, d = _load_gen(spec)
        algebras.append(a)
        digests.update(d)
    return algebras, digests


def _guards(args):
    g = DEFAULT_GUARDS
    if getattr(args, "guard_size", None):
        g = g.scaled(subalgebra_enum=args.guard_size,
                     congruence_enum=max(g.congruence_enum, args.guard_size))
    return g


def _finish(args, command, code, witness=None, inputs=None, t0=None, extra=None):
    names = {0: "yes", 1: "no", 2: "unknown"}
    report = build_report(command, names.get(code, "error"), code,
                          witness=witness, inputs=inputs,
                          seconds=None if t0 is None else time.time() - t0,
                          extra=extra)
    emit(report, args.json)
    return code


def _verdict_out(args, command, verdict, inputs, t0):
    return _finish(args, command, verdict.exit_code, witness=verdict.witness,
                   inputs=inputs, t0=t0,
                   extra={"detail": verdict.summary()})


def main(argv=None):
    parser = _Parser(prog="quasivar",
                     description="finite universal-algebra workbench")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, gens=True):
        if gens:
            p.add_argument("--gen", action="append", required=True,
                           help="generator: algebra JSON file or catalog name")
        p.add_argument("--json", action="store_true")
        p.add_argument("--guard-size", type=int, default=None)
        p.add_argument("--bound", type=int, default=2)
        p.add_argument("--seed", type=int, default=20260809)
        p.add_argument("--threads", type=int, default=1,
                       help="accepted for compatibility; execution is "
                            "single-threaded and deterministic")

    p = sub.add_parser("axioms", help="check the defining axioms of an algebra")
    p.add_argument("--alg", required=True)
    p.add_argument("--kind", choices=["dmm", "dunn", "brouwer"], default="dmm")
    common(p, gens=False)

    p = sub.add_parser("homs", help="enumerate homomorphisms")
    p.add_argument("--dom", required=True)
    p.add_argument("--cod", required=True)
    p.add_argument("--limit", type=int, default=None)
    common(p, gens=False)

    p = sub.add_parser("congruences", help="congruence lattice (relative "
                                           "with --gen)")
    p.add_argument("--alg", required=True)
    p.add_argument("--gen", action="append", default=[])
    p.add_argument("--json", action="store_true")
    p.add_argument("--guard-size", type=int, default=None)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("free", help="free algebra of a quasivariety")
    p.add_argument("--rank", type=int, required=True)
    common(p)

    p = sub.add_parser("valid", help="validity of a quasi-equation")
    p.add_argument("--qe", required=True)
    common(p)

    p = sub.add_parser("unify", help="unifiability of an equation system")
    p.add_argument("--eqs", required=True)
    common(p)

    for verb in ("jep", "psc", "minimal"):
        p = sub.add_parser(verb)
        common(p)

    p = sub.add_parser("sc", help="structural completeness trichotomy")
    common(p)

    p = sub.add_parser("admissible", help="bounded admissibility check")
    p.add_argument("--qe", required=True)
    common(p)

    p = sub.add_parser("member-q", help="quasivariety membership")
    p.add_argument("--alg", required=True)
    common(p)

    p = sub.add_parser("member-v", help="variety membership")
    p.add_argument("--alg", required=True)
    common(p)

    p = sub.add_parser("reflect", help="reflection of a Dunn monoid")
    p.add_argument("--alg", required=True)
    common(p, gens=False)

    p = sub.add_parser("xcon", help="X construction on a De Morgan monoid")
    p.add_argument("--alg", required=True)
    common(p, gens=False)

    p = sub.add_parser("up", help="up-set algebra of a dominated poset")
    p.add_argument("--poset", required=True)
    common(p, gens=False)

    p = sub.add_parser("dual", help="prime-filter poset of a Brouwerian algebra")
    p.add_argument("--alg", required=True)
    common(p, gens=False)

    p = sub.add_parser("hat", help="hat construction on a dominated poset")
    p.add_argument("--poset", required=True)
    common(p, gens=False)

    p = sub.add_parser("catalog", help="emit a catalog algebra as JSON")
    p.add_argument("--name", required=True)
    common(p, gens=False)

    p = sub.add_parser("verify-paper", help="run the acceptance suite")
    p.add_argument("--criteria", type=int, nargs="*", default=None)
    common(p, gens=False)

    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except QuasivarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def _dispatch(args):
    t0 = time.time()
    guards = _guards(args)
    verb = args.verb

    if verb == "axioms":
        A, inputs = _load_gen(args.alg)
        fn = {"dmm": is_demorgan_monoid, "dunn": is_dunn_monoid,
              "brouwer": is_brouwerian}[args.kind]
        ok, fail = fn(A)
        return _finish(args, verb, 0 if ok else 1,
                       witness=None if ok else {"failed_axiom": fail},
                       inputs=inputs, t0=t0)

    if verb == "homs":
        A, i1 = _load_gen(args.dom)
        B, i2 = _load_gen(args.cod)
        homs = enumerate_homs(A, B, limit=args.limit, guards=guards)
        payload = {"count": len(homs),
                   "maps": [h.mapping.tolist() for h in homs]}
        return _finish(args, verb, 0 if homs else 1, witness=payload,
                       inputs={**i1, **i2}, t0=t0)

    if verb == "congruences":
        A, inputs = _load_gen(args.alg)
        if args.gen:
            gens = [_load_gen(s)[0] for s in args.gen]
            lattice = relative_congruences(A, gens, guards)
        else:
            lattice = all_congruences(A, guards)
        payload = {"count": len(lattice),
                   "block_counts": [c.num_blocks for c in lattice]}
        return _finish(args, verb, 0, witness=payload, inputs=inputs, t0=t0)

    if verb == "free":
        gens, inputs = _gens(args)
        F = free_algebra(gens, args.rank, guards)
        out = algebra_to_dict(F.algebra)
        out["generators"] = list(F.generators)
        print(json.dumps(out, indent=1))
        return 0

    if verb == "valid":
        gens, inputs = _gens(args)
        qe = resolve_qe(parse_qe(args.qe), gens[0].sig)
        return _verdict_out(args, verb, valid(qe, gens, guards), inputs, t0)

    if verb == "unify":
        gens, inputs = _gens(args)
        eqs = resolve_equations(parse_equation_system(args.eqs), gens[0].sig)
        return _verdict_out(args, verb, unifiable(eqs, gens, guards), inputs, t0)

    if verb == "jep":
        gens, inputs = _gens(args)
        return _verdict_out(args, verb, jep_check(gens, guards), inputs, t0)

    if verb == "psc":
        gens, inputs = _gens(args)
        return _verdict_out(args, verb, psc_check(gens, guards), inputs, t0)

    if verb == "minimal":
        gens, inputs = _gens(args)
        return _verdict_out(args, verb,
                            minimal_quasivariety_check(gens, guards), inputs, t0)

    if verb == "sc":
        gens, inputs = _gens(args)
        return _verdict_out(args, verb,
                            sc_check(gens, bound=args.bound, guards=guards),
                            inputs, t0)

    if verb == "admissible":
        gens, inputs = _gens(args)
        qe = resolve_qe(parse_qe(args.qe), gens[0].sig)
        return _verdict_out(args, verb,
                            admissible_upto(qe, gens, max_rank=args.bound,
                                            guards=guards), inputs, t0)

    if verb == "member-q":
        gens, inputs = _gens(args)
        A, i2 = _load_gen(args.alg)
        ok = q_membership(A, gens, guards)
        return _finish(args, verb, 0 if ok else 1, inputs={**inputs, **i2}, t0=t0)

    if verb == "member-v":
        gens, inputs = _gens(args)
        A, i2 = _load_gen(args.alg)
        ok = v_membership(A, gens, guards)
        return _finish(args, verb, 0 if ok else 1, inputs={**inputs, **i2}, t0=t0)

    if verb == "reflect":
        A, inputs = _load_gen(args.alg)
        print(json.dumps(algebra_to_dict(reflect(A)), indent=1))
        return 0

    if verb == "xcon":
        A, inputs = _load_gen(args.alg)
        print(json.dumps(algebra_to_dict(x_construction(A)), indent=1))
        return 0

    if verb == "up":
        X, inputs = _load_poset_arg(args.poset)
        print(json.dumps(algebra_to_dict(up_algebra(X, guards).algebra), indent=1))
        return 0

    if verb == "dual":
        A, inputs = _load_gen(args.alg)
        print(json.dumps(poset_to_dict(prime_filter_poset(A)), indent=1))
        return 0

    if verb == "hat":
        X, inputs = _load_poset_arg(args.poset)
        print(json.dumps(poset_to_dict(hat(X)), indent=1))
        return 0

    if verb == "catalog":
        print(json.dumps(algebra_to_dict(catalog(args.name)), indent=1))
        return 0

    if verb == "verify-paper":
        selected = set(args.criteria) if args.criteria else None
        sink = (lambda line: print(line, file=sys.stderr)) if args.json else print
        results = run_all(selected, out=sink)
        ok = all(r["pass"] for r in results)
        if args.json:
            print(json.dumps({"schema": "quasivar-acceptance/1",
                              "version": __version__,
                              "results": results, "pass": ok}, indent=1))
        return 0 if ok else 1

    raise QuasivarError(f"unknown verb {verb!r}")


if __name__ == "__main__":
    sys.exit(main())
