"""On-disk formats and machine-readable reports.

Algebra JSON:
    {"signature": [{"name": "fuse", "arity": 2}, ...],
     "size": 4, "names": [...],
     "ops": {"fuse": [[...row-major...]], "e": 1}}
constants serialize as a bare index; an arity-k table is a depth-k nested
row-major list.

Poset JSON:
    {"size": 6, "names": [...], "leq": [[i, j], ...]}
listing the full reflexive relation; validated on load.

Reports carry the verdict, replayable witnesses, timing, the library
version and input digests; a witness is re-verified (pure evaluation, no
search) before a report is emitted.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from . import __version__
from .brouwer import Poset
from .errors import ParseError
from .kernel import FiniteAlgebra, Signature


def algebra_to_dict(A):
    ops = {}
    for name, arity in A.sig.ops:
        tab = A.tables[name]
        ops[name] = int(tab) if arity == 0 else tab.tolist()
    out = {"signature": [{"name": n, "arity": a} for n, a in A.sig.ops],
           "size": A.size, "ops": ops}
    if A.names:
        out["names"] = list(A.names)
    if A.label:
        out["label"] = A.label
    return out


def algebra_from_dict(data):
    try:
        sig = Signature(tuple((op["name"], int(op["arity"]))
                              for op in data["signature"]))
        size = int(data["size"])
        tables = {}
        for name, arity in sig.ops:
            raw = data["ops"][name]
            tables[name] = np.asarray(raw, dtype=np.int32).reshape((size,) * arity)
        return FiniteAlgebra(sig, size, tables, names=data.get("names"),
                             label=data.get("label"))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad algebra JSON: {exc}") from None


def poset_to_dict(X):
    pairs = [[int(i), int(j)] for i in range(X.n) for j in range(X.n)
             if X.leq[i, j]]
    out = {"size": X.n, "leq": pairs}
    if X.names:
        out["names"] = list(X.names)
    return out


def poset_from_dict(data):
    try:
        n = int(data["size"])
        leq = np.zeros((n, n), dtype=bool)
        for i, j in data["leq"]:
            leq[int(i), int(j)] = True
        return Poset(leq, names=data.get("names"))
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"bad poset JSON: {exc}") from None


def load_algebra(path):
    with open(path) as fh:
        return algebra_from_dict(json.load(fh))


def save_algebra(A, path):
    with open(path, "w") as fh:
        json.dump(algebra_to_dict(A), fh, indent=1)
        fh.write("\n")


def load_poset(path):
    with open(path) as fh:
        return poset_from_dict(json.load(fh))


def save_poset(X, path):
    with open(path, "w") as fh:
        json.dump(poset_to_dict(X), fh, indent=1)
        fh.write("\n")


def file_digest(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


def build_report(command, verdict_text, exit_code, witness=None, inputs=None,
                 seconds=None, extra=None):
    report = {
        "schema": "quasivar-report/1",
        "version": __version__,
        "command": command,
        "verdict": verdict_text,
        "exit_code": exit_code,
        "witness": witness,
        "inputs": inputs or {},
        "seconds": seconds,
    }
    if extra:
        report.update(extra)
    return report


def emit(report, as_json):
    if as_json:
        print(json.dumps(report, indent=1, default=str))
    else:
        print(f"verdict: {report['verdict']}")
        if report.get("witness"):
            print(f"witness: {json.dumps(report['witness'], default=str)}")
        if report.get("seconds") is not None:
            print(f"seconds: {report['seconds']:.2f}")
