"""The term and quasi-equation grammar.

    eq  := term "=" term | term "<=" term      (s <= t sugars to s = s ^ t)
    qe  := [eq ("&" eq)*] "=>" eq  |  eq
    term: variables [a-z][a-z0-9_]*, prefix application name(t, ...),
          infix  ~ (involution, prefix) > * (fusion) > ^ (meet) > v (join)
          > -> (residuation, right-associative), constant e.

`v` and `e` are reserved (join and the monoid unit); other bare
identifiers parse as variables and are resolved against a signature
later: nullary operation names become constants, `imp` expands to
~(x * ~y) over the De Morgan signature and `fuse` collapses to `meet`
over the Brouwerian one.
"""

from __future__ import annotations

import re

from .deciders import QuasiEquation
from .errors import ParseError
from .kernel import Term

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<arrow>->)
  | (?P<imply>=>)
  | (?P<le><=)
  | (?P<eq>=)
  | (?P<amp>&)
  | (?P<lpar>\()
  | (?P<rpar>\))
  | (?P<comma>,)
  | (?P<meet>\^)
  | (?P<fuse>\*)
  | (?P<neg>~)
  | (?P<ident>[a-z][a-z0-9_]*)
""", re.VERBOSE)


def _tokenize(text):
    tokens = []
    line, col, pos = 1, 0, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        value = m.group()
        if kind != "ws":
            if kind == "ident" and value == "v":
                kind = "join"
            tokens.append((kind, value, line, col))
        for ch in value:
            if ch == "\n":
                line += 1
                col = 0
            else:
                col += 1
        pos = m.end()
    tokens.append(("end", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError(f"expected {kind}, found {tok[1]!r}", tok[2], tok[3])
        return tok

    def fail(self, message):
        tok = self.peek()
        raise ParseError(message, tok[2], tok[3])

    # precedence: ~  >  *  >  ^  >  v  >  ->
    def term(self):
        return self._imp()

    def _imp(self):
        left = self._join()
        if self.peek()[0] == "arrow":
            self.next()
            right = self._imp()  # right-associative
            return Term.apply("imp", left, right)
        return left

    def _join(self):
        left = self._meet()
        while self.peek()[0] == "join":
            self.next()
            left = Term.apply("join", left, self._meet())
        return left

    def _meet(self):
        left = self._fuse()
        while self.peek()[0] == "meet":
            self.next()
            left = Term.apply("meet", left, self._fuse())
        return left

    def _fuse(self):
        left = self._unary()
        while self.peek()[0] == "fuse":
            self.next()
            left = Term.apply("fuse", left, self._unary())
        return left

    def _unary(self):
        if self.peek()[0] == "neg":
            self.next()
            return Term.apply("neg", self._unary())
        return self._atom()

    def _atom(self):
        kind, value, line, col = self.peek()
        if kind == "lpar":
            self.next()
            t = self.term()
            self.expect("rpar")
            return t
        if kind == "ident":
            self.next()
            if value == "e":
                return Term.apply("e")
            if self.peek()[0] == "lpar":
                self.next()
                args = []
                if self.peek()[0] != "rpar":
                    args.append(self.term())
                    while self.peek()[0] == "comma":
                        self.next()
                        args.append(self.term())
                self.expect("rpar")
                return Term.apply(value, *args)
            return Term.var(value)
        raise ParseError(f"expected a term, found {value!r}", line, col)

    def equation(self):
        left = self.term()
        kind, value, line, col = self.next()
        if kind == "eq":
            return (left, self.term())
        if kind == "le":
            right = self.term()
            return (left, Term.apply("meet", left, right))
        raise ParseError(f"expected '=' or '<=', found {value!r}", line, col)

    def quasi_equation(self):
        if self.peek()[0] == "imply":
            self.next()
            concl = self.equation()
            return QuasiEquation((), concl)
        eqs = [self.equation()]
        while self.peek()[0] == "amp":
            self.next()
            eqs.append(self.equation())
        if self.peek()[0] == "imply":
            self.next()
            concl = self.equation()
            return QuasiEquation(tuple(eqs), concl)
        if len(eqs) != 1:
            self.fail("'&'-joined equations need a '=>' conclusion")
        return QuasiEquation((), eqs[0])


def parse_term(text):
    p = _Parser(text)
    t = p.term()
    p.expect("end")
    return t


def parse_equation(text):
    p = _Parser(text)
    eq = p.equation()
    p.expect("end")
    return eq


def parse_qe(text):
    p = _Parser(text)
    qe = p.quasi_equation()
    p.expect("end")
    return qe


def parse_equation_system(text):
    """`eq ("&" eq)*` without a conclusion: the input of unification."""
    p = _Parser(text)
    eqs = [p.equation()]
    while p.peek()[0] == "amp":
        p.next()
        eqs.append(p.equation())
    p.expect("end")
    return eqs


# ---------------------------------------------------------------------------
# signature resolution


def resolve_term(term, sig):
    """Bind a raw term to a signature: variables that name nullary
    operations become constants; `imp` expands over signatures that lack
    it but carry neg/fuse; `fuse` collapses to `meet` where fusion is
    identified with it; names and arities are validated."""
    names = dict(sig.ops)
    if term.is_var:
        if term.head in names and names[term.head] == 0:
            return Term.apply(term.head)
        return term
    args = tuple(resolve_term(a, sig) for a in term.args)
    head = term.head
    if head not in names:
        if head == "imp" and "neg" in names and "fuse" in names:
            return Term.apply("neg",
                              Term.apply("fuse", args[0],
                                         Term.apply("neg", args[1])))
        if head == "fuse" and "meet" in names:
            head = "meet"
        else:
            raise ParseError(f"operation {head!r} does not exist in the "
                             f"signature ({sig})")
    if names.get(head) != len(args):
        raise ParseError(f"operation {head!r} expects {names.get(head)} "
                         f"arguments, got {len(args)}")
    return Term(head, args, False)


def resolve_qe(qe, sig):
    prem = tuple((resolve_term(l, sig), resolve_term(r, sig))
                 for l, r in qe.premises)
    concl = (resolve_term(qe.conclusion[0], sig),
             resolve_term(qe.conclusion[1], sig))
    return QuasiEquation(prem, concl)


def resolve_equations(eqs, sig):
    return [(resolve_term(l, sig), resolve_term(r, sig)) for l, r in eqs]
