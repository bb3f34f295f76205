import pytest

import quasivar as qv
from quasivar import Term
from quasivar.demorgan import BROUWER_SIG, DMM_SIG
from quasivar.errors import ParseError
from quasivar.parsing import (parse_equation_system, parse_qe, parse_term,
                              resolve_qe, resolve_term)


def test_two_premise_quasi_equation_with_sugar():
    q = parse_qe("x ^ y <= z & e <= x => x = y")
    assert len(q.premises) == 2
    l, r = q.premises[0]
    # s <= t expands to s = s ^ t
    assert str(l) == "meet(x, y)"
    assert str(r) == "meet(meet(x, y), z)"
    l2, r2 = q.premises[1]
    assert str(l2) == "e" and str(r2) == "meet(e, x)"


def test_mints_rule_parses():
    q = parse_qe("x -> y <= x v z => ((x->y)->x) v ((x->y)->z) = e")
    assert len(q.premises) == 1
    concl_l, concl_r = q.conclusion
    assert str(concl_l) == "join(imp(imp(x, y), x), imp(imp(x, y), z))"
    assert str(concl_r) == "e"


def test_precedence():
    t = parse_term("~x * y ^ z v w -> u")
    # ~ > * > ^ > v > ->
    assert str(t) == "imp(join(meet(fuse(neg(x), y), z), w), u)"


def test_arrow_right_associative():
    t = parse_term("x -> y -> z")
    assert str(t) == "imp(x, imp(y, z))"


def test_bare_equation_as_quasi_equation():
    q = parse_qe("x = x")
    assert q.premises == ()


def test_leading_implication_is_zero_premises():
    q = parse_qe("=> x = y")
    assert q.premises == () and str(q.conclusion[0]) == "x"


def test_prefix_application_and_constants():
    t = parse_term("fuse(x, neg(e))")
    assert t == Term.apply("fuse", Term.var("x"),
                           Term.apply("neg", Term.apply("e")))


def test_equation_system():
    eqs = parse_equation_system("x = y & y = z")
    assert len(eqs) == 2


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_term("x + y")
    assert "column" in str(err.value)
    with pytest.raises(ParseError):
        parse_term("(x ^ y")
    with pytest.raises(ParseError):
        parse_qe("x = y & z = w")  # premises without a conclusion


def test_resolution_against_dmm():
    q = resolve_qe(parse_qe("x -> y = ~(x * ~y)"), DMM_SIG)
    l, r = q.conclusion
    assert l == r  # the residual expands to its defining term


def test_resolution_fuse_collapses_in_brouwer():
    t = resolve_term(parse_term("x * y"), BROUWER_SIG)
    assert t.head == "meet"


def test_resolution_unknown_operation():
    with pytest.raises(ParseError):
        resolve_term(parse_term("~x"), BROUWER_SIG)


def test_resolution_constant_by_name():
    from quasivar.demorgan import HEYTING_SIG
    t = resolve_term(parse_term("bot"), HEYTING_SIG)
    assert t == Term.apply("bot")
    t2 = resolve_term(parse_term("bot"), DMM_SIG)
    assert t2.is_var  # no such constant: stays a variable


def test_e_is_reserved_and_v_is_join():
    t = parse_term("e v x")
    assert t == Term.apply("join", Term.apply("e"), Term.var("x"))


def test_parsed_validity_example():
    q = resolve_qe(parse_qe("e <= ~e"), DMM_SIG)
    assert qv.valid(q, [qv.catalog("c4")]).is_yes
