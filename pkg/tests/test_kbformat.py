from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from inca.em import max_entailment
from inca.errors import AssemblyError, ParseError
from inca.kbformat import (
    KBDocument,
    assemble,
    format_fraction,
    load_kb,
    parse_evidence,
    parse_kb,
    parse_literal_text,
    parse_query,
    parse_world_spec,
    render_kb,
    render_world,
)
from inca.language import atom_formula, conj, disj, neg, render_formula

from conftest import AGE, FIXTURES, GOV, MSE, ematom, lit

F = Fraction


# -- fraction formatting --------------------------------------------------------


def test_format_fraction_decimal_when_exact():
    assert format_fraction(F(9, 10)) == "0.9"
    assert format_fraction(F(3, 4)) == "0.75"
    assert format_fraction(F(-1, 8)) == "-0.125"
    assert format_fraction(F(7, 20)) == "0.35"
    assert format_fraction(F(1)) == "1"
    assert format_fraction(F(0)) == "0"
    assert format_fraction(F(2)) == "2"


def test_format_fraction_keeps_ratio_otherwise():
    assert format_fraction(F(1, 3)) == "1/3"
    assert format_fraction(F(-5, 12)) == "-5/12"


@given(st.fractions(min_value=-4, max_value=4))
def test_format_fraction_round_trips(value):
    assert F(format_fraction(value)) == value


# -- document parsing ------------------------------------------------------------


def test_fixture_parses(worm_doc):
    assert len(worm_doc.em) == 3
    assert len(worm_doc.am) == 17
    assert len(worm_doc.af) == 2
    assert worm_doc.ic == ()
    assert worm_doc.universe is None
    assert worm_doc.sorts == (
        ("actor", "baja"), ("actor", "krasnovia"), ("actor", "mojave"),
        ("operation", "worm123"),
    )


def test_fixture_round_trips_byte_identically(worm_doc):
    text = (FIXTURES / "worm123.inca").read_text()
    assert render_kb(worm_doc) == text
    assert parse_kb(text) == worm_doc


def test_render_is_idempotent(worm_doc):
    once = render_kb(worm_doc)
    assert render_kb(parse_kb(once)) == once


def test_operator_precedence():
    f = parse_query("govCybLab(baja) v cybCapAge(baja,5) ^ mseTT(baja,2)")
    assert f == disj(atom_formula(GOV), conj(atom_formula(AGE), atom_formula(MSE)))
    g = parse_query("~(govCybLab(baja) v cybCapAge(baja,5))")
    assert g == neg(disj(atom_formula(GOV), atom_formula(AGE)))
    h = parse_query("~govCybLab(baja) ^ cybCapAge(baja,5)")
    assert h == conj(neg(atom_formula(GOV)), atom_formula(AGE))


def test_parse_query_constants_and_parens():
    assert parse_query("true").op == "top"
    assert parse_query("false").op == "bottom"
    parenthesized = parse_query("(govCybLab(baja) v cybCapAge(baja,5)) ^ mseTT(baja,2)")
    assert parenthesized == conj(
        disj(atom_formula(GOV), atom_formula(AGE)), atom_formula(MSE)
    )


def test_parse_literal_text():
    assert parse_literal_text("isCap(baja,worm123)") == lit("isCap", "baja", "worm123")
    assert parse_literal_text("neg expCw(baja)") == lit("expCw", "baja", negated=True)


def test_parse_world_spec():
    assert parse_world_spec("") == ()
    atoms = parse_world_spec("govCybLab(baja),mseTT(baja,2)")
    assert atoms == (GOV, MSE)


def test_parse_evidence():
    items = parse_evidence("origIP(mw123sam1,baja).\nmseTT(baja,2) : 0.5 +- 0.1.\n")
    assert len(items) == 2
    assert str(items[0].atom) == "origIP(mw123sam1,baja)"
    assert (items[0].p, items[0].eps) == (F(1), F(0))
    assert (items[1].p, items[1].eps) == (F(1, 2), F(1, 10))
    assert parse_evidence("") == ()


def test_parse_evidence_fixture_file():
    items = parse_evidence((FIXTURES / "origip.evidence").read_text())
    assert len(items) == 1


def test_rational_forms():
    doc = parse_kb("#em\ngovCybLab(baja) : 4/5 +- 1/10.\n")
    assert doc.em[0].p == F(4, 5)
    assert doc.em[0].eps == F(1, 10)
    doc2 = parse_kb("#em\ngovCybLab(baja) : 0.8 +- 0.1.\n")
    assert doc2.em == doc.em


def test_parse_error_positions():
    with pytest.raises(ParseError) as excinfo:
        parse_kb("#em\ngovCybLab(baja : 0.8 +- 0.1.\n")
    assert excinfo.value.line == 2
    assert excinfo.value.column > 1
    assert "line 2" in str(excinfo.value)


def test_parse_error_cases():
    bad = [
        "#bogus\n",                                   # unknown section
        "#em\ngovCybLab(baja) : 1.2 +- 0.1.\n",       # p out of range
        "#em\ngovCybLab(baja) : 1/0 +- 0.\n",         # zero denominator
        "#em\ngovCybLab(baja) : 0.5/2 +- 0.\n",       # mixed rational form
        "#em\ngovCybLab(baja) : 0.5 +- 0\n",          # missing final period
        "#am\nr1 : isCap(baja,worm123) -< Foo.\n",    # bare uppercase body item
    ]
    for text in bad:
        with pytest.raises(ParseError):
            parse_kb(text)


def test_predicate_arity_is_checked_per_model():
    with pytest.raises(ParseError):
        parse_kb("#em\np(a) : 0.5 +- 0.\np(a,b) : 0.5 +- 0.\n")
    # the same name may have different shapes in the two models
    doc = parse_kb("#em\np(a) : 0.5 +- 0.\n#am\nf1 : fact p(a,b).\n")
    assert doc.am[0].head.atom.args[1].name == "b"


def test_duplicate_am_labels_rejected():
    text = "#am\nf1 : fact p(a).\nf1 : fact q(a).\n"
    with pytest.raises(ParseError):
        parse_kb(text)


def test_af_must_reference_known_labels():
    with pytest.raises(ParseError):
        parse_kb("#em\ngovCybLab(baja) : 0.5 +- 0.\n#af\nnope : govCybLab(baja).\n")
    # an annotation for a schematic label covers its instances
    doc = parse_kb(
        "#am\nf1 : fact p(a).\n#em\ng(c) : 0.5 +- 0.\n#af\nf1 : g(c).\n"
    )
    assert doc.af[0][0] == "f1"


def test_duplicate_annotation_rejected():
    text = (
        "#am\nf1 : fact p(a).\n#em\ng(c) : 0.5 +- 0.\n"
        "#af\nf1 : g(c).\nf1 : ~g(c).\n"
    )
    with pytest.raises(ParseError):
        parse_kb(text)


def test_universe_section():
    doc = parse_kb(
        "#em\ngovCybLab(baja) : 0.5 +- 0.\n"
        "#universe\ngovCybLab(baja), extra(c).\n"
    )
    assert doc.universe is not None
    assert len(doc.universe) == 2
    with pytest.raises(ParseError):
        parse_kb("#universe\np(c), p(c).\n")


def test_sorts_redeclaration_rejected():
    with pytest.raises(ParseError):
        parse_kb("#sorts\nactor baja.\noperation baja.\n")


def test_guards_parse_and_render():
    text = (
        "#am\n"
        "om1 : neg condOp(X,O) <- condOp(Y,O), X != Y.\n"
    )
    doc = parse_kb(text)
    element = doc.am[0]
    assert element.guards == (("X", "Y"),)
    assert "X != Y" in render_kb(doc)


def test_empty_document():
    doc = parse_kb("")
    assert doc == KBDocument((), (), (), (), ())
    assert render_kb(doc) == ""


def test_comments_are_not_supported_text_is_strict():
    with pytest.raises(ParseError):
        parse_kb("# comment\n")


# -- assembly ---------------------------------------------------------------------


def test_assemble_matches_programmatic_build(worm_doc, worm_framework, parsed_framework):
    assert parsed_framework.em == worm_framework.em
    assert set(parsed_framework.program.elements) == set(worm_framework.program.elements)
    assert parsed_framework.annotations == worm_framework.annotations


def test_assembled_framework_answers_queries(parsed_framework):
    query = parse_query("govCybLab(baja) v mseTT(baja,2)")
    answer = max_entailment(parsed_framework.em, query)
    assert (answer.p, answer.eps) == (F(9, 10), F(1, 10))
    interval = parsed_framework.prob_bounds(parse_literal_text("isCap(baja,worm123)"))
    assert (interval.p, interval.eps) == (F(3, 4), F(1, 4))


def test_assemble_universe_extension():
    doc = parse_kb(
        "#em\ngovCybLab(baja) : 0.5 +- 0.\n"
        "#universe\ngovCybLab(baja), extra(c).\n"
    )
    fw = assemble(doc)
    assert len(fw.em.atom_universe) == 2
    assert len(fw.worlds) == 4


def test_assemble_grounds_schematic_rules():
    text = (
        "#sorts\nactor baja, mojave.\noperation worm123.\n"
        "#am\n"
        "f1 : fact evidOf(baja,worm123).\n"
        "de1 : condOp(X,O) -< evidOf(X,O).\n"
    )
    fw = assemble(parse_kb(text))
    labels = {e.label for e in fw.program.elements}
    assert "de1[worm123,baja]" in labels
    assert "de1[worm123,mojave]" in labels
    assert fw.program.is_ground


def test_assemble_rejects_conducting_facts():
    with pytest.raises(AssemblyError):
        assemble(parse_kb("#am\nf1 : fact condOp(baja,worm123).\n"))


def test_render_world():
    universe = (GOV, AGE, MSE)
    assert render_world(frozenset({MSE, GOV}), universe) == "{govCybLab(baja), mseTT(baja,2)}"
    assert render_world(frozenset(), universe) == "{}"


def test_load_kb_missing_file():
    with pytest.raises(OSError):
        load_kb(FIXTURES / "missing.inca")


# one arity per predicate name, since a document must use each consistently
_SHAPES = {"alpha": (), "beta": ("c",), "gamma": ("c", "d")}


@st.composite
def em_formulas(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        name = draw(st.sampled_from(sorted(_SHAPES)))
        return atom_formula(ematom(name, *_SHAPES[name]))
    kind = draw(st.sampled_from(["not", "and", "or"]))
    if kind == "not":
        return neg(draw(em_formulas(depth=depth - 1)))
    left = draw(em_formulas(depth=depth - 1))
    right = draw(em_formulas(depth=depth - 1))
    return conj(left, right) if kind == "and" else disj(left, right)


@given(em_formulas())
def test_formula_round_trips_through_concrete_syntax(f):
    assert parse_query(render_formula(f)) == f
