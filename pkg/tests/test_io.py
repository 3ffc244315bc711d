import json
from pathlib import Path

import jsonschema
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from efftopo import are_isomorphic, boolean_algebra, load_ea, mo, mv_chain, parse_ea, serialize_ea, validate
from efftopo.errors import AxiomViolation, ConflictingSum, ParseError
from efftopo.io import REPORT_SCHEMA, export_dot, format_table, report_json
from efftopo.laws import Analysis, analyze, run_all

from conftest import catalog, small_algebras

FIXTURES = Path(__file__).parent / "fixtures"
VALID = sorted((FIXTURES / "valid").glob("*.ea"))
INVALID = sorted((FIXTURES / "invalid").glob("*.ea"))

C2_DOC = "effectalgebra C2\nelements 0 a 1\nzero 0\none 1\nsum a a 1\n"


def reparse(E):
    doc = parse_ea(serialize_ea(E))
    return validate(doc.to_raw(), name=doc.name)


# parsing


def test_parse_c2():
    raw = parse_ea(C2_DOC).to_raw()
    assert raw.size == 3
    assert raw.sums[(1, 1)] == 2
    assert raw.sums[(0, 2)] == raw.sums[(2, 0)] == 2


def test_symmetric_closure():
    doc = parse_ea("effectalgebra B2\nelements 0 p q 1\nzero 0\none 1\nsum q p 1\n")
    raw = doc.to_raw()
    assert raw.sums[(1, 2)] == raw.sums[(2, 1)] == 3


def test_conflicting_sum():
    text = "effectalgebra X\nelements 0 a b c d 1\nzero 0\none 1\nsum a b c\nsum b a d\n"
    with pytest.raises(ConflictingSum) as exc:
        parse_ea(text)
    assert exc.value.line == 6


def test_conflicting_zero_sum():
    with pytest.raises(ConflictingSum):
        parse_ea("effectalgebra X\nelements 0 a 1\nzero 0\none 1\nsum 0 a 1\n")


@pytest.mark.parametrize("text,line,col", [
    ("effectalgebra X\nelements 0 a 1\nzero 0\n", 4, 1),
    ("effectalgebra X\nelements 0 a 1\nzero 0\none 1\nsum a b 1\n", 5, 7),
    ("effectalgebra X\nelements 0 a 1\nzero z\none 1\n", 3, 6),
    ("effectalgebra X\nelements 0 a 1\nzero 0\none 1\none 1\n", 5, 1),
    ("effectalgebra X\nelements 0 a a 1\n", 2, 14),
    ("effectalgebra X\nelements 0 a 1\nzero 0\none 1\nsum a a\n", 5, 1),
    ("effectalgebra X\nzero 0\n", 2, 6),
    ("effectalgebra X\nelement 0 1\n", 2, 1),
])
def test_parse_errors_have_positions(text, line, col):
    with pytest.raises(ParseError) as exc:
        parse_ea(text)
    assert (exc.value.line, exc.value.col) == (line, col)


def test_comments_and_blank_lines():
    E = load_ea(FIXTURES / "valid" / "c3_commented.ea")
    assert are_isomorphic(E, mv_chain(3))


# serialization


def test_c2_round_trip_is_byte_exact():
    E = validate(parse_ea(C2_DOC).to_raw(), name="C2")
    assert serialize_ea(E) == C2_DOC


def test_b2_serialization():
    text = serialize_ea(boolean_algebra(2))
    assert [l for l in text.splitlines() if l.startswith("sum")] == ["sum p q 1"]
    assert reparse(boolean_algebra(2)).table == boolean_algebra(2).table


def test_mo2_reparse_equality():
    E = mo(2)
    F = reparse(E)
    assert F.table == E.table and F.names == E.names


@pytest.mark.parametrize("path", VALID, ids=lambda p: p.name)
def test_fixture_round_trip(path):
    E = load_ea(path)
    text = serialize_ea(E)
    assert serialize_ea(validate(parse_ea(text).to_raw(), name=E.name)) == text
    if "commented" not in path.name:
        assert text == path.read_text()


def test_round_trip_whole_corpus():
    for E in catalog() + small_algebras():
        F = reparse(E)
        assert F.table == E.table and F.name == E.name


@pytest.mark.parametrize("path", INVALID, ids=lambda p: p.name)
def test_invalid_fixtures_rejected(path):
    with pytest.raises(AxiomViolation):
        load_ea(path)


def test_format_table_handles_rejected_tables():
    from efftopo import mutate_negative

    raw = mutate_negative(boolean_algebra(2), "add_top_sum", seed=1)
    doc = parse_ea(format_table(raw, "bad"))
    assert doc.to_raw().sums == raw.sums


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(range(len(catalog()))), st.randoms(use_true_random=False))
def test_parse_ignores_line_order(idx, rnd):
    E = catalog()[idx]
    lines = serialize_ea(E).splitlines()
    head, sums = lines[:4], lines[4:]
    rnd.shuffle(sums)
    shuffled = "\n".join(head + sums) + "\n"
    assert serialize_ea(validate(parse_ea(shuffled).to_raw(), name=E.name)) == serialize_ea(E)


# DOT


@pytest.mark.parametrize("E,edges", [(mv_chain(2), 2), (boolean_algebra(2), 4), (mo(2), 8)])
def test_dot_edge_counts(E, edges):
    dot = export_dot(E)
    assert dot.count("->") == edges
    assert dot.startswith("digraph") and dot.endswith("}\n")


def test_dot_marks_sharp_elements():
    dot = export_dot(mv_chain(3))
    assert dot.count("doublecircle") == 2
    assert export_dot(mo(2)).count("doublecircle") == 6
    assert 'n1 -> n2;' in export_dot(mv_chain(2))


# JSON reports


def test_report_schema_valid():
    for E in (mv_chain(4), mo(2)):
        jsonschema.validate(json.loads(report_json(analyze(E))), REPORT_SCHEMA)
        jsonschema.validate(json.loads(report_json(run_all(E))), REPORT_SCHEMA)


def test_empty_analysis_schema_valid():
    doc = json.loads(report_json(Analysis("empty")))
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["laws"] == []


def test_report_contents():
    doc = json.loads(report_json(analyze(mv_chain(4))))
    assert list(doc) == ["instance", "flags", "topologies", "laws"]
    assert not [l for l in doc["laws"] if l["status"] == "fail"]
    mo2 = json.loads(report_json(analyze(mo(2))))
    assert mo2["flags"]["distributive"] is False
    assert next(l for l in mo2["laws"] if l["id"] == "Thm3.1")["status"] == "skipped"


def test_report_bytes_deterministic():
    for E in (mv_chain(4), mo(2), boolean_algebra(3)):
        assert report_json(analyze(E)) == report_json(analyze(E))
