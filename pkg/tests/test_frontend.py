import io
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import nproducts_of

from lcs.algebra import check_axioms
from lcs.builtins import builtins, neveu_schwarz, r4, r5, vir_current
from lcs.cohomology import check_cochain
from lcs.confmap import random_map
from lcs.element import EVEN, ODD, Element, Generator
from lcs.errors import ParseError, SemanticError
from lcs.frontend import cli, dsl
from lcs.frontend.report import Report, to_jsonable
from lcs.fuzz import fuzz, mutate
from lcs.poly import parse_poly

NS_SRC = """
algebra NS {
  generator L even; generator G odd;
  bracket [L,L] = (d + 2*l) L;
  bracket [L,G] = (d + 3/2*l) G;
  bracket [G,G] = L;
}
"""

MIXED = NS_SRC + """
map half even on NS { half(L) = 1/2 L; half(G) = 1/2 G; }
cochain psi arity 2 even on NS { psi(L,L) = (l1 - l2) L; psi(G,G) = L; }
liealg ab { generator a even; }
rep M on NS { generator u even; generator w odd; }
"""


# -- parsing ------------------------------------------------------------------------


def test_ns_source():
    A = dsl.parse_algebra(NS_SRC)
    assert A.names == ("L", "G")
    assert A.same_table(neveu_schwarz())


def test_empty_document():
    cat = dsl.parse("")
    assert cat.order == [] and cat.names() == set()
    assert dsl.parse("  // nothing\n").order == []


def test_parity_clash():
    src = "algebra A { generator L even; generator G odd; bracket [L,L] = (d + 2*l) G; }"
    with pytest.raises(SemanticError) as err:
        dsl.parse(src)
    assert err.value.line == 1 and err.value.col > 0


@pytest.mark.parametrize("src,line,col", [
    ("algebra A {\n  generator L even\n}", 3, 1),
    ("algebra A {\n  generator L even;\n  bracket [L,L] = (d + ) L;\n}", 3, 24),
    ("algebra 1A { }", 1, 9),
])
def test_syntax_errors_have_positions(src, line, col):
    with pytest.raises(ParseError) as err:
        dsl.parse(src)
    assert (err.value.line, err.value.col) == (line, col)


@pytest.mark.parametrize("src,needle", [
    ("algebra A { generator L even; generator L odd; }", "duplicate"),
    ("algebra A { generator L even; } algebra A { generator M even; }", "duplicate"),
    ("algebra A { generator d even; }", "reserved"),
    ("algebra A { generator L even; bracket [L,X] = L; }", "X"),
    ("algebra A { generator L even; bracket [L,L] = (d + 2*l) Q; }", "Q"),
    ("algebra A { generator G odd; }", "= 0"),
])
def test_semantic_errors(src, needle):
    with pytest.raises(SemanticError) as err:
        dsl.parse(src)
    assert needle in str(err.value)
    assert err.value.line >= 1


def test_odd_diagonal_explicit_zero():
    A = dsl.parse_algebra("algebra A { generator G odd; bracket [G,G] = 0; }")
    assert A.bracket("G", "G").is_zero()


def test_skew_violation_is_accepted_then_caught_by_axioms():
    A = dsl.parse_algebra("algebra A { generator L even; bracket [L,L] = (d + 3*l) L; }")
    assert not check_axioms(A).skew_ok


def test_mixed_document():
    cat = dsl.parse(MIXED)
    assert [k for k, _ in cat.order] == ["algebra", "map", "cochain", "liealg", "rep"]
    f, _ = cat.maps["half"]
    assert f.value("L") == Element.gen("L", parse_poly("1/2"))
    assert check_cochain(cat.cochains["psi"]) == []
    assert cat.rep("M").names == ("u", "w")


def test_cochain_must_be_skew():
    src = NS_SRC + "cochain bad arity 2 even on NS { bad(L,L) = (l1 + l2) L; }"
    with pytest.raises(SemanticError):
        dsl.parse(src)


def test_cochain_arguments_in_declaration_order():
    src = NS_SRC + "cochain c arity 2 even on NS { c(G,L) = G; }"
    with pytest.raises(SemanticError):
        dsl.parse(src)


def test_builtin_references():
    cat = dsl.parse("algebra B = R5(alpha=1);")
    assert cat.algebras["B"].same_table(r5(1))
    assert check_axioms(cat.algebras["B"]).ok
    assert dsl.resolve_algebra("R4(beta=3/2)").same_table(r5(0))
    assert r4(Fraction(3, 2)).same_table(r5(0))
    assert check_axioms(dsl.resolve_algebra("VirCur")).ok


# -- rendering -----------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(builtins()))
def test_builtin_round_trip(name):
    A = builtins()[name]
    B = dsl.parse_algebra(dsl.render_algebra(A))
    assert B.names == A.names and B.parities == A.parities
    assert B.same_table(A)


def test_document_round_trip():
    cat = dsl.parse(MIXED)
    again = dsl.parse(dsl.render(cat))
    assert again.order == cat.order
    assert again.algebras["NS"].same_table(cat.algebras["NS"])
    assert again.maps["half"][0] == cat.maps["half"][0]
    assert again.cochains["psi"] == cat.cochains["psi"]
    assert dsl.render(again) == dsl.render(cat)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 1))
def test_map_round_trip(seed, parity):
    NS = neveu_schwarz()
    f = random_map(random.Random(seed), NS, NS, parity)
    text = dsl.render_algebra(NS) + "\n" + dsl.render_map(f, NS, "f")
    assert dsl.parse(text).maps["f"][0] == f


def test_ident():
    assert dsl.ident("NSxad NS", "A") == "NSxad_NS"
    assert dsl.ident("2x", "A") == "A"


# -- reports ------------------------------------------------------------------------


def test_report_json_schema():
    r = Report("demo", inputs={"x": Fraction(1, 2)})
    r.check("a", True)
    r.witnesses.append(Element.gen("L", parse_poly("d")))
    d = json.loads(r.to_json())
    assert d["schema_version"] == 1
    assert set(d) >= {"command", "inputs", "checks", "witnesses", "bases", "timing", "ok"}
    assert d["inputs"]["x"] == "1/2" and d["witnesses"] == ["(d) L"]
    assert d["ok"] is True
    r.check("b", False)
    assert not r.ok and "FAIL" in r.summary()


def test_to_jsonable_nested():
    assert to_jsonable({"a": [Fraction(3), (1, 2)]}) == {"a": ["3", [1, 2]]}


# -- command line ----------------------------------------------------------------------


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json", "-")
    return code, json.loads(out)


def test_cli_check_axioms(capsys):
    code, d = run_json(capsys, "check-axioms", "--algebra", "NS")
    assert code == 0 and d["ok"] and d["command"] == "check-axioms"


def test_cli_derivations_inner(capsys):
    code, d = run_json(capsys, "derivations", "--algebra", "NS", "--parity", "odd", "--ddeg", "2", "--ldeg", "2",
                       "--compare-inner")
    assert code == 0
    assert d["info"]["odd outer_dim"] == 0 and d["info"]["odd der_dim"] == 2


def test_cli_outer_derivations_fail(capsys):
    code, _, _ = run(capsys, "derivations", "--algebra", "R2", "--parity", "even", "--ddeg", "1", "--ldeg", "1",
                     "--compare-inner")
    assert code == 1


def test_cli_nijenhuis(capsys):
    code, d = run_json(capsys, "nijenhuis", "--algebra", "NS", "--map", "identity", "--check-trivial")
    assert code == 0 and all(d["checks"].values())


def test_cli_file_and_stdin(tmp_path, capsys, monkeypatch):
    path = tmp_path / "ns.lcs"
    path.write_text(MIXED)
    code, d = run_json(capsys, "parse", "--file", str(path))
    assert code == 0 and d["checks"] == {"NS axioms": True}
    monkeypatch.setattr("sys.stdin", io.StringIO(NS_SRC))
    code, out, _ = run(capsys, "render", "--file", "-")
    assert code == 0 and dsl.parse_algebra(out).same_table(neveu_schwarz())
    code, d = run_json(capsys, "differential", "--file", str(path), "--cochain", "psi")
    assert code == 0
    code, d = run_json(capsys, "nijenhuis", "--file", str(path), "--map", "half", "--check-trivial")
    assert code == 0


def test_cli_writes_json_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, text, _ = run(capsys, "check-cend", "--rank", "2", "--trials", "5", "--json", str(out))
    assert code == 0 and "check-cend" in text
    assert json.loads(out.read_text())["schema_version"] == 1


def test_cli_bad_axioms_exit_one(tmp_path, capsys):
    path = tmp_path / "bad.lcs"
    path.write_text("algebra A { generator L even; bracket [L,L] = (d + 3*l) L; }")
    code, d = run_json(capsys, "check-axioms", "--file", str(path))
    assert code == 1 and not d["ok"] and d["witnesses"]


@pytest.mark.parametrize("argv", [
    ["check-axioms", "--algebra", "Nope"],
    ["check-axioms", "--algebra", "R5(alpha=x)"],
    ["parse", "--file", "/nonexistent/file.lcs"],
    ["derivations", "--algebra", "NS", "--ddeg", "-1"],
])
def test_cli_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_cli_parse_error_reports_position(tmp_path, capsys):
    path = tmp_path / "bad.lcs"
    path.write_text("algebra A {\n  generator L even\n}")
    code, _, err = run(capsys, "parse", "--file", str(path))
    assert code == 2 and "3:1" in err


def test_cli_argparse_errors():
    with pytest.raises(SystemExit) as exc:
        cli.main(["no-such-command"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["derivations", "--parity", "sideways"])
    assert exc.value.code == 2


@pytest.mark.parametrize("argv", [
    ["builtins"],
    ["center", "--algebra", "R1", "--ddeg", "2"],
    ["generalized", "--algebra", "R3", "--kind", "Centroid", "--ddeg", "1", "--ldeg", "1"],
    ["check-rep", "--algebra", "NS"],
    ["semidirect", "--algebra", "NS"],
    ["cur-embedding"],
    ["d2", "--algebra", "NS", "--count", "3", "--arity", "0,1"],
])
def test_cli_commands_pass(capsys, argv):
    code, d = run_json(capsys, *argv)
    assert code == 0 and d["ok"]


# -- fuzzing -------------------------------------------------------------------------------


def test_mutation_changes_exactly_one_coefficient():
    NS = neveu_schwarz()
    rng = random.Random(4)
    for _ in range(20):
        mutant, mut = mutate(NS, rng)
        g, h = mut.pair
        diff = mutant.bracket(g, h) - NS.bracket(g, h)
        i, j = mut.monomial
        assert diff == Element.gen(mut.target, parse_poly(f"{mut.delta}*d^{i}*l^{j}"))
        assert mut.describe().startswith(f"[{g},{h}]")


def test_fuzz_agrees_with_nproduct_oracle():
    algebras = [neveu_schwarz(), vir_current(), r5(3)]
    for rec in fuzz(algebras, 40, seed=7):
        genuine = nproducts_of(rec.mutant).is_lie_conformal()
        assert rec.report.ok == genuine, rec.mutation.describe()
        if not genuine:
            assert rec.report.witnesses


def test_generators_in_dsl_and_library_agree():
    cat = dsl.parse("algebra A { generator a even; generator b odd; bracket [b,b] = 0; }")
    assert cat.algebras["A"].generators == (Generator("a", EVEN), Generator("b", ODD))
