import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affembed.cli import grammar, serialize
from affembed.cli.main import main
from affembed.cli.tasks import Options, run_text
from affembed.embed import EmbeddingProblem, construct_embedding, verify_certificate
from affembed.fields import QQ, adjoin_algebraic

from conftest import PROBLEMS, pres, svar

EX1 = """field k = Q
extend K = k adjoin a minpoly a^2 - 2
ring B = K[s]
gens R in B = { a*s^2, a*s^3 }
task embed R bound=10 seed=1
"""


def test_parse_ex1():
    pf = grammar.parse(EX1)
    assert set(pf.fields) == {"k", "K"}
    assert pf.rings["B"].variables == ["s"]
    assert len(pf.gens["R"].exprs) == 2
    assert pf.task.kind == "embed" and pf.task.options == {"bound": 10, "seed": 1}


@pytest.mark.parametrize("line", ["gens R = { }", "gens R in B = { }"])
def test_empty_generators_rejected(line):
    with pytest.raises(grammar.ParseError):
        grammar.parse("field k = Q\nring B = k[s]\n" + line + "\ntask embed R\n")


def test_duplicate_task():
    with pytest.raises(grammar.DuplicateTask):
        grammar.parse("field k = Q\nring B = k[s]\ngens R in B = { s^2 }\n"
                      "task embed R\ntask sagbi R\n")


def test_undefined_name_position():
    with pytest.raises(grammar.UndefinedName) as info:
        grammar.parse("field k = Q\nring B = k[s]\ngens R in B = { s^2 + q }\ntask embed R\n")
    assert info.value.line == 3 and info.value.column == 23


def test_diagnostic_has_caret():
    with pytest.raises(grammar.ParseError) as info:
        grammar.parse("field k = Q\nring B = k[s\n")
    assert "^" in info.value.diagnostic()


def run_file(name, *extra):
    return main(["--json", "--no-timing", str(PROBLEMS / name), *extra])


def test_ex1_exit_code_and_schema(capsys):
    assert run_file("ex1.prob") == 0
    out = json.loads(capsys.readouterr().out)
    assert out["schema"] == 1 and out["status"] == "verified"
    keys = list(out["result"])
    assert keys[:7] == ["case", "field_tower", "t", "d", "images", "adjunctions", "verification"]
    assert out["result"]["case"] == "AlgebraicCoefficients"


def test_two_transcendentals_unsupported(capsys):
    assert run_file("unsupported_two_transcendentals.prob") == 3
    assert json.loads(capsys.readouterr().out)["result"]["error"] == "UnsupportedTowerShape"


def test_tampered_certificate_replay(capsys):
    assert run_file("verify_tampered.prob") == 1
    out = json.loads(capsys.readouterr().out)
    assert out["result"]["check"] == "homomorphism"
    assert run_file("verify_ex1.prob") == 0


def test_parse_error_exit_code(capsys):
    report = run_text("field k = Q\nring B = k[s]\ngens R in B = { }\ntask embed R\n")
    assert report.exit_code == 2 and report.payload["line"] == 3


def test_reducible_minpoly_is_build_error():
    report = run_text("field k = Q\nextend K = k adjoin a minpoly a^2 - 1\nring B = K[s]\n"
                      "gens R in B = { a*s }\ntask embed R\n")
    assert report.exit_code == 2 and report.payload["error"] == "BuildError"


def test_cancel_narrative_ending(capsys):
    assert main(["--trace", str(PROBLEMS / "cancel_cusp.prob")]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[-1] == "Dh = 0; h = θ² ∉ k*; D kills R"


@pytest.mark.parametrize("name", sorted(p.name for p in PROBLEMS.glob("*.prob")))
def test_every_problem_file_has_a_known_exit_code(name, capsys):
    assert run_file(name) in (0, 1, 2, 3)
    json.loads(capsys.readouterr().out)


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "affembed", "--json", "--no-timing",
                           str(PROBLEMS / "conductor_cusp.prob")],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["conductor"]["exponent"] == 2


def test_certificate_json_round_trip():
    K = adjoin_algebraic(QQ, "a", [-2, 0, 1])
    a = K.gen()
    s = svar(K)
    problem = EmbeddingProblem(pres(K, [a * s**2, a * s**3]), bound=10, seed=1)
    cert = construct_embedding(problem)
    data = json.loads(json.dumps(serialize.certificate_to_json(cert, problem)))
    back = serialize.certificate_from_json(data, QQ)
    assert back.field_tower == cert.field_tower
    assert back.images == cert.images
    assert all(verify_certificate(problem, back)["checks"].values())


def test_tower_round_trip(sqrt2):
    K, a = sqrt2
    L = adjoin_algebraic(K, "b", [-a, 0, 1])
    assert serialize.tower_from_json(serialize.tower_to_json(L)) == L


lines = st.lists(st.sampled_from([
    "field k = Q", "field K = k(u)", "extend K = k adjoin a minpoly a^2 - 2",
    "ring B = K[s]", "ring B = k[s]", "gens R in B = { s^2, s^3 }", "gens R in B = { }",
    "task embed R", "task sagbi R bound=6", "derivation D on B = { s -> 1 }", "task lnd D",
    "# comment", "", "gens R in B over k = { u*s }", "task embed R bound=x",
]), max_size=8)


@settings(max_examples=60, deadline=None)
@given(lines)
def test_parser_total_on_line_soup(ls):
    try:
        grammar.parse("\n".join(ls))
    except grammar.ParseError:
        pass


@settings(max_examples=100, deadline=None)
@given(st.text(alphabet="fieldrgnstaskQBRk=(){}[],+-*/^0123456789 \n#_->", max_size=80))
def test_parser_total_on_random_text(text):
    try:
        grammar.parse(text)
    except grammar.ParseError:
        pass


@settings(max_examples=40, deadline=None)
@given(lines)
def test_runner_total(ls):
    report = run_text("\n".join(ls), Options(bound=6))
    assert report.exit_code in (0, 1, 2, 3)


def test_monomial_limit_is_reported_and_restored(capsys):
    from affembed import graded

    before = graded.MONOMIAL_LIMIT
    assert run_file("ex1.prob", "--monomial-limit", "5") == 3
    out = json.loads(capsys.readouterr().out)
    assert out["result"]["error"] == "BoundTooLarge"
    assert out["options"]["monomial_limit"] == 5
    assert graded.MONOMIAL_LIMIT == before
