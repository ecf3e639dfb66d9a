import pytest

from starweight.cli import main

GAMMA8 = """\
factor A noncyclic nontrivial
factor B noncyclic nontrivial
gens A: a1 a3
gens B: b1 b2 b3
indet: X Y
relator: Y^-1 X a1^-1 X^-1 b2 X a3 X^-1
relator: b1 Y b3 Y^-1
fact: neq a1 1
fact: neq a3 1
fact: neq b1 1
fact: neq b2 1
fact: neq b3 1
fact: notincyclic a3 a1
fact: notincyclic a1 a3
weight: label:1#0 = 1
weight: label:1#1 = 1
weight: label:a3 = 1
weight: label:a1^-1 = 0
weight: label:b2 = 0
weight: label:b3 = 0
weight: label:b1 = 0
"""


@pytest.fixture
def gamma8_file(tmp_path):
    f = tmp_path / "gamma8.scn"
    f.write_text(GAMMA8)
    return str(f)


def test_curvature_values(capsys):
    assert main(["curvature", "--degrees", "4,6,6"]) == 0
    assert capsys.readouterr().out == "pi/6\n"
    assert main(["curvature", "--degrees", "4,4,6,6"]) == 0
    assert capsys.readouterr().out == "-pi/3\n"
    assert main(["curvature", "--degrees", "3,3,3,3", "--boundary", "k0"]) == 0
    assert capsys.readouterr().out == "-pi/3 + 2*pi/k0\n"


def test_curvature_bad_degrees(capsys):
    assert main(["curvature", "--degrees", "2,4"]) == 2


def test_parse_and_star(gamma8_file, capsys):
    assert main(["parse", gamma8_file]) == 0
    out = capsys.readouterr().out
    assert "relator:" in out
    assert main(["star", gamma8_file, "--edges", "--dot", "-"]) == 0
    out = capsys.readouterr().out
    assert "digraph" in out and "label a3" in out


def test_check_weights_aspherical(gamma8_file, capsys):
    assert main(["check-weights", gamma8_file]) == 0
    out = capsys.readouterr().out
    assert "verdict: Aspherical" in out


def test_check_weights_json(gamma8_file, capsys):
    assert main(["check-weights", gamma8_file, "--json"]) == 0
    out = capsys.readouterr().out
    assert "verdict=Aspherical" in out


def test_check_weights_violations_exit_code(tmp_path, capsys):
    text = GAMMA8.replace("fact: notincyclic a3 a1\n", "")
    f = tmp_path / "mut.scn"
    f.write_text(text)
    assert main(["check-weights", str(f)]) == 1
    assert "SURVIVES" in capsys.readouterr().out


def test_search_weights_cli(gamma8_file, capsys):
    assert main(["search-weights", gamma8_file]) == 0
    out = capsys.readouterr().out
    assert "status: found" in out and "weight:" in out


def test_cycles_cli(gamma8_file, capsys):
    assert main(["cycles", gamma8_file]) == 0
    out = capsys.readouterr().out
    assert "total:" in out


def test_trivial_cycles_cli(gamma8_file, capsys):
    assert main(["trivial-cycles", gamma8_file, "--length", "2"]) == 0


def test_classify_equation_inline(capsys):
    assert main(["classify-equation", "--word", "a1 t a2 t a3 t a4 t"]) == 0
    assert "SolvableBy(Cor1)" in capsys.readouterr().out
    assert main(["classify-equation", "--word",
                 "a1 t a2 t^-1 a3 t a4 t^-1 a5 t a6 t^-1 a7 t a8 t^-1 a9 t a10 t^-1"]) == 1
    assert "Unknown" in capsys.readouterr().out


def test_classify_equation_scenario(tmp_path, capsys):
    f = tmp_path / "eq.scn"
    f.write_text(
        "factor A nontrivial\ngens A: a1 a2 a3 a4\nindet: t\n"
        "relator: a1 t a2 t a3 t a4 t\n"
    )
    assert main(["classify-equation", str(f)]) == 0
    assert "Cor1" in capsys.readouterr().out


def test_usage_error(capsys):
    assert main(["check-weights", "/nonexistent/file.scn"]) == 2
    assert main(["nonsense"]) == 2


def test_corpus_run(tmp_path, capsys):
    (tmp_path / "g8.scn").write_text(GAMMA8)
    (tmp_path / "manifest.txt").write_text("g8.scn aspherical sec4 Gamma_8\n")
    assert main(["corpus", "run", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "g8.scn: expected=aspherical got=aspherical ok" in out


def test_corpus_run_mismatch(tmp_path, capsys):
    (tmp_path / "g8.scn").write_text(GAMMA8)
    (tmp_path / "manifest.txt").write_text("g8.scn violations sec4 Gamma_8 flipped\n")
    assert main(["corpus", "run", str(tmp_path)]) == 1
    assert "MISMATCH" in capsys.readouterr().out


def test_corpus_run_deterministic(tmp_path, capsys):
    (tmp_path / "g8.scn").write_text(GAMMA8)
    (tmp_path / "manifest.txt").write_text("g8.scn aspherical sec4 Gamma_8\n")
    main(["corpus", "run", str(tmp_path)])
    first = capsys.readouterr().out
    main(["corpus", "run", str(tmp_path)])
    assert capsys.readouterr().out == first
