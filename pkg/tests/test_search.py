from fractions import Fraction

import pytest

from starweight.scenario import parse_scenario
from starweight.search import (
    Constraint,
    SearchConfig,
    search_weights,
    scenario_with_weights,
    solve_feasible,
    weight_lines,
)
from starweight.weights import verify_weight_test

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
"""


def test_simplex_basic_feasible():
    cons = [
        Constraint((("x", Fraction(1)), ("y", Fraction(1))), "<=", Fraction(1), "sum"),
        Constraint((("x", Fraction(1)),), ">=", Fraction(1, 2), "xmin"),
    ]
    sol = solve_feasible(["x", "y"], cons)
    assert sol is not None
    assert all(c.satisfied(sol) for c in cons)


def test_simplex_infeasible():
    cons = [
        Constraint((("x", Fraction(1)),), "<=", Fraction(0), "hi"),
        Constraint((("x", Fraction(1)),), ">=", Fraction(2), "lo"),
    ]
    assert solve_feasible(["x"], cons) is None


def test_search_gamma8_finds_zero_one_function():
    s = parse_scenario(GAMMA8, name="gamma8")
    out = search_weights(s)
    assert out.found, out.last_violations
    assert out.iterations <= 64
    trial = scenario_with_weights(s, out.weights)
    assert verify_weight_test(trial).verdict == "Aspherical"
    assert set(out.weights.values()) <= {Fraction(0), Fraction(1, 2), Fraction(1)}


def test_search_paper_assignment_satisfies_generated_constraints():
    s = parse_scenario(GAMMA8, name="gamma8")
    out = search_weights(s)
    assert out.found
    # the hand-picked assignment: 1 on both identity edges and a3, 0 elsewhere
    paper = {}
    from starweight.stargraph import build_star_graph

    g = build_star_graph(s.presentation)
    for e in g.edges:
        label = e.label_str()
        paper[e.edge_id] = Fraction(1) if label in ("1", "a3") else Fraction(0)
    for c in out.constraints:
        assert c.satisfied(paper), c.label


def test_search_two_corner_relator_infeasible():
    # relator X a1 X^-1 a2 has two corners, both loops, with no facts: the
    # relator condition forces both weights to 0 while each loop needs >= 2
    text = "factor A\ngens A: a1 a2\nindet: X\nrelator: X a1 X^-1 a2\n"
    out = search_weights(parse_scenario(text))
    assert out.status == "infeasible"
    assert out.certificate
    assert any("relator" in c or "cycle" in c or "candidate" in c for c in out.certificate)


def test_search_no_relators():
    out = search_weights(parse_scenario("factor A\ngens A: a1\n"))
    assert out.found and out.weights == {} and out.iterations == 0


def test_search_deterministic():
    s = parse_scenario(GAMMA8, name="gamma8")
    a, b = search_weights(s), search_weights(s)
    assert a.weights == b.weights and a.iterations == b.iterations


def test_search_emits_pasteable_weight_lines():
    s = parse_scenario(GAMMA8, name="gamma8")
    out = search_weights(s)
    text = GAMMA8 + weight_lines(out.weights)
    report = verify_weight_test(parse_scenario(text))
    assert report.verdict == "Aspherical"


def test_search_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(max_iterations=0)
