import json

import pytest

from src.graph.belief_support_mdp import build_belief_support_mdp
from src.jani.exporter import DUMMY_ACTION, JaniDocument, export_jani
from src.jani.expressions import conjunction, disjunction, equals, ite, negation
from src.jani.interpreter import JaniInterpreter
from src.jani.jani_exception import JaniException
from src.pomdp.pomdp import PomdpBuilder
from src.pomdp.specification import Specification
from tests.corpus import SMALL_SEEDS, small_instance


def expected_graph(pomdp, spec):
    mdp = build_belief_support_mdp(pomdp, spec)
    graph = {}
    for node, support in enumerate(mdp.nodes):
        graph[frozenset(support.states())] = {
            pomdp.action_names[action]: frozenset(frozenset(mdp.nodes[target].states()) for target in targets)
            for action, targets in mdp.edges[node].items()
        }
    return graph


def contracted(pomdp, spec):
    interpreter = JaniInterpreter(export_jani(pomdp, spec))
    starts = [support.states() for support in build_belief_support_mdp(pomdp, spec).nodes]
    return interpreter.contracted_graph(starts)


def test_edge_counts(cheese):
    pomdp, spec = cheese
    document = export_jani(pomdp, spec)
    expected = sum(len(pomdp.observation_actions(observation)) for observation in range(pomdp.num_observations))
    assert expected == 13
    assert document.edge_counts == {"first_step": 13, "dummy": 1}
    edges = document.model["automata"][0]["edges"]
    assert len(edges) == 14
    assert edges[-1]["action"] == DUMMY_ACTION


def test_cheese_graph_matches_belief_support_mdp(cheese):
    pomdp, spec = cheese
    assert contracted(pomdp, spec) == expected_graph(pomdp, spec)


@pytest.mark.parametrize("seed", SMALL_SEEDS)
def test_corpus_graph_matches_belief_support_mdp(seed):
    pomdp, spec = small_instance(seed)
    assert contracted(pomdp, spec) == expected_graph(pomdp, spec)


def test_exploration_from_the_initial_state(cheese):
    pomdp, spec = cheese
    interpreter = JaniInterpreter(export_jani(pomdp, spec))
    assert interpreter.support_of(interpreter.initial_valuation()) == pomdp.initial_support
    graph = interpreter.contracted_graph()
    initial = frozenset(pomdp.initial_support)
    assert graph[initial]["north"] == frozenset(
        {frozenset(pomdp.states_named(["1"])), frozenset(pomdp.states_named(["5"]))}
    )
    assert graph[initial]["south"] == frozenset({frozenset(pomdp.states_named(["9", "11"]))})


def test_parameter_pinning(cheese):
    pomdp, spec = cheese
    free = export_jani(pomdp, spec).model["constants"]
    assert free == [{"name": "p", "type": "real"}]
    pinned = export_jani(pomdp, spec, pin_p=True).model["constants"]
    assert pinned[0]["value"] == {"op": "/", "left": 1, "right": 7}
    assert JaniInterpreter(export_jani(pomdp, spec, pin_p=True)).constants["p"] == pytest.approx(1 / 7)


def test_output_is_stable(tmp_path, cheese):
    pomdp, spec = cheese
    text = export_jani(pomdp, spec).to_json()
    assert text == export_jani(pomdp, spec).to_json()

    path = tmp_path / "cheese.jani"
    export_jani(pomdp, spec).save(path)
    assert path.read_text(encoding="utf-8") == text
    model = json.loads(text)
    assert model["jani-version"] == 1
    assert model["type"] == "mdp"
    assert [prop["name"] for prop in model["properties"]] == ["reach", "avoid", "reach_avoid"]


def test_single_state_model():
    builder = PomdpBuilder()
    state = builder.add_state("s", "o")
    builder.add_outcome(state, "stay", state, 1)
    builder.set_initial([state])
    pomdp, spec = builder.build(), Specification.of([state], [])

    document = export_jani(pomdp, spec)
    assert document.belsup_names == ("belsup_0",)
    assert document.edge_counts == {"first_step": 1, "dummy": 1}
    graph = JaniInterpreter(document).contracted_graph()
    assert graph == {frozenset({0}): {"stay": frozenset({frozenset({0})})}}


def test_malformed_documents():
    with pytest.raises(JaniException):
        JaniInterpreter(JaniDocument(model={}, belsup_names=()))


def test_expression_evaluation(cheese):
    interpreter = JaniInterpreter(export_jani(*cheese))
    valuation = {"x": 2, "flag": True}
    assert interpreter.evaluate(conjunction([equals("x", 2), "flag"]), valuation) is True
    assert interpreter.evaluate(negation(disjunction(["flag", False])), valuation) is False
    assert interpreter.evaluate(ite(equals("x", 3), 1, "p"), valuation) == interpreter.constants["p"]
    with pytest.raises(JaniException):
        interpreter.evaluate("unknown", valuation)
    with pytest.raises(JaniException):
        interpreter.evaluate({"op": "max", "left": 1, "right": 2}, valuation)


def test_expression_builders():
    assert conjunction([]) is True
    assert disjunction([]) is False
    assert conjunction(["a"]) == "a"
    assert disjunction(["a", "b"]) == {"op": "∨", "left": "a", "right": "b"}
