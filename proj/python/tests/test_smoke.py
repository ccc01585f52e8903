"""End-to-end smoke tests for the python bindings."""

import math

import pytest

import rgqa


def test_similarity():
    assert rgqa.cosine_similarity([1.0, 0.0], [1.0, 0.0]) == pytest.approx(1.0)
    assert rgqa.cosine_similarity([1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.0)
    assert rgqa.dot_product([1.0, 2.0], [3.0, 4.0]) == pytest.approx(11.0)
    assert rgqa.joint_representation([1.0, 2.0], [3.0, 4.0]) == [1.0, 2.0, 3.0, 4.0]
    with pytest.raises(RuntimeError):
        rgqa.cosine_similarity([0.0, 0.0], [1.0, 0.0])


def test_prompt_grammar_round_trip():
    context = "John M is nominated by Adam to be chief justice."
    trigger = rgqa.Span(10, 19, "nominated")
    marked = rgqa.mark_trigger(context, trigger)
    assert marked == "John M is [trg] nominated [trg] by Adam to be chief justice."

    demo = rgqa.Demonstration(
        id="d1",
        question="Who are nominated?",
        context="The board picked Mary Q. as director.",
        answers=["Mary Q."],
    )
    rendered = rgqa.render_demonstration(demo)
    prompt = rgqa.build_input(rendered, "Who are nominated?", marked)
    assert prompt.startswith("<S> [demo] ")
    assert prompt.endswith(" </S>")
    assert "The answer is: Mary Q." in prompt

    gold = [rgqa.Span(0, 7, "John M."), rgqa.Span(23, 27, "Adam")]
    target = rgqa.build_target(gold)
    assert target == "<s> John M. [sep_arg] Adam </s>"
    assert rgqa.split_answers(target) == ["John M.", "Adam"]


def test_locate_span():
    context = "ab YY ab"
    trigger = rgqa.Span(3, 5, "YY")
    span = rgqa.locate_span("ab", context, trigger)
    assert (span.start, span.end) == (0, 2)  # tie resolved to the earlier span
    assert rgqa.locate_span("zz", context, trigger) is None


def test_retrieve_and_analogy():
    demos = [
        rgqa.Demonstration(id="a", question="q", context="c", answers=["x"]),
        rgqa.Demonstration(id="b", question="q", context="c", answers=[]),
    ]
    vectors = {"a": [1.0, 0.0], "b": [0.0, 1.0]}
    top = rgqa.retrieve_top("query", [0.9, 0.1], demos, vectors, k=2)
    assert [demo_id for demo_id, _ in top] == ["a", "b"]
    assert top[0][1] > top[1][1]

    assert rgqa.analogy_label(0.8, 0.7, True, True) == 1
    assert rgqa.analogy_label(0.7, 0.7, True, True) == 0  # strict threshold
    assert rgqa.analogy_label(0.8, 0.7, False, True) == 0


def test_score_oracle_round_trip():
    context = "alice nominated bob"
    inst = rgqa.RoleInstance()
    inst.id = "d:0:Person"
    inst.doc_id = "d"
    inst.context = context
    inst.event_type = "T"
    inst.trigger = rgqa.Span(6, 15, "nominated")
    inst.role = "Person"
    inst.question = "Who?"
    inst.gold_args = [rgqa.Span(16, 19, "bob")]

    target = rgqa.build_target(inst.gold_args)
    preds = []
    for text in rgqa.split_answers(target):
        span = rgqa.locate_span(text, context, inst.trigger)
        preds.append(rgqa.ArgumentPrediction(inst.id, inst.role, span))

    report = rgqa.score([inst], preds)
    assert report["arg_id"]["em"]["f1"] == pytest.approx(1.0)
    assert report["arg_c"]["hm"]["f1"] == pytest.approx(1.0)


def test_head_match():
    assert rgqa.head_token("the old church") == "church"
    assert rgqa.match_hm("the old church", "church")
    assert not rgqa.match_hm("church", "mosque")
    assert rgqa.match_em(rgqa.Span(1, 3, "bc"), rgqa.Span(1, 3, "bc"))


def test_sampling():
    assert rgqa.allocate_proportional([60, 30, 10], 10) == [6, 3, 1]

    clusters = rgqa.kmeans([[0.0], [0.1], [10.0], [10.1]], k=2, seed=1)
    sizes = sorted(len(m) for m in clusters["members"])
    assert sizes == [2, 2]
    history = clusters["objective_history"]
    assert all(b <= a + 1e-9 for a, b in zip(history, history[1:]))

    population = [(f"id{i}", f"T{i % 3}") for i in range(30)]
    plan = rgqa.sample(population, "random", n=6, seed=7)
    again = rgqa.sample(population, "random", n=6, seed=7)
    assert plan["selected_ids"] == again["selected_ids"]
    assert len(set(plan["selected_ids"])) == 6

    vectors = {f"id{i}": [10.0 * (i % 3), 0.0] for i in range(30)}
    triggers = {f"id{i}": [10.0 * (i % 3), 0.0] for i in range(30)}
    joint = rgqa.sample(
        population, "jointenc", n=6, seed=7, vectors=vectors, trigger_vectors=triggers
    )
    assert len(joint["selected_ids"]) == 6
    assert sorted(alloc for _, alloc in joint["clusters"]) == [2, 2, 2]


def test_distribution_distance():
    dist = rgqa.type_distribution(["A", "A", "B", "C"])
    assert dist["A"] == pytest.approx(0.5)

    p = {"A": 0.5, "B": 0.5}
    q = {"A": 0.9, "B": 0.1}
    assert rgqa.hellinger_distance(p, p) == pytest.approx(0.0)
    assert rgqa.hellinger_distance(p, q) == pytest.approx(0.3249, abs=1e-3)
    assert rgqa.hellinger_distance({"A": 1.0}, {"B": 1.0}) == 1.0
    assert rgqa.per_type_distance(1.0, 0.0) == pytest.approx(math.sqrt(2.0))
