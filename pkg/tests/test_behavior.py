import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import uncertain_traces
from oracles import reduction_by_closure
from uncertain_conformance.behavior import (
    END,
    START,
    behavior_graph,
    behavior_net,
    transitive_reduction,
)
from uncertain_conformance.errors import NotADagError
from uncertain_conformance.petri import TAU, Marking, visible_language
from uncertain_conformance.uncertain_log import (
    SimpleUncertainEvent,
    SimpleUncertainTrace,
    certain_trace,
    realizations,
)


def test_running_example_graph(example_trace):
    bg = behavior_graph(example_trace)
    assert bg.edge_ids() == {("e1", "e2"), ("e1", "e3"), ("e2", "e4"), ("e3", "e5"), ("e4", "e5")}
    assert [v.event_id for v in bg.sources()] == ["e1"]
    assert [v.event_id for v in bg.sinks()] == ["e5"]
    assert "e1" in bg.to_dot() and "->" in bg.to_dot()


def test_running_example_net(example_trace):
    net = behavior_net(example_trace)
    visible = {t for t in net.transitions if t in net.labels}
    silent = net.transitions - visible
    assert sorted(net.labels[t] for t in visible) == ["A", "A", "B", "C", "C", "D", "E"]
    assert silent == {("e5", TAU)}
    # e1's transition feeds both the e2 block and the e3 block (AND split)
    assert net.postset[("e1", "A")] == {("edge", "e1", "e2"), ("edge", "e1", "e3")}
    assert net.initial_marking == Marking([START])
    assert net.final_marking == Marking([END])
    assert visible_language(net) == realizations(example_trace)


def test_reduction_drops_implied_edges():
    edges = {(1, 2), (2, 3), (1, 3), (3, 4), (1, 4)}
    assert transitive_reduction([1, 2, 3, 4], edges) == {(1, 2), (2, 3), (3, 4)}


def test_reduction_rejects_cycles():
    with pytest.raises(NotADagError):
        transitive_reduction([1, 2], {(1, 2), (2, 1)})


@st.composite
def dags(draw):
    n = draw(st.integers(1, 8))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = draw(st.sets(st.sampled_from(pairs), max_size=len(pairs))) if pairs else set()
    return list(range(n)), edges


@given(dags())
def test_reduction_matches_closure_oracle(dag):
    vertices, edges = dag
    assert transitive_reduction(vertices, edges) == reduction_by_closure(vertices, edges)


@given(uncertain_traces(max_events=6))
def test_graph_edges_are_exactly_the_reduced_precedences(trace):
    bg = behavior_graph(trace)
    ids = [e.event_id for e in trace]
    full = {(u.event_id, w.event_id) for u in trace for w in trace if u.t_max < w.t_min}
    assert bg.edge_ids() == reduction_by_closure(ids, full)


def test_several_sources_and_sinks():
    # a and c tie, then b and d tie
    t = SimpleUncertainTrace((
        SimpleUncertainEvent("a", {"A"}, 0, 0),
        SimpleUncertainEvent("c", {"C"}, 0, 0),
        SimpleUncertainEvent("b", {"B"}, 1, 1),
        SimpleUncertainEvent("d", {"D"}, 1, 1),
    ))
    net = behavior_net(t)
    assert net.initial_marking == Marking([(START, "a"), (START, "c")])
    assert net.final_marking == Marking([(END, "b"), (END, "d")])
    assert visible_language(net) == realizations(t)


def test_empty_and_certain_traces():
    net = behavior_net(SimpleUncertainTrace(()))
    assert visible_language(net) == {()}
    net = behavior_net(certain_trace("ABA"))
    assert visible_language(net) == {tuple("ABA")}


def test_single_indeterminate_event():
    t = SimpleUncertainTrace((SimpleUncertainEvent("x", {"A", "B"}, 0, 0, "?"),))
    assert visible_language(behavior_net(t)) == {(), ("A",), ("B",)}


@given(uncertain_traces(max_events=5))
def test_language_equivalence_property(trace):
    assert visible_language(behavior_net(trace)) == realizations(trace)


@given(uncertain_traces(max_events=5))
def test_net_size_invariant(trace):
    net = behavior_net(trace)
    bg = behavior_graph(trace)
    expected_t = sum(len(e.activities) + (1 if e.indeterminate else 0) for e in trace)
    assert len(net.transitions) == expected_t
    n_boundary = len(bg.sources()) + len(bg.sinks())
    if trace.events:
        assert len(net.places) == len(bg.edges) + n_boundary
