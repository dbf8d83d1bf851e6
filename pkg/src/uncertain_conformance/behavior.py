"""Behavior graphs and behavior nets of simple uncertain traces."""
from __future__ import annotations

from collections.abc import Hashable, Iterable
from dataclasses import dataclass

from .errors import NotADagError
from .petri import TAU, Marking, SystemNet
from .uncertain_log import SimpleUncertainTrace

START = "start"
END = "end"


@dataclass(frozen=True)
class BehaviorGraph:
    vertices: tuple
    edges: frozenset

    def by_id(self) -> dict:
        return {v.event_id: v for v in self.vertices}

    def edge_ids(self) -> set:
        return {(u.event_id, w.event_id) for u, w in self.edges}

    def sources(self) -> list:
        has_in = {w for _, w in self.edges}
        return [v for v in self.vertices if v not in has_in]

    def sinks(self) -> list:
        has_out = {u for u, _ in self.edges}
        return [v for v in self.vertices if v not in has_out]

    def to_dot(self) -> str:
        lines = ["digraph behavior {", "  rankdir=LR;"]
        for v in self.vertices:
            acts = ",".join(sorted(v.activities))
            flag = "?" if v.indeterminate else "!"
            lines.append(f'  "{v.event_id}" [label="{v.event_id}\\n{{{acts}}} {flag}"];')
        for u, w in sorted(self.edges, key=lambda e: (e[0].event_id, e[1].event_id)):
            lines.append(f'  "{u.event_id}" -> "{w.event_id}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _topological_order(vertices, succ) -> list:
    indeg = {v: 0 for v in vertices}
    for v in vertices:
        for w in succ[v]:
            indeg[w] += 1
    order = [v for v in vertices if indeg[v] == 0]
    for v in order:
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                order.append(w)
    if len(order) != len(indeg):
        raise NotADagError("graph contains a cycle")
    return order


def transitive_reduction(vertices: Iterable[Hashable], edges: Iterable[tuple]) -> set:
    """Minimal edge set with the same reachability as the input DAG.

    An edge (u, w) is dropped iff w is reachable from u through another
    out-neighbour of u.
    """
    vertices = list(vertices)
    succ = {v: set() for v in vertices}
    for u, w in edges:
        succ[u].add(w)
    order = _topological_order(vertices, succ)

    # reach[v] = vertices reachable from v by a path of length >= 1
    reach: dict = {}
    for v in reversed(order):
        r = set()
        for w in succ[v]:
            r.add(w)
            r |= reach[w]
        reach[v] = r

    reduced = set()
    for u in vertices:
        for w in succ[u]:
            if not any(w in reach[x] for x in succ[u] if x != w):
                reduced.add((u, w))
    return reduced


def behavior_graph(trace: SimpleUncertainTrace) -> BehaviorGraph:
    vertices = tuple(trace.events)
    full = [(u, w) for u in vertices for w in vertices if u.t_max < w.t_min]
    return BehaviorGraph(vertices, frozenset(transitive_reduction(vertices, full)))


def behavior_net(trace: SimpleUncertainTrace) -> SystemNet:
    """Net whose complete runs spell exactly the realizations of ``trace``.

    Each event becomes an XOR block of one transition per activity (plus a
    silent skip when the event is indeterminate); each behavior-graph edge
    becomes a place. Each source event gets a marked start place and each
    sink event an end place that is marked finally; a unique source or
    sink uses the plain ``start`` / ``end`` place. Transitions are ``(event_id, activity)`` or
    ``(event_id, TAU)``; edge places are ``("edge", event_id, event_id)``.
    """
    bg = behavior_graph(trace)
    transitions: dict = {}
    labels = {}
    for v in bg.vertices:
        ts = [(v.event_id, a) for a in sorted(v.activities)]
        for t, a in zip(ts, sorted(v.activities)):
            labels[t] = a
        if v.indeterminate:
            ts.append((v.event_id, TAU))
        transitions[v.event_id] = ts

    places = set()
    arcs = set()
    for u, w in bg.edges:
        p = ("edge", u.event_id, w.event_id)
        places.add(p)
        arcs.update((t, p) for t in transitions[u.event_id])
        arcs.update((p, t) for t in transitions[w.event_id])

    sources, sinks = bg.sources(), bg.sinks()
    init, final = [], []
    for v in sources:
        p = START if len(sources) == 1 else (START, v.event_id)
        places.add(p)
        init.append(p)
        arcs.update((p, t) for t in transitions[v.event_id])
    for v in sinks:
        p = END if len(sinks) == 1 else (END, v.event_id)
        places.add(p)
        final.append(p)
        arcs.update((t, p) for t in transitions[v.event_id])

    all_t = [t for ts in transitions.values() for t in ts]
    if not all_t:
        # empty trace: the only run is the empty one
        return SystemNet({START}, (), (), {}, Marking([START]), Marking([START]), name=trace.case_id)
    return SystemNet(places, all_t, arcs, labels, Marking(init), Marking(final), name=trace.case_id)
