"""Labeled Petri nets with initial and final markings.

Nets are immutable values. Transitions outside ``labels`` are invisible.
Place and transition identifiers may be any hashable, orderable-by-repr
value; products use ``(t1, SKIP)`` / ``(SKIP, t2)`` / ``(t1, t2)`` pairs.
"""
from __future__ import annotations

from collections import Counter
from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

from .errors import (
    ExplosionError,
    InvalidMarkingError,
    InvalidNetError,
    NotEnabledError,
    UnsupportedNetError,
)


class _Skip:
    """The "no move" sentinel written as >> in alignments."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return ">>"

    def __reduce__(self):
        return (_Skip, ())


SKIP = _Skip()
TAU = "τ"


def id_key(x: Any) -> tuple:
    """Total sort key over heterogeneous identifiers (ints, strings, tuples)."""
    if isinstance(x, tuple):
        return (2, tuple(id_key(y) for y in x))
    if isinstance(x, _Skip):
        return (0, "")
    if isinstance(x, (int, float)):
        return (1, "", x)
    return (1, str(x))


class Marking(Mapping):
    """Immutable multiset of places."""

    __slots__ = ("_items", "_hash")

    def __init__(self, tokens: Iterable[Hashable] | Mapping[Hashable, int] = ()):
        if isinstance(tokens, Mapping):
            counts = {p: int(n) for p, n in tokens.items() if n}
        else:
            counts = dict(Counter(tokens))
        for p, n in counts.items():
            if n < 0:
                raise InvalidMarkingError(f"negative multiplicity {n} for place {p!r}")
        self._items = counts
        self._hash = None

    def __getitem__(self, place):
        return self._items.get(place, 0)

    def __contains__(self, place):
        return place in self._items

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)

    def __eq__(self, other):
        if isinstance(other, Marking):
            return self._items == other._items
        if isinstance(other, Mapping):
            return self._items == {p: n for p, n in other.items() if n}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._items.items()))
        return self._hash

    def __repr__(self):
        inner = ", ".join(
            f"{p!r}" if n == 1 else f"{p!r}^{n}"
            for p, n in sorted(self._items.items(), key=lambda kv: id_key(kv[0]))
        )
        return f"[{inner}]"

    def total(self) -> int:
        return sum(self._items.values())

    def __add__(self, other: "Marking") -> "Marking":
        c = Counter(self._items)
        c.update(dict(other.items()))
        return Marking(c)


@dataclass(frozen=True)
class SystemNet:
    places: frozenset
    transitions: frozenset
    arcs: frozenset
    labels: Mapping = field(default_factory=dict)
    initial_marking: Marking = field(default_factory=Marking)
    final_marking: Marking = field(default_factory=Marking)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "places", frozenset(self.places))
        object.__setattr__(self, "transitions", frozenset(self.transitions))
        object.__setattr__(self, "arcs", frozenset(self.arcs))
        object.__setattr__(self, "labels", dict(self.labels))
        if not isinstance(self.initial_marking, Marking):
            object.__setattr__(self, "initial_marking", Marking(self.initial_marking))
        if not isinstance(self.final_marking, Marking):
            object.__setattr__(self, "final_marking", Marking(self.final_marking))
        self._validate()

    def _validate(self):
        if self.places & self.transitions:
            raise InvalidNetError("places and transitions share identifiers")
        for src, dst in self.arcs:
            if not (
                (src in self.places and dst in self.transitions)
                or (src in self.transitions and dst in self.places)
            ):
                raise InvalidNetError(f"arc {src!r} -> {dst!r} does not join a place and a transition")
        for t, label in self.labels.items():
            if t not in self.transitions:
                raise InvalidNetError(f"label on unknown transition {t!r}")
            if label is None or label == TAU:
                raise InvalidNetError(f"transition {t!r} carries tau explicitly; omit it from labels")
        for m, what in ((self.initial_marking, "initial"), (self.final_marking, "final")):
            foreign = [p for p in m if p not in self.places]
            if foreign:
                raise InvalidNetError(f"{what} marking mentions unknown places {foreign!r}")

    @cached_property
    def preset(self) -> dict:
        pre = {x: set() for x in self.places | self.transitions}
        for src, dst in self.arcs:
            pre[dst].add(src)
        return {x: frozenset(s) for x, s in pre.items()}

    @cached_property
    def postset(self) -> dict:
        post = {x: set() for x in self.places | self.transitions}
        for src, dst in self.arcs:
            post[src].add(dst)
        return {x: frozenset(s) for x, s in post.items()}

    @cached_property
    def sorted_transitions(self) -> tuple:
        return tuple(sorted(self.transitions, key=id_key))

    def label(self, t):
        """Label of ``t``, or None when ``t`` is invisible."""
        return self.labels.get(t)

    def is_visible(self, t) -> bool:
        return t in self.labels


def _check_marking(net: SystemNet, m: Marking):
    for p in m:
        if p not in net.places:
            raise InvalidMarkingError(f"marking mentions place {p!r} not in net")


def enabled(net: SystemNet, m: Marking) -> set:
    if not isinstance(m, Marking):
        m = Marking(m)
    _check_marking(net, m)
    pre = net.preset
    return {t for t in net.transitions if all(m[p] >= 1 for p in pre[t])}


def fire(net: SystemNet, m: Marking, t) -> Marking:
    if not isinstance(m, Marking):
        m = Marking(m)
    _check_marking(net, m)
    if t not in net.transitions:
        raise NotEnabledError(f"{t!r} is not a transition of the net")
    pre = net.preset[t]
    if any(m[p] < 1 for p in pre):
        raise NotEnabledError(f"transition {t!r} is not enabled in {m!r}")
    counts = dict(m.items())
    for p in pre:
        counts[p] -= 1
    for p in net.postset[t]:
        counts[p] = counts.get(p, 0) + 1
    return Marking(counts)


def _successors(net: SystemNet, m: Marking):
    pre = net.preset
    for t in net.sorted_transitions:
        if all(m[p] >= 1 for p in pre[t]):
            yield t, fire(net, m, t)


def visible_language(net: SystemNet, max_sequences: int = 100_000) -> set:
    """All visible label sequences of complete firing sequences.

    Depth-first over the reachability graph with memoised suffix sets per
    marking. Only valid for nets whose reachability graph is finite and
    acyclic; a marking revisited on the current path raises
    UnsupportedNetError.
    """
    memo: dict[Marking, frozenset] = {}
    on_path: set[Marking] = set()

    def suffixes(m: Marking) -> frozenset:
        if m in memo:
            return memo[m]
        if m in on_path:
            raise UnsupportedNetError(f"reachability graph has a cycle through {m!r}")
        on_path.add(m)
        out = {()} if m == net.final_marking else set()
        for t, m2 in _successors(net, m):
            label = net.labels.get(t)
            for suf in suffixes(m2):
                out.add(suf if label is None else (label, *suf))
            if len(out) > max_sequences:
                raise ExplosionError(
                    f"visible language exceeds {max_sequences} sequences", len(out)
                )
        on_path.discard(m)
        memo[m] = frozenset(out)
        return memo[m]

    return set(suffixes(net.initial_marking))


def complete_firing_sequences(net: SystemNet, max_sequences: int = 100_000) -> list:
    """All transition sequences from the initial to the final marking (acyclic nets only)."""
    out: list[tuple] = []
    on_path: set[Marking] = set()

    def walk(m: Marking, prefix: tuple):
        if m in on_path:
            raise UnsupportedNetError(f"reachability graph has a cycle through {m!r}")
        if m == net.final_marking:
            out.append(prefix)
            if len(out) > max_sequences:
                raise ExplosionError(f"more than {max_sequences} firing sequences", len(out))
        on_path.add(m)
        for t, m2 in _successors(net, m):
            walk(m2, prefix + (t,))
        on_path.discard(m)

    walk(net.initial_marking, ())
    return out


def event_net(trace: Iterable[str], name: str = "") -> SystemNet:
    """Sequence-shaped net that replays exactly ``trace``.

    Places are ``("p", i)`` for i in 1..n+1 and transitions ``("t", i)``.
    The empty trace gives a single place that is both initial and final.
    """
    trace = tuple(trace)
    n = len(trace)
    places = [("p", i) for i in range(1, n + 2)]
    transitions = [("t", i) for i in range(1, n + 1)]
    arcs = []
    for i in range(1, n + 1):
        arcs.append((("p", i), ("t", i)))
        arcs.append((("t", i), ("p", i + 1)))
    labels = {("t", i): a for i, a in enumerate(trace, start=1)}
    return SystemNet(
        places,
        transitions,
        arcs,
        labels,
        Marking([("p", 1)]),
        Marking([("p", n + 1)]),
        name=name,
    )


LEFT = "L"
RIGHT = "R"


def product(s1: SystemNet, s2: SystemNet) -> SystemNet:
    """Synchronous product: log moves, model moves, and label-matching sync moves.

    Places are tagged ``(LEFT, p)`` / ``(RIGHT, p)`` to keep the two ID
    spaces disjoint. Synchronous transitions take the label of ``s1``.
    """
    places = {(LEFT, p) for p in s1.places} | {(RIGHT, p) for p in s2.places}
    transitions = []
    arcs = []
    labels = {}
    pre1, post1, pre2, post2 = s1.preset, s1.postset, s2.preset, s2.postset

    for t1 in s1.transitions:
        t = (t1, SKIP)
        transitions.append(t)
        arcs.extend(((LEFT, p), t) for p in pre1[t1])
        arcs.extend((t, (LEFT, p)) for p in post1[t1])
        if t1 in s1.labels:
            labels[t] = s1.labels[t1]
    for t2 in s2.transitions:
        t = (SKIP, t2)
        transitions.append(t)
        arcs.extend(((RIGHT, p), t) for p in pre2[t2])
        arcs.extend((t, (RIGHT, p)) for p in post2[t2])
        if t2 in s2.labels:
            labels[t] = s2.labels[t2]

    by_label: dict[str, list] = {}
    for t2, a in s2.labels.items():
        by_label.setdefault(a, []).append(t2)
    for t1, a in s1.labels.items():
        for t2 in by_label.get(a, ()):
            t = (t1, t2)
            transitions.append(t)
            arcs.extend(((LEFT, p), t) for p in pre1[t1])
            arcs.extend(((RIGHT, p), t) for p in pre2[t2])
            arcs.extend((t, (LEFT, p)) for p in post1[t1])
            arcs.extend((t, (RIGHT, p)) for p in post2[t2])
            labels[t] = a

    def tag(m, side):
        return Marking({(side, p): n for p, n in m.items()})

    return SystemNet(
        places,
        transitions,
        arcs,
        labels,
        tag(s1.initial_marking, LEFT) + tag(s2.initial_marking, RIGHT),
        tag(s1.final_marking, LEFT) + tag(s2.final_marking, RIGHT),
        name=f"{s1.name}x{s2.name}" if s1.name or s2.name else "",
    )
