"""Synthetic models and logs: block-structured nets, playout, noise, uncertainty.

Random streams come from numpy's PCG64 seeded through ``SeedSequence``
with entropy ``[seed, stage, index]``, where ``stage`` is 0 for model
generation, 1 for playout, 2 for deviations, 3 for uncertainty, and
``index`` is the trace position. Every trace therefore has its own
stream and parallel generation reproduces sequential output.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import PlayoutError
from .petri import Marking, SystemNet
from .uncertain_log import (
    DETERMINATE,
    INDETERMINATE,
    CertainEvent,
    SimpleUncertainEvent,
    SimpleUncertainTrace,
    parse_time,
)

DAY_MS = 86_400_000
ORIGIN_MS = parse_time("2020-01-01T00:00:00")

_MODEL, _PLAYOUT, _DEVIATION, _UNCERTAINTY = 0, 1, 2, 3


def _rng(seed: int, stage: int, index: int = 0) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stage, index])))


@dataclass(frozen=True)
class DeviationParams:
    wrong_activity_prob: float = 0.20
    swap_prob: float = 0.20
    extra_event_prob: float = 0.40

    def __post_init__(self):
        for name in ("wrong_activity_prob", "swap_prob", "extra_event_prob"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class UncertaintyParams:
    p: float
    activity_pool: frozenset = field(default_factory=frozenset)
    interval_radius: int = DAY_MS * 3 // 2

    def __post_init__(self):
        object.__setattr__(self, "activity_pool", frozenset(self.activity_pool))
        if not 0 <= self.p <= 1:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")
        if self.p > 0 and not self.activity_pool:
            raise ValueError("activity_pool must be non-empty when p > 0")
        if self.interval_radius < 0:
            raise ValueError("interval_radius must be non-negative")


# -- model generation --------------------------------------------------------


def _label(i: int) -> str:
    s = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        s = chr(65 + r) + s
    return s


def generate_tree(n: int, seed: int) -> tuple:
    """Random process tree with ``n`` leaves.

    Inner nodes are ``("seq" | "xor" | "and", children)`` with 2 or 3
    children; leaves are fresh labels A, B, ... in left-to-right order.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = _rng(seed, _MODEL)
    counter = iter(range(n))

    def make(k):
        if k == 1:
            return _label(next(counter))
        op = ("seq", "xor", "and")[int(rng.integers(3))]
        m = int(rng.integers(2, min(k, 3) + 1))
        cuts = sorted(int(x) for x in rng.choice(np.arange(1, k), size=m - 1, replace=False))
        sizes = [b - a for a, b in zip([0, *cuts], [*cuts, k])]
        return (op, tuple(make(s) for s in sizes))

    return make(n)


def tree_to_string(tree) -> str:
    if isinstance(tree, str):
        return tree
    op, children = tree
    sym = {"seq": "->", "xor": "X", "and": "+"}[op]
    return f"{sym}({', '.join(tree_to_string(c) for c in children)})"


def tree_to_net(tree, name: str = "") -> SystemNet:
    """Workflow net of a process tree; AND blocks get silent split/join."""
    places, transitions, arcs, labels = [], [], [], {}
    counters = {"p": 0, "t": 0, "tau": 0}

    def new_place():
        p = f"p{counters['p']}"
        counters["p"] += 1
        places.append(p)
        return p

    def new_transition(label=None):
        if label is None:
            t = f"tau{counters['tau']}"
            counters["tau"] += 1
        else:
            t = f"t{counters['t']}"
            counters["t"] += 1
            labels[t] = label
        transitions.append(t)
        return t

    def build(node, src, dst):
        if isinstance(node, str):
            t = new_transition(node)
            arcs.extend([(src, t), (t, dst)])
            return
        op, children = node
        if op == "seq":
            cur = src
            for i, child in enumerate(children):
                nxt = dst if i == len(children) - 1 else new_place()
                build(child, cur, nxt)
                cur = nxt
        elif op == "xor":
            for child in children:
                build(child, src, dst)
        else:
            split, join = new_transition(), new_transition()
            arcs.extend([(src, split), (join, dst)])
            for child in children:
                a, b = new_place(), new_place()
                arcs.extend([(split, a), (b, join)])
                build(child, a, b)

    source, sink = new_place(), new_place()
    build(tree, source, sink)
    return SystemNet(places, transitions, arcs, labels, Marking([source]), Marking([sink]), name=name)


def generate_model(n: int, seed: int) -> SystemNet:
    """Sound block-structured workflow net with exactly ``n`` visible transitions."""
    return tree_to_net(generate_tree(n, seed), name=f"model_n{n}_s{seed}")


# -- playout -----------------------------------------------------------------


def playout(
    model: SystemNet,
    num_traces: int,
    seed: int,
    max_steps: int = 10_000,
    origin: int = ORIGIN_MS,
    spacing: int = DAY_MS,
) -> list:
    """Random complete runs of ``model`` as lists of CertainEvent.

    Each step fires a uniformly chosen enabled transition. Visible events
    are stamped ``origin + i * spacing``.
    """
    pre, post = model.preset, model.postset
    order = model.sorted_transitions
    log = []
    for k in range(num_traces):
        rng = _rng(seed, _PLAYOUT, k)
        m = dict(model.initial_marking.items())
        labels = []
        for _ in range(max_steps + 1):
            en = [t for t in order if all(m.get(p, 0) >= 1 for p in pre[t])]
            if not en:
                break
            t = en[int(rng.integers(len(en)))]
            for p in pre[t]:
                m[p] -= 1
            for p in post[t]:
                m[p] = m.get(p, 0) + 1
            if t in model.labels:
                labels.append(model.labels[t])
        else:
            raise PlayoutError(f"trace {k}: no deadlock within {max_steps} steps")
        if Marking(m) != model.final_marking:
            raise PlayoutError(f"trace {k}: run stopped in a non-final marking {Marking(m)!r}")
        log.append(_stamp(labels, f"case{k:04d}", origin, spacing))
    return log


def _stamp(labels, case_id, origin=ORIGIN_MS, spacing=DAY_MS) -> list:
    return [
        CertainEvent(f"{case_id}:e{i}", case_id, a, origin + i * spacing) for i, a in enumerate(labels)
    ]


def log_alphabet(log) -> list:
    return sorted({e.activity for trace in log for e in trace})


# -- deviations --------------------------------------------------------------


def inject_deviations(
    log: list,
    params: DeviationParams = DeviationParams(),
    seed: int = 0,
    alphabet: Optional[list] = None,
) -> list:
    """Noisy copy of a certain log.

    Per event, the activity is replaced by a different label with
    ``wrong_activity_prob``; per consecutive pair, timestamps (and hence
    positions) are swapped with ``swap_prob``; per trace, one extra event
    with a random label is inserted with ``extra_event_prob``. Events are
    then re-stamped one spacing apart from the trace's first timestamp.
    """
    alphabet = sorted(alphabet if alphabet is not None else log_alphabet(log))
    out = []
    for k, trace in enumerate(log):
        rng = _rng(seed, _DEVIATION, k)
        acts = [e.activity for e in trace]
        for i, a in enumerate(acts):
            u = rng.random()
            others = [b for b in alphabet if b != a]
            j = int(rng.integers(max(len(others), 1)))
            if u < params.wrong_activity_prob and others:
                acts[i] = others[j]
        for i in range(len(acts) - 1):
            if rng.random() < params.swap_prob:
                acts[i], acts[i + 1] = acts[i + 1], acts[i]
        u = rng.random()
        label = alphabet[int(rng.integers(len(alphabet)))] if alphabet else None
        pos = int(rng.integers(len(acts) + 1))
        if u < params.extra_event_prob and label is not None:
            acts.insert(pos, label)
        case_id = trace[0].case_id if trace else f"case{k:04d}"
        origin = trace[0].timestamp if trace else ORIGIN_MS
        spacing = trace[1].timestamp - trace[0].timestamp if len(trace) > 1 else DAY_MS
        out.append(_stamp(acts, case_id, origin, spacing))
    return out


# -- uncertainty -------------------------------------------------------------


def inject_uncertainty(log: list, params: UncertaintyParams, seed: int = 0) -> list:
    """Simple uncertain traces from a certain log.

    Each event draws four uniforms from its trace's stream regardless of
    ``p``: activity flip, timestamp flip, indeterminacy flip, and the choice
    of alternative activity. A flip fires iff its draw is below ``p``, so for
    a fixed seed the traces at a smaller ``p`` are refined by those at a
    larger one.
    """
    pool = sorted(params.activity_pool)
    out = []
    for k, trace in enumerate(log):
        rng = _rng(seed, _UNCERTAINTY, k)
        events = []
        for e in trace:
            u_act, u_time, u_ind, u_alt = rng.random(4)
            acts = {e.activity}
            others = [b for b in pool if b != e.activity]
            if u_act < params.p and others:
                acts.add(others[int(u_alt * len(others))])
            lo = hi = e.timestamp
            if u_time < params.p:
                lo, hi = e.timestamp - params.interval_radius, e.timestamp + params.interval_radius
            flag = INDETERMINATE if u_ind < params.p else DETERMINATE
            events.append(SimpleUncertainEvent(e.event_id, frozenset(acts), lo, hi, flag))
        case_id = trace[0].case_id if trace else f"case{k:04d}"
        out.append(SimpleUncertainTrace(tuple(events), case_id))
    return out


def lift_certain(log: list) -> list:
    """Certain log as simple uncertain traces with no uncertainty."""
    return inject_uncertainty(log, UncertaintyParams(0.0), 0)


def random_uncertain_trace(rng: np.random.Generator, n_events: int, alphabet, p: float, radius: int = DAY_MS * 3 // 2):
    """Standalone random trace, used by property checks and benchmarks."""
    labels = [alphabet[int(rng.integers(len(alphabet)))] for _ in range(n_events)]
    certain = [_stamp(labels, "r")]
    seed = int(rng.integers(2**31))
    return inject_uncertainty(certain, UncertaintyParams(p, frozenset(alphabet), radius), seed)[0]
