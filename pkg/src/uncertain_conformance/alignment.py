"""Optimal alignments on the synchronous product and conformance bounds.

The search is uniform-cost (A* with a zero heuristic unless one is
supplied). Successors are generated in move-class order, synchronous <
silent < model move < log move, then by transition identifier, and equal
priorities are popped first-in first-out, so results are deterministic.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

from . import _kernel
from .behavior import behavior_net
from .errors import ExplosionError, UnreachableFinalMarkingError
from .petri import LEFT, RIGHT, SKIP, TAU, Marking, SystemNet, event_net, id_key
from .uncertain_log import SimpleUncertainTrace, realizations

DEFAULT_MAX_STATES = 1_000_000

SYNC = "sync"
SILENT = "tau"
MODEL = "model"
LOG = "log"
_RANK = {SYNC: 0, SILENT: 1, MODEL: 2, LOG: 3}


@dataclass(frozen=True)
class CostFunction:
    sync: int = 0
    model_visible: int = 1
    model_invisible: int = 0
    log: int = 1

    def __post_init__(self):
        for name in ("sync", "model_visible", "model_invisible", "log"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"cost {name} must be a non-negative integer, got {v!r}")

    def of(self, kind: str) -> int:
        return {SYNC: self.sync, SILENT: self.model_invisible, MODEL: self.model_visible, LOG: self.log}[kind]

    @classmethod
    def parse(cls, text: str) -> "CostFunction":
        """Parse ``sync=0,logmove=1,modelmove=1,tau=0`` (any subset)."""
        keys = {"sync": "sync", "logmove": "log", "modelmove": "model_visible", "tau": "model_invisible"}
        kwargs = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            k, _, v = part.partition("=")
            if k.strip() not in keys:
                raise ValueError(f"unknown cost key {k!r}; expected one of {sorted(keys)}")
            kwargs[keys[k.strip()]] = int(v)
        return cls(**kwargs)


STANDARD_COST = CostFunction()


@dataclass(frozen=True)
class Move:
    """One alignment step.

    ``log`` is the log-side label, ``TAU`` for a silent log-net transition
    (skipping an indeterminate event), or ``SKIP``. ``model`` is the
    model-side label, ``TAU`` for an invisible model transition, or ``SKIP``.
    """

    log: object
    model: object
    log_transition: object = SKIP
    model_transition: object = SKIP

    def __post_init__(self):
        if self.log is SKIP and self.model is SKIP:
            raise ValueError("a move cannot be >> on both sides")
        if self.log is not SKIP and self.model is not SKIP:
            if self.log != self.model or self.log == TAU:
                raise ValueError(f"synchronous move with mismatching labels {self.log!r}/{self.model!r}")

    @property
    def kind(self) -> str:
        if self.log is not SKIP and self.model is not SKIP:
            return SYNC
        if self.log is SKIP:
            return SILENT if self.model == TAU else MODEL
        return SILENT if self.log == TAU else LOG

    def to_dict(self) -> dict:
        def side(x):
            return None if x is SKIP else x

        return {
            "kind": self.kind,
            "log": side(self.log),
            "model": side(self.model),
            "log_transition": None if self.log_transition is SKIP else repr(self.log_transition),
            "model_transition": None if self.model_transition is SKIP else repr(self.model_transition),
        }


@dataclass(frozen=True)
class Alignment:
    moves: tuple
    states_visited: int = 0

    def __len__(self):
        return len(self.moves)

    def log_projection(self) -> tuple:
        """Visible log activities in order."""
        return tuple(m.log for m in self.moves if m.log is not SKIP and m.log != TAU)

    def log_transitions(self) -> tuple:
        return tuple(m.log_transition for m in self.moves if m.log_transition is not SKIP)

    def model_transitions(self) -> tuple:
        return tuple(m.model_transition for m in self.moves if m.model_transition is not SKIP)

    def model_projection(self) -> tuple:
        """Visible model activities in order."""
        return tuple(m.model for m in self.moves if m.model is not SKIP and m.model != TAU)

    def render(self) -> str:
        """Two-row text rendering, log on top, model below."""
        def cell(x):
            return ">>" if x is SKIP else str(x)

        top = [cell(m.log) for m in self.moves]
        bottom = [cell(m.model) for m in self.moves]
        widths = [max(len(a), len(b)) for a, b in zip(top, bottom)]
        row = lambda xs: "| " + " | ".join(x.ljust(w) for x, w in zip(xs, widths)) + " |"
        if not self.moves:
            return "|  |\n|  |"
        return row(top) + "\n" + row(bottom)

    def to_json(self) -> str:
        return json.dumps([m.to_dict() for m in self.moves], ensure_ascii=False)


def cost(alignment: Alignment, c: CostFunction = STANDARD_COST) -> int:
    return sum(c.of(m.kind) for m in alignment.moves)


def _classify(t, log_net: SystemNet, model: SystemNet) -> str:
    t1, t2 = t
    if t1 is not SKIP and t2 is not SKIP:
        return SYNC
    if t1 is SKIP:
        return MODEL if t2 in model.labels else SILENT
    return LOG if t1 in log_net.labels else SILENT


class CompiledProduct(NamedTuple):
    places: list
    transitions: list
    kinds: list
    pre_ptr: list
    pre_idx: list
    post_ptr: list
    post_idx: list
    costs: list
    init: list
    final: list


def compile_product(prod: SystemNet, log_net: SystemNet, model: SystemNet, c: CostFunction) -> CompiledProduct:
    """Flatten a product net into index arrays in tie-break order."""
    places = sorted(prod.places, key=id_key)
    pidx = {p: i for i, p in enumerate(places)}
    kinds = {t: _classify(t, log_net, model) for t in prod.transitions}
    order = sorted(prod.transitions, key=lambda t: (_RANK[kinds[t]], id_key(t)))
    pre_ptr, pre_idx, post_ptr, post_idx = [0], [], [0], []
    for t in order:
        pre_idx.extend(sorted(pidx[p] for p in prod.preset[t]))
        pre_ptr.append(len(pre_idx))
        post_idx.extend(sorted(pidx[p] for p in prod.postset[t]))
        post_ptr.append(len(post_idx))
    init = [0] * len(places)
    final = [0] * len(places)
    for p, n in prod.initial_marking.items():
        init[pidx[p]] = n
    for p, n in prod.final_marking.items():
        final[pidx[p]] = n
    return CompiledProduct(
        places,
        order,
        [kinds[t] for t in order],
        pre_ptr,
        pre_idx,
        post_ptr,
        post_idx,
        [c.of(kinds[t]) for t in order],
        init,
        final,
    )


class ProductCompiler:
    """Model-side half of ``compile_product``, reused across log nets.

    ``compile(log_net)`` returns exactly what
    ``compile_product(product(log_net, model), log_net, model, c)`` would,
    without materialising the product net.
    """

    def __init__(self, model: SystemNet, c: CostFunction):
        self.model = model
        self.c = c
        self.places = sorted(model.places, key=id_key)
        self.pidx = {p: i for i, p in enumerate(self.places)}
        self.key = {t: id_key(t) for t in model.transitions}
        self.pre = {t: sorted(self.pidx[p] for p in model.preset[t]) for t in model.transitions}
        self.post = {t: sorted(self.pidx[p] for p in model.postset[t]) for t in model.transitions}
        self.by_label: dict = {}
        for t in sorted(model.labels, key=id_key):
            self.by_label.setdefault(model.labels[t], []).append(t)
        skip = id_key(SKIP)
        self.model_moves = sorted(
            ((SKIP, t) for t in model.transitions),
            key=lambda mt: (_RANK[MODEL if mt[1] in model.labels else SILENT], (2, (skip, self.key[mt[1]]))),
        )

    def compile(self, log_net: SystemNet) -> CompiledProduct:
        model, c = self.model, self.c
        lplaces = sorted(log_net.places, key=id_key)
        nl = len(lplaces)
        lidx = {p: i for i, p in enumerate(lplaces)}
        lkey = {t: id_key(t) for t in log_net.transitions}
        lpre = {t: sorted(lidx[p] for p in log_net.preset[t]) for t in log_net.transitions}
        lpost = {t: sorted(lidx[p] for p in log_net.postset[t]) for t in log_net.transitions}
        skip = id_key(SKIP)

        entries = []  # (sort key, transition, kind, pre, post)
        for t1, a in log_net.labels.items():
            for t2 in self.by_label.get(a, ()):
                entries.append((
                    (0, (2, (lkey[t1], self.key[t2]))),
                    (t1, t2),
                    SYNC,
                    lpre[t1] + [nl + i for i in self.pre[t2]],
                    lpost[t1] + [nl + i for i in self.post[t2]],
                ))
        for t1 in log_net.transitions:
            kind = LOG if t1 in log_net.labels else SILENT
            entries.append(((_RANK[kind], (2, (lkey[t1], skip))), (t1, SKIP), kind, lpre[t1], lpost[t1]))
        for mt in self.model_moves:
            t2 = mt[1]
            kind = MODEL if t2 in model.labels else SILENT
            entries.append((
                (_RANK[kind], (2, (skip, self.key[t2]))),
                mt,
                kind,
                [nl + i for i in self.pre[t2]],
                [nl + i for i in self.post[t2]],
            ))
        entries.sort(key=lambda e: e[0])

        pre_ptr, pre_idx, post_ptr, post_idx = [0], [], [0], []
        for e in entries:
            pre_idx.extend(e[3])
            pre_ptr.append(len(pre_idx))
            post_idx.extend(e[4])
            post_ptr.append(len(post_idx))
        n = nl + len(self.places)
        init, final = [0] * n, [0] * n
        for p, k in log_net.initial_marking.items():
            init[lidx[p]] = k
        for p, k in log_net.final_marking.items():
            final[lidx[p]] = k
        for p, k in model.initial_marking.items():
            init[nl + self.pidx[p]] += k
        for p, k in model.final_marking.items():
            final[nl + self.pidx[p]] += k
        return CompiledProduct(
            [(LEFT, p) for p in lplaces] + [(RIGHT, p) for p in self.places],
            [e[1] for e in entries],
            [e[2] for e in entries],
            pre_ptr,
            pre_idx,
            post_ptr,
            post_idx,
            [c.of(e[2]) for e in entries],
            init,
            final,
        )


def compiler_for(model: SystemNet, c: CostFunction) -> ProductCompiler:
    cache = model.__dict__.setdefault("_product_compilers", {})
    if c not in cache:
        cache[c] = ProductCompiler(model, c)
    return cache[c]


def align(
    log_net: SystemNet,
    model: SystemNet,
    c: CostFunction = STANDARD_COST,
    max_states: int = DEFAULT_MAX_STATES,
    heuristic: Optional[Callable[[Marking], int]] = None,
    kernel: Optional[str] = None,
) -> Alignment:
    """Cost-optimal alignment of ``log_net``'s runs against ``model``.

    Searches the marking graph of the synchronous product from its initial
    to its final marking. ``heuristic`` receives a marking of the product
    (places tagged ``("L", p)`` / ``("R", p)``) and must be consistent:
    never overestimate, never drop by more than a move's cost along a move.
    """
    cp = compiler_for(model, c).compile(log_net)
    h = None
    if heuristic is not None:
        places = cp.places

        def h(vec):
            return int(heuristic(Marking({places[i]: n for i, n in enumerate(vec) if n})))

    status, _, path, n_states = _kernel.get(kernel)(
        len(cp.places), cp.pre_ptr, cp.pre_idx, cp.post_ptr, cp.post_idx, cp.costs, cp.init, cp.final, max_states, h
    )
    if status == _kernel.CAP_EXCEEDED:
        raise ExplosionError(f"alignment search exceeded {max_states} markings", n_states)
    if status == _kernel.UNREACHABLE:
        raise UnreachableFinalMarkingError("no complete firing sequence reaches the final marking of the product")

    moves = []
    for i in path:
        t1, t2 = cp.transitions[i]
        log_label = SKIP if t1 is SKIP else log_net.labels.get(t1, TAU)
        model_label = SKIP if t2 is SKIP else model.labels.get(t2, TAU)
        moves.append(Move(log_label, model_label, t1, t2))
    return Alignment(tuple(moves), n_states)


def align_sequence(sequence, model: SystemNet, c: CostFunction = STANDARD_COST, **kwargs) -> Alignment:
    return align(event_net(sequence), model, c, **kwargs)


class BoundResult(NamedTuple):
    cost: int
    witness: tuple
    alignment: Alignment


@dataclass(frozen=True)
class ConformanceBounds:
    lower: int
    upper: int
    lower_witness: tuple
    upper_witness: tuple

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")


def lower_bound(
    trace: SimpleUncertainTrace, model: SystemNet, c: CostFunction = STANDARD_COST, **kwargs
) -> BoundResult:
    """Best-case cost over all realizations, via one search on the behavior net."""
    a = align(behavior_net(trace), model, c, **kwargs)
    return BoundResult(cost(a, c), a.log_projection(), a)


def _bruteforce(trace, model, c, cap, cache, **kwargs):
    # first minimum / maximum in sorted order; the cache holds costs only
    best = worst = None
    aligned = {}
    for seq in sorted(realizations(trace, cap)):
        if cache is not None and seq in cache:
            k = cache[seq]
        else:
            a = align(event_net(seq), model, c, **kwargs)
            k = cost(a, c)
            aligned[seq] = a
            if cache is not None:
                cache[seq] = k
        if best is None or k < best[0]:
            best = (k, seq)
        if worst is None or k > worst[0]:
            worst = (k, seq)

    def result(k, seq):
        a = aligned[seq] if seq in aligned else align(event_net(seq), model, c, **kwargs)
        return BoundResult(k, seq, a)

    return result(*best), result(*worst)


def upper_bound(
    trace: SimpleUncertainTrace,
    model: SystemNet,
    c: CostFunction = STANDARD_COST,
    cap: int = 10_000,
    cache: Optional[dict] = None,
    **kwargs,
) -> BoundResult:
    """Worst-case cost over all realizations, by enumerating them.

    ``cache`` optionally memoises per-sequence costs; it must only be
    shared between calls with the same model and cost function.
    """
    return _bruteforce(trace, model, c, cap, cache, **kwargs)[1]


def bounds_bruteforce(
    trace: SimpleUncertainTrace,
    model: SystemNet,
    c: CostFunction = STANDARD_COST,
    cap: int = 10_000,
    cache: Optional[dict] = None,
    **kwargs,
) -> ConformanceBounds:
    lo, hi = _bruteforce(trace, model, c, cap, cache, **kwargs)
    return ConformanceBounds(lo.cost, hi.cost, lo.witness, hi.witness)


def bounds(
    trace: SimpleUncertainTrace,
    model: SystemNet,
    c: CostFunction = STANDARD_COST,
    cap: int = 10_000,
    cache: Optional[dict] = None,
    **kwargs,
) -> ConformanceBounds:
    """Lower bound from the behavior net, upper bound by enumeration."""
    lo = lower_bound(trace, model, c, **kwargs)
    hi = upper_bound(trace, model, c, cap, cache, **kwargs)
    return ConformanceBounds(lo.cost, hi.cost, lo.witness, hi.witness)
