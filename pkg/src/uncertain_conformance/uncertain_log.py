"""Certain, strongly uncertain, and weakly uncertain events and logs.

Timestamps are integer epoch milliseconds throughout.
"""
from __future__ import annotations

import itertools
import json
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Optional

from .errors import (
    ExplosionError,
    IncompleteAssignmentError,
    InvalidAssignmentError,
    InvalidDistributionError,
    InvalidTraceError,
    ParseError,
    UnsupportedDistributionError,
)

DETERMINATE = "!"
INDETERMINATE = "?"
MASS_TOLERANCE = 1e-9


def _check_flag(flag):
    if flag not in (DETERMINATE, INDETERMINATE):
        raise ValueError(f"indeterminacy flag must be '!' or '?', got {flag!r}")


@dataclass(frozen=True)
class CertainEvent:
    event_id: str
    case_id: str
    activity: str
    timestamp: int


@dataclass(frozen=True)
class StronglyUncertainEvent:
    event_id: str
    case_ids: frozenset
    activities: frozenset
    timestamps: frozenset
    indeterminacy: str = DETERMINATE

    def __post_init__(self):
        for name in ("case_ids", "activities", "timestamps"):
            value = frozenset(getattr(self, name))
            if not value:
                raise ValueError(f"event {self.event_id!r}: {name} must be non-empty")
            object.__setattr__(self, name, value)
        _check_flag(self.indeterminacy)


@dataclass(frozen=True)
class WeaklyUncertainEvent:
    """Event with a joint probability mass over (case_id, activity, timestamp).

    A timestamp of ``None`` in a triple stands for a continuous density kept
    in ``timestamp_density`` (e.g. ``("normal", mean_ms, std_ms)``); such
    events are recorded but cannot be converted to strong form.
    """

    event_id: str
    mass: Mapping
    timestamp_density: Optional[tuple] = None

    def __post_init__(self):
        mass = dict(self.mass)
        if not mass:
            raise InvalidDistributionError(f"event {self.event_id!r}: empty mass")
        for key, p in mass.items():
            if not (0 < p <= 1):
                raise InvalidDistributionError(f"event {self.event_id!r}: probability {p} of {key!r} outside (0,1]")
        object.__setattr__(self, "mass", mass)

    @property
    def total_mass(self) -> float:
        return math.fsum(self.mass.values())

    @classmethod
    def from_marginals(
        cls,
        event_id,
        case_ids: Mapping,
        activities: Mapping,
        timestamps: Optional[Mapping] = None,
        occurrence: float = 1.0,
        timestamp_density: Optional[tuple] = None,
    ) -> "WeaklyUncertainEvent":
        """Joint mass built from independent per-attribute distributions."""
        if timestamps is None:
            if timestamp_density is None:
                raise InvalidDistributionError("either timestamps or timestamp_density is required")
            timestamps = {None: 1.0}
        mass = {}
        for (c, pc), (a, pa), (t, pt) in itertools.product(
            case_ids.items(), activities.items(), timestamps.items()
        ):
            p = occurrence * pc * pa * pt
            if p > 0:
                mass[(c, a, t)] = p
        return cls(event_id, mass, timestamp_density)


@dataclass(frozen=True)
class SimpleUncertainEvent:
    event_id: str
    activities: frozenset
    t_min: int
    t_max: int
    indeterminacy: str = DETERMINATE

    def __post_init__(self):
        acts = frozenset(self.activities)
        if not acts:
            raise InvalidTraceError(f"event {self.event_id!r}: empty activity set")
        object.__setattr__(self, "activities", acts)
        if self.t_min > self.t_max:
            raise InvalidTraceError(f"event {self.event_id!r}: t_min {self.t_min} > t_max {self.t_max}")
        _check_flag(self.indeterminacy)

    @property
    def indeterminate(self) -> bool:
        return self.indeterminacy == INDETERMINATE

    def precedes(self, other: "SimpleUncertainEvent") -> bool:
        """True when this event happens strictly before ``other`` in every realization."""
        return self.t_max < other.t_min


@dataclass(frozen=True)
class SimpleUncertainTrace:
    events: tuple
    case_id: str = ""

    def __post_init__(self):
        events = tuple(self.events)
        ids = [e.event_id for e in events]
        if len(set(ids)) != len(ids):
            raise InvalidTraceError(f"trace {self.case_id!r}: duplicate event ids")
        object.__setattr__(self, "events", events)

    def __len__(self):
        return len(self.events)

    def __iter__(self):
        return iter(self.events)

    @property
    def is_certain(self) -> bool:
        return all(
            len(e.activities) == 1 and e.t_min == e.t_max and not e.indeterminate for e in self.events
        )


def certain_trace(activities: Iterable[str], case_id: str = "", start: int = 0, step: int = 1) -> SimpleUncertainTrace:
    """Lift a plain activity sequence to a certain simple trace."""
    return SimpleUncertainTrace(
        tuple(
            SimpleUncertainEvent(f"e{i + 1}", frozenset([a]), start + i * step, start + i * step)
            for i, a in enumerate(activities)
        ),
        case_id,
    )


def weak_to_strong(log: Iterable[WeaklyUncertainEvent]) -> list:
    out = []
    for ev in log:
        total = ev.total_mass
        if total > 1 + MASS_TOLERANCE:
            raise InvalidDistributionError(f"event {ev.event_id!r}: mass sums to {total} > 1")
        support = [k for k, p in ev.mass.items() if p > 0]
        if any(t is None for _, _, t in support):
            raise UnsupportedDistributionError(
                f"event {ev.event_id!r}: continuous timestamp density {ev.timestamp_density!r} has no finite support"
            )
        flag = DETERMINATE if abs(total - 1) <= MASS_TOLERANCE else INDETERMINATE
        out.append(
            StronglyUncertainEvent(
                ev.event_id,
                frozenset(c for c, _, _ in support),
                frozenset(a for _, a, _ in support),
                frozenset(t for _, _, t in support),
                flag,
            )
        )
    return out


def simplify(log: Iterable[StronglyUncertainEvent], g: Mapping) -> list:
    """Group events into simple uncertain traces by the case assignment ``g``.

    Traces appear in order of first occurrence of their case in ``log``.
    """
    traces: dict = {}
    for ev in log:
        if ev.event_id not in g:
            raise IncompleteAssignmentError(f"no case assigned to event {ev.event_id!r}")
        case = g[ev.event_id]
        if case not in ev.case_ids:
            raise InvalidAssignmentError(
                f"event {ev.event_id!r} assigned to case {case!r}, not among {sorted(map(str, ev.case_ids))}"
            )
        traces.setdefault(case, []).append(
            SimpleUncertainEvent(ev.event_id, ev.activities, min(ev.timestamps), max(ev.timestamps), ev.indeterminacy)
        )
    return [SimpleUncertainTrace(tuple(evs), str(case)) for case, evs in traces.items()]


def _linear_extensions(events: list):
    """Orders of ``events`` compatible with the strict interval order."""
    n = len(events)
    preds = [
        frozenset(j for j in range(n) if events[j].precedes(events[i])) for i in range(n)
    ]

    def rec(placed: frozenset, prefix: list):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for i in range(n):
            if i not in placed and preds[i] <= placed:
                prefix.append(i)
                yield from rec(placed | {i}, prefix)
                prefix.pop()

    yield from rec(frozenset(), [])


def realizations(trace: SimpleUncertainTrace, cap: int = 10_000) -> set:
    """Every untimed activity sequence the uncertain trace can stand for.

    Enumerates subsets keeping all determinate events, then orders
    compatible with the intervals, then one activity per kept event.
    """
    events = list(trace.events)
    optional = [i for i, e in enumerate(events) if e.indeterminate]
    out: set = set()
    for r in range(len(optional) + 1):
        for dropped in itertools.combinations(optional, r):
            kept = [e for i, e in enumerate(events) if i not in dropped]
            for order in _linear_extensions(kept):
                choices = [sorted(kept[i].activities) for i in order]
                for seq in itertools.product(*choices):
                    out.add(seq)
                    if len(out) > cap:
                        raise ExplosionError(
                            f"trace {trace.case_id!r}: more than {cap} realizations", len(out)
                        )
    return out


def count_realizations(trace: SimpleUncertainTrace, cap: int = 10_000) -> Optional[int]:
    """Number of realizations, or None when it exceeds ``cap``."""
    try:
        return len(realizations(trace, cap))
    except ExplosionError:
        return None


def is_log_realization(certain: Iterable[CertainEvent], uncertain: Iterable[StronglyUncertainEvent]) -> bool:
    """Check the two matching conditions of a log realization.

    Matched events must share their identifier, so the one-to-one matching
    is determined by event IDs.
    """
    by_id = {e.event_id: e for e in uncertain}
    seen = set()
    for ce in certain:
        ue = by_id.get(ce.event_id)
        if ue is None or ce.event_id in seen:
            return False
        if ce.case_id not in ue.case_ids or ce.activity not in ue.activities or ce.timestamp not in ue.timestamps:
            return False
        seen.add(ce.event_id)
    return all(e.event_id in seen for e in by_id.values() if e.indeterminacy == DETERMINATE)


# -- JSON-lines interchange ------------------------------------------------


def parse_time(value) -> int:
    """Epoch milliseconds from an int or an ISO-8601 string (UTC if naive)."""
    if isinstance(value, bool):
        raise ParseError(f"bad timestamp {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, float) and value.is_integer():
        return int(value)
    if isinstance(value, str):
        try:
            dt = datetime.fromisoformat(value.replace("Z", "+00:00"))
        except ValueError as exc:
            raise ParseError(f"bad timestamp {value!r}") from exc
        if dt.tzinfo is None:
            dt = dt.replace(tzinfo=timezone.utc)
        delta = dt - datetime(1970, 1, 1, tzinfo=timezone.utc)
        return (delta.days * 86_400 + delta.seconds) * 1000 + delta.microseconds // 1000
    raise ParseError(f"bad timestamp {value!r}")


def format_time(ms: int) -> str:
    dt = datetime.fromtimestamp(ms // 1000, tz=timezone.utc).replace(microsecond=(ms % 1000) * 1000)
    return dt.isoformat(timespec="milliseconds")


def trace_to_json(trace: SimpleUncertainTrace) -> str:
    return json.dumps(
        {
            "case_id": trace.case_id,
            "events": [
                {
                    "id": e.event_id,
                    "activities": sorted(e.activities),
                    "t_min": e.t_min,
                    "t_max": e.t_max,
                    "indeterminate": e.indeterminate,
                }
                for e in trace.events
            ],
        },
        ensure_ascii=False,
    )


def trace_from_json(line: str, lineno: int = 0) -> SimpleUncertainTrace:
    try:
        obj = json.loads(line)
        events = []
        for k, ev in enumerate(obj["events"]):
            try:
                events.append(
                    SimpleUncertainEvent(
                        str(ev["id"]),
                        frozenset(ev["activities"]),
                        parse_time(ev["t_min"]),
                        parse_time(ev["t_max"]),
                        INDETERMINATE if ev.get("indeterminate", False) else DETERMINATE,
                    )
                )
            except InvalidTraceError as exc:
                raise ParseError(f"line {lineno}, event {k}: {exc}") from exc
        return SimpleUncertainTrace(tuple(events), str(obj.get("case_id", "")))
    except (json.JSONDecodeError, KeyError, TypeError, InvalidTraceError) as exc:
        raise ParseError(f"line {lineno}: {exc}") from exc


def dump_jsonl(log: Iterable[SimpleUncertainTrace]) -> str:
    return "".join(trace_to_json(t) + "\n" for t in log)


def load_jsonl(text: str) -> list:
    return [trace_from_json(line, i) for i, line in enumerate(text.splitlines(), start=1) if line.strip()]
