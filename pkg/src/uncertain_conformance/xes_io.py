"""XES import/export with an uncertainty meta-attribute container.

An uncertain event keeps plain ``concept:name`` and ``time:timestamp``
attributes holding fallback values, so ordinary XES readers see a certain
log. The uncertainty lives in one container per event::

    <container key="uncertainty:entry">
      <list key="uncertainty:discrete">
        <values>
          <string key="concept:name" value="B"/>
          <string key="concept:name" value="C"/>
        </values>
      </list>
      <date key="uncertainty:timestamp_min" value="..."/>
      <date key="uncertainty:timestamp_max" value="..."/>
      <boolean key="uncertainty:indeterminacy" value="true"/>
    </container>

Every child of the container is optional. For weak uncertainty, list
values may carry a nested ``<float key="uncertainty:probability">``,
``uncertainty:indeterminacy`` may be a float (probability that the event
occurred), case IDs may be listed under ``uncertainty:case``, and
``uncertainty:timestamps`` lists discrete timestamp alternatives.
A ``<container key="uncertainty:timestamp_normal">`` with ``mean`` and
``std`` children records a continuous density.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path
from typing import Optional

from .errors import ParseError, SchemaError
from .uncertain_log import (
    DETERMINATE,
    INDETERMINATE,
    SimpleUncertainEvent,
    SimpleUncertainTrace,
    WeaklyUncertainEvent,
    format_time,
    parse_time,
)

NAME = "concept:name"
TIME = "time:timestamp"
IDENTITY = "identity:id"
ENTRY = "uncertainty:entry"
DISCRETE = "uncertainty:discrete"
T_MIN = "uncertainty:timestamp_min"
T_MAX = "uncertainty:timestamp_max"
INDET = "uncertainty:indeterminacy"
PROB = "uncertainty:probability"
CASES = "uncertainty:case"
TIMESTAMPS = "uncertainty:timestamps"
NORMAL = "uncertainty:timestamp_normal"


def _attrs(elem) -> dict:
    return {c.get("key"): c for c in elem if c.get("key") is not None}


def _list_values(list_elem) -> list:
    values = list_elem.find("values")
    return list(values) if values is not None else [c for c in list_elem if c.get("key") is not None]


def _bool(elem, where) -> bool:
    v = (elem.get("value") or "").strip().lower()
    if v not in ("true", "false"):
        raise SchemaError(f"{where}: boolean expected, got {v!r}")
    return v == "true"


def _time(elem, where) -> int:
    try:
        return parse_time(elem.get("value"))
    except ParseError as exc:
        raise SchemaError(f"{where}: {exc}") from exc


def _parse(text: str):
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        raise ParseError(f"malformed XES: {exc}") from exc
    if root.tag.rsplit("}", 1)[-1] != "log":
        raise ParseError(f"root element is <{root.tag}>, expected <log>")
    return root


def import_xes(text: str) -> list:
    """Parse an (uncertain) XES document into simple uncertain traces."""
    root = _parse(text)
    log = []
    for ti, trace in enumerate(root.findall("trace")):
        tattrs = _attrs(trace)
        case_id = tattrs[NAME].get("value") if NAME in tattrs else str(ti)
        events = []
        for ei, ev in enumerate(trace.findall("event")):
            where = f"trace {case_id!r} event {ei}"
            a = _attrs(ev)
            event_id = a[IDENTITY].get("value") if IDENTITY in a else f"{case_id}:{ei}"
            activities = {a[NAME].get("value")} if NAME in a else set()
            t_min = t_max = _time(a[TIME], where) if TIME in a else None
            flag = DETERMINATE
            entry = a.get(ENTRY)
            if entry is not None:
                u = _attrs(entry)
                if DISCRETE in u:
                    activities = {v.get("value") for v in _list_values(u[DISCRETE])}
                    if not activities:
                        raise SchemaError(f"{where}: empty {DISCRETE} list")
                if T_MIN in u:
                    t_min = _time(u[T_MIN], where)
                if T_MAX in u:
                    t_max = _time(u[T_MAX], where)
                if INDET in u:
                    if u[INDET].tag == "boolean":
                        flag = INDETERMINATE if _bool(u[INDET], where) else DETERMINATE
                    else:
                        flag = INDETERMINATE if float(u[INDET].get("value")) < 1 else DETERMINATE
            if not activities or None in activities:
                raise SchemaError(f"{where}: no activity")
            if t_min is None or t_max is None:
                raise SchemaError(f"{where}: no timestamp")
            if t_min > t_max:
                raise SchemaError(f"{where}: timestamp_min after timestamp_max")
            events.append(SimpleUncertainEvent(event_id, frozenset(activities), t_min, t_max, flag))
        try:
            log.append(SimpleUncertainTrace(tuple(events), case_id))
        except Exception as exc:
            raise SchemaError(f"trace {case_id!r}: {exc}") from exc
    return log


def _weighted(list_elem, where) -> dict:
    out = {}
    for v in _list_values(list_elem):
        probs = _attrs(v)
        p = float(probs[PROB].get("value")) if PROB in probs else 1.0
        key = v.get("value")
        if v.tag == "date":
            key = _time(v, where)
        out[key] = out.get(key, 0.0) + p
    return out


def import_weak_xes(text: str) -> list:
    """Weakly uncertain events of a document, one list per trace.

    Missing probabilities default to 1 for singletons; the case ID defaults
    to the trace's ``concept:name``.
    """
    root = _parse(text)
    out = []
    for ti, trace in enumerate(root.findall("trace")):
        tattrs = _attrs(trace)
        case_id = tattrs[NAME].get("value") if NAME in tattrs else str(ti)
        events = []
        for ei, ev in enumerate(trace.findall("event")):
            where = f"trace {case_id!r} event {ei}"
            a = _attrs(ev)
            event_id = a[IDENTITY].get("value") if IDENTITY in a else f"{case_id}:{ei}"
            u = _attrs(a[ENTRY]) if ENTRY in a else {}
            cases = _weighted(u[CASES], where) if CASES in u else {case_id: 1.0}
            if DISCRETE in u:
                acts = _weighted(u[DISCRETE], where)
            elif NAME in a:
                acts = {a[NAME].get("value"): 1.0}
            else:
                raise SchemaError(f"{where}: no activity")
            density = None
            times: Optional[dict] = None
            if TIMESTAMPS in u:
                times = _weighted(u[TIMESTAMPS], where)
            elif NORMAL in u:
                n = _attrs(u[NORMAL])
                density = ("normal", _time(n["mean"], where), float(n["std"].get("value")))
            elif TIME in a:
                times = {_time(a[TIME], where): 1.0}
            else:
                raise SchemaError(f"{where}: no timestamp")
            occurrence = 1.0
            if INDET in u:
                if u[INDET].tag == "boolean":
                    raise SchemaError(f"{where}: weak logs need a probability for {INDET}")
                occurrence = float(u[INDET].get("value"))
            events.append(WeaklyUncertainEvent.from_marginals(event_id, cases, acts, times, occurrence, density))
        out.append(events)
    return out


def _sub(parent, tag, key, value):
    return ET.SubElement(parent, tag, key=key, value=value)


def export_xes(log) -> str:
    """Serialize simple uncertain traces; certain events get plain attributes only.

    Fallback values are the lexicographically least activity and the
    interval midpoint (rounded down).
    """
    root = ET.Element("log", {"xes.version": "2.0", "xes.features": "nested-attributes"})
    ET.SubElement(root, "extension", name="Concept", prefix="concept", uri="http://www.xes-standard.org/concept.xesext")
    ET.SubElement(root, "extension", name="Time", prefix="time", uri="http://www.xes-standard.org/time.xesext")
    ET.SubElement(root, "extension", name="Identity", prefix="identity", uri="http://www.xes-standard.org/identity.xesext")
    for trace in log:
        te = ET.SubElement(root, "trace")
        _sub(te, "string", NAME, trace.case_id)
        for e in trace.events:
            ee = ET.SubElement(te, "event")
            acts = sorted(e.activities)
            _sub(ee, "string", IDENTITY, e.event_id)
            _sub(ee, "string", NAME, acts[0])
            _sub(ee, "date", TIME, format_time((e.t_min + e.t_max) // 2))
            if len(acts) == 1 and e.t_min == e.t_max and not e.indeterminate:
                continue
            entry = ET.SubElement(ee, "container", key=ENTRY)
            if len(acts) > 1:
                values = ET.SubElement(ET.SubElement(entry, "list", key=DISCRETE), "values")
                for act in acts:
                    _sub(values, "string", NAME, act)
            if e.t_min != e.t_max:
                _sub(entry, "date", T_MIN, format_time(e.t_min))
                _sub(entry, "date", T_MAX, format_time(e.t_max))
            if e.indeterminate:
                _sub(entry, "boolean", INDET, "true")
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def strip_uncertainty(text: str) -> str:
    """Drop every uncertainty container, leaving the fallback log."""
    root = _parse(text)
    for ev in root.iter("event"):
        for c in list(ev):
            if c.get("key") == ENTRY:
                ev.remove(c)
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def load_xes(path) -> list:
    return import_xes(Path(path).read_text(encoding="utf-8"))


def save_xes(log, path) -> None:
    Path(path).write_text(export_xes(log), encoding="utf-8")
