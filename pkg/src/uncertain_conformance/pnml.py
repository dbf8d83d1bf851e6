"""PNML reader/writer for system nets.

Invisible transitions carry ``<toolspecific ... invisible="true"/>``; the
ProM convention ``activity="$invisible$"`` is accepted on input. Initial and
final markings are stored on each place as ``initialMarking`` and
``finalMarking`` children. The pm4py-style ``<finalmarkings>`` block is also
read.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from pathlib import Path

from .errors import ParseError
from .petri import Marking, SystemNet, id_key

TOOL = "uncertain-conformance"
TOOL_VERSION = "1.0"


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _children(elem, name):
    return [c for c in elem if _local(c.tag) == name]


def _first(elem, name):
    for c in elem:
        if _local(c.tag) == name:
            return c
    return None


def _text_of(elem):
    if elem is None:
        return None
    t = _first(elem, "text")
    return t.text.strip() if t is not None and t.text is not None else None


def _marking_count(place, name) -> int:
    txt = _text_of(_first(place, name))
    if not txt:
        return 0
    try:
        return int(txt)
    except ValueError as exc:
        raise ParseError(f"place {place.get('id')!r}: bad {name} {txt!r}") from exc


def read_pnml(source: str) -> SystemNet:
    """Parse PNML text into a SystemNet with string identifiers."""
    try:
        root = ET.fromstring(source)
    except ET.ParseError as exc:
        raise ParseError(f"malformed PNML: {exc}") from exc
    net_elem = root if _local(root.tag) == "net" else next(
        (e for e in root.iter() if _local(e.tag) == "net"), None
    )
    if net_elem is None:
        raise ParseError("no <net> element")

    places, transitions, arcs, labels = set(), set(), [], {}
    init, final = {}, {}
    for elem in net_elem.iter():
        tag = _local(elem.tag)
        if tag == "place":
            pid = elem.get("id")
            places.add(pid)
            init[pid] = _marking_count(elem, "initialMarking")
            final[pid] = _marking_count(elem, "finalMarking")
        elif tag == "transition":
            tid = elem.get("id")
            transitions.add(tid)
            invisible = False
            for ts in _children(elem, "toolspecific"):
                if ts.get("invisible", "").lower() == "true" or ts.get("activity") == "$invisible$":
                    invisible = True
            label = _text_of(_first(elem, "name"))
            if not invisible and label:
                labels[tid] = label
        elif tag == "arc":
            arcs.append((elem.get("source"), elem.get("target")))

    for block in root.iter():
        if _local(block.tag) == "finalmarkings":
            for pl in block.iter():
                if _local(pl.tag) == "place" and pl.get("idref"):
                    final[pl.get("idref")] = int(_text_of(pl) or 0)

    name = _text_of(_first(net_elem, "name")) or net_elem.get("id") or ""
    try:
        return SystemNet(places, transitions, arcs, labels, Marking(init), Marking(final), name=name)
    except Exception as exc:
        raise ParseError(f"invalid net: {exc}") from exc


def load_pnml(path) -> SystemNet:
    return read_pnml(Path(path).read_text(encoding="utf-8"))


def _node_ids(items, prefix):
    """Stable string IDs; string identifiers are kept, others are numbered."""
    out = {}
    used = {x for x in items if isinstance(x, str)}
    k = 0
    for x in sorted(items, key=id_key):
        if isinstance(x, str):
            out[x] = x
            continue
        while f"{prefix}{k}" in used:
            k += 1
        out[x] = f"{prefix}{k}"
        used.add(out[x])
    return out


def write_pnml(net: SystemNet) -> str:
    pids = _node_ids(net.places, "p")
    tids = _node_ids(net.transitions, "t")
    clash = set(pids.values()) & set(tids.values())
    if clash:
        tids = {t: f"t_{v}" if v in clash else v for t, v in tids.items()}

    pnml = ET.Element("pnml")
    net_elem = ET.SubElement(
        pnml, "net", id=net.name or "net", type="http://www.pnml.org/version-2009/grammar/pnmlcoremodel"
    )
    ET.SubElement(ET.SubElement(net_elem, "name"), "text").text = net.name or "net"
    page = ET.SubElement(net_elem, "page", id="page0")
    for p in sorted(net.places, key=id_key):
        pe = ET.SubElement(page, "place", id=pids[p])
        ET.SubElement(ET.SubElement(pe, "name"), "text").text = pids[p]
        if net.initial_marking[p]:
            ET.SubElement(ET.SubElement(pe, "initialMarking"), "text").text = str(net.initial_marking[p])
        if net.final_marking[p]:
            ET.SubElement(ET.SubElement(pe, "finalMarking"), "text").text = str(net.final_marking[p])
    for t in sorted(net.transitions, key=id_key):
        te = ET.SubElement(page, "transition", id=tids[t])
        ET.SubElement(ET.SubElement(te, "name"), "text").text = net.labels.get(t, tids[t])
        if t not in net.labels:
            ET.SubElement(te, "toolspecific", tool=TOOL, version=TOOL_VERSION, invisible="true")
    ids = {**pids, **tids}
    for k, (src, dst) in enumerate(sorted(net.arcs, key=id_key)):
        ET.SubElement(page, "arc", id=f"a{k}", source=ids[src], target=ids[dst])
    ET.indent(pnml)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(pnml, encoding="unicode") + "\n"


def save_pnml(net: SystemNet, path) -> None:
    Path(path).write_text(write_pnml(net), encoding="utf-8")
