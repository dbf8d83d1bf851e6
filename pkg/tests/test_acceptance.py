"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run through pytest (the lines are repeated in the terminal summary) or
directly with ``python3 tests/test_acceptance.py``.
"""
from __future__ import annotations

import functools
import os
import sys
import time

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from instances import model_and_trace, small_model, small_trace  # noqa: E402
from oracles import optimal_cost_exhaustive, realizations_by_timestamps, replays  # noqa: E402
from uncertain_conformance.alignment import (  # noqa: E402
    STANDARD_COST,
    align,
    bounds_bruteforce,
    cost,
    lower_bound,
)
from uncertain_conformance.behavior import behavior_graph, behavior_net  # noqa: E402
from uncertain_conformance.experiments import run_perf, run_sweep  # noqa: E402
from uncertain_conformance.petri import enabled, event_net, fire, visible_language  # noqa: E402
from uncertain_conformance.synth import (  # noqa: E402
    UncertaintyParams,
    generate_model,
    inject_deviations,
    inject_uncertainty,
    playout,
    random_uncertain_trace,
)
from uncertain_conformance.uncertain_log import (  # noqa: E402
    SimpleUncertainEvent,
    SimpleUncertainTrace,
    count_realizations,
    parse_time,
    realizations,
)
from uncertain_conformance.xes_io import export_xes, import_xes  # noqa: E402

RESULTS: list = []

SWEEP_SEED = 0
PERF_SEED = 0
PERF_NS = (5, 8, 10, 12)


def report(number, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


# -- shared computations ------------------------------------------------------


@functools.lru_cache(maxsize=None)
def criterion2_data():
    rng = np.random.default_rng(2002)
    rows = []
    t0 = time.perf_counter()
    for _ in range(200):
        model, trace = model_and_trace(rng, max_n=8, max_events=5, max_realizations=100)
        lb = lower_bound(trace, model)
        bf = bounds_bruteforce(trace, model)
        rows.append((trace, model, lb, bf))
    return rows, time.perf_counter() - t0


@functools.lru_cache(maxsize=None)
def criterion7_data():
    rng = np.random.default_rng(7007)
    rows = []
    for _ in range(100):
        model = small_model(rng, max_transitions=6)
        trace = small_trace(rng, max_events=4)
        reals = sorted(realizations(trace))
        seq = reals[int(rng.integers(len(reals)))]
        a_seq = align(event_net(seq), model)
        a_bn = align(behavior_net(trace), model)
        oracle_seq = optimal_cost_exhaustive(seq, model, STANDARD_COST)
        oracle_min = min(optimal_cost_exhaustive(r, model, STANDARD_COST) for r in reals)
        rows.append((trace, seq, model, a_seq, a_bn, oracle_seq, oracle_min))
    return rows


@functools.lru_cache(maxsize=None)
def sweep():
    t0 = time.perf_counter()
    records, common = run_sweep(n=10, traces=250, seed=SWEEP_SEED)
    return records, common, time.perf_counter() - t0


def running_example():
    t = parse_time
    return SimpleUncertainTrace(
        (
            SimpleUncertainEvent("e1", {"A"}, t("2011-12-05T00:00"), t("2011-12-05T00:00")),
            SimpleUncertainEvent("e2", {"B", "C"}, t("2011-12-07T00:00"), t("2011-12-07T00:00")),
            SimpleUncertainEvent("e3", {"D"}, t("2011-12-06T00:00"), t("2011-12-10T00:00")),
            SimpleUncertainEvent("e4", {"A", "C"}, t("2011-12-09T00:00"), t("2011-12-09T00:00")),
            SimpleUncertainEvent("e5", {"E"}, t("2011-12-11T00:00"), t("2011-12-11T00:00"), "?"),
        ),
        "0",
    )


# -- criteria -------------------------------------------------------------------


def check_1():
    rng = np.random.default_rng(1001)
    alphabet = list("ABCDE")
    t0 = time.perf_counter()
    checked = mismatches = 0
    while checked < 500:
        trace = random_uncertain_trace(rng, int(rng.integers(0, 7)), alphabet, 0.3)
        if count_realizations(trace, 200) is None:
            continue
        checked += 1
        if visible_language(behavior_net(trace)) != realizations(trace):
            mismatches += 1
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < 60
    return report(1, "language equivalence", ok, f"{checked} traces, {mismatches} mismatches, {elapsed:.1f}s (limit 60s)")


def check_2():
    rows, elapsed = criterion2_data()
    bad_cost = sum(lb.cost != bf.lower for _, _, lb, bf in rows)
    bad_witness = sum(
        lb.witness not in realizations_by_timestamps(trace) or lb.alignment.log_projection() != lb.witness
        for trace, _, lb, _ in rows
    )
    ok = bad_cost == 0 and bad_witness == 0 and elapsed < 120
    return report(
        2, "lower bound equals brute-force minimum", ok,
        f"{len(rows)} pairs, {bad_cost} cost mismatches, {bad_witness} bad witnesses, {elapsed:.1f}s (limit 120s)",
    )


def check_3():
    trace = running_example()
    n_real = len(realizations(trace))
    edges = behavior_graph(trace).edge_ids()
    want_edges = {("e1", "e2"), ("e1", "e3"), ("e2", "e4"), ("e3", "e5"), ("e4", "e5")}
    net = behavior_net(trace)
    n_visible = len(net.labels)
    n_silent = len(net.transitions) - n_visible
    parts = [
        f"realizations {n_real} (want 24)",
        f"edges {'match' if edges == want_edges else sorted(edges)}",
        f"transitions {len(net.transitions)} = {n_visible} visible + {n_silent} tau (want 7 = 6 + 1)",
    ]
    ok = n_real == 24 and edges == want_edges and (len(net.transitions), n_visible, n_silent) == (7, 6, 1)
    return report(3, "running example", ok, "; ".join(parts))


def check_4():
    records, common, elapsed = sweep()
    r0 = records[0]
    ok = r0.value == 0 and r0.lower_total == r0.upper_total
    return report(
        4, "bounds coincide at p=0", ok,
        f"seed {SWEEP_SEED}, lower {r0.lower_total} upper {r0.upper_total} over {common} traces ({elapsed:.0f}s sweep)",
    )


def check_5():
    records, common, _ = sweep()
    lows = [r.lower_total for r in records]
    highs = [r.upper_total for r in records]
    mono = all(a >= b for a, b in zip(lows, lows[1:])) and all(a <= b for a, b in zip(highs, highs[1:]))
    gap = highs[-1] - lows[-1]
    ok = mono and gap > 0 and common > 0
    table = ", ".join(f"p={r.value:g}:{r.lower_total}/{r.upper_total}" for r in records)
    return report(5, "monotone sweep", ok, f"gap at p=0.6 is {gap}; lower/upper {table}")


def check_6():
    records = run_perf(n_list=PERF_NS, traces=100, p=0.2, seed=PERF_SEED)
    sp = [r.speedup for r in records]
    mono = all(a <= b for a, b in zip(sp, sp[1:]))
    ok = sp[0] >= 2 and sp[-1] >= 10 and mono
    detail = ", ".join(f"n={r.n}: {r.speedup:.1f}x" for r in records)
    return report(6, "behavior net outpaces brute force", ok, f"seed {PERF_SEED}, {detail}")


def check_7():
    rows = criterion7_data()
    bad_seq = sum(cost(a_seq) != o_seq for _, _, _, a_seq, _, o_seq, _ in rows)
    bad_min = sum(cost(a_bn) != o_min for _, _, _, _, a_bn, _, o_min in rows)
    ok = bad_seq == 0 and bad_min == 0
    return report(
        7, "alignment optimality audit", ok,
        f"{len(rows)} instances, {bad_seq} event-net and {bad_min} behavior-net cost mismatches vs exhaustive enumeration",
    )


def check_8():
    rng = np.random.default_rng(8008)
    bad = 0
    for k in range(100):
        n = int(rng.integers(2, 9))
        model = generate_model(n, k)
        alphabet = sorted(set(model.labels.values()))
        log = inject_deviations(playout(model, int(rng.integers(1, 8)), k), seed=k, alphabet=alphabet)
        log = inject_uncertainty(log, UncertaintyParams(float(rng.random()), frozenset(alphabet)), k)
        text = export_xes(log)
        back = import_xes(text)
        if back != log or export_xes(back) != text:
            bad += 1
    return report(8, "XES round trip", bad == 0, f"100 logs, {bad} not byte-identical after re-export")


def _fired_labels(net, transitions):
    m, labels = net.initial_marking, []
    for t in transitions:
        if t not in enabled(net, m):
            return None
        m = fire(net, m, t)
        if t in net.labels:
            labels.append(net.labels[t])
    return tuple(labels) if m == net.final_marking else None


def check_9():
    cases = []
    for trace, model, lb, bf in criterion2_data()[0]:
        cases.append((behavior_net(trace), model, lb.alignment))
    for trace, seq, model, a_seq, a_bn, _, _ in criterion7_data():
        cases.append((event_net(seq), model, a_seq))
        cases.append((behavior_net(trace), model, a_bn))
    bad = 0
    for log_net, model, a in cases:
        if _fired_labels(log_net, a.log_transitions()) != a.log_projection():
            bad += 1
        elif not replays(model, a.model_transitions()):
            bad += 1
    return report(9, "alignment contract", bad == 0, f"{len(cases)} alignments, {bad} violations")


# -- pytest entry points ----------------------------------------------------------


def test_criterion_1_language_equivalence():
    assert check_1()


def test_criterion_2_lower_bound_oracle():
    assert check_2()


def test_criterion_3_running_example():
    assert check_3()


@pytest.mark.slow
def test_criterion_4_bounds_coincide_at_p0():
    assert check_4()


@pytest.mark.slow
def test_criterion_5_monotone_sweep():
    assert check_5()


@pytest.mark.slow
def test_criterion_6_performance_divergence():
    assert check_6()


def test_criterion_7_optimality_audit():
    assert check_7()


def test_criterion_8_xes_round_trip():
    assert check_8()


def test_criterion_9_alignment_contract():
    assert check_9()


if __name__ == "__main__":
    outcomes = [check() for check in (check_1, check_2, check_3, check_4, check_5, check_6, check_7, check_8, check_9)]
    sys.exit(0 if all(outcomes) else 1)
