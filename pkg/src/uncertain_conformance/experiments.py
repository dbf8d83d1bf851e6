"""Bound sweep over uncertainty probability and lower-bound timing comparison."""
from __future__ import annotations

import hashlib
import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional

from .alignment import STANDARD_COST, bounds_bruteforce, lower_bound
from .errors import ExplosionError, InconsistencyError
from .petri import SystemNet, id_key
from .synth import (
    DAY_MS,
    DeviationParams,
    UncertaintyParams,
    generate_model,
    inject_deviations,
    inject_uncertainty,
    playout,
)

log = logging.getLogger(__name__)

DEFAULT_CAP = 10_000
SWEEP_PS = (0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6)


@dataclass
class ExperimentRecord:
    param: str
    value: float
    n: int
    traces: int
    completed: int
    exploded: int
    lower_total: int
    upper_total: int
    lower_mean: float
    upper_mean: float
    elapsed_bruteforce: float
    elapsed_behavior: float
    median_bruteforce: float
    median_behavior: float
    seed: int

    @property
    def speedup(self) -> float:
        """Brute-force time over behavior-net time."""
        return self.elapsed_bruteforce / self.elapsed_behavior if self.elapsed_behavior > 0 else float("inf")


SWEEP_COLUMNS = [
    "p", "n", "traces", "completed", "exploded", "common",
    "lower_total", "upper_total", "lower_mean", "upper_mean", "seed",
]
TIMING_COLUMNS = ["elapsed_bruteforce", "elapsed_behavior", "median_bruteforce", "median_behavior"]
PERF_COLUMNS = [
    "n", "p", "traces", "completed", "exploded", "lower_total",
    "elapsed_bruteforce", "elapsed_behavior", "median_bruteforce", "median_behavior",
    "ratio_behavior_over_bruteforce", "seed",
]


def net_fingerprint(net: SystemNet) -> str:
    parts = [
        repr(sorted(net.arcs, key=id_key)),
        repr(sorted(net.labels.items(), key=lambda kv: id_key(kv[0]))),
        repr(net.initial_marking),
        repr(net.final_marking),
    ]
    return hashlib.sha256("\n".join(parts).encode()).hexdigest()[:16]


_CACHES: dict = {}


def evaluate_trace(trace, model, c=STANDARD_COST, cap=DEFAULT_CAP, use_cache=True):
    """Bounds for one trace by both routes; None when enumeration explodes.

    Returns ``(lower, upper, seconds_bruteforce, seconds_behavior)``. The
    behavior-net lower bound must equal the brute-force minimum.
    """
    cache = None
    if use_cache:
        cache = _CACHES.setdefault((net_fingerprint(model), c), {})
    t0 = time.perf_counter()
    lb = lower_bound(trace, model, c)
    t1 = time.perf_counter()
    try:
        bf = bounds_bruteforce(trace, model, c, cap, cache)
    except ExplosionError:
        return None
    t2 = time.perf_counter()
    if bf.lower != lb.cost:
        raise InconsistencyError(
            f"trace {trace.case_id!r}: behavior-net lower bound {lb.cost} != brute-force minimum {bf.lower}"
        )
    return lb.cost, bf.upper, t2 - t1, t1 - t0


def _evaluate_args(args):
    return evaluate_trace(*args)


def evaluate_log(traces, model, c=STANDARD_COST, cap=DEFAULT_CAP, workers=1, use_cache=True) -> list:
    """``evaluate_trace`` over a log, results in input order."""
    jobs = [(t, model, c, cap, use_cache) for t in traces]
    if workers <= 1:
        return [_evaluate_args(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_evaluate_args, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def experiment_log(n, traces, seed, deviations=DeviationParams()):
    """Model and deviating certain log of the sweep pipeline."""
    model = generate_model(n, seed)
    alphabet = sorted(set(model.labels.values()))
    certain = playout(model, traces, seed)
    return model, inject_deviations(certain, deviations, seed, alphabet), alphabet


def _median(xs):
    return statistics.median(xs) if xs else 0.0


def run_sweep(
    n=10,
    traces=250,
    ps=SWEEP_PS,
    seed=0,
    deviations=DeviationParams(),
    c=STANDARD_COST,
    cap=DEFAULT_CAP,
    radius=DAY_MS * 3 // 2,
    workers=1,
):
    """Coupled sweep over ``ps`` on one deviating log.

    Totals and means in every row are taken over the traces whose bounds
    completed at every ``p`` of the sweep (column ``common``), so rows are
    comparable; ``completed`` and ``exploded`` count each row on its own.
    Returns ``(records, common_count)``.
    """
    model, deviating, alphabet = experiment_log(n, traces, seed, deviations)
    per_p = []
    for p in ps:
        log.info("sweep n=%d p=%.2f", n, p)
        uncertain = inject_uncertainty(deviating, UncertaintyParams(p, frozenset(alphabet), radius), seed)
        per_p.append(evaluate_log(uncertain, model, c, cap, workers))
    common = [i for i in range(traces) if all(res[i] is not None for res in per_p)]
    records = []
    for p, results in zip(ps, per_p):
        done = [r for r in results if r is not None]
        lo = sum(results[i][0] for i in common)
        hi = sum(results[i][1] for i in common)
        records.append(
            ExperimentRecord(
                "p", p, n, traces, len(done), traces - len(done), lo, hi,
                lo / len(common) if common else 0.0,
                hi / len(common) if common else 0.0,
                sum(r[2] for r in done), sum(r[3] for r in done),
                _median([r[2] for r in done]), _median([r[3] for r in done]),
                seed,
            )
        )
    return records, len(common)


def run_perf(n_list=(5, 8, 12), traces=100, p=0.2, seed=0, deviations=DeviationParams(), c=STANDARD_COST,
             cap=DEFAULT_CAP, radius=DAY_MS * 3 // 2, workers=1, repeats=1):
    """Time the behavior-net lower bound against brute force for each model size.

    Brute force runs without memoisation so each realization is aligned.
    With ``repeats > 1`` every per-trace timing is the minimum over repeats.
    """
    records = []
    for n in n_list:
        model, deviating, alphabet = experiment_log(n, traces, seed, deviations)
        uncertain = inject_uncertainty(deviating, UncertaintyParams(p, frozenset(alphabet), radius), seed)
        best: Optional[list] = None
        for _ in range(repeats):
            res = evaluate_log(uncertain, model, c, cap, workers, use_cache=False)
            if best is None:
                best = res
            else:
                best = [
                    None if a is None else (a[0], a[1], min(a[2], b[2]), min(a[3], b[3]))
                    for a, b in zip(best, res)
                ]
        done = [r for r in best if r is not None]
        lo = sum(r[0] for r in done)
        hi = sum(r[1] for r in done)
        records.append(
            ExperimentRecord(
                "n", p, n, traces, len(done), traces - len(done), lo, hi,
                lo / len(done) if done else 0.0, hi / len(done) if done else 0.0,
                sum(r[2] for r in done), sum(r[3] for r in done),
                _median([r[2] for r in done]), _median([r[3] for r in done]),
                seed,
            )
        )
        log.info("perf n=%d speedup %.1fx", n, records[-1].speedup)
    return records


def sweep_rows(records, common, timings=False) -> list:
    cols = SWEEP_COLUMNS + (TIMING_COLUMNS if timings else [])
    rows = []
    for r in records:
        d = asdict(r)
        d["p"] = r.value
        d["common"] = common
        rows.append({k: _fmt(d[k]) for k in cols})
    return rows


def perf_rows(records) -> list:
    rows = []
    for r in records:
        d = asdict(r)
        d["p"] = r.value
        d["ratio_behavior_over_bruteforce"] = (
            r.elapsed_behavior / r.elapsed_bruteforce if r.elapsed_bruteforce > 0 else 0.0
        )
        rows.append({k: _fmt(d[k]) for k in PERF_COLUMNS})
    return rows


def _fmt(v):
    if isinstance(v, float):
        return f"{v:.6g}"
    return v
