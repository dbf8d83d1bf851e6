"""Command-line interface.

Exit codes: 0 success, 1 other error, 2 usage error, 3 unreadable input,
4 a trace exceeded a realization or search cap, 5 internal inconsistency
between the behavior-net and brute-force lower bounds.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import _kernel
from .alignment import DEFAULT_MAX_STATES, CostFunction, lower_bound, upper_bound
from .errors import ConformanceError, ExplosionError, InconsistencyError, ParseError
from .experiments import (
    DEFAULT_CAP,
    PERF_COLUMNS,
    SWEEP_COLUMNS,
    SWEEP_PS,
    TIMING_COLUMNS,
    perf_rows,
    run_perf,
    run_sweep,
    sweep_rows,
)
from .pnml import load_pnml, save_pnml
from .synth import (
    DAY_MS,
    DeviationParams,
    UncertaintyParams,
    generate_model,
    inject_deviations,
    inject_uncertainty,
    playout,
)
from .uncertain_log import dump_jsonl, load_jsonl, simplify, weak_to_strong
from .xes_io import export_xes, import_weak_xes, import_xes

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 3
EXIT_EXPLOSION = 4
EXIT_INCONSISTENT = 5

logger = logging.getLogger("uncertain_conformance")


def read_log(path) -> list:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    if path.suffix.lower() in (".jsonl", ".json", ".ndjson"):
        return load_jsonl(text)
    return import_xes(text)


def write_log(log, path) -> None:
    path = Path(path)
    if path.suffix.lower() in (".jsonl", ".json", ".ndjson"):
        path.write_text(dump_jsonl(log), encoding="utf-8")
    else:
        path.write_text(export_xes(log), encoding="utf-8")


def _float_list(text):
    return [float(x) for x in text.split(",") if x.strip()]


def _int_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _write_csv(path, columns, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def _trace_bounds(args):
    trace, model, c, cap, max_states = args
    row = {"case_id": trace.case_id, "lower": None, "upper": None,
           "lower_witness": None, "upper_witness": None, "error": None}
    try:
        lo = lower_bound(trace, model, c, max_states=max_states)
        row["lower"], row["lower_witness"] = lo.cost, list(lo.witness)
        hi = upper_bound(trace, model, c, cap, max_states=max_states)
        row["upper"], row["upper_witness"] = hi.cost, list(hi.witness)
    except ExplosionError as exc:
        row["error"] = f"explosion: {exc}"
    except ConformanceError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def cmd_bounds(args) -> int:
    log = read_log(args.log)
    model = load_pnml(args.model)
    c = CostFunction.parse(args.cost)
    jobs = [(t, model, c, args.cap, args.max_states) for t in log]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_trace_bounds, jobs))
    else:
        rows = [_trace_bounds(j) for j in jobs]
    for r in rows:
        logger.info("%s lower=%s upper=%s%s", r["case_id"], r["lower"], r["upper"],
                    f" ({r['error']})" if r["error"] else "")

    ok = [r for r in rows if r["error"] is None]
    totals = {
        "traces": len(rows),
        "completed": len(ok),
        "failed": len(rows) - len(ok),
        "lower_total": sum(r["lower"] for r in ok),
        "upper_total": sum(r["upper"] for r in ok),
    }
    report = {"traces": rows, "totals": totals}
    out = Path(args.out) if args.out else None
    if out is None:
        json.dump(report, sys.stdout, indent=2, ensure_ascii=False)
        sys.stdout.write("\n")
    else:
        json_path = out if out.suffix == ".json" else out.with_suffix(".json")
        json_path.write_text(json.dumps(report, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        _write_csv(
            json_path.with_suffix(".csv"),
            ["case_id", "lower", "upper", "lower_witness", "upper_witness", "error"],
            [
                {**r,
                 "lower_witness": " ".join(r["lower_witness"] or []),
                 "upper_witness": " ".join(r["upper_witness"] or [])}
                for r in rows
            ],
        )
    if any(r["error"] and r["error"].startswith("explosion") for r in rows):
        return EXIT_EXPLOSION
    if any(r["error"] for r in rows):
        return EXIT_ERROR
    return EXIT_OK


def cmd_gen(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    model = generate_model(args.n, args.seed)
    alphabet = sorted(set(model.labels.values()))
    log = playout(model, args.traces, args.seed)
    if not args.no_deviations:
        log = inject_deviations(log, DeviationParams(args.wrong, args.swap, args.extra), args.seed, alphabet)
    uncertain = inject_uncertainty(
        log, UncertaintyParams(args.p, frozenset(alphabet), int(args.radius_days * DAY_MS)), args.seed
    )
    save_pnml(model, out / "model.pnml")
    write_log(uncertain, out / "log.xes")
    write_log(uncertain, out / "log.jsonl")
    logger.info("wrote %s", ", ".join(str(out / f) for f in ("model.pnml", "log.xes", "log.jsonl")))
    return EXIT_OK


def cmd_sweep(args) -> int:
    records, common = run_sweep(
        n=args.n,
        traces=args.traces,
        ps=args.p,
        seed=args.seed,
        deviations=DeviationParams(args.wrong, args.swap, args.extra),
        c=CostFunction.parse(args.cost),
        cap=args.cap,
        radius=int(args.radius_days * DAY_MS),
        workers=args.workers,
    )
    columns = SWEEP_COLUMNS + (TIMING_COLUMNS if args.timings else [])
    _write_csv(args.out, columns, sweep_rows(records, common, args.timings))
    return EXIT_OK


def cmd_perf(args) -> int:
    records = run_perf(
        n_list=args.n,
        traces=args.traces,
        p=args.p,
        seed=args.seed,
        deviations=DeviationParams(args.wrong, args.swap, args.extra),
        c=CostFunction.parse(args.cost),
        cap=args.cap,
        radius=int(args.radius_days * DAY_MS),
        workers=args.workers,
        repeats=args.repeats,
    )
    _write_csv(args.out, PERF_COLUMNS, perf_rows(records))
    return EXIT_OK


def cmd_convert(args) -> int:
    src = Path(args.log)
    if args.weak:
        try:
            text = src.read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"{src}: {exc}") from exc
        log = []
        for events in import_weak_xes(text):
            strong = weak_to_strong(events)
            g = {e.event_id: min(e.case_ids, key=str) for e in strong}
            log.extend(simplify(strong, g))
    else:
        log = read_log(src)
    write_log(log, args.out)
    return EXIT_OK


def _add_common(p, traces_default):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--traces", type=int, default=traces_default)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max realizations per trace")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cost", default="sync=0,logmove=1,modelmove=1,tau=0")
    p.add_argument("--wrong", type=float, default=0.20, help="wrong-activity probability per event")
    p.add_argument("--swap", type=float, default=0.20, help="timestamp swap probability per event pair")
    p.add_argument("--extra", type=float, default=0.40, help="extra-event probability per trace")
    p.add_argument("--radius-days", type=float, default=1.5, help="half-width of widened timestamps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="uncertain-conformance", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("--kernel", choices=sorted(_kernel.KERNELS), default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="lower/upper conformance bounds of a log against a model")
    p.add_argument("--log", required=True, help="XES or JSON-lines log")
    p.add_argument("--model", required=True, help="PNML model")
    p.add_argument("--out", help="report path; writes .json and .csv (stdout JSON when omitted)")
    p.add_argument("--cost", default="sync=0,logmove=1,modelmove=1,tau=0")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="max realizations per trace")
    p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("gen", help="generate a model and an uncertain log")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--p", type=float, default=0.2)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--no-deviations", action="store_true")
    _add_common(p, 250)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("sweep", help="bounds for increasing uncertainty probability")
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--p", type=_float_list, default=list(SWEEP_PS), help="comma-separated probabilities")
    p.add_argument("--out", required=True, help="CSV path")
    p.add_argument("--timings", action="store_true", help="add wall-clock columns (not reproducible)")
    _add_common(p, 250)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("perf", help="behavior net vs brute force lower-bound timing")
    p.add_argument("--n", type=_int_list, default=[5, 8, 12], help="comma-separated model sizes")
    p.add_argument("--p", type=float, default=0.2)
    p.add_argument("--out", required=True, help="CSV path")
    p.add_argument("--repeats", type=int, default=1)
    _add_common(p, 100)
    p.set_defaults(func=cmd_perf)

    p = sub.add_parser("convert", help="convert between XES and JSON-lines")
    p.add_argument("--log", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--weak", action="store_true", help="input is weakly uncertain XES")
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    if args.kernel:
        _kernel.DEFAULT = args.kernel
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InconsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except ExplosionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXPLOSION
    except (ConformanceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
