"""Compare the compiled and pure-Python search kernels.

Aligns behavior nets of random uncertain traces against generated models
with each available kernel, checks both return identical alignments, and
prints per-kernel timings.

    python3 benchmarks/bench_kernels.py --n 8 --traces 100 --p 0.3
"""
import argparse
import statistics
import time

from uncertain_conformance import _kernel
from uncertain_conformance.alignment import align, compiler_for, STANDARD_COST
from uncertain_conformance.behavior import behavior_net
from uncertain_conformance.synth import (
    DeviationParams,
    UncertaintyParams,
    generate_model,
    inject_deviations,
    inject_uncertainty,
    playout,
)


def workload(n, traces, p, seed):
    model = generate_model(n, seed)
    alphabet = sorted(set(model.labels.values()))
    log = inject_deviations(playout(model, traces, seed), DeviationParams(), seed, alphabet)
    log = inject_uncertainty(log, UncertaintyParams(p, frozenset(alphabet)), seed)
    return model, [behavior_net(t) for t in log]


def time_kernel(name, model, nets, repeats):
    cp = compiler_for(model, STANDARD_COST)
    compiled = [cp.compile(net) for net in nets]
    search = _kernel.get(name)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for c in compiled:
            search(len(c.places), c.pre_ptr, c.pre_idx, c.post_ptr, c.post_idx, c.costs, c.init, c.final, 10**6)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[5, 8, 12])
    ap.add_argument("--traces", type=int, default=100)
    ap.add_argument("--p", type=float, default=0.3)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    names = sorted(_kernel.KERNELS)
    print(f"kernels: {', '.join(names)}")
    print(f"{'n':>3} {'states':>9} " + " ".join(f"{k + ' s':>10}" for k in names) + "  speedup")
    for n in args.n:
        model, nets = workload(n, args.traces, args.p, args.seed)
        ref = [align(net, model, kernel="python") for net in nets]
        for name in (k for k in names if k != "python"):
            got = [align(net, model, kernel=name) for net in nets]
            assert [a.moves for a in got] == [a.moves for a in ref], f"kernel {name} disagrees"
        states = statistics.mean(a.states_visited for a in ref)
        times = {k: time_kernel(k, model, nets, args.repeats) for k in names}
        ratio = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{n:>3} {states:>9.1f} " + " ".join(f"{times[k]:>10.4f}" for k in names) + f"  {ratio:6.1f}x")


if __name__ == "__main__":
    main()
