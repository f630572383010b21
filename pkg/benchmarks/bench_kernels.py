#!/usr/bin/env python3
"""Compare the compiled and pure-Python scan kernels.

    python benchmarks/bench_kernels.py --size 10000 --repeat 7
"""

import argparse
import statistics
import sys
import time

from svcdisco import kernels
from svcdisco.datagen import GenSpec, generate_record
from svcdisco.discovery import Query, search_scan
from svcdisco.registry import Registry

SELECTIONS = {
    "two-categories": ["Notifying", "FreeUnlimited"],
    "one-category": ["Notifying"],
    "all-categories": [],
}


def build(size, seed):
    spec = GenSpec(size=size, seed=seed)
    reg = Registry()
    for i in range(size):
        doc, c = generate_record(spec, i)
        reg.register(doc, c, wsdl_uri=f"mem://{i}")
    reg.columns()
    return reg


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=10000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--repeat", type=int, default=7)
    ap.add_argument("--q", default="weather forecast")
    args = ap.parse_args(argv)

    backends = kernels.backends()
    if "cython" not in backends:
        print("compiled kernel not built; only the Python fallback is available", file=sys.stderr)
    reg = build(args.size, args.seed)

    print(f"size={args.size} repeat={args.repeat} default backend={kernels.BACKEND}")
    print(f"{'selection':<16} {'backend':<8} {'kernel_ms':>10} {'total_ms':>10} {'x':>7} {'hits':>6}")
    for name, labels in SELECTIONS.items():
        q = Query.parse(args.q, labels)
        medians = {}
        results = {}
        for bname, impl in sorted(backends.items()):
            kernel, total = [], []
            for _ in range(args.repeat):
                t0 = time.perf_counter()
                res = search_scan(reg, q, backend=impl)
                total.append(time.perf_counter() - t0)
                kernel.append(res.cost.wall_ns / 1e9)
            medians[bname] = statistics.median(kernel)
            results[bname] = res.hits
            print(
                f"{name:<16} {bname:<8} {medians[bname] * 1e3:10.3f} {statistics.median(total) * 1e3:10.3f} "
                f"{res.counts.x:7d} {len(res.hits):6d}"
            )
        if len(medians) == 2:
            if results["python"] != results["cython"]:
                sys.exit(f"backends disagree on {name}")
            print(f"{'':<16} kernel speedup {medians['python'] / medians['cython']:6.1f}x")


if __name__ == "__main__":
    main()
