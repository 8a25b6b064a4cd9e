"""Compare the compiled and numpy kernel backends on a synthetic corpus.

    python benchmarks/bench_kernels.py --n 20000 --queries 50
"""

from __future__ import annotations

import argparse
import statistics
import time

import numpy as np

from rpt import kernels
from rpt.evaluation.synth import synth_reprs
from rpt.pbi import build_from_reprs
from rpt.retriever import FeatureMatrix


def _median_ms(fn, repeats: int) -> float:
    fn()
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times) * 1e3


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=20_000)
    ap.add_argument("--queries", type=int, default=50)
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    reprs = synth_reprs(args.n, args.seed, languages=("java",), with_text=False)
    reprs.sort(key=lambda r: r.program_id)
    index = build_from_reprs({"java": reprs}, 16)
    li = index.language("java")
    matrix = FeatureMatrix(reprs, {k: i for i, k in enumerate(sorted(li.types))})
    rng = np.random.default_rng(args.seed)
    queries = [reprs[i] for i in rng.choice(len(reprs), args.queries, replace=False)]
    postings = [[a for k, f in q.freq.items() for a in li.types[k].postings] for q in queries]
    rows = [index.gather_docs(q, "java", 1, 0.3, None)[0] for q in queries]

    backends = kernels.available_backends()
    print(f"records: {args.n}  queries: {args.queries}  backends: {', '.join(backends)}")
    print(f"{'kernel':<24}" + "".join(f"{name:>12}" for name in backends) + f"{'ratio':>10}")
    results: dict[str, dict[str, float]] = {}
    for name, mod in backends.items():
        res = results[name] = {}
        res["count_hits"] = statistics.median(
            _median_ms(lambda p=p: mod.count_hits(p, li.n_docs), args.repeats) for p in postings
        )
        res["cosine_rows (scan)"] = statistics.median(
            _median_ms(lambda q=q: matrix.cosine(q, backend=mod), args.repeats) for q in queries
        )
        res["cosine_rows (subset)"] = statistics.median(
            _median_ms(lambda q=q, r=r: matrix.cosine(q, r, backend=mod), args.repeats)
            for q, r in zip(queries, rows)
        )
    for kernel in results["python"]:
        cells = "".join(f"{results[name][kernel]:>10.3f}ms" for name in backends)
        ratio = results["python"][kernel] / results["cython"][kernel] if "cython" in results else float("nan")
        print(f"{kernel:<24}{cells}{ratio:>9.1f}x")

    # both backends must agree exactly
    if "cython" in backends:
        for q, r in zip(queries, rows):
            a = matrix.cosine(q, r, backend=backends["python"])
            b = matrix.cosine(q, r, backend=backends["cython"])
            assert np.array_equal(a, b), "backends disagree"
        print("outputs identical across backends")


if __name__ == "__main__":
    main()
