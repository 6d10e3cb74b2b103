"""Time the batched submatrix-rank kernel on both backends.

    python3 benchmarks/bench_subset_rank.py [--batch 20000] [--repeat 3]

Workloads: all row subsets of sizes 2..5 of the crank Jacobian (the inner
loop of circuit enumeration) and the entity subsets tried by the exact
well-constrained part search on the same model.
"""
import argparse
import itertools
import time

import numpy as np

from gcsa import _kernels, corpus, jacobian, pack_parameters
from gcsa._kernels import submatrix_ranks


def row_subsets(m, sizes, limit):
    masks = []
    for k in sizes:
        for rows in itertools.combinations(range(m), k):
            mask = np.zeros(m, dtype=bool)
            mask[list(rows)] = True
            masks.append(mask)
            if len(masks) >= limit:
                return np.array(masks)
    return np.array(masks)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--batch", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    m = corpus.load("crank")
    J = jacobian(m, pack_parameters(m)).entries
    rng = np.random.default_rng(0)
    workloads = {
        "row subsets 2..5": (row_subsets(J.shape[0], range(2, 6), args.batch), None),
        "random row/col masks": (rng.random((args.batch, J.shape[0])) < 0.5,
                                 rng.random((args.batch, J.shape[1])) < 0.6),
    }
    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    if _kernels.HAVE_NUMBA:
        submatrix_ranks(J, workloads["row subsets 2..5"][0][:4], backend="numba")  # compile

    print(f"{'workload':24s} {'batch':>7s} " + " ".join(f"{b + ' [s]':>11s}" for b in backends)
          + ("    speedup  agree" if len(backends) == 2 else ""))
    for name, (rows, cols) in workloads.items():
        res = {b: best_of(lambda b=b: submatrix_ranks(J, rows, cols, backend=b), args.repeat)
               for b in backends}
        line = f"{name:24s} {len(rows):7d} " + " ".join(f"{res[b][0]:11.4f}" for b in backends)
        if len(backends) == 2:
            speed = res["numpy"][0] / res["numba"][0]
            agree = np.array_equal(res["numpy"][1], res["numba"][1])
            line += f" {speed:9.2f}x  {agree}"
        print(line)


if __name__ == "__main__":
    main()
