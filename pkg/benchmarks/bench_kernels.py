"""Time the hot kernels under both backends.

Each backend runs in its own interpreter because the backend is fixed at import
time by ``TOWERCOB_BACKEND``.  Numba compile time is reported separately from
the steady-state timings.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np

t0 = time.perf_counter()
import towercob._kernels as K
from towercob.charnum import milnor_number
from towercob.residues import granville_batch
from towercob.varieties import bounded_flag, x_variety, y_variety
import_s = time.perf_counter() - t0

repeat = int(sys.argv[1])
rng = np.random.default_rng(0)
ring = bounded_flag(9).ring
a = rng.integers(-3, 4, ring.size).astype(np.int64)
b = rng.integers(-3, 4, ring.size).astype(np.int64)
ops = [(op.indptr, op.indices, op.data) for op in ring.ops]
stacked = ring.stacked_ops()
gn = rng.integers(0, 2000, 200_000)
gm = (rng.random(200_000) * (gn + 1)).astype(np.int64)
op = ring.ops[-1]

work = {
    "monomial_sweep BF_9 (dense product)": lambda: K.monomial_sweep(ops, ring.ranks, a, b, stacked),
    "spgemm BF_9 t9 * t9": lambda: K.spgemm((op.indptr, op.indices, op.data),
                                          (op.indptr, op.indices, op.data), ring.size),
    "granville_batch 2e5 pairs mod 27": lambda: granville_batch(gn, gm, 3, 3),
    "milnor X_5,7": lambda: milnor_number(x_variety(5, 7)),
    "milnor Y_5,6": lambda: milnor_number(y_variety(5, 6)),
}
out = {"backend": K.BACKEND, "import_s": import_s, "first_call_s": {}, "best_s": {}}
for name, fn in work.items():
    t = time.perf_counter(); fn(); out["first_call_s"][name] = time.perf_counter() - t
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter(); fn(); best = min(best, time.perf_counter() - t)
    out["best_s"][name] = best
print(json.dumps(out))
"""


def run_backend(backend: str, repeat: int) -> dict:
    env = dict(os.environ, TOWERCOB_BACKEND=backend)
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], env=env,
                          capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", action="store_true", help="print raw results")
    args = ap.parse_args(argv)
    res = {b: run_backend(b, args.repeat) for b in ("numba", "numpy")}
    if args.json:
        print(json.dumps(res, indent=2, sort_keys=True))
        return 0
    nb, npy = res["numba"], res["numpy"]
    width = max(map(len, nb["best_s"]))
    print(f"{'workload':<{width}}  {'numba ms':>10}  {'numpy ms':>10}  {'speedup':>8}  {'numba 1st ms':>12}")
    for name in nb["best_s"]:
        a, b = nb["best_s"][name] * 1e3, npy["best_s"][name] * 1e3
        first = nb["first_call_s"][name] * 1e3
        print(f"{name:<{width}}  {a:10.2f}  {b:10.2f}  {b / a:7.1f}x  {first:12.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
