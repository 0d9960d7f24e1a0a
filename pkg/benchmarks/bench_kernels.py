"""Time the numba kernels against the pure-numpy fallback.

Each backend runs in its own interpreter because the switch is read at import:

    python3 benchmarks/bench_kernels.py            # both backends
    python3 benchmarks/bench_kernels.py --child    # current backend only
"""

import argparse
import json
import math
import os
import subprocess
import sys
import time


def _best(fn, repeat):
    fn()  # warm-up (and JIT compile)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def child(sizes, repeat):
    import numpy as np

    from capcert import _kernels
    from capcert.sphere import sample_uniform
    from capcert.streams import stream

    out = {"backend": _kernels.BACKEND, "timings": {}}
    lo, hi = math.cos(6 * math.pi / 14), math.cos(8 * math.pi / 14)
    for m in sizes:
        pts = sample_uniform(6, stream(m), m)
        pairs = _kernels.bad_pairs(pts, lo, hi)
        probes = sample_uniform(6, stream(m, 1), 20 * m)
        out["timings"][str(m)] = {
            "bad_pairs": _best(lambda: _kernels.bad_pairs(pts, lo, hi), repeat),
            "greedy_delete": _best(lambda: _kernels.greedy_cover_delete(m, pairs), repeat),
            "cap_depth": _best(lambda: _kernels.cap_depth(probes, pts[:64], lo), repeat),
            "max_sqdist": _best(lambda: _kernels.max_sqdist(pts), repeat),
        }
        out["timings"][str(m)]["pairs"] = int(np.asarray(pairs).shape[0])
    print(json.dumps(out))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--child", action="store_true")
    ap.add_argument("--sizes", default="500,1000,2000")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    if args.child:
        child(sizes, args.repeat)
        return
    results = {}
    for flag in ("0", "1"):
        env = dict(os.environ, CAPCERT_DISABLE_NUMBA=flag)
        cmd = [sys.executable, __file__, "--child", "--sizes", args.sizes,
               "--repeat", str(args.repeat)]
        res = json.loads(subprocess.run(cmd, env=env, check=True, capture_output=True,
                                        text=True).stdout)
        results[res["backend"]] = res["timings"]
    kernels = ("bad_pairs", "greedy_delete", "cap_depth", "max_sqdist")
    print(f"{'m':>6} {'kernel':<14} " + " ".join(f"{b:>10}" for b in results) + "   speedup")
    for m in sizes:
        for k in kernels:
            row = [results[b][str(m)][k] for b in results]
            ratio = ""
            if "numba" in results and "numpy" in results:
                ratio = f"{results['numpy'][str(m)][k] / results['numba'][str(m)][k]:8.1f}x"
            print(f"{m:>6} {k:<14} " + " ".join(f"{t * 1e3:9.2f}ms" for t in row) + f"  {ratio}")


if __name__ == "__main__":
    main()
