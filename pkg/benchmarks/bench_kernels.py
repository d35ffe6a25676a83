"""Compare the numba and pure-numpy series kernels.

Run as: python3 benchmarks/bench_kernels.py [window] [rounds]

The workload is a chain of truncated products at a fixed window length,
which is exactly the shape of the mod-p jet composition loop.
"""

import os
import subprocess
import sys
import time


def workload(window, rounds):
    import numpy as np

    from valjet._kernels import KERNEL_KIND, series_mul

    rng = np.random.default_rng(7)
    p = 67108859
    a = rng.integers(0, p, size=window).astype(np.int64)
    b = rng.integers(0, p, size=window).astype(np.int64)
    series_mul(a, b, p)  # warm-up (possible JIT compile)
    t0 = time.perf_counter()
    acc = a
    for _ in range(rounds):
        acc = series_mul(acc, b, p)
    dt = time.perf_counter() - t0
    checksum = int(acc.sum() % p)
    return KERNEL_KIND, dt, checksum


def main():
    window = int(sys.argv[1]) if len(sys.argv) > 1 else 512
    rounds = int(sys.argv[2]) if len(sys.argv) > 2 else 200
    if "--child" in sys.argv:
        kind, dt, checksum = workload(window, rounds)
        print(f"{kind} {dt:.6f} {checksum}")
        return
    results = {}
    for env_flag in ("", "1"):
        cmd = [sys.executable, __file__, str(window), str(rounds), "--child"]
        env = dict(os.environ)
        env["VALJET_PURE_NUMPY"] = env_flag
        out = subprocess.run(
            cmd, capture_output=True, text=True, check=True, env=env,
        ).stdout.split()
        results[out[0]] = (float(out[1]), int(out[2]))
    print(f"window={window} rounds={rounds}")
    sums = {c for _, c in results.values()}
    for kind, (dt, _) in sorted(results.items()):
        print(f"  {kind:6s} {dt:8.4f}s")
    if len(results) == 2 and len(sums) == 1:
        fast = results.get("numba", results["numpy"])[0]
        slow = results["numpy"][0]
        print(f"  agreement: yes  speedup: {slow / fast:.2f}x")
    elif len(sums) > 1:
        print("  agreement: NO - kernel outputs differ!")
        sys.exit(1)
    else:
        print("  (numba unavailable; only the numpy path ran)")


if __name__ == "__main__":
    main()
