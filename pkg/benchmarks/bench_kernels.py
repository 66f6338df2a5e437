"""Compiled vs pure-Python convolution kernel, plus the end-to-end effect.

Run: python3 benchmarks/bench_kernels.py
"""

import os
import random
import subprocess
import sys
import time

from singcurve import _pykernels, kernels


def _time(fn, *args, repeat=5):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_table():
    compiled = kernels.backends().get("cython")
    rng = random.Random(0)
    print(f"{'n':>5} {'bits':>5} {'python ms':>10} {'cython ms':>10} {'speedup':>8}")
    for n in (16, 64, 256):
        for bits in (20, 200):
            a = [rng.getrandbits(bits) - (1 << (bits - 1)) for _ in range(n)]
            b = [rng.getrandbits(bits) - (1 << (bits - 1)) for _ in range(n)]
            tp = _time(_pykernels.conv_trunc, a, b, n)
            if compiled is None:
                print(f"{n:>5} {bits:>5} {tp * 1e3:>10.3f} {'-':>10} {'-':>8}")
                continue
            assert compiled.conv_trunc(a, b, n) == _pykernels.conv_trunc(a, b, n)
            tc = _time(compiled.conv_trunc, a, b, n)
            print(f"{n:>5} {bits:>5} {tp * 1e3:>10.3f} {tc * 1e3:>10.3f} {tp / tc:>7.1f}x")


def end_to_end():
    code = "import time; from singcurve.fuzz import run_fuzz; t=time.perf_counter(); run_fuzz(1, 20); print(time.perf_counter()-t)"
    for label, env in (("cython", {}), ("python", {"SINGCURVE_PURE_PYTHON": "1"})):
        out = subprocess.run([sys.executable, "-c", code], env=dict(os.environ, **env),
                             capture_output=True, text=True, check=True)
        print(f"fuzz seed 1, 20 cases, {label:>6} backend: {float(out.stdout):.2f} s")


if __name__ == "__main__":
    print(f"active backend: {kernels.BACKEND}")
    kernel_table()
    end_to_end()
