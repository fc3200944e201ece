"""Compare the compiled and pure-Python per-triangle kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Times the raw kernels on a fixed batch of triangles, then a full fan
sample of the tri444 fixture under each backend (the backend is chosen at
import time, so that part runs in subprocesses).
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from dechyp import _kernels_py

try:
    from dechyp import _kernels
except ImportError:
    _kernels = None

FAN_SNIPPET = """
import time
from importlib import resources
from dechyp import kernels
from dechyp.confspace import fan_sample
from dechyp.surface import parse_surface
S = parse_surface((resources.files("dechyp") / "data" / "tri444.json").read_text())
t = time.perf_counter()
fan_sample(S, 200)
print(kernels.BACKEND, time.perf_counter() - t)
"""


def batch(n=2000, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        types = tuple(int(x) for x in rng.integers(-1, 2, size=3))
        lengths = tuple(float(x) for x in rng.uniform(0.3, 3.0, size=3))
        weights = tuple(float(x) for x in rng.uniform(1.05, 3.0, size=3))
        try:
            _kernels_py.tilt_matrix(types, lengths)
        except ValueError:
            continue
        out.append((types, weights, lengths))
    return out


def time_module(mod, tris, repeat):
    def run_matrix():
        for types, _, lengths in tris:
            mod.tilt_matrix(types, lengths)

    def run_tilts():
        for types, weights, lengths in tris:
            mod.tilts(types, weights, lengths)

    per_call = 1e6 / len(tris)
    return (
        min(timeit.repeat(run_matrix, number=1, repeat=repeat)) * per_call,
        min(timeit.repeat(run_tilts, number=1, repeat=repeat)) * per_call,
    )


def fan_time(pure):
    env = dict(os.environ)
    env.pop("DECHYP_PURE_PYTHON", None)
    if pure:
        env["DECHYP_PURE_PYTHON"] = "1"
    proc = subprocess.run([sys.executable, "-c", FAN_SNIPPET], capture_output=True, text=True,
                          env=env, check=True)
    backend, seconds = proc.stdout.split()
    return backend, float(seconds)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    tris = batch()
    rows = [("python", _kernels_py)]
    if _kernels is not None:
        rows.append(("cython", _kernels))
    else:
        print("compiled kernels not built; timing the fallback only")
    print(f"{'backend':8s} {'tilt_matrix us':>15s} {'tilts us':>10s}")
    results = {}
    for name, mod in rows:
        results[name] = time_module(mod, tris, args.repeat)
        print(f"{name:8s} {results[name][0]:15.2f} {results[name][1]:10.2f}")
    if len(results) == 2:
        speed = results["python"][1] / results["cython"][1]
        print(f"kernel speedup (tilts): {speed:.1f}x")

    print("\nfan_sample(tri444, 200):")
    for pure in (True, False):
        backend, seconds = fan_time(pure)
        print(f"  {backend:8s} {seconds:.3f} s")


if __name__ == "__main__":
    main()
