#!/usr/bin/env python3
"""Timing comparison of the compiled and pure-NumPy kernel backends.

Runs each hot-path kernel (symmetric Jacobi eigensolver, 4x4 characteristic
polynomial, gamma congruence) on identical seeded inputs under both backends,
then times full end-to-end synthesis.  Usage::

    python3 benchmarks/bench_kernels.py [--repeat N] [--samples N]
"""

import argparse
import time

import numpy as np

from q2synth import numerics as nm
from q2synth._kernels import BACKEND_NAME, pure
from q2synth.synthesis import GateLibrary, synthesize

try:
    from q2synth._kernels import _fast
except ImportError:
    _fast = None


def _bench(label, fn, args_list, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in args_list:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    per_call = best / len(args_list)
    print("  %-28s %10.2f us/call" % (label, per_call * 1e6))
    return per_call


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions, best kept")
    ap.add_argument("--samples", type=int, default=300, help="matrices per timing loop")
    args = ap.parse_args()

    rng = np.random.default_rng(99)
    sym_real = []
    dense4 = []
    for _ in range(args.samples):
        a = rng.standard_normal((4, 4))
        sym_real.append((np.ascontiguousarray(a + a.T),))
        dense4.append((np.ascontiguousarray(nm.haar_unitary(4, rng)),))

    backends = [("pure", pure)]
    if _fast is not None:
        backends.append(("compiled", _fast))
    print("active backend: %s" % BACKEND_NAME)

    results = {}
    for name, mod in backends:
        print("%s:" % name)
        results[name, "jacobi"] = _bench("jacobi_real_sym", mod.jacobi_real_sym, sym_real, args.repeat)
        results[name, "charpoly"] = _bench("charpoly4", mod.charpoly4, dense4, args.repeat)
        results[name, "gamma"] = _bench("gamma4", mod.gamma4, dense4, args.repeat)

    if _fast is not None:
        print("speedup (pure / compiled):")
        for kernel in ("jacobi", "charpoly", "gamma"):
            ratio = results["pure", kernel] / results["compiled", kernel]
            print("  %-28s %10.2fx" % (kernel, ratio))

    unitaries = [nm.haar_unitary(4, rng) for _ in range(max(10, args.samples // 10))]
    print("end-to-end (backend: %s):" % BACKEND_NAME)
    for lib in GateLibrary:
        t0 = time.perf_counter()
        for u in unitaries:
            synthesize(u, lib)
        per = (time.perf_counter() - t0) / len(unitaries)
        print("  %-28s %10.2f us/call" % ("synthesize[%s]" % lib.value, per * 1e6))


if __name__ == "__main__":
    main()
