#!/usr/bin/env python3
"""Benchmark the word-parallel evaluator: numba kernel vs numpy fallback.

Evaluates generated multiplier netlists over random packed assignments and
reports gate-evaluations per second for each backend.  The same buffers go
through both paths and the outputs are compared bit for bit.

Usage: python benchmarks/bench_eval.py [--words 4096] [--repeats 5]
"""

import argparse
import time

import numpy as np

from mulsynth import simulate
from mulsynth.karatsuba import build_auto, build_karatsuba
from mulsynth.school import build_school


def bench(net, n_words, repeats, backend):
    compiled = simulate.compile_netlist(net)
    rng = np.random.default_rng(12345)
    inw = rng.integers(0, 1 << 63, size=(compiled.n_inputs, n_words),
                       dtype=np.uint64)
    out = simulate.eval_words(compiled, inw, backend)      # warmup / JIT
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = simulate.eval_words(compiled, inw, backend)
        best = min(best, time.perf_counter() - t0)
    gate_evals = compiled.kinds.shape[0] * n_words * 64
    return best, gate_evals / best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--words", type=int, default=4096,
                    help="uint64 words per wire (64 assignments each)")
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    cases = [
        ("school n=8", build_school(8).netlist),
        ("karatsuba m=10 (forced)", build_karatsuba(10, force=True).netlist),
        ("auto m=32", build_auto(32).netlist),
        ("auto m=64", build_auto(64).netlist),
    ]
    backends = ["numpy"] + (["numba"] if simulate.HAVE_NUMBA else [])

    print(f"{args.words} words = {args.words * 64} assignments per run, "
          f"best of {args.repeats}")
    header = f"{'circuit':26} {'gates':>6}"
    for be in backends:
        header += f" {be + ' (s)':>12} {be + ' Geval/s':>14}"
    if len(backends) == 2:
        header += f" {'speedup':>8}"
    print(header)

    for label, net in cases:
        row = f"{label:26} {net.count_gates():>6}"
        times = {}
        outs = {}
        for be in backends:
            dt, rate, out = bench(net, args.words, args.repeats, be)
            times[be] = dt
            outs[be] = out
            row += f" {dt:>12.4f} {rate / 1e9:>14.2f}"
        if len(backends) == 2:
            assert np.array_equal(outs["numpy"], outs["numba"]), \
                "backends disagree"
            row += f" {times['numpy'] / times['numba']:>7.1f}x"
        print(row)


if __name__ == "__main__":
    main()
