"""Independent correctness oracle and equivalence drivers.

The oracle is plain big-integer arithmetic; it never evaluates a netlist.
Equivalence runs word-parallel: 64 operand pairs per uint64 word, chunked
to bound memory, scanning in index order so a reported counterexample is
always the smallest one.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass

import numpy as np

from . import simulate
from .netlist import Netlist

PRNG_ALGORITHM = "MT19937/random.getrandbits"

_M64 = (1 << 64) - 1


class WidthGuardError(ValueError):
    """Exhaustive sweep refused; use random_equivalence for this width."""


def oracle_multiply(a: int, b: int) -> int:
    """Exact product of non-negative integers, independent of all circuits."""
    if a < 0 or b < 0:
        raise ValueError("operands must be non-negative")
    return a * b


@dataclass
class Verdict:
    status: str                      # "pass" | "fail"
    cases: int
    counterexample: dict | None
    seed: int | None
    trials: int | None
    mode: str
    algorithm: str | None = None
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.status == "pass"

    def to_json(self) -> str:
        payload = {
            "status": self.status,
            "cases": self.cases,
            "counterexample": self.counterexample,
            "seed": self.seed,
            "trials": self.trials,
            "mode": self.mode,
            "algorithm": self.algorithm,
            "elapsed": round(self.elapsed, 3),
        }
        return json.dumps(payload)

    def summary(self) -> str:
        if self.ok:
            return f"pass: {self.cases}/{self.cases} cases ({self.mode})"
        ce = self.counterexample
        return (f"fail: a={ce['a']} b={ce['b']} expected={ce['expected']} "
                f"observed={ce['observed']} after {self.cases} cases")


def _check_io(net: Netlist, m: int) -> None:
    if net.n_inputs != 2 * m:
        raise ValueError(f"netlist has {net.n_inputs} inputs, expected {2 * m}")
    if len(net.outputs) > 2 * m:
        raise ValueError(f"netlist has {len(net.outputs)} outputs, more than {2 * m}")


def _compare_chunk(out_words, prod_lo, prod_hi, n_out, total_bits, valid_mask):
    """Word-level compare of circuit outputs against expected product bits.

    Returns the in-chunk case number of the first mismatch, or None.
    Missing high outputs are required to be zero in the expected product.
    """
    n_words = out_words.shape[1]
    diff = np.zeros(n_words, dtype=np.uint64)
    for j in range(total_bits):
        if j < 64:
            expw = simulate.value_bit_words(prod_lo, j)
        else:
            expw = simulate.value_bit_words(prod_hi, j - 64)
        if j < n_out:
            diff |= out_words[j] ^ expw
        else:
            diff |= expw          # circuit has no such output; must be 0
    diff &= valid_mask
    if not diff.any():
        return None
    w = int(np.flatnonzero(diff)[0])
    lane = (int(diff[w]) & -int(diff[w])).bit_length() - 1
    return 64 * w + lane


def _products_to_words(products: list[int]):
    lo = np.fromiter((p & _M64 for p in products), dtype=np.uint64,
                     count=len(products))
    hi = np.fromiter((p >> 64 for p in products), dtype=np.uint64,
                     count=len(products))
    return lo, hi


def _valid_mask(n_words: int, valid: int) -> np.ndarray:
    mask = np.full(n_words, _M64, dtype=np.uint64)
    full, rem = divmod(valid, 64)
    if full < n_words:
        mask[full + 1:] = 0
        mask[full] = np.uint64((1 << rem) - 1) if rem else np.uint64(0)
    return mask


def _counterexample(net: Netlist, m: int, a: int, b: int) -> dict:
    bits = [(a >> i) & 1 for i in range(m)] + [(b >> i) & 1 for i in range(m)]
    out = net.evaluate(bits)
    observed = sum(bit << j for j, bit in enumerate(out))
    return {"a": a, "b": b, "expected": oracle_multiply(a, b),
            "observed": observed}


EXHAUSTIVE_LIMIT = 12
_CHUNK_WORDS = 256          # 16384 assignments per chunk


def exhaustive_equivalence(net: Netlist, m: int,
                           backend: str | None = None) -> Verdict:
    """Sweep all 2^(2m) operand pairs; m is guarded at 12."""
    if m > EXHAUSTIVE_LIMIT:
        raise WidthGuardError(
            f"exhaustive sweep of 2^{2 * m} cases refused (m > "
            f"{EXHAUSTIVE_LIMIT}); use random_equivalence")
    _check_io(net, m)
    start = time.monotonic()
    compiled = simulate.compile_netlist(net)
    n_out = len(net.outputs)
    total = 1 << (2 * m)
    mask = (1 << m) - 1
    chunk = min(_CHUNK_WORDS * 64, max(64, total))
    for base in range(0, total, chunk):
        cnt = min(chunk, total - base)
        n_words = (cnt + 63) // 64
        inw = np.empty((2 * m, n_words), dtype=np.uint64)
        for j in range(m):
            inw[j] = simulate.index_bit_words(m + j, base, n_words)       # a_j
            inw[m + j] = simulate.index_bit_words(j, base, n_words)      # b_j
        idx = np.arange(base, base + cnt, dtype=np.uint64)
        a_vals = (idx >> np.uint64(m)).tolist()
        b_vals = (idx & np.uint64(mask)).tolist()
        products = [oracle_multiply(int(x), int(y))
                    for x, y in zip(a_vals, b_vals)]
        if cnt % 64:
            products += [0] * (64 - cnt % 64)
        lo, hi = _products_to_words(products)
        outw = simulate.eval_words(compiled, inw, backend)
        pos = _compare_chunk(outw, lo, hi, n_out, 2 * m,
                             _valid_mask(n_words, cnt))
        if pos is not None:
            bad = base + pos
            ce = _counterexample(net, m, bad >> m, bad & mask)
            return Verdict("fail", bad + 1, ce, None, None, "exhaustive",
                           elapsed=time.monotonic() - start)
    return Verdict("pass", total, None, None, None, "exhaustive",
                   elapsed=time.monotonic() - start)


def corner_vectors(m: int) -> list[tuple[int, int]]:
    top = (1 << m) - 1
    return [(0, 0), (top, top), (1, top), (1 << (m - 1), 1 << (m - 1))]


def random_equivalence(net: Netlist, m: int, trials: int, seed: int,
                       backend: str | None = None) -> Verdict:
    """Seeded random sweep; always prepends the corner vectors.

    The case stream is a pure function of (m, trials, seed): the PRNG is
    MT19937 via random.getrandbits, drawing a then b per trial.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    _check_io(net, m)
    start = time.monotonic()
    rng = random.Random(seed)
    cases = corner_vectors(m)
    cases.extend((rng.getrandbits(m), rng.getrandbits(m))
                 for _ in range(trials))
    compiled = simulate.compile_netlist(net)
    n_out = len(net.outputs)
    total = len(cases)
    chunk = _CHUNK_WORDS * 64
    for base in range(0, total, chunk):
        batch = cases[base:base + chunk]
        cnt = len(batch)
        pad = (-cnt) % 64
        a_vals = np.fromiter((a for a, _ in batch), dtype=np.uint64, count=cnt)
        b_vals = np.fromiter((b for _, b in batch), dtype=np.uint64, count=cnt)
        if pad:
            a_vals = np.concatenate([a_vals, np.zeros(pad, dtype=np.uint64)])
            b_vals = np.concatenate([b_vals, np.zeros(pad, dtype=np.uint64)])
        n_words = (cnt + 63) // 64
        inw = np.empty((2 * m, n_words), dtype=np.uint64)
        for j in range(m):
            inw[j] = simulate.value_bit_words(a_vals, j)
            inw[m + j] = simulate.value_bit_words(b_vals, j)
        products = [oracle_multiply(a, b) for a, b in batch] + [0] * pad
        lo, hi = _products_to_words(products)
        outw = simulate.eval_words(compiled, inw, backend)
        pos = _compare_chunk(outw, lo, hi, n_out, 2 * m,
                             _valid_mask(n_words, cnt))
        if pos is not None:
            a, b = batch[pos]
            return Verdict("fail", base + pos + 1,
                           _counterexample(net, m, a, b), seed, trials,
                           "random", PRNG_ALGORITHM,
                           elapsed=time.monotonic() - start)
    return Verdict("pass", total, None, seed, trials, "random",
                   PRNG_ALGORITHM, elapsed=time.monotonic() - start)


# ---------------------------------------------------------------------------
# Aggregate selftest

@dataclass
class SelftestReport:
    suites: list                     # (name, ok, detail)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.suites)

    def to_json(self) -> str:
        return json.dumps({
            "status": "pass" if self.ok else "fail",
            "suites": [{"name": n, "ok": ok, "detail": d}
                       for n, ok, d in self.suites],
        })


def selftest() -> SelftestReport:
    """Block identity suites, adder costs, and small-width generator
    batteries.  Honors MULSYNTH_FAULT for fault-injection testing."""
    from . import blocks as blk
    from .blocks import (SignedBit, emit_ripple_adder_equal,
                         emit_ripple_adder_unequal)
    from .bounds import closed_form_K, propagate_X, recurrence_L_table
    from .karatsuba import build_karatsuba, predict_overhead
    from .netlist import Builder, InvariantViolation
    from .school import build_school, expected_census, predict_school_count

    suites: list[tuple[str, bool, str]] = []
    blk.arm_fault_from_env()
    try:
        for r in blk.check_block_identities():
            suites.append((r.name, r.ok, r.detail))
    finally:
        blk.set_fault(None)

    def adder_suite(name, emit, short):
        for n in range(2 if short else 1, 17):
            b = Builder()
            xa = [SignedBit(b.add_input(f"a{i}"), 1, i) for i in range(n)]
            nb = n - 1 if short else n
            xb = [SignedBit(b.add_input(f"b{i}"), 1, i) for i in range(nb)]
            out = emit(b, xa, xb)
            expect = 5 * n - 6 if short else 5 * n - 3
            if b.gate_count != expect:
                return False, f"n={n}: {b.gate_count} gates != {expect}"
            if n <= 6:
                for s in out:
                    b.add_output(s.wire)
                net = b.build()
                for va in range(1 << n):
                    for vb in range(1 << nb):
                        bits = [(va >> i) & 1 for i in range(n)]
                        bits += [(vb >> i) & 1 for i in range(nb)]
                        res = net.evaluate(bits)
                        got = sum(r << i for i, r in enumerate(res))
                        if got != va + vb:
                            return False, f"{va}+{vb} gave {got}"
        return True, ""

    ok, detail = adder_suite("adder-equal", emit_ripple_adder_equal, False)
    suites.append(("adder-equal", ok, detail))
    ok, detail = adder_suite("adder-unequal", emit_ripple_adder_unequal, True)
    suites.append(("adder-unequal", ok, detail))

    try:
        for n in range(2, 17):
            sb = build_school(n)
            assert sb.gate_count == predict_school_count(n)
            if n >= 4:
                assert sb.census.same_inventory(expected_census(n))
        suites.append(("school-counts", True, ""))
    except (AssertionError, InvariantViolation) as exc:
        suites.append(("school-counts", False, str(exc)))

    try:
        for n in range(1, 6):
            v = exhaustive_equivalence(build_school(n).netlist, n)
            assert v.ok, v.summary()
        suites.append(("school-exhaustive", True, ""))
    except AssertionError as exc:
        suites.append(("school-exhaustive", False, str(exc)))

    try:
        for m in range(10, 15):
            kb = build_karatsuba(m, force=True)
            total = kb.gate_count
            assert total - sum(kb.census.sub_gate_counts) == predict_overhead(m)
        v = random_equivalence(build_karatsuba(10, force=True).netlist, 10,
                               trials=500, seed=1)
        assert v.ok, v.summary()
        suites.append(("karatsuba-small", True, ""))
    except (AssertionError, InvariantViolation) as exc:
        suites.append(("karatsuba-small", False, str(exc)))

    try:
        table = recurrence_L_table(40)
        golden = [1, 8, 30, 61, 105, 158, 224, 299, 387, 484, 594, 713,
                  845, 986, 1140, 1287, 1479, 1598]
        assert [table.L(m) for m in range(1, 19)] == golden
        for k in range(4, 11):
            assert closed_form_K(k) == propagate_X(k)[2]
        suites.append(("bounds-table", True, ""))
    except AssertionError as exc:
        suites.append(("bounds-table", False, str(exc)))

    return SelftestReport(suites)
