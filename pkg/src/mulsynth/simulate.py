"""Word-parallel netlist evaluation.

Each uint64 word carries 64 independent assignments, one per bit lane.
The hot loop (one bitwise op per gate per word) runs either through a
numba-compiled kernel or a pure-numpy per-gate fallback.  Both produce
bit-identical results; the backend is picked by the MULSYNTH_BACKEND
environment variable ("numba", "numpy" or "auto") or per call.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .netlist import GateKind, Netlist

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an optional speedup
    HAVE_NUMBA = False

BACKEND_ENV = "MULSYNTH_BACKEND"


@dataclass
class CompiledNet:
    kinds: np.ndarray      # int8, one code per gate
    srca: np.ndarray       # int32
    srcb: np.ndarray       # int32
    out_refs: np.ndarray   # int32
    n_inputs: int
    n_wires: int


def compile_netlist(net: Netlist) -> CompiledNet:
    n_gates = net.count_gates()
    kinds = np.empty(n_gates, dtype=np.int8)
    srca = np.empty(n_gates, dtype=np.int32)
    srcb = np.empty(n_gates, dtype=np.int32)
    for i, g in enumerate(net.gates):
        kinds[i] = int(g.kind)
        srca[i] = g.a
        srcb[i] = g.b
    out_refs = np.array(net.output_refs(), dtype=np.int32)
    return CompiledNet(kinds, srca, srcb, out_refs, net.n_inputs, net.n_wires)


def resolve_backend(backend: str | None = None) -> str:
    choice = backend or os.environ.get(BACKEND_ENV, "auto")
    if choice == "auto":
        return "numba" if HAVE_NUMBA else "numpy"
    if choice == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba backend requested but numba is not installed")
        return "numba"
    if choice == "numpy":
        return "numpy"
    raise ValueError(f"unknown backend {choice!r} (use numba, numpy or auto)")


def _eval_gates_numpy(kinds, srca, srcb, n_inputs, buf):
    for i in range(kinds.shape[0]):
        a = buf[srca[i]]
        b = buf[srcb[i]]
        k = kinds[i]
        o = n_inputs + i
        if k == 0:
            np.bitwise_and(a, b, out=buf[o])
        elif k == 1:
            np.bitwise_or(a, b, out=buf[o])
        elif k == 2:
            np.bitwise_xor(a, b, out=buf[o])
        elif k == 3:
            np.bitwise_and(a, b, out=buf[o])
            np.invert(buf[o], out=buf[o])
        elif k == 4:
            np.bitwise_or(a, b, out=buf[o])
            np.invert(buf[o], out=buf[o])
        elif k == 5:
            np.bitwise_xor(a, b, out=buf[o])
            np.invert(buf[o], out=buf[o])
        elif k == 6:
            buf[o] = ~a & b
        elif k == 7:
            buf[o] = a & ~b
        elif k == 8:
            buf[o] = ~a | b
        else:
            buf[o] = a | ~b


if HAVE_NUMBA:
    @njit(cache=True)
    def _eval_gates_numba(kinds, srca, srcb, n_inputs, buf):  # pragma: no cover
        n_gates = kinds.shape[0]
        n_words = buf.shape[1]
        for i in range(n_gates):
            a = srca[i]
            b = srcb[i]
            k = kinds[i]
            o = n_inputs + i
            if k == 0:
                for w in range(n_words):
                    buf[o, w] = buf[a, w] & buf[b, w]
            elif k == 1:
                for w in range(n_words):
                    buf[o, w] = buf[a, w] | buf[b, w]
            elif k == 2:
                for w in range(n_words):
                    buf[o, w] = buf[a, w] ^ buf[b, w]
            elif k == 3:
                for w in range(n_words):
                    buf[o, w] = ~(buf[a, w] & buf[b, w])
            elif k == 4:
                for w in range(n_words):
                    buf[o, w] = ~(buf[a, w] | buf[b, w])
            elif k == 5:
                for w in range(n_words):
                    buf[o, w] = ~(buf[a, w] ^ buf[b, w])
            elif k == 6:
                for w in range(n_words):
                    buf[o, w] = ~buf[a, w] & buf[b, w]
            elif k == 7:
                for w in range(n_words):
                    buf[o, w] = buf[a, w] & ~buf[b, w]
            elif k == 8:
                for w in range(n_words):
                    buf[o, w] = ~buf[a, w] | buf[b, w]
            else:
                for w in range(n_words):
                    buf[o, w] = buf[a, w] | ~buf[b, w]


def eval_words(net: Netlist | CompiledNet, input_words: np.ndarray,
               backend: str | None = None) -> np.ndarray:
    """Evaluate 64 assignments per word column.

    ``input_words`` has shape (n_inputs, n_words), dtype uint64; lane t of
    word w is assignment 64*w + t.  Returns (n_outputs, n_words) uint64.
    """
    cn = net if isinstance(net, CompiledNet) else compile_netlist(net)
    if input_words.ndim != 2 or input_words.shape[0] != cn.n_inputs:
        raise ValueError(f"input_words must have shape ({cn.n_inputs}, W)")
    if input_words.dtype != np.uint64:
        raise ValueError("input_words must be uint64")
    n_words = input_words.shape[1]
    buf = np.empty((cn.n_wires, n_words), dtype=np.uint64)
    buf[:cn.n_inputs] = input_words
    which = resolve_backend(backend)
    if which == "numba":
        _eval_gates_numba(cn.kinds, cn.srca, cn.srcb, cn.n_inputs, buf)
    else:
        _eval_gates_numpy(cn.kinds, cn.srca, cn.srcb, cn.n_inputs, buf)
    return buf[cn.out_refs]


_LANES = np.arange(64, dtype=np.uint64)

# Lane masks for index bits 0..5: bit q of the lane number t, broadcast over
# all 64 lanes of a word.
_LOW_BIT_MASKS = tuple(
    np.uint64(sum(1 << t for t in range(64) if (t >> q) & 1))
    for q in range(6)
)


def pack_bits(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 vector (length a multiple of 64) into uint64 lane words."""
    bits = bits.astype(np.uint64, copy=False).reshape(-1, 64)
    return np.bitwise_or.reduce(bits << _LANES, axis=1)


def index_bit_words(bit: int, base: int, n_words: int) -> np.ndarray:
    """Word column for bit ``bit`` of the assignment index.

    Assignment index runs base, base+1, ... with base a multiple of 64.
    """
    if bit < 6:
        return np.full(n_words, _LOW_BIT_MASKS[bit], dtype=np.uint64)
    starts = base + 64 * np.arange(n_words, dtype=np.uint64)
    on = (starts >> np.uint64(bit)) & np.uint64(1)
    return on * np.uint64(0xFFFFFFFFFFFFFFFF)


def value_bit_words(values: np.ndarray, bit: int) -> np.ndarray:
    """Word column for bit ``bit`` of explicit uint64 values (len % 64 == 0)."""
    return pack_bits((values >> np.uint64(bit)) & np.uint64(1))
