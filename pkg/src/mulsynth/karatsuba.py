"""Recursive Karatsuba multiplier generator.

Split m-bit operands as A*2^n + B with n = ceil(m/2), add the halves,
multiply three times (widths n+1, m-n, n, recursing on the method policy),
then fold everything with the final adder-subtractor: a column-by-column
plan over summand and subtrahend bits using the MDFA-/FA3- family, the
(x, x^y) pair encoding, and the cross-column gate sharing that makes the
non-recursive overhead exactly 38n-2 (even m) or 38n-16 (odd m).

Column plan (n = ceil(m/2); bracketed columns exist only for odd m):

    0 .. n-1        pass-through            h = (1,0)
    n               FA3- + NHA              (2,2)
    n+1             MDFA- + HA+-            (3,3)   pair bits enter encoded
    n+2 .. 2m-n-1   FA3- + MDFA-            (3,4)   steady columns
    [3n-2, 3n-1]    MDFA- + HA+-            (3,3)   pair bits enter encoded
    3n              MDFA-                   (3,2)
    3n+1            SFA3- + HA+-            (3,1)
    3n+2            FA30                    (2,1)
    3n+3 .. 2m-2    HA                      (2,0)
    2m-1            XOR                     (2,0)

Columns n+i and 2n+i hold the same two product-bit wires with opposite
signs; routing them into paired FA3- wirings (or reusing their encoding
XOR) saves two gates for most i and one XOR for the rest.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

from .blocks import (BlockKind, CATALOG_COST, EncodedPair, SharedPair,
                     SignedBit, emit_fa3m, emit_fa3m_form_a, emit_fa3m_form_b,
                     emit_fa3z, emit_ha, emit_ha_pm, emit_mdfa_m, emit_nha,
                     emit_ripple_adder_equal, emit_ripple_adder_unequal,
                     emit_sfa3m, make_pair)
from .netlist import Builder, GateKind, InvariantViolation, Netlist
from .school import ScheduleCensus, school_core


class Method(Enum):
    STANDARD = "school"
    KARATSUBA = "karatsuba"


class UnsupportedWidthError(ValueError):
    pass


def method_policy(m: int) -> Method:
    """One halving step pays off exactly when m = 16 or m >= 18."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return Method.KARATSUBA if (m == 16 or m >= 18) else Method.STANDARD


def predict_overhead(m: int) -> int:
    """Non-recursive cost (both pre-adders plus the final adder-subtractor)."""
    if m >= 10 and m % 2 == 0:
        return 38 * (m // 2) - 2
    if m >= 11 and m % 2 == 1:
        return 38 * ((m + 1) // 2) - 16
    raise ValueError(f"overhead formula needs even m >= 10 or odd m >= 11, got {m}")


def expected_sharing_saved(m: int) -> int:
    n = (m + 1) // 2
    return 2 * n - 1 if m % 2 == 0 else 2 * n - 3


@dataclass
class KaratsubaCensus:
    """Inventory of one Karatsuba level (sub-multipliers only by gate count)."""

    blocks: Counter = field(default_factory=Counter)
    conversion_xors: int = 0         # emitted pair-encoding XORs
    conversion_xors_saved: int = 0   # encodings that reused a shared XOR
    top_xors: int = 0
    block_gates_saved: int = 0       # gates dropped inside paired FA3- blocks
    adder_gates: int = 0
    addsub_gates: int = 0
    sub_gate_counts: list = field(default_factory=list)
    h_profile: list = field(default_factory=list)    # (col, h+, h-)

    def overhead(self) -> int:
        return self.adder_gates + self.addsub_gates

    def nominal_xor_total(self) -> int:
        return self.conversion_xors + self.conversion_xors_saved + self.top_xors

    def sharing_saved(self) -> int:
        return self.block_gates_saved + self.conversion_xors_saved


def expected_karatsuba_census(m: int) -> KaratsubaCensus:
    """Paper inventory of the final adder-subtractor for m >= 10."""
    if m < 10:
        raise ValueError("census defined for m >= 10")
    n = (m + 1) // 2
    odd = m % 2
    c = KaratsubaCensus()
    c.blocks[BlockKind.NHA] = 1
    c.blocks[BlockKind.HA_PM] = 2 + 2 * odd
    c.blocks[BlockKind.HA] = n - 4 - 2 * odd
    c.blocks[BlockKind.FA3_M] = 2 * m - 2 * n - 1
    c.blocks[BlockKind.SFA3_M] = 1
    c.blocks[BlockKind.FA3_0] = 1
    c.blocks[BlockKind.MDFA_M] = 2 * n
    c.top_xors = 1
    c.conversion_xors_saved = 2 * odd
    c.conversion_xors = (2 * n + 1) - c.conversion_xors_saved
    c.block_gates_saved = (2 * n - 1) if not odd else (2 * n - 5)
    return c


def plan_profiles(m: int) -> dict[int, tuple[int, int]]:
    """Expected (h+, h-) per column for the final addition-subtraction."""
    n = (m + 1) // 2
    odd = m % 2
    prof: dict[int, tuple[int, int]] = {}
    for col in range(n):
        prof[col] = (1, 0)
    prof[n] = (2, 2)
    prof[n + 1] = (3, 3)
    for col in range(n + 2, 2 * m - n):
        prof[col] = (3, 4)
    if odd:
        prof[3 * n - 2] = (3, 3)
        prof[3 * n - 1] = (3, 3)
    prof[3 * n] = (3, 2)
    prof[3 * n + 1] = (3, 1)
    prof[3 * n + 2] = (2, 1)
    for col in range(3 * n + 3, 2 * m):
        prof[col] = (2, 0)
    return prof


def _take(lst: list[SignedBit], wire: int, what: str) -> SignedBit:
    for idx, sb in enumerate(lst):
        if sb.wire == wire:
            return lst.pop(idx)
    raise InvariantViolation(f"expected wire for {what} not pending in column")


def _final_addsub(b: Builder, m: int, n: int, mid: list[int], high: list[int],
                  low: list[int], sharing: bool,
                  census: KaratsubaCensus) -> list[int]:
    odd = m % 2
    width = 2 * m
    pos: list[list[SignedBit]] = [[] for _ in range(width + 1)]
    neg: list[list[SignedBit]] = [[] for _ in range(width + 1)]
    chain: list[EncodedPair | None] = [None] * (width + 1)

    # Operand rows, in fixed per-column FIFO order (B1B2, mid, A1A2).
    for t, wv in enumerate(low):
        pos[t].append(SignedBit(wv, 1, t))
    for t, wv in enumerate(mid):
        pos[n + t].append(SignedBit(wv, 1, n + t))
    for t, wv in enumerate(high):
        pos[2 * n + t].append(SignedBit(wv, 1, 2 * n + t))
    for t, wv in enumerate(high):
        neg[n + t].append(SignedBit(wv, -1, n + t))
    for t, wv in enumerate(low):
        neg[n + t].append(SignedBit(wv, -1, n + t))

    # Identical-pair wires: columns n+i and 2n+i both see (P_i, Q_i).
    pair_p = {i: low[n + i] for i in range(n)}
    pair_q = {i: high[i] for i in range(n)}
    shared: dict[int, SharedPair] = {}

    profiles = plan_profiles(m)
    steady_end = 2 * m - n - 1
    products: list[int] = []

    for col in range(width):
        hp = len(pos[col]) + (1 if chain[col] is not None else 0)
        hm = len(neg[col]) + (1 if chain[col] is not None else 0)
        census.h_profile.append((col, hp, hm))
        if (hp, hm) != profiles[col]:
            raise InvariantViolation(
                f"karatsuba m={m}: column {col} profile ({hp},{hm}) != "
                f"{profiles[col]}")

        if col < n:
            products.append(pos[col].pop(0).wire)

        elif col == n:
            p_sb = _take(pos[col], pair_p[0], "pair P0")
            q_sb = _take(neg[col], pair_q[0], "pair Q0")
            t = pos[col].pop(0)
            if sharing:
                u, v, sh = emit_fa3m_form_a(b, t, p_sb, q_sb)
                shared[0] = sh
            else:
                u, v = emit_fa3m(b, t, p_sb, q_sb)
            census.blocks[BlockKind.FA3_M] += 1
            pos[col + 1].append(u)
            neg[col].append(v)
            u2, v2 = emit_nha(b, neg[col].pop(0), neg[col].pop(0))
            census.blocks[BlockKind.NHA] += 1
            neg[col + 1].append(u2)
            products.append(v2.wire)

        elif col == n + 1 or (odd and col in (3 * n - 2, 3 * n - 1)):
            low_side = col == n + 1
            i = col - n if low_side else col - 2 * n
            if low_side:
                x_sb = _take(pos[col], pair_p[i], "pair P")
                y_sb = _take(neg[col], pair_q[i], "pair Q")
                ident = make_pair(b, x_sb, y_sb)
                census.conversion_xors += 1
                if sharing:
                    shared[i] = SharedPair(ident.x_xor_y, None)
                fresh = make_pair(b, pos[col].pop(0), neg[col].pop(0))
                census.conversion_xors += 1
                first, second = ident, fresh
            else:
                x_sb = _take(pos[col], pair_q[i], "pair Q")
                y_sb = _take(neg[col], pair_p[i], "pair P")
                if sharing:
                    ident = EncodedPair(x_sb.wire, shared[i].d, -1, col)
                    census.conversion_xors_saved += 1
                else:
                    ident = make_pair(b, x_sb, y_sb)
                    census.conversion_xors += 1
                cp = chain[col]
                chain[col] = None
                first, second = cp, ident
            z = pos[col].pop(0)
            carry_pair, v = emit_mdfa_m(b, first, second, z)
            census.blocks[BlockKind.MDFA_M] += 1
            chain[col + 1] = carry_pair
            pos[col].append(v)
            ub, vb = emit_ha_pm(b, pos[col].pop(0), neg[col].pop(0))
            census.blocks[BlockKind.HA_PM] += 1
            neg[col + 1].append(ub)
            products.append(vb.wire)

        elif col <= steady_end:
            low_side = col <= 2 * n - 1
            i = col - n if low_side else col - 2 * n
            if low_side:
                p_sb = _take(pos[col], pair_p[i], "pair P")
                q_sb = _take(neg[col], pair_q[i], "pair Q")
                t = neg[col].pop(0)
                if sharing:
                    u, v, sh = emit_fa3m_form_b(b, t, q_sb, p_sb)
                    shared[i] = sh
                else:
                    u, v = emit_fa3m(b, t, q_sb, p_sb)
            else:
                q_sb = _take(pos[col], pair_q[i], "pair Q")
                p_sb = _take(neg[col], pair_p[i], "pair P")
                t = neg[col].pop(0)
                if sharing:
                    sh = shared[i]
                    census.block_gates_saved += 1 if sh.e is None else 2
                    u, v, _ = emit_fa3m_form_a(b, t, p_sb, q_sb, shared=sh)
                else:
                    u, v = emit_fa3m(b, t, p_sb, q_sb)
            census.blocks[BlockKind.FA3_M] += 1
            neg[col + 1].append(u)
            pos[col].append(v)
            cp = chain[col]
            chain[col] = None
            if cp is None:
                raise InvariantViolation(f"column {col}: missing carry pair")
            fresh = make_pair(b, pos[col].pop(0), neg[col].pop(0))
            census.conversion_xors += 1
            z = pos[col].pop(0)
            carry_pair, vm = emit_mdfa_m(b, cp, fresh, z)
            census.blocks[BlockKind.MDFA_M] += 1
            chain[col + 1] = carry_pair
            products.append(vm.wire)

        elif col == 3 * n:
            cp = chain[col]
            chain[col] = None
            fresh = make_pair(b, pos[col].pop(0), neg[col].pop(0))
            census.conversion_xors += 1
            z = pos[col].pop(0)
            carry_pair, vm = emit_mdfa_m(b, cp, fresh, z)
            census.blocks[BlockKind.MDFA_M] += 1
            chain[col + 1] = carry_pair
            products.append(vm.wire)

        elif col == 3 * n + 1:
            cp = chain[col]
            chain[col] = None
            u, v = emit_sfa3m(b, cp, pos[col].pop(0))
            census.blocks[BlockKind.SFA3_M] += 1
            pos[col + 1].append(u)
            neg[col].append(v)
            ub, vb = emit_ha_pm(b, pos[col].pop(0), neg[col].pop(0))
            census.blocks[BlockKind.HA_PM] += 1
            neg[col + 1].append(ub)
            products.append(vb.wire)

        elif col == 3 * n + 2:
            u, v = emit_fa3z(b, pos[col].pop(0), pos[col].pop(0),
                             neg[col].pop(0))
            census.blocks[BlockKind.FA3_0] += 1
            pos[col + 1].append(u)
            products.append(v.wire)

        elif col < width - 1:
            u, v = emit_ha(b, pos[col].pop(0), pos[col].pop(0))
            census.blocks[BlockKind.HA] += 1
            pos[col + 1].append(u)
            products.append(v.wire)

        else:
            ref = b.add_gate(GateKind.XOR, pos[col].pop(0).wire,
                             pos[col].pop(0).wire)
            census.top_xors += 1
            products.append(ref)

        if pos[col] or neg[col] or chain[col] is not None:
            raise InvariantViolation(
                f"karatsuba m={m}: column {col} not fully consumed")

    if pos[width] or neg[width] or chain[width] is not None:
        raise InvariantViolation(f"karatsuba m={m}: leftover bits above the top")
    return products


def _build_sub(b: Builder, x: list[int], y: list[int], sharing: bool):
    w = len(x)
    if method_policy(w) is Method.KARATSUBA:
        refs, census, trace = kar_core(b, x, y, sharing=sharing)
        return refs, trace
    refs, _ = school_core(b, x, y)
    return refs, ("school", w, None)


def kar_core(b: Builder, a: list[int], c: list[int], *, sharing: bool = True):
    """Emit one Karatsuba level over existing wires.

    Returns (product wires, KaratsubaCensus, trace tree).  The census and
    overhead are checked against the paper inventory before returning.
    """
    m = len(a)
    if len(c) != m:
        raise ValueError("operands must have equal length")
    if m < 10:
        raise UnsupportedWidthError(f"unsupported width: karatsuba needs m >= 10, got {m}")
    n = (m + 1) // 2
    census = KaratsubaCensus()

    b1, a1 = a[:n], a[n:]
    b2, a2 = c[:n], c[n:]

    def wrap(refs):
        return [SignedBit(r, 1, t) for t, r in enumerate(refs)]

    g0 = b.gate_count
    if m % 2 == 0:
        s1 = emit_ripple_adder_equal(b, wrap(b1), wrap(a1))
        s2 = emit_ripple_adder_equal(b, wrap(b2), wrap(a2))
    else:
        s1 = emit_ripple_adder_unequal(b, wrap(b1), wrap(a1))
        s2 = emit_ripple_adder_unequal(b, wrap(b2), wrap(a2))
    census.adder_gates = b.gate_count - g0

    subs = []
    g1 = b.gate_count
    mid, tr_mid = _build_sub(b, [sb.wire for sb in s1], [sb.wire for sb in s2],
                             sharing)
    subs.append(b.gate_count - g1)
    g1 = b.gate_count
    high, tr_high = _build_sub(b, a1, a2, sharing)
    subs.append(b.gate_count - g1)
    g1 = b.gate_count
    low, tr_low = _build_sub(b, b1, b2, sharing)
    subs.append(b.gate_count - g1)
    census.sub_gate_counts = subs

    g1 = b.gate_count
    products = _final_addsub(b, m, n, mid, high, low, sharing, census)
    census.addsub_gates = b.gate_count - g1

    exp = expected_karatsuba_census(m)
    if census.blocks != exp.blocks or census.top_xors != exp.top_xors:
        raise InvariantViolation(
            f"karatsuba m={m}: block census {dict(census.blocks)} deviates "
            f"from {dict(exp.blocks)}")
    if census.nominal_xor_total() != exp.nominal_xor_total():
        raise InvariantViolation(
            f"karatsuba m={m}: XOR inventory {census.nominal_xor_total()} != "
            f"{exp.nominal_xor_total()}")
    if sharing:
        if (census.conversion_xors_saved != exp.conversion_xors_saved
                or census.block_gates_saved != exp.block_gates_saved):
            raise InvariantViolation(
                f"karatsuba m={m}: sharing saved "
                f"{census.sharing_saved()} gates, expected "
                f"{exp.sharing_saved()}")
        if census.overhead() != predict_overhead(m):
            raise InvariantViolation(
                f"karatsuba m={m}: overhead {census.overhead()} != "
                f"{predict_overhead(m)}")
    else:
        if census.sharing_saved() != 0:
            raise InvariantViolation("sharing disabled but gates were shared")
        if census.overhead() != predict_overhead(m) + expected_sharing_saved(m):
            raise InvariantViolation(
                f"karatsuba m={m} (no sharing): overhead {census.overhead()} "
                f"!= {predict_overhead(m) + expected_sharing_saved(m)}")

    return products, census, ("karatsuba", m, [tr_mid, tr_high, tr_low])


def format_trace(trace) -> str:
    kind, m, subs = trace
    if kind == "school":
        return f"school({m})"
    if all(s[0] == "school" for s in subs):
        widths = ",".join(str(s[1]) for s in subs)
        return f"karatsuba({m})→school({widths})"
    return f"karatsuba({m})→(" + ", ".join(format_trace(s) for s in subs) + ")"


@dataclass
class KaratsubaBuild:
    netlist: Netlist
    census: KaratsubaCensus
    trace: tuple

    @property
    def gate_count(self) -> int:
        return self.netlist.count_gates()


def build_karatsuba(m: int, policy=method_policy, force: bool = False,
                    sharing: bool = True) -> KaratsubaBuild:
    """Build the m-bit Karatsuba multiplier netlist (top level forced on
    demand; sub-multipliers always follow the policy)."""
    if m < 10:
        raise UnsupportedWidthError(
            f"unsupported width: karatsuba needs m >= 10, got {m}")
    if not force and policy(m) is not Method.KARATSUBA:
        raise UnsupportedWidthError(
            f"method policy prefers the standard method at m={m}; "
            f"pass force to build Karatsuba anyway")
    b = Builder()
    a = [b.add_input(f"a{i}") for i in range(m)]
    c = [b.add_input(f"b{i}") for i in range(m)]
    products, census, trace = kar_core(b, a, c, sharing=sharing)
    for j, ref in enumerate(products):
        b.add_output(ref, name=f"p{j}")
    return KaratsubaBuild(b.build(), census, trace)


@dataclass
class AutoBuild:
    netlist: Netlist
    census: object                  # ScheduleCensus or KaratsubaCensus
    trace: tuple
    method: Method

    @property
    def gate_count(self) -> int:
        return self.netlist.count_gates()

    def trace_str(self) -> str:
        return format_trace(self.trace)


def build_auto(m: int) -> AutoBuild:
    """Build with the method the policy picks for m, recursively."""
    if method_policy(m) is Method.KARATSUBA:
        kb = build_karatsuba(m)
        return AutoBuild(kb.netlist, kb.census, kb.trace, Method.KARATSUBA)
    from .school import build_school
    sb = build_school(m)
    return AutoBuild(sb.netlist, sb.census, ("school", m, None), Method.STANDARD)
