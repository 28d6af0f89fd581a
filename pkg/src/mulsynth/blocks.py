"""Catalog of auxiliary compressor blocks and ripple-carry adders.

Every block emits a fixed number of gates into a caller-owned Builder and
returns typed bits.  A SignedBit is a wire with an arithmetic sign and a
column weight; an EncodedPair carries two same-weight bits (x, y) as the
wires (x, x XOR y), which is what lets the 5-input compressors reach 8
gates.  Identities (weights are powers of two, v at weight w, u at w+1):

    HA      x1 + x2           = 2u + v
    HA+-    x1 - x2           = -2u + v
    NHA     -x1 - x2          = -2u + v          (u = x1|x2, v = x1^x2)
    FA3     x1 + x2 + x3      = 2u + v
    FA3-    x1 + x2 - x3      = 2u - v
    FA30    x1 + x2 - x3      = 2u + v           (only when >= 0)
    SFA3    x1 + x2 + x3      = 2u + v           (given x1, x1^x2, x3)
    SFA3-   x1 - x2 + x3      = 2u - v           (given x1, x1^x2, x3)
    MDFA    x1+y1+x2+y2+z     = 2(u1+u2) + v     (pairs encoded)
    MDFA-   x1-y1+x2-y2+z     = 2(u1-u2) + v     (pairs encoded)

The sign-agnostic blocks (FA3-, HA families) may be used in a negated
ledger orientation: the Boolean function is the same, only the signs
attached to the returned bits flip.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from enum import Enum

from .netlist import Builder, BuildError, GateKind

A = GateKind.AND
O = GateKind.OR
X = GateKind.XOR


@dataclass(frozen=True)
class SignedBit:
    wire: int
    sign: int
    weight: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise BuildError(f"sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class EncodedPair:
    """Bits (x, y) carried as wires (x, x^y); x always counts as +1."""

    x: int
    x_xor_y: int
    sign_y: int
    weight: int

    def __post_init__(self):
        if self.sign_y not in (1, -1):
            raise BuildError(f"sign_y must be +1 or -1, got {self.sign_y}")


class BlockKind(Enum):
    HA = "HA"
    HA_PM = "HA+-"
    NHA = "NHA"
    FA3 = "FA3"
    FA3_M = "FA3-"
    FA3_0 = "FA30"
    SFA3 = "SFA3"
    SFA3_M = "SFA3-"
    MDFA = "MDFA"
    MDFA_M = "MDFA-"
    SHARED3A = "SHARED3A"
    SHARED3B = "SHARED3B"


# Catalog gate costs for standalone emission.  SHARED3A/B are the two
# FA3- wirings built around a shared (xor, andnot) pair: 5 standalone,
# 3 when both shared wires are reused, 4 when only the xor is.
CATALOG_COST = {
    BlockKind.HA: 2,
    BlockKind.HA_PM: 2,
    BlockKind.NHA: 2,
    BlockKind.FA3: 5,
    BlockKind.FA3_M: 5,
    BlockKind.FA3_0: 4,
    BlockKind.SFA3: 4,
    BlockKind.SFA3_M: 4,
    BlockKind.MDFA: 8,
    BlockKind.MDFA_M: 8,
    BlockKind.SHARED3A: 5,
    BlockKind.SHARED3B: 5,
}


_FAULT_FLIP = {
    GateKind.AND: GateKind.NAND, GateKind.NAND: GateKind.AND,
    GateKind.OR: GateKind.NOR, GateKind.NOR: GateKind.OR,
    GateKind.XOR: GateKind.XNOR, GateKind.XNOR: GateKind.XOR,
    GateKind.ANDN1: GateKind.ORN1, GateKind.ORN1: GateKind.ANDN1,
    GateKind.ANDN2: GateKind.ORN2, GateKind.ORN2: GateKind.ANDN2,
}

_active_fault: str | None = None


def set_fault(label: str | None) -> None:
    """Arm fault injection: the next emitted block with this catalog label
    gets its first gate flipped.  Used only by the selftest path."""
    global _active_fault
    _active_fault = label


def _k(label: str, kind: GateKind) -> GateKind:
    """First-gate kind, possibly tampered by an armed fault."""
    global _active_fault
    if _active_fault is not None and _active_fault == label:
        _active_fault = None
        return _FAULT_FLIP[kind]
    return kind


def _same_weight(*bits) -> int:
    w = bits[0].weight
    for sb in bits[1:]:
        if sb.weight != w:
            raise BuildError("mixed weights in block inputs")
    return w


def _need_sign(sb: SignedBit, sign: int, what: str) -> None:
    if sb.sign != sign:
        raise BuildError(f"{what} must have sign {sign:+d}, got {sb.sign:+d}")


def emit_ha(b: Builder, x1: SignedBit, x2: SignedBit):
    """x1 + x2 = 2u + v; both inputs +1."""
    w = _same_weight(x1, x2)
    _need_sign(x1, 1, "HA x1")
    _need_sign(x2, 1, "HA x2")
    v = b.add_gate(_k("HA", X), x1.wire, x2.wire)
    u = b.add_gate(A, x1.wire, x2.wire)
    return SignedBit(u, 1, w + 1), SignedBit(v, 1, w)


def emit_ha_pm(b: Builder, plus: SignedBit, minus: SignedBit):
    """plus - minus = -2u + v; u is a borrow (sign -1)."""
    w = _same_weight(plus, minus)
    _need_sign(plus, 1, "HA+- x1")
    _need_sign(minus, -1, "HA+- x2")
    v = b.add_gate(_k("HA+-", X), plus.wire, minus.wire)
    u = b.add_gate(GateKind.ANDN1, plus.wire, minus.wire)
    return SignedBit(u, -1, w + 1), SignedBit(v, 1, w)


def emit_nha(b: Builder, m1: SignedBit, m2: SignedBit):
    """-x1 - x2 = -2(x1|x2) + (x1^x2); both inputs -1, v comes out +1."""
    w = _same_weight(m1, m2)
    _need_sign(m1, -1, "NHA x1")
    _need_sign(m2, -1, "NHA x2")
    v = b.add_gate(_k("NHA", X), m1.wire, m2.wire)
    u = b.add_gate(O, m1.wire, m2.wire)
    return SignedBit(u, -1, w + 1), SignedBit(v, 1, w)


def emit_fa3(b: Builder, x1: SignedBit, x2: SignedBit, x3: SignedBit):
    """x1 + x2 + x3 = 2u + v; all +1."""
    w = _same_weight(x1, x2, x3)
    for sb, nm in ((x1, "x1"), (x2, "x2"), (x3, "x3")):
        _need_sign(sb, 1, f"FA3 {nm}")
    t = b.add_gate(_k("FA3", X), x1.wire, x2.wire)
    v = b.add_gate(X, t, x3.wire)
    c1 = b.add_gate(A, x1.wire, x2.wire)
    c2 = b.add_gate(A, t, x3.wire)
    u = b.add_gate(O, c1, c2)
    return SignedBit(u, 1, w + 1), SignedBit(v, 1, w)


def _fa3m_signs(x1, x2, x3):
    s = x1.sign
    if x2.sign != s or x3.sign != -s:
        raise BuildError("FA3- needs signs (s, s, -s)")
    return s


def emit_fa3m(b: Builder, x1: SignedBit, x2: SignedBit, x3: SignedBit):
    """x1 + x2 - x3 = 2u - v over the wires; ledger orientation follows
    x1.sign (u keeps it, v gets the opposite)."""
    w = _same_weight(x1, x2, x3)
    s = _fa3m_signs(x1, x2, x3)
    t = b.add_gate(_k("FA3-", X), x1.wire, x2.wire)
    v = b.add_gate(X, t, x3.wire)
    c1 = b.add_gate(A, x1.wire, x2.wire)
    c2 = b.add_gate(GateKind.ANDN2, t, x3.wire)
    u = b.add_gate(O, c1, c2)
    return SignedBit(u, s, w + 1), SignedBit(v, -s, w)


@dataclass(frozen=True)
class SharedPair:
    """The wires two paired FA3- blocks have in common: d = x2^x3 and the
    andnot e = x2 & ~x3 of the first block's slot orientation."""

    d: int
    e: int | None


def emit_fa3m_form_a(b: Builder, x1: SignedBit, x2: SignedBit, x3: SignedBit,
                     shared: SharedPair | None = None):
    """FA3- wired so d = x2^x3 and e = x2&~x3 are explicit nodes.

    u = e | (x1 & ~d).  With ``shared`` the d (and e, when present) wires
    are reused instead of re-emitted: cost 5 standalone, 4 with d only,
    3 with both.  Returns (u, v, SharedPair).
    """
    w = _same_weight(x1, x2, x3)
    s = _fa3m_signs(x1, x2, x3)
    if shared is None:
        d = b.add_gate(_k("SHARED3A", X), x2.wire, x3.wire)
        e = b.add_gate(GateKind.ANDN2, x2.wire, x3.wire)
    else:
        d = shared.d
        e = shared.e
        if e is None:
            e = b.add_gate(GateKind.ANDN2, x2.wire, x3.wire)
    v = b.add_gate(X, x1.wire, d)
    f = b.add_gate(GateKind.ANDN2, x1.wire, d)
    u = b.add_gate(O, e, f)
    return SignedBit(u, s, w + 1), SignedBit(v, -s, w), SharedPair(d, e)


def emit_fa3m_form_b(b: Builder, x1: SignedBit, x2: SignedBit, x3: SignedBit,
                     shared: SharedPair | None = None):
    """FA3- with the complementary andnot: d = x2^x3, e = x3&~x2,
    u = (x1 | d) & ~e.  Shares gates with a form-A partner whose pair
    slots are swapped (its x2 is this block's x3)."""
    w = _same_weight(x1, x2, x3)
    s = _fa3m_signs(x1, x2, x3)
    if shared is None:
        d = b.add_gate(_k("SHARED3B", X), x2.wire, x3.wire)
        e = b.add_gate(GateKind.ANDN2, x3.wire, x2.wire)
    else:
        d = shared.d
        e = shared.e
        if e is None:
            e = b.add_gate(GateKind.ANDN2, x3.wire, x2.wire)
    v = b.add_gate(X, x1.wire, d)
    g = b.add_gate(O, x1.wire, d)
    u = b.add_gate(GateKind.ANDN2, g, e)
    # e is x3&~x2 here; hand the partner the (d, e) pair in its own slot
    # orientation, where the same wire plays x2&~x3.
    return SignedBit(u, s, w + 1), SignedBit(v, -s, w), SharedPair(d, e)


def emit_fa3z(b: Builder, x1: SignedBit, x2: SignedBit, x3: SignedBit):
    """x1 + x2 - x3 = 2u + v, defined only when the value is non-negative.

    4 gates; the impossible case x1=x2=0, x3=1 is a don't-care.
    """
    w = _same_weight(x1, x2, x3)
    _need_sign(x1, 1, "FA30 x1")
    _need_sign(x2, 1, "FA30 x2")
    _need_sign(x3, -1, "FA30 x3")
    t = b.add_gate(_k("FA30", X), x1.wire, x2.wire)
    v = b.add_gate(X, t, x3.wire)
    c = b.add_gate(A, x1.wire, x2.wire)
    u = b.add_gate(GateKind.ANDN2, c, x3.wire)
    return SignedBit(u, 1, w + 1), SignedBit(v, 1, w)


def emit_sfa3(b: Builder, pair: EncodedPair, z: SignedBit):
    """x1 + y + z = 2u + v from the encoded pair (x1, x1^y) plus plain z."""
    if pair.sign_y != 1:
        raise BuildError("SFA3 needs an all-positive pair")
    if pair.weight != z.weight:
        raise BuildError("mixed weights in block inputs")
    _need_sign(z, 1, "SFA3 x3")
    w = z.weight
    v = b.add_gate(_k("SFA3", X), pair.x_xor_y, z.wire)
    c1 = b.add_gate(GateKind.ANDN2, pair.x, pair.x_xor_y)
    c2 = b.add_gate(A, pair.x_xor_y, z.wire)
    u = b.add_gate(O, c1, c2)
    return SignedBit(u, 1, w + 1), SignedBit(v, 1, w)


def emit_sfa3m(b: Builder, pair: EncodedPair, z: SignedBit):
    """x1 - y + z = 2u - v from the encoded pair (x1, x1^y) plus plain z."""
    if pair.sign_y != -1:
        raise BuildError("SFA3- needs a pair with a subtrahend y")
    if pair.weight != z.weight:
        raise BuildError("mixed weights in block inputs")
    _need_sign(z, 1, "SFA3- x3")
    w = z.weight
    v = b.add_gate(_k("SFA3-", X), pair.x_xor_y, z.wire)
    c1 = b.add_gate(A, pair.x, pair.x_xor_y)
    c2 = b.add_gate(GateKind.ANDN2, z.wire, pair.x_xor_y)
    u = b.add_gate(O, c1, c2)
    return SignedBit(u, 1, w + 1), SignedBit(v, -1, w)


def _mdfa_gates(b: Builder, label: str, p1: EncodedPair, p2: EncodedPair,
                z: SignedBit, minus: bool):
    # Two chained pair-encoded full adders sharing their glue:
    #   w1 = s1^z is both the first sum bit and a v building block,
    #   g3 feeds both u1 and the output pair xor.
    w1 = b.add_gate(_k(label, X), p1.x_xor_y, z.wire)
    g2 = b.add_gate(X, p1.x, z.wire)
    if minus:
        g3 = b.add_gate(GateKind.ORN2, g2, p1.x_xor_y)
        u1 = b.add_gate(GateKind.XNOR, g3, w1)
    else:
        g3 = b.add_gate(O, g2, p1.x_xor_y)
        u1 = b.add_gate(X, g3, w1)
    g5 = b.add_gate(X, w1, p2.x)
    v = b.add_gate(X, w1, p2.x_xor_y)
    if minus:
        g7 = b.add_gate(GateKind.ORN2, g5, p2.x_xor_y)
    else:
        g7 = b.add_gate(GateKind.ANDN2, g5, p2.x_xor_y)
    p = b.add_gate(X, g3, g7)
    return u1, p, v


def emit_mdfa(b: Builder, p1: EncodedPair, p2: EncodedPair, z: SignedBit):
    """x1+y1+x2+y2+z = 2(u1+u2)+v; carries come out as an encoded pair."""
    if p1.sign_y != 1 or p2.sign_y != 1:
        raise BuildError("MDFA needs all-positive pairs")
    if p1.weight != p2.weight or p1.weight != z.weight:
        raise BuildError("mixed weights in block inputs")
    _need_sign(z, 1, "MDFA z")
    w = z.weight
    u1, p, v = _mdfa_gates(b, "MDFA", p1, p2, z, minus=False)
    return EncodedPair(u1, p, 1, w + 1), SignedBit(v, 1, w)


def emit_mdfa_m(b: Builder, p1: EncodedPair, p2: EncodedPair, z: SignedBit):
    """x1-y1+x2-y2+z = 2(u1-u2)+v; carry pair has a subtrahend u2."""
    if p1.sign_y != -1 or p2.sign_y != -1:
        raise BuildError("MDFA- needs pairs with subtrahend y")
    if p1.weight != p2.weight or p1.weight != z.weight:
        raise BuildError("mixed weights in block inputs")
    _need_sign(z, 1, "MDFA- z")
    w = z.weight
    u1, p, v = _mdfa_gates(b, "MDFA-", p1, p2, z, minus=True)
    return EncodedPair(u1, p, -1, w + 1), SignedBit(v, 1, w)


def make_pair(b: Builder, x: SignedBit, y: SignedBit) -> EncodedPair:
    """Encode plain bits (x, y) as (x, x^y); costs exactly one XOR."""
    w = _same_weight(x, y)
    _need_sign(x, 1, "pair x")
    s = b.add_gate(X, x.wire, y.wire)
    return EncodedPair(x.wire, s, y.sign, w)


def emit_block(b: Builder, kind: BlockKind, inputs: list):
    """Generic dispatcher for the catalog kinds.

    The shared FA3- wirings need cross-block wires and are reached through
    emit_fa3m_form_a/_b directly; here they emit standalone.
    """
    table = {
        BlockKind.HA: (emit_ha, 2),
        BlockKind.HA_PM: (emit_ha_pm, 2),
        BlockKind.NHA: (emit_nha, 2),
        BlockKind.FA3: (emit_fa3, 3),
        BlockKind.FA3_M: (emit_fa3m, 3),
        BlockKind.FA3_0: (emit_fa3z, 3),
        BlockKind.SFA3: (emit_sfa3, 2),
        BlockKind.SFA3_M: (emit_sfa3m, 2),
        BlockKind.MDFA: (emit_mdfa, 3),
        BlockKind.MDFA_M: (emit_mdfa_m, 3),
        BlockKind.SHARED3A: (emit_fa3m_form_a, 3),
        BlockKind.SHARED3B: (emit_fa3m_form_b, 3),
    }
    fn, arity = table[kind]
    if len(inputs) != arity:
        raise BuildError(f"{kind.value} takes {arity} inputs, got {len(inputs)}")
    return fn(b, *inputs)


def emit_full_adder(b: Builder, x1: SignedBit, x2: SignedBit, cin: SignedBit):
    return emit_fa3(b, x1, x2, cin)


def emit_ripple_adder_equal(b: Builder, a: list[SignedBit], c: list[SignedBit]):
    """Add two n-bit numbers into n+1 bits; exactly 5n-3 gates."""
    n = len(a)
    if len(c) != n or n < 1:
        raise BuildError("equal adder needs two operands of the same length >= 1")
    _check_operand(a)
    _check_operand(c)
    out: list[SignedBit] = []
    carry, v = emit_ha(b, a[0], c[0])
    out.append(v)
    for i in range(1, n):
        carry, v = emit_fa3(b, a[i], c[i], carry)
        out.append(v)
    out.append(carry)
    return out


def emit_ripple_adder_unequal(b: Builder, a: list[SignedBit], c: list[SignedBit]):
    """Add an n-bit and an (n-1)-bit number into n+1 bits; 5n-6 gates."""
    n = len(a)
    if len(c) != n - 1 or n < 2:
        raise BuildError("unequal adder needs lengths n and n-1 with n >= 2")
    _check_operand(a)
    _check_operand(c)
    out: list[SignedBit] = []
    carry, v = emit_ha(b, a[0], c[0])
    out.append(v)
    for i in range(1, n - 1):
        carry, v = emit_fa3(b, a[i], c[i], carry)
        out.append(v)
    carry, v = emit_ha(b, a[n - 1], carry)
    out.append(v)
    out.append(carry)
    return out


def _check_operand(bits: list[SignedBit]) -> None:
    w0 = bits[0].weight
    for i, sb in enumerate(bits):
        _need_sign(sb, 1, "adder operand bit")
        if sb.weight != w0 + i:
            raise BuildError("adder operand weights must ascend from the LSB")


# ---------------------------------------------------------------------------
# Self-checking suites: every block, every valid assignment, exact costs.

@dataclass
class SuiteResult:
    name: str
    cases: int
    expected_cost: int
    actual_cost: int
    ok: bool
    detail: str = ""


def _run_cases(name, build_fn, n_free, case_fn, expected_cost, skip=()):
    """Build the block once in isolation, then sweep all free-bit vectors.

    build_fn(Builder, input_refs) -> output SignedBits/pairs to check;
    case_fn(free_bits, outputs_as_bits) -> (lhs, rhs) of the identity.
    """
    b = Builder()
    refs = [b.add_input(f"i{j}") for j in range(n_free)]
    before = b.gate_count
    outs, assign_fn = build_fn(b, refs)
    cost = b.gate_count - before
    for out in outs:
        b.add_output(out)
    net = b.build()
    cases = 0
    for bits_int in range(1 << n_free):
        free = [(bits_int >> j) & 1 for j in range(n_free)]
        if tuple(free) in skip:
            continue
        res = net.evaluate(assign_fn(free))
        lhs, rhs = case_fn(free, res)
        cases += 1
        if lhs != rhs:
            return SuiteResult(name, cases, expected_cost, cost, False,
                               f"identity fails at {free}: {lhs} != {rhs}")
    if cost != expected_cost:
        return SuiteResult(name, cases, expected_cost, cost, False,
                           f"{name} cost {cost} != {expected_cost}")
    return SuiteResult(name, cases, expected_cost, cost, True)


def check_block_identities() -> list[SuiteResult]:
    """Exhaustive identity + cost check for every catalog block.

    Honors an armed fault (set_fault) so the selftest can prove the suites
    actually detect broken blocks.
    """
    results = []
    ident = lambda free: free  # noqa: E731 - direct assignment of free bits

    def sb(refs, signs, w=0):
        return [SignedBit(r, s, w) for r, s in zip(refs, signs)]

    def two_out(u_sb, v_sb):
        return [u_sb.wire, v_sb.wire]

    # HA
    def build_ha(b, refs):
        u, v = emit_ha(b, *sb(refs, (1, 1)))
        return two_out(u, v), ident
    results.append(_run_cases(
        "HA", build_ha, 2,
        lambda f, o: (f[0] + f[1], 2 * o[0] + o[1]), 2))

    # HA+-
    def build_hapm(b, refs):
        u, v = emit_ha_pm(b, SignedBit(refs[0], 1, 0), SignedBit(refs[1], -1, 0))
        return two_out(u, v), ident
    results.append(_run_cases(
        "HA+-", build_hapm, 2,
        lambda f, o: (f[0] - f[1], -2 * o[0] + o[1]), 2))

    # NHA
    def build_nha(b, refs):
        u, v = emit_nha(b, *sb(refs, (-1, -1)))
        return two_out(u, v), ident
    results.append(_run_cases(
        "NHA", build_nha, 2,
        lambda f, o: (-f[0] - f[1], -2 * o[0] + o[1]), 2))

    # FA3
    def build_fa3(b, refs):
        u, v = emit_fa3(b, *sb(refs, (1, 1, 1)))
        return two_out(u, v), ident
    results.append(_run_cases(
        "FA3", build_fa3, 3,
        lambda f, o: (f[0] + f[1] + f[2], 2 * o[0] + o[1]), 5))

    # FA3-
    def build_fa3m(b, refs):
        u, v = emit_fa3m(b, *sb(refs, (1, 1, -1)))
        return two_out(u, v), ident
    results.append(_run_cases(
        "FA3-", build_fa3m, 3,
        lambda f, o: (f[0] + f[1] - f[2], 2 * o[0] - o[1]), 5))

    # FA30 (skip the impossible negative case x1=x2=0, x3=1)
    def build_fa3z(b, refs):
        u, v = emit_fa3z(b, *sb(refs, (1, 1, -1)))
        return two_out(u, v), ident
    results.append(_run_cases(
        "FA30", build_fa3z, 3,
        lambda f, o: (f[0] + f[1] - f[2], 2 * o[0] + o[1]), 4,
        skip={(0, 0, 1)}))

    # SFA3: inputs arrive as (x1, x1^x2, x3); free bits are (x1, x2, x3)
    def build_sfa3(b, refs):
        u, v = emit_sfa3(b, EncodedPair(refs[0], refs[1], 1, 0),
                         SignedBit(refs[2], 1, 0))
        return two_out(u, v), lambda f: [f[0], f[0] ^ f[1], f[2]]
    results.append(_run_cases(
        "SFA3", build_sfa3, 3,
        lambda f, o: (f[0] + f[1] + f[2], 2 * o[0] + o[1]), 4))

    # SFA3-
    def build_sfa3m(b, refs):
        u, v = emit_sfa3m(b, EncodedPair(refs[0], refs[1], -1, 0),
                          SignedBit(refs[2], 1, 0))
        return two_out(u, v), lambda f: [f[0], f[0] ^ f[1], f[2]]
    results.append(_run_cases(
        "SFA3-", build_sfa3m, 3,
        lambda f, o: (f[0] - f[1] + f[2], 2 * o[0] - o[1]), 4))

    # MDFA: free bits (x1, y1, x2, y2, z); wires (x1, x1^y1, x2, x2^y2, z)
    def build_mdfa(b, refs):
        pair, v = emit_mdfa(b, EncodedPair(refs[0], refs[1], 1, 0),
                            EncodedPair(refs[2], refs[3], 1, 0),
                            SignedBit(refs[4], 1, 0))
        return [pair.x, pair.x_xor_y, v.wire], \
            lambda f: [f[0], f[0] ^ f[1], f[2], f[2] ^ f[3], f[4]]

    def mdfa_case(f, o):
        u1, p, v = o
        u2 = u1 ^ p
        return f[0] + f[1] + f[2] + f[3] + f[4], 2 * (u1 + u2) + v
    results.append(_run_cases("MDFA", build_mdfa, 5, mdfa_case, 8))

    # MDFA-
    def build_mdfam(b, refs):
        pair, v = emit_mdfa_m(b, EncodedPair(refs[0], refs[1], -1, 0),
                              EncodedPair(refs[2], refs[3], -1, 0),
                              SignedBit(refs[4], 1, 0))
        return [pair.x, pair.x_xor_y, v.wire], \
            lambda f: [f[0], f[0] ^ f[1], f[2], f[2] ^ f[3], f[4]]

    def mdfam_case(f, o):
        u1, p, v = o
        u2 = u1 ^ p
        return f[0] - f[1] + f[2] - f[3] + f[4], 2 * (u1 - u2) + v
    results.append(_run_cases("MDFA-", build_mdfam, 5, mdfam_case, 8))

    # SHARED3A: form-A maker plus a form-A reuser on swapped ledger roles.
    # Free bits (t1, p, q, t2); both blocks see the same (p, q) wires.
    def build_shared_a(b, refs):
        t1, p, q, t2 = refs
        u1, v1, sh = emit_fa3m_form_a(
            b, SignedBit(t1, 1, 0), SignedBit(p, 1, 0), SignedBit(q, -1, 0))
        u2, v2, _ = emit_fa3m_form_a(
            b, SignedBit(t2, -1, 0), SignedBit(p, -1, 0), SignedBit(q, 1, 0),
            shared=sh)
        return [u1.wire, v1.wire, u2.wire, v2.wire], ident

    def shared_case(f, o):
        t1, p, q, t2 = f
        ok1 = (t1 + p - q) == 2 * o[0] - o[1]
        ok2 = (t2 + p - q) == 2 * o[2] - o[3]
        return (ok1, ok2), (True, True)
    results.append(_run_cases("SHARED3A", build_shared_a, 4, shared_case, 8))

    # SHARED3B: form-B maker (pair slots swapped) feeding a form-A reuser,
    # plus the single-share variant where only the xor is reused (cost 9).
    def build_shared_b(b, refs):
        t1, p, q, t2 = refs
        u1, v1, sh = emit_fa3m_form_b(
            b, SignedBit(t1, -1, 0), SignedBit(q, -1, 0), SignedBit(p, 1, 0))
        u2, v2, _ = emit_fa3m_form_a(
            b, SignedBit(t2, -1, 0), SignedBit(p, -1, 0), SignedBit(q, 1, 0),
            shared=sh)
        return [u1.wire, v1.wire, u2.wire, v2.wire], ident

    def shared_b_case(f, o):
        t1, p, q, t2 = f
        ok1 = (t1 + q - p) == 2 * o[0] - o[1]
        ok2 = (t2 + p - q) == 2 * o[2] - o[3]
        return (ok1, ok2), (True, True)
    results.append(_run_cases("SHARED3B", build_shared_b, 4, shared_b_case, 8))

    def build_shared_single(b, refs):
        t1, p, q, t2 = refs
        u1, v1, sh = emit_fa3m_form_b(
            b, SignedBit(t1, -1, 0), SignedBit(q, -1, 0), SignedBit(p, 1, 0))
        u2, v2, _ = emit_fa3m_form_a(
            b, SignedBit(t2, -1, 0), SignedBit(p, -1, 0), SignedBit(q, 1, 0),
            shared=SharedPair(sh.d, None))
        return [u1.wire, v1.wire, u2.wire, v2.wire], ident
    results.append(_run_cases("SHARED-1XOR", build_shared_single, 4,
                              shared_b_case, 9))

    return results


def arm_fault_from_env() -> str | None:
    """Read the reserved fault-injection variable and arm it."""
    fault = os.environ.get("MULSYNTH_FAULT")
    set_fault(fault if fault else None)
    return fault if fault else None
