"""Standard (school) multiplier generator.

n*n partial products, then column-by-column compression with the greedy
rule: 5 or more pending bits -> MDFA, else 3 -> FA3, else 2 -> HA.  Pairs
for the MDFA inputs are kept in the (x, x^y) encoding; existing carry
pairs are consumed before fresh ones are formed from the two oldest plain
bits (one XOR each).  The ledger profile h(k) and the block census are
checked against their closed forms at build time; any deviation raises
InvariantViolation.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .blocks import (BlockKind, EncodedPair, SignedBit, emit_fa3, emit_ha,
                     emit_mdfa, emit_sfa3, make_pair)
from .netlist import Builder, GateKind, InvariantViolation, Netlist


def predict_school_count(n: int) -> int:
    """Exact gate count of the standard method: (11n^2 - 13n)/2 - 1 + (n mod 2)."""
    if n < 2:
        raise ValueError("predict_school_count needs n >= 2")
    num = 11 * n * n - 13 * n
    assert num % 2 == 0
    return num // 2 - 1 + (n % 2)


@dataclass
class ScheduleCensus:
    """Exact inventory of one school build."""

    and_gates: int = 0
    blocks: Counter = field(default_factory=Counter)
    conversion_xors: int = 0
    h_profile: list = field(default_factory=list)   # (column k, h(k)) pairs

    @property
    def q(self) -> int:
        return self.blocks[BlockKind.MDFA]

    def gate_total(self) -> int:
        from .blocks import CATALOG_COST
        return (self.and_gates + self.conversion_xors
                + sum(CATALOG_COST[k] * c for k, c in self.blocks.items()))

    def same_inventory(self, other: "ScheduleCensus") -> bool:
        return (self.and_gates == other.and_gates
                and self.conversion_xors == other.conversion_xors
                and self.blocks == other.blocks)


def expected_census(n: int) -> ScheduleCensus:
    """Closed-form census for n >= 4: n HA, n-3+2(n mod 2) FA3, one SFA3,
    q = (n^2-3n)/2 + 1 - (n mod 2) MDFA and q+1 conversion XORs."""
    if n < 4:
        raise ValueError("expected_census needs n >= 4")
    q = (n * n - 3 * n) // 2 + 1 - (n % 2)
    c = ScheduleCensus(and_gates=n * n, conversion_xors=q + 1)
    c.blocks[BlockKind.HA] = n
    c.blocks[BlockKind.FA3] = n - 3 + 2 * (n % 2)
    c.blocks[BlockKind.SFA3] = 1
    c.blocks[BlockKind.MDFA] = q
    return c


def _expected_h(n: int, k: int) -> int:
    # Profile of pending bits when column k (1-based) is reached, n >= 4.
    if k == 1:
        return 1
    if k <= n:
        return 2 * k - 2
    if k == n + 1:
        return 2 * n - 2
    return 2 * (2 * n - k) + 1   # k in n+2 .. 2n


class _Column:
    __slots__ = ("plains", "pairs")

    def __init__(self):
        self.plains: deque[SignedBit] = deque()
        self.pairs: deque[EncodedPair] = deque()

    @property
    def h(self) -> int:
        return len(self.plains) + 2 * len(self.pairs)


def school_core(b: Builder, a: list[int], c: list[int],
                census: ScheduleCensus | None = None) -> tuple[list[int], ScheduleCensus]:
    """Emit an n x n multiplier over existing wires; returns product wires.

    The product has 2n bits except for n=1 where a single AND suffices.
    """
    n = len(a)
    if len(c) != n or n < 1:
        raise ValueError("operands must have equal length >= 1")
    if census is None:
        census = ScheduleCensus()

    if n == 1:
        census.and_gates += 1
        return [b.add_gate(GateKind.AND, a[0], c[0])], census

    cols = [_Column() for _ in range(2 * n)]
    for w in range(2 * n - 1):
        for i in range(max(0, w - n + 1), min(n - 1, w) + 1):
            ref = b.add_gate(GateKind.AND, a[i], c[w - i])
            census.and_gates += 1
            cols[w].plains.append(SignedBit(ref, 1, w))

    product: list[int] = []
    check = n >= 4
    for w in range(2 * n):
        col = cols[w]
        k = w + 1
        census.h_profile.append((k, col.h))
        if check and col.h != _expected_h(n, k):
            raise InvariantViolation(
                f"school n={n}: column {k} has h={col.h}, "
                f"expected {_expected_h(n, k)}")
        while col.h > 1:
            if col.h >= 5:
                while len(col.pairs) < 2:
                    x = col.plains.popleft()
                    y = col.plains.popleft()
                    col.pairs.append(make_pair(b, x, y))
                    census.conversion_xors += 1
                p1 = col.pairs.popleft()
                p2 = col.pairs.popleft()
                z = col.plains.popleft()
                carry_pair, v = emit_mdfa(b, p1, p2, z)
                census.blocks[BlockKind.MDFA] += 1
                cols[w + 1].pairs.append(carry_pair)
                col.plains.append(v)
            elif col.h >= 3:
                if col.pairs:
                    if len(col.pairs) != 1 or len(col.plains) != 1:
                        raise InvariantViolation(
                            f"school n={n}: column {k} holds an encoded pair "
                            f"in an unexpected mix (h={col.h})")
                    pair = col.pairs.popleft()
                    z = col.plains.popleft()
                    u, v = emit_sfa3(b, pair, z)
                    census.blocks[BlockKind.SFA3] += 1
                else:
                    x1 = col.plains.popleft()
                    x2 = col.plains.popleft()
                    x3 = col.plains.popleft()
                    u, v = emit_fa3(b, x1, x2, x3)
                    census.blocks[BlockKind.FA3] += 1
                cols[w + 1].plains.append(u)
                col.plains.append(v)
            else:
                if col.pairs:
                    raise InvariantViolation(
                        f"school n={n}: column {k} ends with a lone encoded pair")
                x1 = col.plains.popleft()
                x2 = col.plains.popleft()
                u, v = emit_ha(b, x1, x2)
                census.blocks[BlockKind.HA] += 1
                cols[w + 1].plains.append(u)
                col.plains.append(v)
        if col.pairs or len(col.plains) != 1:
            raise InvariantViolation(
                f"school n={n}: column {k} did not reduce to one plain bit")
        product.append(col.plains.popleft().wire)

    if check:
        exp = expected_census(n)
        if not census.same_inventory(exp):
            raise InvariantViolation(
                f"school n={n}: census {dict(census.blocks)} "
                f"xors={census.conversion_xors} deviates from "
                f"{dict(exp.blocks)} xors={exp.conversion_xors}")
    return product, census


@dataclass
class SchoolBuild:
    netlist: Netlist
    census: ScheduleCensus

    @property
    def gate_count(self) -> int:
        return self.netlist.count_gates()


def build_school(n: int) -> SchoolBuild:
    """Build the full n-bit school multiplier netlist with p0..p{2n-1} outputs
    (n=1 yields the single output p0; there is no constant-zero high bit)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    b = Builder()
    a = [b.add_input(f"a{i}") for i in range(n)]
    c = [b.add_input(f"b{i}") for i in range(n)]
    product, census = school_core(b, a, c)
    for j, ref in enumerate(product):
        b.add_output(ref, name=f"p{j}")
    net = b.build()
    if n >= 2 and net.count_gates() != predict_school_count(n):
        raise InvariantViolation(
            f"school n={n}: built {net.count_gates()} gates, formula says "
            f"{predict_school_count(n)}")
    return SchoolBuild(net, census)
