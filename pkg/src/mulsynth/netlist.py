"""Gate-level netlist core: builder, evaluator, validator, text format.

A netlist is a DAG of 2-input gates over a fixed 10-function basis.  Wires
are dense integer indices: inputs first, then one wire per gate in creation
order, so every gate's sources are created before the gate itself and the
gate list is already a topological order.  A finished ``Netlist`` is
immutable and safe to share between threads; only the ``Builder`` is
single-owner.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from typing import Iterable, Sequence


class GateKind(IntEnum):
    """The ten 2-input Boolean functions that depend on both arguments.

    Inverted inputs are folded into the ANDN/ORN kinds; there are no unary
    gates or constants.  Every kind costs exactly one gate.
    """

    AND = 0
    OR = 1
    XOR = 2
    NAND = 3
    NOR = 4
    XNOR = 5
    ANDN1 = 6   # ~a & b
    ANDN2 = 7   # a & ~b
    ORN1 = 8    # ~a | b
    ORN2 = 9    # a | ~b


_SCALAR_OPS = {
    GateKind.AND: lambda a, b: a & b,
    GateKind.OR: lambda a, b: a | b,
    GateKind.XOR: lambda a, b: a ^ b,
    GateKind.NAND: lambda a, b: 1 ^ (a & b),
    GateKind.NOR: lambda a, b: 1 ^ (a | b),
    GateKind.XNOR: lambda a, b: 1 ^ a ^ b,
    GateKind.ANDN1: lambda a, b: (1 ^ a) & b,
    GateKind.ANDN2: lambda a, b: a & (1 ^ b),
    GateKind.ORN1: lambda a, b: (1 ^ a) | b,
    GateKind.ORN2: lambda a, b: a | (1 ^ b),
}

NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class BuildError(ValueError):
    """Netlist construction error (bad name, undefined source, ...)."""


class InvariantViolation(RuntimeError):
    """A built artifact disagrees with a closed-form prediction.

    This is the exit-code-3 class of failure: the construction ran but its
    census, ledger profile or gate count deviates from the formula it is
    required to realize exactly.
    """


class NetlistFormatError(ValueError):
    """Syntax error in MULNET text, with a 1-based line number."""

    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


class NetlistSemanticError(ValueError):
    """Well-formed MULNET text that fails validation."""

    def __init__(self, violations: list[str]):
        super().__init__("; ".join(violations))
        self.violations = violations


@dataclass(frozen=True)
class Gate:
    name: str
    kind: GateKind
    a: int
    b: int


class Netlist:
    """Immutable gate DAG with named inputs and outputs."""

    __slots__ = ("inputs", "gates", "outputs", "_names", "_name_to_ref")

    def __init__(self, inputs: tuple[str, ...], gates: tuple[Gate, ...],
                 outputs: tuple[tuple[str, int], ...]):
        self.inputs = inputs
        self.gates = gates
        self.outputs = outputs
        self._names = tuple(inputs) + tuple(g.name for g in gates)
        self._name_to_ref = {n: i for i, n in enumerate(self._names)}

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @property
    def n_wires(self) -> int:
        return len(self._names)

    def count_gates(self) -> int:
        return len(self.gates)

    def wire_name(self, ref: int) -> str:
        return self._names[ref]

    def wire_ref(self, name: str) -> int:
        return self._name_to_ref[name]

    def output_refs(self) -> list[int]:
        return [ref for _, ref in self.outputs]

    def kind_histogram(self) -> dict[str, int]:
        hist: dict[str, int] = {}
        for g in self.gates:
            hist[g.kind.name] = hist.get(g.kind.name, 0) + 1
        return hist

    def evaluate(self, assignment: Sequence[int]) -> list[int]:
        """Single-pass scalar evaluation; reference semantics for all backends.

        ``assignment`` lists one bit per input, in input declaration order.
        """
        if len(assignment) != len(self.inputs):
            raise BuildError(
                f"assignment has {len(assignment)} bits, netlist has "
                f"{len(self.inputs)} inputs")
        values = [0] * self.n_wires
        for i, bit in enumerate(assignment):
            if bit not in (0, 1):
                raise BuildError(f"non-bit value {bit!r} in assignment")
            values[i] = bit
        base = len(self.inputs)
        for i, g in enumerate(self.gates):
            values[base + i] = _SCALAR_OPS[g.kind](values[g.a], values[g.b])
        return [values[ref] for _, ref in self.outputs]


class Builder:
    """Single-owner netlist builder.  Wire refs are dense ints."""

    def __init__(self) -> None:
        self._inputs: list[str] = []
        self._gates: list[Gate] = []
        self._outputs: list[int] = []
        self._names: set[str] = set()

    def _check_name(self, name: str) -> None:
        if not NAME_RE.match(name):
            raise BuildError(f"invalid name {name!r}")
        if name in self._names:
            raise BuildError(f"duplicate name {name!r}")

    def add_input(self, name: str) -> int:
        if self._gates:
            raise BuildError("inputs must be declared before gates")
        self._check_name(name)
        self._names.add(name)
        self._inputs.append(name)
        return len(self._inputs) - 1

    @property
    def n_wires(self) -> int:
        return len(self._inputs) + len(self._gates)

    @property
    def gate_count(self) -> int:
        return len(self._gates)

    def add_gate(self, kind: GateKind, a: int, b: int, name: str | None = None) -> int:
        if not isinstance(kind, GateKind):
            raise BuildError(f"unknown gate kind {kind!r}")
        limit = self.n_wires
        if not (0 <= a < limit) or not (0 <= b < limit):
            raise BuildError(f"gate source out of range: {a}, {b} (have {limit} wires)")
        if name is None:
            name = f"g{len(self._gates)}"
        self._check_name(name)
        self._names.add(name)
        self._gates.append(Gate(name, kind, a, b))
        return limit

    def rename(self, ref: int, name: str) -> None:
        """Rename a gate wire (used to give product bits their p-names)."""
        gi = ref - len(self._inputs)
        if gi < 0:
            raise BuildError("cannot rename an input wire")
        old = self._gates[gi].name
        if old == name:
            return
        self._check_name(name)
        self._names.discard(old)
        self._names.add(name)
        g = self._gates[gi]
        self._gates[gi] = Gate(name, g.kind, g.a, g.b)

    def add_output(self, ref: int, name: str | None = None) -> None:
        if not (0 <= ref < self.n_wires):
            raise BuildError(f"output ref {ref} undefined")
        if name is not None:
            if ref < len(self._inputs):
                if name != self._inputs[ref]:
                    raise BuildError("cannot rename an input wire via add_output")
            else:
                self.rename(ref, name)
        self._outputs.append(ref)

    def build(self) -> Netlist:
        names = self._inputs + [g.name for g in self._gates]
        outputs = tuple((names[ref], ref) for ref in self._outputs)
        return Netlist(tuple(self._inputs), tuple(self._gates), outputs)


@dataclass
class RawNetlist:
    """Parsed but unchecked MULNET records; validate() turns this into facts."""

    inputs: list[str]
    gates: list[tuple[str, str, str, str]]   # (name, kind token, src, src)
    outputs: list[str]


@dataclass
class ValidationReport:
    violations: list[str]
    histogram: dict[str, int]

    @property
    def ok(self) -> bool:
        return not self.violations


_KIND_TOKENS = {k.name: k for k in GateKind}


def validate(net: Netlist | RawNetlist) -> ValidationReport:
    """Structural check: defined-before-use sources, known kinds, unique
    names, defined outputs.  Returns a violation list; never raises on
    malformed data."""
    if isinstance(net, Netlist):
        raw = RawNetlist(
            inputs=list(net.inputs),
            gates=[(g.name, g.kind.name, net.wire_name(g.a), net.wire_name(g.b))
                   for g in net.gates],
            outputs=[name for name, _ in net.outputs],
        )
    else:
        raw = net

    violations: list[str] = []
    hist: dict[str, int] = {}
    base = len(raw.inputs)
    all_pos: dict[str, int] = {}
    for pos, name in enumerate(raw.inputs):
        if name in all_pos:
            violations.append(f"duplicate name {name!r}")
        else:
            all_pos[name] = pos
    for gi, (name, _, _, _) in enumerate(raw.gates):
        if name in all_pos:
            violations.append(f"duplicate name {name!r}")
        else:
            all_pos[name] = base + gi

    for gi, (name, kind_tok, sa, sb) in enumerate(raw.gates):
        if kind_tok not in _KIND_TOKENS:
            violations.append(f"unknown gate kind {kind_tok!r} in gate {name!r}")
        else:
            hist[kind_tok] = hist.get(kind_tok, 0) + 1
        for src in (sa, sb):
            if src not in all_pos:
                violations.append(f"undefined source {src!r} in gate {name!r}")
            elif all_pos[src] >= base + gi:
                violations.append(f"source out of order: {src!r} used by {name!r}")

    for out in raw.outputs:
        if out not in all_pos:
            violations.append(f"undefined output {out!r}")

    return ValidationReport(violations, hist)


FORMAT_HEADER = "MULNET v1"


def export_text(net: Netlist) -> str:
    """Serialize to MULNET v1 text.  Deterministic; ends with a newline."""
    lines = [FORMAT_HEADER]
    lines.append("inputs " + " ".join(net.inputs))
    for g in net.gates:
        lines.append(f"gate {g.name} {g.kind.name} "
                     f"{net.wire_name(g.a)} {net.wire_name(g.b)}")
    lines.append("outputs " + " ".join(name for name, _ in net.outputs))
    return "\n".join(lines) + "\n"


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    return line if pos < 0 else line[:pos]


def import_text(text: str | bytes) -> Netlist:
    """Parse MULNET v1 text.

    Raises NetlistFormatError (with line number) on syntax problems and
    NetlistSemanticError (with the validate() violation list) on semantic
    ones.
    """
    if isinstance(text, bytes):
        text = text.decode("ascii")
    if not text.endswith("\n"):
        raise NetlistFormatError(max(1, text.count("\n") + 1),
                                 "final newline required")
    lines = text.split("\n")[:-1]
    if not lines:
        raise NetlistFormatError(1, "empty file")
    if _strip_comment(lines[0]).split() != ["MULNET", "v1"]:
        raise NetlistFormatError(1, f"bad header, expected {FORMAT_HEADER!r}")

    raw = RawNetlist(inputs=[], gates=[], outputs=[])
    seen_gate = False
    for lineno, line in enumerate(lines[1:], start=2):
        tokens = _strip_comment(line).split()
        if not tokens:
            continue
        directive = tokens[0]
        if directive == "inputs":
            if seen_gate:
                raise NetlistFormatError(lineno, "inputs line after gates")
            if len(tokens) < 2:
                raise NetlistFormatError(lineno, "inputs line needs at least one name")
            for name in tokens[1:]:
                if not NAME_RE.match(name):
                    raise NetlistFormatError(lineno, f"invalid name {name!r}")
            raw.inputs.extend(tokens[1:])
        elif directive == "gate":
            if len(tokens) != 5:
                raise NetlistFormatError(
                    lineno, f"gate line takes name, kind and exactly 2 "
                            f"sources, got {len(tokens) - 3} sources")
            for tok in (tokens[1], tokens[3], tokens[4]):
                if not NAME_RE.match(tok):
                    raise NetlistFormatError(lineno, f"invalid name {tok!r}")
            seen_gate = True
            raw.gates.append((tokens[1], tokens[2], tokens[3], tokens[4]))
        elif directive == "outputs":
            if len(tokens) < 2:
                raise NetlistFormatError(lineno, "outputs line needs at least one name")
            raw.outputs.extend(tokens[1:])
        else:
            raise NetlistFormatError(lineno, f"unknown directive {directive!r}")

    report = validate(raw)
    if not report.ok:
        raise NetlistSemanticError(report.violations)

    b = Builder()
    refs: dict[str, int] = {}
    for name in raw.inputs:
        refs[name] = b.add_input(name)
    for name, kind_tok, sa, sb in raw.gates:
        refs[name] = b.add_gate(_KIND_TOKENS[kind_tok], refs[sa], refs[sb], name=name)
    for out in raw.outputs:
        b.add_output(refs[out])
    return b.build()
