"""Command-line interface.

Subcommands: gen, verify, count, table, bounds, selftest.  Exit codes:
0 success, 1 verification mismatch, 2 invalid input or flags, 3 internal
invariant violation (a build disagreed with its closed-form prediction).
All output is deterministic given the flags (and seed).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import bounds as bounds_mod
from . import verify as verify_mod
from .blocks import BlockKind
from .karatsuba import (KaratsubaCensus, Method, UnsupportedWidthError,
                        build_auto, build_karatsuba, format_trace)
from .netlist import (InvariantViolation, NetlistFormatError,
                      NetlistSemanticError, export_text, import_text,
                      validate)
from .school import ScheduleCensus, build_school, predict_school_count

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_INVARIANT = 3


def _census_items(census) -> list[tuple[str, int]]:
    items: list[tuple[str, int]] = []
    if isinstance(census, ScheduleCensus):
        items.append(("AND", census.and_gates))
        for kind in BlockKind:
            if census.blocks.get(kind):
                items.append((kind.value, census.blocks[kind]))
        items.append(("XOR", census.conversion_xors))
    else:
        for kind in BlockKind:
            if census.blocks.get(kind):
                items.append((kind.value, census.blocks[kind]))
        items.append(("XOR", census.conversion_xors + census.top_xors))
        if census.sharing_saved():
            items.append(("shared_gates_saved", census.sharing_saved()))
    return items


def _bound_for(method: Method, m: int, force: bool) -> int:
    table = bounds_mod.recurrence_L_table(max(m, (m + 1) // 2 + 1))
    if method is Method.STANDARD:
        return 1 if m == 1 else predict_school_count(m)
    if force and table.method(m) != "karatsuba":
        n = (m + 1) // 2
        if m % 2 == 0:
            return table.L(n + 1) + 2 * table.L(n) + 38 * n - 2
        return table.L(n + 1) + table.L(n) + table.L(n - 1) + 38 * n - 16
    return table.L(m)


def _build(method: str, m: int, force: bool, sharing: bool = True):
    if method == "school":
        sb = build_school(m)
        return sb.netlist, sb.census, ("school", m, None), Method.STANDARD
    if method == "karatsuba":
        kb = build_karatsuba(m, force=force, sharing=sharing)
        return kb.netlist, kb.census, kb.trace, Method.KARATSUBA
    ab = build_auto(m)
    return ab.netlist, ab.census, ab.trace, ab.method


def cmd_gen(args) -> int:
    net, census, trace, method = _build(args.method, args.bits, args.force,
                                        not args.no_sharing)
    report = validate(net)
    if not report.ok:
        raise InvariantViolation("generated netlist failed validation: "
                                 + "; ".join(report.violations))
    text = export_text(net)
    with open(args.out, "w", encoding="ascii") as fh:
        fh.write(text)
    print(f"wrote {args.out}: {net.count_gates()} gates, "
          f"{net.n_inputs} inputs, {len(net.outputs)} outputs")
    print(f"method trace: {format_trace(trace)}")
    for name, count in _census_items(census):
        print(f"  {name}: {count}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        with open(args.netlist, "r", encoding="ascii") as fh:
            net = import_text(fh.read())
    except OSError as exc:
        print(f"error: cannot read {args.netlist}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    m = args.bits
    if net.n_inputs != 2 * m:
        print(f"error: netlist has {net.n_inputs} inputs, --bits {m} "
              f"needs {2 * m}", file=sys.stderr)
        return EXIT_USAGE
    exhaustive = args.exhaustive or (args.trials is None and m <= 8)
    if exhaustive and m > verify_mod.EXHAUSTIVE_LIMIT:
        print(f"error: --exhaustive refused for m={m} > "
              f"{verify_mod.EXHAUSTIVE_LIMIT}; use --trials", file=sys.stderr)
        return EXIT_USAGE
    if exhaustive:
        verdict = verify_mod.exhaustive_equivalence(net, m)
    else:
        trials = args.trials if args.trials is not None else 10000
        verdict = verify_mod.random_equivalence(net, m, trials, args.seed)
    if args.format == "json":
        print(verdict.to_json())
    else:
        extra = (f" [seed={verdict.seed} algorithm={verdict.algorithm}]"
                 if verdict.mode == "random" else "")
        print(verdict.summary() + extra)
    return EXIT_OK if verdict.ok else EXIT_MISMATCH


def cmd_count(args) -> int:
    net, census, trace, method = _build(args.method, args.bits, args.force)
    total = net.count_gates()
    bound = _bound_for(method, args.bits, args.force)
    equal = total == bound
    if args.format == "json":
        blocks = {name: cnt for name, cnt in _census_items(census)
                  if name not in ("AND", "XOR", "shared_gates_saved")}
        conv = (census.conversion_xors if hasattr(census, "conversion_xors")
                else 0)
        payload = {
            "bits": args.bits,
            "method": method.value,
            "gates": total,
            "by_kind": dict(sorted(net.kind_histogram().items())),
            "blocks": blocks,
            "conversion_xors": conv,
            "bound": bound,
            "meets_bound": equal,
        }
        print(json.dumps(payload))
    else:
        print(f"bits: {args.bits}")
        print(f"method: {method.value} ({format_trace(trace)})")
        print(f"total gates: {total}")
        print(f"predicted bound: {bound}")
        print(f"equal: {'true' if equal else 'false'}")
        hist = net.kind_histogram()
        print("per-kind histogram: "
              + " ".join(f"{k}={v}" for k, v in sorted(hist.items())))
        for name, count in _census_items(census):
            print(f"  {name}: {count}")
        if isinstance(census, KaratsubaCensus):
            n = (args.bits + 1) // 2
            base = 38 * n - 2 if args.bits % 2 == 0 else 38 * n - 16
            print(f"recurrence overhead: {census.overhead()} "
                  f"(formula {base}), sub-multiplier gates: "
                  f"{census.sub_gate_counts}")
    if not equal:
        print(f"error: built count {total} != predicted {bound}",
              file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_table(args) -> int:
    table = bounds_mod.recurrence_L_table(args.max)
    if args.format == "json":
        rows = [{"m": m, "L": val, "method": meth}
                for m, val, meth in table.rows()]
        print(json.dumps(rows))
    else:
        print("m,L,method")
        for m, val, meth in table.rows():
            print(f"{m},{val},{meth}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    kmax = args.kmax
    if kmax < 4:
        print("error: --kmax must be >= 4", file=sys.stderr)
        return EXIT_USAGE
    table = bounds_mod.recurrence_L_table((1 << kmax) + 2) if args.with_table \
        else None
    rows = []
    x = bounds_mod.X4
    all_equal = True
    for k in range(4, kmax + 1):
        closed = bounds_mod.closed_form_K(k)
        matrix = x[2]
        legacy = bounds_mod.legacy_karatsuba_closed(k)
        tab = table.L(1 << k) if table else None
        equal = closed == matrix
        all_equal = all_equal and equal
        rows.append((k, closed, matrix, tab, legacy, equal))
        x = bounds_mod.matrix_step(x, k)
    if args.format == "json":
        print(json.dumps([
            {"k": k, "closed_form": c, "matrix": mx, "table": t,
             "legacy": lg, "equal": eq}
            for k, c, mx, t, lg, eq in rows]))
    else:
        header = "k,closed_form,matrix,table,legacy,equal"
        print(header)
        for k, c, mx, t, lg, eq in rows:
            tcell = "" if t is None else str(t)
            print(f"{k},{c},{mx},{tcell},{lg},{'true' if eq else 'false'}")
    if not all_equal:
        print("error: closed form disagrees with matrix propagation",
              file=sys.stderr)
        return EXIT_INVARIANT
    return EXIT_OK


def cmd_selftest(args) -> int:
    report = verify_mod.selftest()
    if args.format == "json":
        print(report.to_json())
    else:
        for name, ok, detail in report.suites:
            line = f"{'PASS' if ok else 'FAIL'} {name}"
            if detail:
                line += f": {detail}"
            print(line)
        print(f"selftest: {'pass' if report.ok else 'fail'} "
              f"({len(report.suites)} suites)")
    return EXIT_OK if report.ok else EXIT_MISMATCH


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mulsynth",
        description="Gate-level synthesizer for standard and Karatsuba "
                    "integer multipliers with exact gate-count accounting.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_method(sp):
        sp.add_argument("--method", choices=["auto", "school", "karatsuba"],
                        default="auto")
        sp.add_argument("--bits", type=int, required=True, metavar="M")
        sp.add_argument("--force", action="store_true",
                        help="build Karatsuba at the top level even where "
                             "the policy prefers the standard method")

    g = sub.add_parser("gen", help="generate a multiplier netlist file")
    add_method(g)
    g.add_argument("--out", required=True)
    g.add_argument("--no-sharing", action="store_true",
                   help="disable cross-column gate sharing (karatsuba)")
    g.set_defaults(fn=cmd_gen)

    v = sub.add_parser("verify", help="check a netlist against the oracle")
    v.add_argument("netlist")
    v.add_argument("--bits", type=int, required=True, metavar="M")
    v.add_argument("--exhaustive", action="store_true")
    v.add_argument("--trials", type=int, default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--format", choices=["text", "json"], default="text")
    v.set_defaults(fn=cmd_verify)

    c = sub.add_parser("count", help="build and report exact gate counts")
    add_method(c)
    c.add_argument("--format", choices=["text", "json"], default="text")
    c.set_defaults(fn=cmd_count)

    t = sub.add_parser("table", help="emit the best-count table")
    t.add_argument("--max", type=int, default=18)
    t.add_argument("--format", choices=["csv", "json"], default="csv")
    t.set_defaults(fn=cmd_table)

    bnd = sub.add_parser("bounds", help="closed form vs matrix recursion")
    bnd.add_argument("--kmax", type=int, default=8)
    bnd.add_argument("--with-table", action="store_true",
                     help="include the recurrence-table column (slow for "
                          "large --kmax)")
    bnd.add_argument("--format", choices=["text", "json"], default="text")
    bnd.set_defaults(fn=cmd_bounds)

    s = sub.add_parser("selftest", help="run the built-in suites")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(fn=cmd_selftest)

    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except NetlistFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NetlistSemanticError as exc:
        print(f"error: invalid netlist: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UnsupportedWidthError, verify_mod.WidthGuardError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
