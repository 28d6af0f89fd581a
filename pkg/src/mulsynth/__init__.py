"""Gate-count-exact synthesis of standard and Karatsuba multipliers."""

from .blocks import (BlockKind, CATALOG_COST, EncodedPair, SignedBit,
                     check_block_identities, emit_block)
from .bounds import (closed_form_K, fib, legacy_karatsuba_closed,
                     legacy_school_bound, matrix_step, propagate_X,
                     recurrence_L_table)
from .karatsuba import (Method, UnsupportedWidthError, build_auto,
                        build_karatsuba, format_trace, method_policy,
                        predict_overhead)
from .netlist import (Builder, GateKind, InvariantViolation, Netlist,
                      export_text, import_text, validate)
from .school import (build_school, expected_census, predict_school_count)
from .verify import (Verdict, WidthGuardError, exhaustive_equivalence,
                     oracle_multiply, random_equivalence, selftest)

__version__ = "0.1.0"
