"""Exact-integer complexity bookkeeping.

Everything here is big-int / exact-rational arithmetic: the per-width
best-count table, the halving recurrences, the Fibonacci closed form for
power-of-two widths, the 3x3 matrix recursion that propagates it, and the
older reference bounds used for comparison.  No floats anywhere; the
closed form's fractions must cancel exactly and that is asserted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .school import predict_school_count


def fib(k: int) -> int:
    if k < 1:
        raise ValueError("fib needs k >= 1")
    a, b = 1, 1
    for _ in range(k - 1):
        a, b = b, a + b
    return a


def closed_form_K(k: int) -> int:
    """Karatsuba cost at width 2^k:
    (10208/405)*3^k - 38*2^k - (81/5)*fib(k+2) - (37/5)*fib(k+1) + 20."""
    if k < 4:
        raise ValueError("closed form defined for k >= 4")
    val = (Fraction(10208, 405) * 3 ** k
           - 38 * 2 ** k
           - Fraction(81, 5) * fib(k + 2)
           - Fraction(37, 5) * fib(k + 1)
           + 20)
    if val.denominator != 1:
        raise AssertionError(f"closed form not integral at k={k}: {val}")
    return int(val)


MATRIX_A = ((1, 2, 0), (1, 1, 1), (0, 1, 2))

# X_4 = (K(18), K(17), K(16)) from the bounds table.
X4 = (1598, 1479, 1287)


def matrix_b(k: int) -> tuple[int, int, int]:
    return (38 * 2 ** k + 36, 38 * 2 ** k + 22, 38 * 2 ** k - 2)


def matrix_step(x: tuple[int, int, int], k: int) -> tuple[int, int, int]:
    """X_{k+1} = A*X_k + b_k, exact; valid from k = 4."""
    if k < 4:
        raise ValueError("matrix recursion starts at k = 4")
    bk = matrix_b(k)
    return tuple(sum(MATRIX_A[r][c] * x[c] for c in range(3)) + bk[r]
                 for r in range(3))


def propagate_X(k: int) -> tuple[int, int, int]:
    """X_k = (K(2^k+2), K(2^k+1), K(2^k)) propagated from X_4."""
    if k < 4:
        raise ValueError("X_k defined for k >= 4")
    x = X4
    for j in range(4, k):
        x = matrix_step(x, j)
    return x


@dataclass
class BoundsTable:
    """L(m) for 1 <= m <= max_m with the winning method per width."""

    values: list        # values[m] = L(m); index 0 unused
    methods: list       # "school" | "karatsuba"

    def L(self, m: int) -> int:
        return self.values[m]

    def method(self, m: int) -> str:
        return self.methods[m]

    @property
    def max_m(self) -> int:
        return len(self.values) - 1

    def rows(self):
        for m in range(1, len(self.values)):
            yield m, self.values[m], self.methods[m]


def karatsuba_recurrence(table: list, m: int) -> int | None:
    """One halving step over already-known smaller values; None below m=10."""
    if m < 10:
        return None
    if m % 2 == 0:
        n = m // 2
        return table[n + 1] + 2 * table[n] + 38 * n - 2
    n = (m + 1) // 2
    return table[n + 1] + table[n] + table[n - 1] + 38 * n - 16


def recurrence_L_table(max_m: int) -> BoundsTable:
    if max_m < 1:
        raise ValueError("max_m must be >= 1")
    values = [0] * (max_m + 1)
    methods = [""] * (max_m + 1)
    values[1] = 1
    methods[1] = "school"
    for m in range(2, max_m + 1):
        school = predict_school_count(m)
        kar = karatsuba_recurrence(values, m)
        if kar is not None and kar < school:
            values[m] = kar
            methods[m] = "karatsuba"
        else:
            values[m] = school
            methods[m] = "school"
    return BoundsTable(values, methods)


def legacy_school_bound(n: int) -> int:
    """Older reference count for the standard method: 6n^2 - 8n."""
    if n < 2:
        raise ValueError("legacy school bound needs n >= 2")
    return 6 * n * n - 8 * n


def legacy_karatsuba_closed(k: int) -> int:
    """Older Karatsuba closed form (236/9)*3^k - 49*2^k + 4."""
    if k < 0:
        raise ValueError("k must be >= 0")
    val = Fraction(236, 9) * 3 ** k - 49 * 2 ** k + 4
    if val.denominator != 1:
        raise AssertionError(f"legacy closed form not integral at k={k}")
    return int(val)
