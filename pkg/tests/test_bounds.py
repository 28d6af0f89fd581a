import pytest

from mulsynth.bounds import (X4, closed_form_K, fib, legacy_karatsuba_closed,
                             legacy_school_bound, matrix_step, propagate_X,
                             recurrence_L_table)
from mulsynth.school import predict_school_count

TABLE1 = [1, 8, 30, 61, 105, 158, 224, 299, 387, 484, 594, 713, 845, 986,
          1140, 1287, 1479, 1598]
STARRED = {16, 18}


def test_fib_base_and_values():
    assert fib(1) == 1 and fib(2) == 1
    assert fib(7) == 13
    # independent oracle: iterate the recurrence from scratch
    seq = [1, 1]
    while len(seq) < 40:
        seq.append(seq[-1] + seq[-2])
    assert fib(40) == seq[39] == 102334155
    with pytest.raises(ValueError):
        fib(0)


def test_closed_form_k4_is_table_value():
    assert closed_form_K(4) == 1287


def test_closed_form_k5_vs_recurrence_arithmetic():
    # K(32) = K(17) + 2 K(16) + 38*16 - 2 from the published values
    assert closed_form_K(5) == 1479 + 2 * 1287 + 38 * 16 - 2 == 4659


def test_closed_form_domain_and_integrality():
    with pytest.raises(ValueError):
        closed_form_K(3)
    for k in range(4, 21):
        closed_form_K(k)           # would raise if the fractions failed to cancel


def test_matrix_step_example():
    assert matrix_step(X4, 4) == (5200, 4994, 4659)
    # row arithmetic done by hand from the table values:
    assert 1598 + 2 * 1479 + 38 * 16 + 36 == 5200
    assert 1598 + 1479 + 1287 + 38 * 16 + 22 == 4994


def test_matrix_step_linearity_sanity():
    zero = (0, 0, 0)
    stepped = matrix_step(zero, 5)
    b5 = (38 * 32 + 36, 38 * 32 + 22, 38 * 32 - 2)
    assert stepped == b5


def test_closed_form_equals_matrix_propagation():
    for k in range(4, 21):
        assert closed_form_K(k) == propagate_X(k)[2]


def test_table_matches_published_values():
    table = recurrence_L_table(18)
    assert [table.L(m) for m in range(1, 19)] == TABLE1
    for m in range(1, 19):
        expect = "karatsuba" if m in STARRED else "school"
        assert table.method(m) == expect


def test_karatsuba_loses_at_17():
    t = recurrence_L_table(17)
    kar17 = t.L(10) + t.L(9) + t.L(8) + 38 * 9 - 16
    assert kar17 == 1496
    assert kar17 > 1479
    assert t.method(17) == "school"


def test_L20():
    t = recurrence_L_table(20)
    kar20 = t.L(11) + 2 * t.L(10) + 38 * 10 - 2
    assert kar20 == 594 + 2 * 484 + 378 == 1940
    assert t.L(20) == 1940
    assert t.method(20) == "karatsuba"


def test_monotonicity():
    t = recurrence_L_table(200)
    for m in range(1, 200):
        assert t.L(m + 1) > t.L(m)


def test_matrix_components_appear_in_table():
    # X_k = (L(2^k+2), L(2^k+1), L(2^k)) wherever the table's winner is
    # the Karatsuba branch.  One DP covers every k at once.
    kmax = 12
    t = recurrence_L_table((1 << kmax) + 2)
    for k in range(4, kmax + 1):
        xk = propagate_X(k)
        base = 1 << k
        for off, comp in ((2, 0), (1, 1), (0, 2)):
            if t.method(base + off) == "karatsuba":
                assert t.L(base + off) == xk[comp], (k, off)


def test_legacy_bounds():
    assert legacy_school_bound(10) == 520
    assert legacy_school_bound(4) == 64
    assert legacy_karatsuba_closed(4) == (236 * 81) // 9 - 49 * 16 + 4 == 1344


def test_improvement_over_legacy():
    # 6n^2-8n - M(n) = (n^2-3n+2)/2 - (n mod 2), positive from n=4 on
    for n in range(4, 65):
        gain = legacy_school_bound(n) - predict_school_count(n)
        assert gain == (n * n - 3 * n + 2) // 2 - (n % 2)
        assert gain > 0


def test_table_domain():
    with pytest.raises(ValueError):
        recurrence_L_table(0)
    assert recurrence_L_table(1).L(1) == 1
