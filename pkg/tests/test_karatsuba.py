import numpy as np
import pytest

from mulsynth import simulate
from mulsynth.blocks import BlockKind
from mulsynth.bounds import recurrence_L_table
from mulsynth.karatsuba import (Method, UnsupportedWidthError, build_auto,
                                build_karatsuba, expected_karatsuba_census,
                                expected_sharing_saved, format_trace,
                                method_policy, plan_profiles, predict_overhead)
from mulsynth.verify import random_equivalence

L = recurrence_L_table(40)


def test_policy():
    assert method_policy(16) is Method.KARATSUBA
    assert method_policy(17) is Method.STANDARD
    assert method_policy(20) is Method.KARATSUBA
    for m in list(range(1, 16)) + [17]:
        assert method_policy(m) is Method.STANDARD
    for m in range(18, 70):
        assert method_policy(m) is Method.KARATSUBA


def test_predict_overhead():
    assert predict_overhead(16) == 302
    assert predict_overhead(11) == 38 * 6 - 16 == 212
    assert predict_overhead(10) == 188
    for bad in (9, 8):
        with pytest.raises(ValueError):
            predict_overhead(bad)


def test_width_guard():
    with pytest.raises(UnsupportedWidthError):
        build_karatsuba(9, force=True)
    with pytest.raises(UnsupportedWidthError):
        build_karatsuba(12)            # policy prefers standard, no force


def test_table1_star_values():
    assert build_karatsuba(16).gate_count == 1287
    assert build_karatsuba(18).gate_count == 1598


def test_forced_m12_recurrence_example():
    # 766 = L(7) + 2 L(6) + 38*6 - 2 = 224 + 316 + 226
    kb = build_karatsuba(12, force=True)
    assert kb.gate_count == 766
    assert kb.gate_count == L.L(7) + 2 * L.L(6) + 38 * 6 - 2


@pytest.mark.parametrize("m", list(range(10, 33)))
def test_overhead_equality(m):
    kb = build_karatsuba(m, force=True)
    subs = sum(kb.census.sub_gate_counts)
    assert kb.gate_count - subs == predict_overhead(m)
    assert kb.census.overhead() == predict_overhead(m)


@pytest.mark.parametrize("m", list(range(10, 33)))
def test_recurrence_equality_with_auto_subs(m):
    kb = build_karatsuba(m, force=True)
    n = (m + 1) // 2
    if m % 2 == 0:
        expect = L.L(n + 1) + 2 * L.L(n) + 38 * n - 2
    else:
        expect = L.L(n + 1) + L.L(n) + L.L(n - 1) + 38 * n - 16
    assert kb.gate_count == expect


@pytest.mark.parametrize("m", [10, 11, 12, 13, 16, 18, 21])
def test_census_inventory(m):
    kb = build_karatsuba(m, force=True)
    exp = expected_karatsuba_census(m)
    n = (m + 1) // 2
    assert kb.census.blocks == exp.blocks
    assert kb.census.blocks[BlockKind.MDFA_M] == 2 * n
    assert kb.census.blocks[BlockKind.FA3_M] == 2 * m - 2 * n - 1
    ha_family = (kb.census.blocks[BlockKind.HA]
                 + kb.census.blocks[BlockKind.HA_PM]
                 + kb.census.blocks[BlockKind.NHA])
    assert ha_family == n - 1
    assert kb.census.nominal_xor_total() == 2 * n + 2
    assert kb.census.sharing_saved() == expected_sharing_saved(m)


@pytest.mark.parametrize("m", [10, 11, 14, 15])
def test_h_profiles_match_plan(m):
    kb = build_karatsuba(m, force=True)
    plan = plan_profiles(m)
    seen = {col: (hp, hm) for col, hp, hm in kb.census.h_profile}
    assert seen == plan


def test_plan_profile_closed_forms():
    # Spot-check the plan table against the stated profile equations.
    for m in (10, 11, 16, 21):
        n = (m + 1) // 2
        prof = plan_profiles(m)
        assert prof[n] == (2, 2)
        assert prof[n + 1] == (3, 3)
        for k in range(n + 2, 2 * m - n):
            assert prof[k] == (3, 4)
        if m % 2:
            assert prof[3 * n - 2] == (3, 3)
            assert prof[3 * n - 1] == (3, 3)
        assert prof[3 * n] == (3, 2)
        assert prof[3 * n + 1] == (3, 1)
        assert prof[3 * n + 2] == (2, 1)
        for k in range(3 * n + 3, 2 * m):
            assert prof[k] == (2, 0)


@pytest.mark.parametrize("m,seed", [(10, 3), (11, 4), (12, 5), (13, 6)])
def test_random_equivalence_small(m, seed):
    kb = build_karatsuba(m, force=True)
    verdict = random_equivalence(kb.netlist, m, trials=3000, seed=seed)
    assert verdict.ok, verdict.summary()


def test_sharing_disabled_cost_delta():
    for m, extra in ((16, 15), (10, 9), (11, 9), (13, 11)):
        on = build_karatsuba(m, force=True)
        off = build_karatsuba(m, force=True, sharing=False)
        assert off.gate_count - on.gate_count == extra
        assert extra == expected_sharing_saved(m)


def test_sharing_disabled_is_functionally_identical():
    m = 12
    on = build_karatsuba(m, force=True)
    off = build_karatsuba(m, force=True, sharing=False)
    rng = np.random.default_rng(9)
    n_words = 64
    inw = rng.integers(0, 1 << 63, size=(2 * m, n_words), dtype=np.uint64)
    out_on = simulate.eval_words(on.netlist, inw)
    out_off = simulate.eval_words(off.netlist, inw)
    assert np.array_equal(out_on, out_off)


def test_trace_format():
    kb = build_karatsuba(16)
    assert format_trace(kb.trace) == "karatsuba(16)→school(9,8,8)"
    ab = build_auto(32)
    assert ab.trace_str() == ("karatsuba(32)→(school(17), "
                              "karatsuba(16)→school(9,8,8), "
                              "karatsuba(16)→school(9,8,8))")


def test_build_auto_matches_table():
    assert build_auto(7).gate_count == 224
    assert build_auto(7).method is Method.STANDARD
    assert build_auto(16).gate_count == 1287
    assert build_auto(16).method is Method.KARATSUBA
    assert build_auto(32).gate_count == 4659


@pytest.mark.parametrize("m", list(range(1, 33)))
def test_build_auto_realizes_L(m):
    assert build_auto(m).gate_count == L.L(m)
