import pytest

from mulsynth.blocks import BlockKind
from mulsynth.school import (build_school, expected_census,
                             predict_school_count, school_core)
from mulsynth.netlist import Builder
from mulsynth.verify import exhaustive_equivalence, oracle_multiply

# Published best counts for the standard method at small widths.
TABLE1_SCHOOL = {1: 1, 2: 8, 3: 30, 4: 61, 5: 105, 6: 158, 7: 224, 8: 299,
                 9: 387, 10: 484, 11: 594, 12: 713, 13: 845, 14: 986,
                 15: 1140, 17: 1479}


def test_formula_examples():
    assert predict_school_count(2) == 8
    assert predict_school_count(10) == 484
    assert predict_school_count(17) == 1479


def test_formula_matches_table1():
    for n, count in TABLE1_SCHOOL.items():
        if n >= 2:
            assert predict_school_count(n) == count


def test_formula_domain():
    with pytest.raises(ValueError):
        predict_school_count(1)


@pytest.mark.parametrize("n", list(range(2, 25)))
def test_build_count_equals_formula(n):
    assert build_school(n).gate_count == predict_school_count(n)


def test_n1_single_and_gate():
    sb = build_school(1)
    assert sb.gate_count == 1
    net = sb.netlist
    assert len(net.outputs) == 1
    assert net.outputs[0][0] == "p0"
    assert net.evaluate([1, 1]) == [1]
    assert net.evaluate([1, 0]) == [0]


def test_expected_census_examples():
    c4 = expected_census(4)
    assert c4.blocks[BlockKind.HA] == 4
    assert c4.blocks[BlockKind.FA3] == 1
    assert c4.blocks[BlockKind.SFA3] == 1
    assert c4.blocks[BlockKind.MDFA] == 3
    assert c4.conversion_xors == 4
    c5 = expected_census(5)
    assert (c5.blocks[BlockKind.HA], c5.blocks[BlockKind.FA3],
            c5.blocks[BlockKind.MDFA], c5.conversion_xors) == (5, 4, 5, 6)
    # n=6 census must sum to 158 total gates
    c6 = expected_census(6)
    assert c6.blocks[BlockKind.MDFA] == 10
    assert c6.conversion_xors == 11
    assert c6.gate_total() == 158


def test_expected_census_domain():
    with pytest.raises(ValueError):
        expected_census(3)


@pytest.mark.parametrize("n", list(range(4, 25)))
def test_build_census_matches_closed_form(n):
    sb = build_school(n)
    assert sb.census.same_inventory(expected_census(n))
    assert sb.census.gate_total() == sb.gate_count


@pytest.mark.parametrize("n", [4, 6, 9, 12])
def test_h_profile_closed_form(n):
    # Independent recomputation of the pending-bit profile.
    prof = dict(build_school(n).census.h_profile)
    assert prof[1] == 1
    for k in range(2, n + 1):
        assert prof[k] == 2 * k - 2
    assert prof[n + 1] == 2 * n - 2
    for j in range(0, n - 1):
        assert prof[2 * n - j] == 2 * j + 1


def test_columns_n_and_n1_use_same_blocks():
    # h(n+1) = h(n) = 2n-2 means the greedy re-derives the same block set.
    for n in (4, 5, 6, 9):
        sb = build_school(n)
        prof = dict(sb.census.h_profile)
        assert prof[n] == prof[n + 1] == 2 * n - 2


def test_bit_reduction_accounting():
    # MDFA removes 2 pending bits net, FA3/SFA3 remove 1, HA removes 0:
    # n^2 initial bits must shrink to exactly 2n product bits.
    for n in (4, 5, 8, 11):
        c = build_school(n).census
        removed = 2 * c.blocks[BlockKind.MDFA] + c.blocks[BlockKind.FA3] \
            + c.blocks[BlockKind.SFA3]
        assert n * n - removed == 2 * n


@pytest.mark.parametrize("n", list(range(1, 7)))
def test_exhaustive_equivalence_small(n):
    verdict = exhaustive_equivalence(build_school(n).netlist, n)
    assert verdict.ok, verdict.summary()


def test_evaluate_example_13_x_11():
    net = build_school(4).netlist
    bits = [(13 >> i) & 1 for i in range(4)] + [(11 >> i) & 1 for i in range(4)]
    out = net.evaluate(bits)
    assert sum(v << i for i, v in enumerate(out)) == oracle_multiply(13, 11)


def test_school_core_composes():
    # Embedding the generator inside a larger builder must not disturb it.
    b = Builder()
    a = [b.add_input(f"x{i}") for i in range(5)]
    c = [b.add_input(f"y{i}") for i in range(5)]
    before = b.gate_count
    prod, census = school_core(b, a, c)
    assert b.gate_count - before == predict_school_count(5)
    assert len(prod) == 10
    for ref in prod:
        b.add_output(ref)
    net = b.build()
    bits = [(19 >> i) & 1 for i in range(5)] + [(27 >> i) & 1 for i in range(5)]
    out = net.evaluate(bits)
    assert sum(v << i for i, v in enumerate(out)) == 19 * 27
