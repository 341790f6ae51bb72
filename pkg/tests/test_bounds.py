# SPDX-License-Identifier: Apache-2.0

# Third Party
import pytest

# First Party
from z2seq.pcoms.bounds import (
    BoundDominanceVerifier,
    CirculantHadamardVerifier,
    PartitionSpec,
    PerfectSequenceVerifier,
    bound_B,
    bound_table,
    circulant_hadamard_bound,
    count_compositions,
    count_families,
    dominance_grid,
    enumerate_compositions,
    family_count_oracle,
    gs_bound,
    lemma3_range,
    mps,
    multinomial_partition_sum,
    one_core_bound,
    perfect_bounds,
    perfect_case_params,
    run_one_count_range,
    two_core_bound,
    two_level_scan,
)
from z2seq.pcoms.exceptions import InvalidParameterError


def test_partition_spec_feasibility():
    assert PartitionSpec(6, 3, 1).feasible
    assert not PartitionSpec(4, 3, 1).feasible
    assert PartitionSpec(3, 3, 3).feasible
    assert not PartitionSpec(4, 3, 3).feasible
    assert not PartitionSpec(-1, 0, 0).feasible


def test_multinomial_partition_sum():
    assert mps(4, 3, 2) == 3
    assert mps(6, 3, 1) == 6
    assert mps(0, 0, 0) == 1
    assert multinomial_partition_sum(PartitionSpec(7, 2, 0, min_other=3)) == 2


def test_partition_sum_matches_compositions():
    for total in range(0, 13):
        for parts in range(0, 7):
            for ones in range(0, parts + 1):
                assert mps(total, parts, ones) == count_compositions(total, parts, ones)

    for total in range(0, 10):
        compositions = list(enumerate_compositions(total))
        assert len(compositions) == max(2 ** (total - 1), 1)
        for parts in compositions:
            assert mps(total, len(parts), parts.count(1)) >= 1


def test_run_one_count_range():
    assert run_one_count_range(6, 4) == ((2, 2), (1, 1))
    with pytest.raises(InvalidParameterError):
        run_one_count_range(5, 3)
    with pytest.raises(InvalidParameterError):
        run_one_count_range(6, 3)


def test_bound_B_example():
    report = bound_B(5, 2, -2, 4, oracle=True)
    assert report.value == 18
    assert report.applicable
    assert report.oracle is not None
    assert report.dominated
    assert report.to_dict()["value"] == "18"


def test_bound_B_edge_cases():
    excluded = bound_B(5, 1, 1, 1)
    assert not excluded.applicable
    assert excluded.dominated

    # 10 - (-1) is odd, so no family has these parameters
    assert bound_B(5, 2, -1, 4).value == 0

    with pytest.raises(InvalidParameterError):
        bound_B(5, 2, 10, 4)
    with pytest.raises(InvalidParameterError):
        bound_B(5, 2, -2, 11)


def test_count_families():
    counts = count_families(5, 2)
    assert counts[(-2, 4)] == family_count_oracle(5, 2, -2, 4)
    assert counts[(-2, 4)] >= 1
    # two orbits with off-peak 3 and four with off-peak -1; constants are not counted
    assert sum(count_families(7, 1).values()) == 6
    assert count_families(3, 4)[(0, 3)] == 0
    with pytest.raises(InvalidParameterError):
        count_families(1, 1)


def test_one_core_bound():
    assert one_core_bound(7).value == 4
    assert one_core_bound(11).value == 27
    assert one_core_bound(15).value == 264
    report = one_core_bound(7, oracle=True)
    assert report.params == {"p": 7}
    assert report.oracle == 2
    assert report.dominated
    with pytest.raises(InvalidParameterError):
        one_core_bound(9)


def test_lemma3_range():
    assert lemma3_range(19) == (2, 4)
    for p in (11, 17):
        with pytest.raises(InvalidParameterError):
            lemma3_range(p)


def test_two_core_bound():
    report = two_core_bound(5)
    assert report.value == 18
    assert report.params == {"n": 5}
    with pytest.raises(InvalidParameterError):
        two_core_bound(6)


def test_gs_bound():
    report = gs_bound(3, 1, 1, 1, 3)
    assert report.value == 0
    assert report.params == {"n": 3, "a": 1, "b": 1, "c": 1, "d": 3}
    with pytest.raises(InvalidParameterError):
        gs_bound(3, 1, 1, 1, 1)


def test_circulant_hadamard_bound():
    assert not circulant_hadamard_bound(1).applicable
    report = circulant_hadamard_bound(2, oracle=True)
    assert report.method == "refined"
    assert report.oracle == 0
    assert report.value >= 0
    assert report.dominated


def test_perfect_case_params():
    assert perfect_case_params(13) == [(1, 4), (1, 9)]
    assert perfect_case_params(4) == [(0, 1), (0, 3)]
    assert perfect_case_params(2) == [(-2, 1)]
    with pytest.raises(InvalidParameterError):
        perfect_case_params(1)


def test_perfect_bounds():
    report = perfect_bounds(2, "d1")
    assert report.value == 45
    assert report.params == {"u": 2, "n": 13}
    for case in ("d2a", "d2b"):
        refined = perfect_bounds(2, case)
        assert refined.method == "refined"
        assert refined.value >= 0
    with pytest.raises(InvalidParameterError):
        perfect_bounds(2, "d3")
    with pytest.raises(InvalidParameterError):
        perfect_bounds(0, "d1")


def test_two_level_scan():
    scan = two_level_scan(4, 0)
    assert scan.orbits == ["+++-", "+---"]
    assert len(scan.classes) == 1

    m_sequences = two_level_scan(7, -1)
    assert len(m_sequences.orbits) == 4
    assert len(m_sequences.classes) == 1
    assert two_level_scan(16, 0).orbits == []


def test_bound_table():
    frame = bound_table([bound_B(5, 2, -2, 4), two_core_bound(7)])
    assert frame["value"].tolist()[0] == 18
    assert "oracle" in frame.columns
    assert len(frame) == 2


def test_bound_B_repeated_weight_one():
    # three copies of +-- are the only family here
    excluded = bound_B(3, 3, -3, 3)
    assert not excluded.applicable
    repeated = bound_B(3, 2, -2, 2)
    assert not repeated.applicable
    assert "excluded" in repeated.notes[0]


def test_bound_B_without_constants():
    report = bound_B(3, 4, 0, 3, oracle=True)
    assert report.applicable
    assert report.oracle == 0
    assert report.dominated


def test_dominance_grid():
    every = dominance_grid(max_nq=12, max_n=4)
    assert every
    assert all(r.applicable for r in every)
    assert all(r.dominated for r in every)
    assert not any(r.params == {"n": 3, "q": 2, "c": -2, "a": 2} for r in every)
    nontrivial = dominance_grid(max_nq=12, max_n=4, nontrivial_only=True)
    assert len(nontrivial) <= len(every)


def test_bound_B_reflection():
    # swapping a and nq - a reverses the split-weight sum
    for n, q, c, a in [(5, 2, -2, 4), (7, 2, -2, 6), (6, 3, -2, 8), (9, 2, -6, 5)]:
        nq = n * q
        half = (nq - c) // 4
        expected = sum(mps(a, half, h) * mps(nq - a, half, half - h) for h in range(1, half + 1))
        assert bound_B(n, q, c, nq - a).value == expected


def test_circulant_hadamard_verifier():
    report = CirculantHadamardVerifier().run()
    assert report.passed
    assert report.details["n4"]["orbits"] == ["+++-", "+---"]


def test_perfect_sequence_verifier():
    report = PerfectSequenceVerifier().run()
    assert report.passed
    assert report.details["runs"] == [1, 1, 2, 3, 1, 5]
    assert report.details["N_R1"] == 3
    assert report.findings == []


@pytest.mark.slow
def test_bound_dominance_verifier():
    report = BoundDominanceVerifier().run()
    assert report.passed
    assert report.details["partition_mismatches"] == []
    assert report.details["violations"] == []
    assert report.findings == []
