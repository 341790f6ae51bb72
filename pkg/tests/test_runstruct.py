# SPDX-License-Identifier: Apache-2.0

# Third Party
import pytest

# First Party
from z2seq.pcoms.exceptions import (
    DegenerateRunError,
    InvalidParameterError,
    MixedPeriodError,
)
from z2seq.pcoms.runstruct import (
    RunEquivalenceVerifier,
    autocorrelation_via_runs,
    autocorrelation_via_runs_v2,
    count_run_pattern,
    cyclic_run_vector,
    family_run_profile,
    orbit_run_length,
    pattern_counts,
    run_vector,
    two_level_profile,
)
from z2seq.pcoms.seqcore import all_sequences, autocorrelation_at, parse, shift

M_SEQUENCE = parse("++-+---")


def test_run_vectors():
    assert run_vector(M_SEQUENCE).lengths == (2, 1, 1, 3)
    assert run_vector(M_SEQUENCE).first == 1

    x = parse("+--++")
    assert run_vector(x).lengths == (1, 2, 2)
    cyclic = cyclic_run_vector(x)
    assert cyclic.lengths == (2, 3)
    assert cyclic.first == -1
    assert cyclic.offset == 1
    assert cyclic.to_dict() == {"lengths": [2, 3], "l": 2}


def test_constant_sequences_have_no_runs():
    for text in ("++++", "---"):
        with pytest.raises(DegenerateRunError):
            cyclic_run_vector(parse(text))
        with pytest.raises(DegenerateRunError):
            orbit_run_length(parse(text))


def test_orbit_run_length_is_rotation_invariant():
    for x in all_sequences(7):
        if x.is_constant:
            continue
        l = orbit_run_length(x)
        assert l % 2 == 0
        assert sum(cyclic_run_vector(x).lengths) == 7
        assert orbit_run_length(shift(x, 3)) == l


def test_count_run_pattern():
    assert count_run_pattern(M_SEQUENCE, [1]) == 2
    assert count_run_pattern(M_SEQUENCE, [1, 1]) == 1
    # window wraps past the end of the run vector
    assert count_run_pattern(M_SEQUENCE, [3, 2]) == 1
    assert count_run_pattern(M_SEQUENCE, [2, 1, 1, 3, 2]) == 0
    with pytest.raises(InvalidParameterError):
        count_run_pattern(M_SEQUENCE, [0, 1])
    with pytest.raises(InvalidParameterError):
        count_run_pattern(M_SEQUENCE, [])


def test_pattern_counts_below():
    assert dict(pattern_counts(M_SEQUENCE, 3)) == {(2,): 1, (1,): 2, (1, 1): 1}


def test_runs_formula_matches_direct():
    for x in all_sequences(8):
        if x.is_constant:
            continue
        for k in range(1, 9):
            direct = autocorrelation_at(x, k)
            assert autocorrelation_via_runs(x, k) == direct
            assert autocorrelation_via_runs_v2(x, k) == direct


def test_runs_formula_rejects_shift():
    with pytest.raises(InvalidParameterError):
        autocorrelation_via_runs(M_SEQUENCE, 0)
    with pytest.raises(InvalidParameterError):
        autocorrelation_via_runs_v2(M_SEQUENCE, 8)


def test_two_level_profile():
    profile = two_level_profile(7, -1)
    assert profile.run_length == 4
    assert profile.ones == 2
    assert profile.check(M_SEQUENCE).passed

    result = profile.check(parse("+++----"))
    assert not result.passed
    assert "l=2, expected 4" in result.violations
    assert not profile.check(parse("+++++++")).passed
    assert not profile.check(parse("++-")).passed

    with pytest.raises(InvalidParameterError):
        two_level_profile(7, 0)


def test_family_run_profile():
    assert family_run_profile([M_SEQUENCE], -1).passed
    pair = [parse("++-"), parse("++-")]
    assert family_run_profile(pair, -2).passed

    result = family_run_profile([M_SEQUENCE], 0)
    assert not result.passed
    assert result.to_dict()["pass"] is False

    with pytest.raises(MixedPeriodError):
        family_run_profile([M_SEQUENCE, parse("++-")], -2)
    with pytest.raises(InvalidParameterError):
        family_run_profile([], 0)


def test_run_equivalence_verifier():
    report = RunEquivalenceVerifier(max_n=7).run()
    assert report.passed
    assert report.details["max_n"] == 7
    # 2^n - 2 non-constant sequences for each period
    assert report.details["sequences"] == sum(2**n - 2 for n in range(2, 8))
    assert report.findings == []


@pytest.mark.slow
def test_run_equivalence_verifier_default_range():
    assert RunEquivalenceVerifier().run().passed
