# SPDX-License-Identifier: Apache-2.0

# Standard
import json

# Third Party
import numpy as np
import pytest

# First Party
from z2seq.pcoms.exceptions import (
    InvalidParameterError,
    MatrixFormatError,
    MixedPeriodError,
    NotCompatibleError,
)
from z2seq.pcoms.families import family_from_strings
from z2seq.pcoms.hadamard import (
    ConstructiveClosureVerifier,
    PMMatrix,
    PartialHadamardVerifier,
    amicable_check,
    back_circulant_R,
    circulant_from,
    gram_check,
    gs_embed,
    is_skew,
    is_skew_sequence,
    load_partial_hadamard,
    one_core_embed,
    order_law_holds,
    ph_from_pcoms,
    ph_paired,
    read_matrix,
    skew_gs_embed,
    two_core_check,
    two_core_embed,
    write_matrix,
)
from z2seq.pcoms.seqcore import parse

GS_SEQUENCES = ("++-", "+--", "+--", "+++")


def test_pm_matrix_validation():
    with pytest.raises(InvalidParameterError):
        PMMatrix(np.array([[1, 0]]))
    with pytest.raises(InvalidParameterError):
        PMMatrix(np.array([1, -1]))
    with pytest.raises(InvalidParameterError):
        PMMatrix.from_lines(["+-", "+"])
    with pytest.raises(InvalidParameterError):
        PMMatrix.from_lines([])

    m = PMMatrix.from_lines(["+-", "++"])
    assert (m.rows, m.cols) == (2, 2)
    assert m.to_lines() == ["+-", "++"]
    assert m.to_text() == "+-\n++\n"
    assert m.to_dict() == {"rows": 2, "cols": 2, "data": ["+-", "++"]}
    assert m == PMMatrix(np.array([[1, -1], [1, 1]]))


def test_circulant_rows_are_shifts():
    assert circulant_from(parse("++-")).to_lines() == ["++-", "-++", "+-+"]
    assert np.array_equal(back_circulant_R(3), np.array([[0, 0, 1], [0, 1, 0], [1, 0, 0]]))


def test_gram_check():
    report = gram_check(PMMatrix.from_lines(["++", "+-"]))
    assert report.passed
    assert report.scale == 2
    assert report.is_scaled_identity

    bad = gram_check(PMMatrix.from_lines(["++", "++"]))
    assert not bad.passed
    assert bad.first_failure == (0, 1, 2)
    assert bad.scale is None
    assert bad.to_dict()["first_failure"] == [0, 1, 2]

    # a scaled identity with the wrong scale
    wrong = gram_check(PMMatrix.from_lines(["++", "+-"]), expected_scale=4)
    assert not wrong.passed
    assert wrong.scale == 2


def test_order_law():
    assert order_law_holds(PMMatrix.from_lines(["++", "+-"]))
    matrix, _ = one_core_embed(parse("++-+---"))
    assert order_law_holds(matrix)


@pytest.mark.parametrize(
    "text,polarity",
    [("++-+---", 1), ("--+-+++", -1), ("++-", -1), ("+--", 1)],
)
def test_one_core_embed(text, polarity):
    matrix, applied = one_core_embed(parse(text))
    assert applied == polarity
    assert matrix.rows == matrix.cols == len(text) + 1
    report = gram_check(matrix)
    assert report.passed
    assert report.scale == len(text) + 1


def test_one_core_embed_without_hadamard_core():
    # +---- borders to a non-Hadamard matrix under either polarity
    matrix, applied = one_core_embed(parse("+----"))
    assert applied == 1
    assert not gram_check(matrix).passed
    core = circulant_from(parse("+----")).data
    for sign in (1, -1):
        top = np.ones((1, 6), dtype=np.int64)
        body = np.hstack([np.ones((5, 1), dtype=np.int64), sign * core])
        assert not gram_check(PMMatrix(np.vstack([top, body]))).passed


def test_two_core():
    a, b = parse("++---"), parse("+--+-")
    assert two_core_check(a, b)
    assert not two_core_check(a, a)
    matrix = two_core_embed(a, b)
    assert (matrix.rows, matrix.cols) == (12, 12)
    assert gram_check(matrix).passed

    # heavy members are negated to row sum -1
    assert gram_check(two_core_embed(parse("--+++"), b)).passed

    with pytest.raises(NotCompatibleError):
        two_core_embed(a, a)
    with pytest.raises(InvalidParameterError):
        two_core_check(parse("++--"), parse("+---"))
    with pytest.raises(MixedPeriodError):
        two_core_check(a, parse("++-"))


def test_gs_embed():
    members = [parse(t) for t in GS_SEQUENCES]
    matrix = gs_embed(*members)
    assert (matrix.rows, matrix.cols) == (12, 12)
    assert gram_check(matrix).passed

    with pytest.raises(NotCompatibleError):
        gs_embed(*[parse("++-")] * 4)
    with pytest.raises(InvalidParameterError):
        gs_embed(*[parse("+---")] * 4)


def test_skew_gs_embed():
    members = [parse(t) for t in GS_SEQUENCES]
    assert is_skew_sequence(members[0])
    assert not is_skew_sequence(members[1])
    matrix = skew_gs_embed(*members)
    assert is_skew(matrix)
    assert gram_check(matrix).passed
    with pytest.raises(InvalidParameterError):
        skew_gs_embed(members[1], members[0], members[2], members[3])


def test_is_skew_and_amicable():
    m = PMMatrix.from_lines(["++", "-+"])
    assert is_skew(m)
    assert not is_skew(PMMatrix.from_lines(["++", "+-"]))
    assert not is_skew(PMMatrix.from_lines(["++-"]))
    assert amicable_check(m, m)
    assert not amicable_check(m, PMMatrix.from_lines(["++-"]))


def test_ph_from_pcoms():
    family = family_from_strings(["++---", "+--+-"])
    matrix = ph_from_pcoms(family)
    assert (matrix.rows, matrix.cols) == (5, 12)
    # the two leading columns are all '+'
    assert np.all(matrix.data[:, :2] == 1)
    assert gram_check(matrix).scale == 12

    with pytest.raises(InvalidParameterError):
        ph_from_pcoms(family_from_strings(["+----"]))


def test_ph_paired():
    first = family_from_strings(["++-----", "+-+----", "+---+--"])
    second = family_from_strings(["+++----", "++--+--", "+-+-+--"])
    matrix = ph_paired(first, second)
    assert (matrix.rows, matrix.cols) == (14, 44)
    assert gram_check(matrix).passed

    with pytest.raises(InvalidParameterError):
        ph_paired(first, family_from_strings(["++-+---"]))
    with pytest.raises(InvalidParameterError):
        ph_paired(first, first)


def test_partial_hadamard_cases():
    cases = load_partial_hadamard()
    assert [case.cols for case in cases] == [12, 20, 8, 24, 16, 24, 32, 20, 40, 64, 84, 44, 128]
    for case in cases:
        matrix = case.build()
        assert (matrix.rows, matrix.cols) == (case.rows, case.cols)
        assert gram_check(matrix, case.cols).passed, case.name


def test_matrix_files_round_trip(tmp_path):
    matrix = two_core_embed(parse("++---"), parse("+--+-"))
    for name in ("m.txt", "m.json"):
        path = tmp_path / name
        write_matrix(matrix, path)
        assert read_matrix(path) == matrix


def test_read_matrix_errors(tmp_path):
    with pytest.raises(MatrixFormatError):
        read_matrix(tmp_path / "missing.txt")

    bad_symbol = tmp_path / "bad.txt"
    bad_symbol.write_text("+-\n+x\n", encoding="utf-8")
    with pytest.raises(MatrixFormatError):
        read_matrix(bad_symbol)

    declared = tmp_path / "declared.json"
    declared.write_text(json.dumps({"rows": 3, "cols": 2, "data": ["++", "+-"]}), encoding="utf-8")
    with pytest.raises(MatrixFormatError) as exc:
        read_matrix(declared)
    assert "declared 3x2, found 2x2" in exc.value.message

    no_data = tmp_path / "nodata.json"
    no_data.write_text(json.dumps({"rows": 2}), encoding="utf-8")
    with pytest.raises(MatrixFormatError):
        read_matrix(no_data)


def test_partial_hadamard_verifier():
    report = PartialHadamardVerifier().run()
    assert report.passed
    assert report.details["PH14"]["scale"] == 128


def test_constructive_closure_verifier():
    report = ConstructiveClosureVerifier(periods=[5, 7]).run()
    assert report.passed
    assert report.details["failures"] == []
    assert "two_core ++---,+--+-" in report.details["square"]


def test_constructive_closure_searched_families():
    report = ConstructiveClosureVerifier(periods=[5], searched_periods=[4, 5]).run()
    assert report.passed
    # +---, ++-- ++-- +-+- and ++--- +--+-; no pair has sums adding to -2
    assert report.details["searched_built"] == 3


@pytest.mark.slow
def test_constructive_closure_verifier_all_periods():
    assert ConstructiveClosureVerifier().run().passed
