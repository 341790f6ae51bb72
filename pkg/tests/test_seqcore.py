# SPDX-License-Identifier: Apache-2.0

# Third Party
import numpy as np
import pytest

# First Party
from z2seq.pcoms.exceptions import InvalidSequenceError, NonCoprimeDecimationError
from z2seq.pcoms.seqcore import (
    BinarySequence,
    all_sequences,
    autocorrelation,
    autocorrelation_at,
    decimate,
    from_array,
    negate,
    parse,
    product,
    reverse,
    shift,
    smallest_period,
    weight,
)


def test_parse_and_text():
    x = parse("++-+---")
    assert x.n == 7
    assert weight(x) == 3
    assert str(x) == "++-+---"
    assert x.symbol(0) == 1
    assert x.symbol(2) == -1
    assert x.symbol(9) == -1


@pytest.mark.parametrize("text", ["", "+x-", "++ -"])
def test_parse_rejects(text):
    with pytest.raises(InvalidSequenceError):
        parse(text)


def test_bits_must_fit_period():
    with pytest.raises(InvalidSequenceError):
        BinarySequence(3, 8)


def test_shift_orientation():
    # C^i X has y_j = x_{j-i}
    x = parse("++---")
    assert str(shift(x, 1)) == "-++--"
    assert str(shift(x, 5)) == "++---"
    assert str(shift(x, -1)) == "+---+"


def test_negate_reverse():
    x = parse("++-+---")
    assert str(negate(x)) == "--+-+++"
    assert str(reverse(x)) == "---+-++"


def test_decimate():
    x = parse("++---")
    assert str(decimate(x, 2)) == "+--+-"
    assert decimate(x, 1) == x
    with pytest.raises(NonCoprimeDecimationError):
        decimate(parse("++----"), 2)


def test_product_is_group_operation():
    x = parse("+-+-")
    y = parse("++--")
    assert str(product(x, y)) == "+--+"
    plus = parse("++++")
    assert product(x, plus) == x
    assert product(x, x) == plus
    with pytest.raises(InvalidSequenceError):
        product(x, parse("+++"))


def test_smallest_period():
    assert smallest_period(parse("+-+-+-")) == 2
    assert smallest_period(parse("++-++-")) == 3
    assert smallest_period(parse("++++")) == 1
    assert smallest_period(parse("++-+---")) == 7


def test_autocorrelation_m_sequence():
    acf = autocorrelation(parse("++-+---"))
    assert acf.to_list() == [7, -1, -1, -1, -1, -1, -1]
    assert acf.two_level == -1
    assert acf[8] == -1


def test_autocorrelation_constant_and_perfect():
    assert autocorrelation(parse("++++")).to_list() == [4, 4, 4, 4]
    assert autocorrelation(parse("+---")).two_level == 0
    assert autocorrelation(parse("+-++---+-----")).two_level == 1
    assert autocorrelation(parse("++--")).two_level is None


def test_autocorrelation_properties():
    for x in all_sequences(6):
        acf = autocorrelation(x)
        assert acf[0] == 6
        for k in range(1, 6):
            assert acf[k] == acf[6 - k]
            assert autocorrelation_at(negate(x), k) == acf[k]
            assert autocorrelation_at(shift(x, 2), k) == acf[k]
        # sum of off-peak values is (2w - n)^2 - n
        assert sum(acf.nontrivial) == (2 * x.weight - 6) ** 2 - 6


def test_array_bridge():
    x = parse("+--+")
    assert np.array_equal(x.to_array(), np.array([1, -1, -1, 1]))
    assert from_array(x.to_array()) == x
    with pytest.raises(InvalidSequenceError):
        from_array([1, 0, -1])


def test_dict_form():
    x = parse("+-++")
    assert x.to_dict() == {"n": 4, "seq": "+-++"}
    assert BinarySequence.from_dict(x.to_dict()) == x
    with pytest.raises(InvalidSequenceError):
        BinarySequence.from_dict({"n": 5, "seq": "+-++"})
