# SPDX-License-Identifier: Apache-2.0
"""
Packed +/- sequences of period n and the group operations on them.

Bit i of ``bits`` holds symbol x_i, with 1 meaning '+'. Index 0 is the
leftmost character of the text form. Python integers are unbounded, so any
period is handled by the same code path.
"""

# Standard
from dataclasses import dataclass
from math import gcd
from typing import Any, Iterator

# Third Party
import numpy as np

# Local
from .exceptions import InvalidSequenceError, NonCoprimeDecimationError
from .logger_config import setup_logger

logger = setup_logger(__name__)

PLUS = "+"
MINUS = "-"


@dataclass(frozen=True)
class BinarySequence:
    """
    A +/- sequence of period n

    Attributes
        n       period length
        bits    packed sign pattern, bit i set when x_i is '+'
    """

    n: int
    bits: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidSequenceError(self.bits, f"period must be positive, got {self.n}")
        if not 0 <= self.bits < (1 << self.n):
            raise InvalidSequenceError(
                self.bits, f"bit pattern does not fit in period {self.n}"
            )

    @property
    def mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    @property
    def is_constant(self) -> bool:
        return self.bits in (0, self.mask)

    def symbol(self, i: int) -> int:
        """Returns x_i as +1 or -1, index taken mod n."""
        return 1 if (self.bits >> (i % self.n)) & 1 else -1

    def __str__(self) -> str:
        return "".join(
            PLUS if (self.bits >> i) & 1 else MINUS for i in range(self.n)
        )

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "seq": str(self)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "BinarySequence":
        seq = parse(data["seq"])
        if seq.n != data["n"]:
            raise InvalidSequenceError(
                data["seq"], f"declared n={data['n']} but text has {seq.n} symbols"
            )
        return seq

    def to_array(self) -> np.ndarray:
        return np.array([self.symbol(i) for i in range(self.n)], dtype=np.int64)


@dataclass(frozen=True)
class AutocorrelationVector:
    """
    Periodic autocorrelation (P(0), ..., P(n-1)) of a sequence

    Attributes
        n       period
        values  P(k) for k = 0..n-1
    """

    n: int
    values: tuple[int, ...]

    @property
    def nontrivial(self) -> tuple[int, ...]:
        return self.values[1:]

    @property
    def two_level(self) -> int | None:
        """The common off-peak value d when there is exactly one, else None."""
        off_peak = set(self.nontrivial)
        if len(off_peak) == 1:
            return off_peak.pop()
        return None

    def __getitem__(self, k: int) -> int:
        return self.values[k % self.n]

    def to_list(self) -> list[int]:
        return list(self.values)


def parse(text: str) -> BinarySequence:
    if not text:
        raise InvalidSequenceError(text, "empty string")
    bits = 0
    for i, char in enumerate(text):
        if char == PLUS:
            bits |= 1 << i
        elif char != MINUS:
            raise InvalidSequenceError(text, f"invalid character {char!r} at {i}")
    return BinarySequence(len(text), bits)


def from_array(values) -> BinarySequence:
    """Builds a sequence from an iterable of +1/-1 values."""
    values = [int(value) for value in values]
    bits = 0
    for i, value in enumerate(values):
        if value == 1:
            bits |= 1 << i
        elif value != -1:
            raise InvalidSequenceError(values, f"entry {i} is {value}, not +1/-1")
    return BinarySequence(len(values), bits)


def all_sequences(n: int) -> Iterator[BinarySequence]:
    for bits in range(1 << n):
        yield BinarySequence(n, bits)


def rotate_bits(bits: int, n: int, i: int) -> int:
    i %= n
    if i == 0:
        return bits
    return ((bits << i) | (bits >> (n - i))) & ((1 << n) - 1)


def weight(x: BinarySequence) -> int:
    return x.weight


def negate(x: BinarySequence) -> BinarySequence:
    return BinarySequence(x.n, x.bits ^ x.mask)


def reverse(x: BinarySequence) -> BinarySequence:
    bits = 0
    for i in range(x.n):
        if (x.bits >> i) & 1:
            bits |= 1 << (x.n - 1 - i)
    return BinarySequence(x.n, bits)


def shift(x: BinarySequence, i: int) -> BinarySequence:
    # C^i X has y_j = x_{j-i}
    return BinarySequence(x.n, rotate_bits(x.bits, x.n, i))


def decimate(x: BinarySequence, k: int) -> BinarySequence:
    if gcd(k, x.n) != 1:
        raise NonCoprimeDecimationError(k, x.n)
    bits = 0
    for i in range(x.n):
        if (x.bits >> ((k * i) % x.n)) & 1:
            bits |= 1 << i
    return BinarySequence(x.n, bits)


def product(x: BinarySequence, y: BinarySequence) -> BinarySequence:
    """Elementwise product, the group operation of Z_2^n."""
    if x.n != y.n:
        raise InvalidSequenceError(str(y), f"period {y.n} differs from {x.n}")
    return BinarySequence(x.n, ~(x.bits ^ y.bits) & x.mask)


def smallest_period(x: BinarySequence) -> int:
    for d in range(1, x.n + 1):
        if x.n % d == 0 and rotate_bits(x.bits, x.n, d) == x.bits:
            return d
    return x.n


def autocorrelation_at(x: BinarySequence, k: int) -> int:
    return x.n - 2 * (x.bits ^ rotate_bits(x.bits, x.n, k)).bit_count()


def autocorrelation(x: BinarySequence) -> AutocorrelationVector:
    return AutocorrelationVector(
        x.n, tuple(autocorrelation_at(x, k) for k in range(x.n))
    )
