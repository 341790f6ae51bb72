# SPDX-License-Identifier: Apache-2.0
"""
Run vectors and the run-structure form of periodic autocorrelation.

Counts N_X(R_{i1}...R_{ir}) are taken over the canonical cyclic run vector:
the sequence is read from its first sign change, and every window of r
consecutive runs is counted once per period.
"""

# Standard
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

# Local
from .exceptions import DegenerateRunError, InvalidParameterError, MixedPeriodError
from .logger_config import setup_logger
from .seqcore import BinarySequence, all_sequences, autocorrelation_at, rotate_bits
from .verifier import VerificationReport, Verifier

logger = setup_logger(__name__)

RunPattern = tuple[int, ...]


@dataclass(frozen=True)
class RunVector:
    """
    Run lengths of a sequence

    Attributes
        lengths     lengths of maximal constant blocks, in reading order
        first       sign (+1/-1) of the first block
        offset      index of the sequence where the first block starts
    """

    lengths: tuple[int, ...]
    first: int
    offset: int = 0

    @property
    def m(self) -> int:
        return len(self.lengths)

    def to_dict(self) -> dict[str, Any]:
        return {"lengths": list(self.lengths), "l": self.m}


@dataclass
class CheckResult:
    passed: bool
    violations: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {"pass": self.passed, "violations": self.violations}


def _require_nonconstant(x: BinarySequence) -> None:
    if x.is_constant:
        raise DegenerateRunError(str(x))


def _validate_pattern(pattern: Sequence[int]) -> RunPattern:
    pattern = tuple(pattern)
    if not pattern or any(i < 1 for i in pattern):
        raise InvalidParameterError(
            "pattern", pattern, "run patterns need at least one positive length"
        )
    return pattern


def _runs_from(x: BinarySequence, start: int) -> tuple[int, ...]:
    lengths = []
    current = x.symbol(start)
    length = 0
    for i in range(start, start + x.n):
        symbol = x.symbol(i)
        if symbol == current:
            length += 1
        else:
            lengths.append(length)
            current = symbol
            length = 1
    lengths.append(length)
    return tuple(lengths)


def run_vector(x: BinarySequence) -> RunVector:
    """Blocks read left to right as written; the wrap is not merged."""
    _require_nonconstant(x)
    return RunVector(_runs_from(x, 0), x.symbol(0), 0)


def cyclic_run_vector(x: BinarySequence) -> RunVector:
    """Blocks read from the first index i with x_{i-1} != x_i."""
    _require_nonconstant(x)
    start = next(i for i in range(x.n) if x.symbol(i - 1) != x.symbol(i))
    return RunVector(_runs_from(x, start), x.symbol(start), start)


def orbit_run_length(x: BinarySequence) -> int:
    _require_nonconstant(x)
    # number of cyclic sign changes
    return (x.bits ^ rotate_bits(x.bits, x.n, 1)).bit_count()


def pattern_counts(x: BinarySequence, below: int) -> Counter:
    """
    Counts every cyclic window of consecutive runs whose total is below `below`.

    Returns a Counter keyed by run pattern.
    """
    runs = cyclic_run_vector(x).lengths
    l = len(runs)
    counts: Counter = Counter()
    for start in range(l):
        total = 0
        pattern: list[int] = []
        for r in range(l):
            length = runs[(start + r) % l]
            total += length
            if total >= below:
                break
            pattern.append(length)
            counts[tuple(pattern)] += 1
    return counts


def count_run_pattern(x: BinarySequence, pattern: Sequence[int]) -> int:
    pattern = _validate_pattern(pattern)
    runs = cyclic_run_vector(x).lengths
    l = len(runs)
    r = len(pattern)
    if r > l:
        return 0
    return sum(
        1
        for start in range(l)
        if all(runs[(start + j) % l] == pattern[j] for j in range(r))
    )


def _check_shift(x: BinarySequence, k: int) -> None:
    if not 1 <= k <= x.n:
        raise InvalidParameterError("k", k, f"shift must lie in 1..{x.n}")


def _runs_formula(n: int, l: int, k: int, counts: Counter) -> int:
    total = 0
    for pattern, count in counts.items():
        s = sum(pattern)
        if s < k:
            total += (-1) ** len(pattern) * (k - s) * count
    return n - 2 * k * l - 4 * total


def _runs_formula_grouped(n: int, l: int, k: int, counts: Counter) -> int:
    by_total: dict[int, int] = {}
    singles: Counter = Counter()
    for pattern, count in counts.items():
        s = sum(pattern)
        if s >= k:
            continue
        if len(pattern) == 1:
            singles[s] += count
        else:
            by_total[s] = by_total.get(s, 0) + (-1) ** len(pattern) * count
    value = n - 2 * k * l + 4 * (k - 1) * singles[1]
    for i in range(2, k):
        value += 4 * (k - i) * (singles[i] - by_total.get(i, 0))
    return value


def autocorrelation_via_runs(x: BinarySequence, k: int) -> int:
    _check_shift(x, k)
    counts = pattern_counts(x, k)
    return _runs_formula(x.n, orbit_run_length(x), k, counts)


def autocorrelation_via_runs_v2(x: BinarySequence, k: int) -> int:
    """Same value as autocorrelation_via_runs, with run strings grouped by total length."""
    _check_shift(x, k)
    if k < 3:
        return autocorrelation_via_runs(x, k)
    counts = pattern_counts(x, k)
    return _runs_formula_grouped(x.n, orbit_run_length(x), k, counts)


def _pattern_identity_violations(counts: Counter, n: int) -> list[str]:
    # N(R_k) must equal the signed count of multi-run strings of total k
    singles: Counter = Counter()
    multi: dict[int, int] = {}
    for pattern, count in counts.items():
        s = sum(pattern)
        if len(pattern) == 1:
            singles[s] += count
        else:
            multi[s] = multi.get(s, 0) + (-1) ** len(pattern) * count
    return [
        f"N(R_{k})={singles[k]} but signed multi-run count is {multi.get(k, 0)}"
        for k in range(2, n - 1)
        if singles[k] != multi.get(k, 0)
    ]


@dataclass(frozen=True)
class TwoLevelProfile:
    """
    Run structure forced on sequences with off-peak autocorrelation d

    Attributes
        n           period
        d           off-peak autocorrelation value
        run_length  forced l(X_C) = (n - d) / 2
        ones        forced N(R_1) = (n - d) / 4
    """

    n: int
    d: int
    run_length: int
    ones: int

    def check(self, x: BinarySequence) -> CheckResult:
        if x.n != self.n:
            return CheckResult(False, [f"period {x.n} differs from {self.n}"])
        if x.is_constant:
            return CheckResult(False, ["constant sequence has no run structure"])
        violations = []
        l = orbit_run_length(x)
        if l != self.run_length:
            violations.append(f"l={l}, expected {self.run_length}")
        counts = pattern_counts(x, self.n - 1)
        if counts[(1,)] != self.ones:
            violations.append(f"N(R_1)={counts[(1,)]}, expected {self.ones}")
        violations.extend(_pattern_identity_violations(counts, self.n))
        return CheckResult(not violations, violations)


def two_level_profile(n: int, d: int) -> TwoLevelProfile:
    if (n - d) % 4 != 0 or n - d < 0:
        raise InvalidParameterError("d", d, f"n - d must be a non-negative multiple of 4 (n={n})")
    return TwoLevelProfile(n, d, (n - d) // 2, (n - d) // 4)


def family_run_profile(members: Iterable[BinarySequence], c: int) -> CheckResult:
    """
    Checks the aggregate run identities that every family with constant
    off-peak autocorrelation sum c satisfies.
    """
    members = list(members)
    if not members:
        raise InvalidParameterError("members", members, "family is empty")
    periods = {x.n for x in members}
    if len(periods) > 1:
        raise MixedPeriodError([x.n for x in members])
    n = members[0].n
    q = len(members)
    if (n * q - c) % 4 != 0:
        return CheckResult(False, [f"nq - c = {n * q - c} is not divisible by 4"])

    violations = []
    total_l = sum(orbit_run_length(x) for x in members)
    if total_l != (n * q - c) // 2:
        violations.append(f"sum of l = {total_l}, expected {(n * q - c) // 2}")
    counts: Counter = Counter()
    for x in members:
        counts.update(pattern_counts(x, n - 1))
    if counts[(1,)] != (n * q - c) // 4:
        violations.append(f"sum of N(R_1) = {counts[(1,)]}, expected {(n * q - c) // 4}")
    violations.extend(_pattern_identity_violations(counts, n))
    return CheckResult(not violations, violations)


class RunEquivalenceVerifier(Verifier):
    """
    Compares both run-structure formulas with direct autocorrelation over
    every non-constant sequence of period 2..max_n

    Attributes
        max_n       largest period swept
    """

    name = "run_equivalence"

    def __init__(self, max_n: int = 12) -> None:
        self.max_n = max_n

    def run(self) -> VerificationReport:
        logger.debug(locals())
        mismatches: list[dict[str, Any]] = []
        swept = 0
        for n in range(2, self.max_n + 1):
            for x in all_sequences(n):
                if x.is_constant:
                    continue
                swept += 1
                counts = pattern_counts(x, n)
                l = orbit_run_length(x)
                singles = [(p[0], cnt) for p, cnt in counts.items() if len(p) == 1]
                if sum(cnt for _, cnt in singles) != l or sum(
                    j * cnt for j, cnt in singles
                ) != n:
                    mismatches.append({"seq": str(x), "check": "run totals"})
                for k in range(1, n + 1):
                    direct = autocorrelation_at(x, k)
                    via_runs = _runs_formula(n, l, k, counts)
                    grouped = _runs_formula_grouped(n, l, k, counts)
                    if via_runs != direct or (k >= 3 and grouped != direct):
                        mismatches.append(
                            {
                                "seq": str(x),
                                "k": k,
                                "direct": direct,
                                "runs": via_runs,
                                "grouped": grouped,
                            }
                        )
        if mismatches:
            logger.warning("%d run-formula mismatches", len(mismatches))
        return VerificationReport(
            name=self.name,
            passed=not mismatches,
            details={
                "max_n": self.max_n,
                "sequences": swept,
                "mismatches": mismatches[:20],
            },
            findings=[f"run formula disagrees for {m['seq']}" for m in mismatches[:20]],
        )
