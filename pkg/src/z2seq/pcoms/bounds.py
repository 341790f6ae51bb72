# SPDX-License-Identifier: Apache-2.0
"""
Counting bounds for families with constant autocorrelation sum.

A sequence of weight a with l runs is read as P interleaved with Q, where P
holds the l/2 blocks of '+' and Q the l/2 blocks of '-'. Every bound here
counts the compositions P and Q can take given how many of their parts equal 1.
All arithmetic is exact.
"""

# Standard
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb, factorial, gcd, isqrt
from typing import Any, Iterable, Iterator, Optional

# Third Party
from pandas import DataFrame
from sympy.utilities.iterables import partitions

# Local
from .exceptions import InvalidParameterError
from .families import is_trivial
from .logger_config import setup_logger
from .runstruct import cyclic_run_vector, orbit_run_length, pattern_counts
from .schur import canonical_rotation, enumerate_orbits
from .seqcore import (
    BinarySequence,
    all_sequences,
    autocorrelation,
    autocorrelation_at,
    decimate,
    negate,
    parse,
)
from .verifier import VerificationReport, Verifier

logger = setup_logger(__name__)

# exhaustive family counts are skipped above this many orbit multisets
ORACLE_NODE_CUTOFF = 10**8

PERFECT_LEVELS = (-2, -1, 0, 1, 2)


@dataclass(frozen=True)
class PartitionSpec:
    """
    Partitions of target into parts_total parts, exactly `ones` of them equal to 1

    Attributes
        target          integer being partitioned
        parts_total     number of parts
        ones            number of parts equal to 1
        min_other       smallest allowed size of the remaining parts
    """

    target: int
    parts_total: int
    ones: int
    min_other: int = 2

    @property
    def feasible(self) -> bool:
        others = self.parts_total - self.ones
        if self.target < 0 or self.ones < 0 or others < 0:
            return False
        if others == 0:
            return self.target == self.ones
        return self.ones + self.min_other * others <= self.target


@dataclass
class BoundReport:
    """
    An exact upper bound on a number of families

    Attributes
        params      parameters the bound was evaluated at
        value       the bound
        method      "formula" for the plain bound, "refined" for the split-weight sums
        oracle      exhaustive count when it was run
        applicable  False for the excluded weight-1 cases
        notes       conventions applied while evaluating
    """

    params: dict[str, int]
    value: int = 0
    method: str = "formula"
    oracle: Optional[int] = None
    applicable: bool = True
    notes: list[str] = field(default_factory=list)

    @property
    def dominated(self) -> bool:
        return self.oracle is None or not self.applicable or self.oracle <= self.value

    def to_dict(self) -> dict[str, Any]:
        return {
            "params": self.params,
            "value": str(self.value),
            "method": self.method,
            "oracle": self.oracle,
            "applicable": self.applicable,
            "notes": self.notes,
        }


def multinomial_partition_sum(spec: PartitionSpec) -> int:
    """
    Sum over matching partitions of parts_total! / (ones! * i_2! * ... * i_r!).

    This is the number of compositions of target into parts_total parts with
    exactly `ones` parts equal to 1 and every other part at least min_other.
    """
    if not spec.feasible:
        return 0
    if spec.parts_total == 0:
        return 1
    total = 0
    for partition in partitions(spec.target, m=spec.parts_total):
        # sympy reuses the dict between iterations
        multiplicities = dict(partition)
        if sum(multiplicities.values()) != spec.parts_total:
            continue
        if multiplicities.get(1, 0) != spec.ones:
            continue
        if any(1 < part < spec.min_other for part in multiplicities):
            continue
        term = factorial(spec.parts_total)
        for count in multiplicities.values():
            term //= factorial(count)
        total += term
    return total


def mps(target: int, parts: int, ones: int) -> int:
    return multinomial_partition_sum(PartitionSpec(target, parts, ones))


def count_compositions(total: int, parts: int, ones: int) -> int:
    """Closed form for compositions with `ones` parts equal to 1 and the rest at least 2."""
    others = parts - ones
    rest = total - ones
    if total < 0 or ones < 0 or others < 0:
        return 0
    if others == 0:
        return 1 if rest == 0 else 0
    if rest < 2 * others:
        return 0
    return comb(parts, ones) * comb(rest - others - 1, others - 1)


def enumerate_compositions(total: int) -> Iterator[tuple[int, ...]]:
    if total == 0:
        yield ()
        return
    for first in range(1, total + 1):
        for rest in enumerate_compositions(total - first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _free_count(total: int, ones: int) -> int:
    # compositions of total with exactly `ones` parts equal to 1, any number of parts
    if total < 0 or ones < 0:
        return 0
    return sum(
        count_compositions(total, ones + others, ones)
        for others in range(0, (total - ones) // 2 + 1)
    )


@lru_cache(maxsize=None)
def _split_count(total: int, ones: int) -> int:
    # total split between two halves, each a composition counted by _free_count
    if total < 0 or ones < 0:
        return 0
    return sum(
        _free_count(first, d) * _free_count(total - first, ones - d)
        for d in range(ones + 1)
        for first in range(total + 1)
    )


def run_one_count_range(l: int, a: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """Closed ranges for the number of 1-parts in P and in Q."""
    if l <= 0 or l % 2:
        raise InvalidParameterError("l", l, "run count must be positive and even")
    if not l // 2 < a < l:
        raise InvalidParameterError("a", a, f"must satisfy {l // 2} < a < {l}")
    half = l // 2
    return (l - a, half - 1), (1, a - half)


def _sum_over_ones(total: tuple[int, int], half: int, lo: int, hi: int) -> int:
    return sum(
        mps(total[0], half, h) * mps(total[1], half, half - h)
        for h in range(max(lo, 0), hi + 1)
    )


def bound_B(
    n: int, q: int, c: int, a: int, oracle: bool = False, h_min: Optional[int] = None
) -> BoundReport:
    """
    Upper bound on the number of families of q sequences of period n with
    sum c whose concatenation has weight a.

    h_min raises the lower end of the summation when a sharper 1-part
    count is known.
    """
    logger.debug(locals())
    report = BoundReport(dict(n=n, q=q, c=c, a=a))
    nq = n * q
    if nq - c <= 0:
        raise InvalidParameterError("c", c, f"nq - c must be positive (nq={nq})")
    if not 0 <= a <= nq:
        raise InvalidParameterError("a", a, f"must lie in 0..{nq}")
    if q == 1 and c == n - 4:
        report.applicable = False
        report.notes.append("single sequences with value n - 4 are excluded")
        return report
    if c == q * (n - 4) and a == q:
        # only q copies of the weight-1 orbit land here
        report.applicable = False
        report.notes.append("repeats of the excluded single sequence are excluded")
        return report
    if (nq - c) % 4:
        report.notes.append("nq - c is not divisible by 4; no family exists")
    else:
        l = (nq - c) // 2
        half = l // 2
        lo = l - a if h_min is None else max(l - a, h_min)
        report.value = _sum_over_ones((a, nq - a), half, lo, half - 1)
        report.notes.append(f"l = {l} taken from nq - c")
    if oracle:
        report.oracle = family_count_oracle(n, q, c, a)
    return report


def _orbit_multiset_size(orbit_count: int, q: int) -> int:
    return comb(orbit_count + q - 1, q)


@lru_cache(maxsize=None)
def _orbit_table(n: int) -> tuple[tuple[BinarySequence, int, tuple[int, ...]], ...]:
    return tuple(
        (o.rep, o.rep.weight, autocorrelation(o.rep).nontrivial)
        for o in enumerate_orbits(n)
        if not o.rep.is_constant
    )


def count_families(
    n: int, q: int, nontrivial_only: bool = False
) -> Counter:
    """
    Exhaustive count of multisets of q nonconstant orbits with a constant
    sum, keyed by (c, total weight).
    """
    if n < 2:
        raise InvalidParameterError("n", n, "must be at least 2")
    table = _orbit_table(n)
    size = _orbit_multiset_size(len(table), q)
    if size > ORACLE_NODE_CUTOFF:
        raise InvalidParameterError(
            "q", q, f"{size} orbit multisets exceed the oracle cutoff"
        )
    counts: Counter = Counter()
    for chosen in combinations_with_replacement(table, q):
        sums = [sum(vector[k] for _, _, vector in chosen) for k in range(n - 1)]
        if len(set(sums)) != 1:
            continue
        if nontrivial_only and q > 1 and is_trivial(rep for rep, _, _ in chosen):
            continue
        counts[(sums[0], sum(w for _, w, _ in chosen))] += 1
    return counts


def family_count_oracle(n: int, q: int, c: int, a: int) -> Optional[int]:
    table = _orbit_table(n) if n <= 20 else ()
    if not table or _orbit_multiset_size(len(table), q) > ORACLE_NODE_CUTOFF:
        return None
    return count_families(n, q)[(c, a)]


def lemma3_range(p: int) -> tuple[int, int]:
    """1-part range of P for the single-core case once p > 11."""
    if p <= 11 or p % 4 != 3:
        raise InvalidParameterError("p", p, "needs p = 3 mod 4 and p > 11")
    return 2, (p - 3) // 4


def _two_level_orbits(n: int, d: int, weight: Optional[int] = None) -> list[BinarySequence]:
    reps = {}
    half = n // 2
    for x in all_sequences(n):
        if weight is not None and x.weight != weight:
            continue
        if all(autocorrelation_at(x, k) == d for k in range(1, half + 1)):
            rep = canonical_rotation(x)
            reps[str(rep)] = rep
    return [reps[key] for key in sorted(reps)]


def one_core_bound(p: int, oracle: bool = False) -> BoundReport:
    if p < 3 or p % 4 != 3:
        raise InvalidParameterError("p", p, "must be 3 mod 4")
    a = (p - 1) // 2
    if p > 11:
        h_min = lemma3_range(p)[0]
    else:
        h_min = None
    report = bound_B(p, 1, -1, a, h_min=h_min)
    report.params = dict(p=p)
    report.notes.append(
        "1-part range from the single-core lemma" if h_min else "1-part range from run splitting"
    )
    if oracle:
        report.oracle = len(_two_level_orbits(p, -1, a))
    return report


def two_core_bound(n: int, oracle: bool = False) -> BoundReport:
    if n < 3 or n % 2 == 0:
        raise InvalidParameterError("n", n, "must be odd and at least 3")
    report = bound_B(n, 2, -2, n - 1, oracle=oracle)
    report.params = dict(n=n)
    return report


def gs_bound(n: int, a: int, b: int, c: int, d: int) -> BoundReport:
    """Bound for four sequences with row sums a, b, c, d forming a Goethals-Seidel array."""
    sums = (a, b, c, d)
    if sum(s * s for s in sums) != 4 * n:
        raise InvalidParameterError(
            "row sums", sums, f"squares sum to {sum(s * s for s in sums)}, not {4 * n}"
        )
    for s in sums:
        if (n - s) % 2 or not 0 <= (n - s) // 2 <= n:
            raise InvalidParameterError("row sums", sums, f"row sum {s} gives no weight in G_{n}")
    weight = 2 * n - sum(sums) // 2
    report = bound_B(n, 4, 0, weight)
    report.params = dict(n=n, a=a, b=b, c=c, d=d)
    report.notes.append(f"member weights {[(n - s) // 2 for s in sums]}, total {weight}")
    return report


def _refined(
    h_range: tuple[int, int], a_range: tuple[int, int], total: int, ones: int
) -> int:
    value = 0
    for h in range(h_range[0], h_range[1] + 1):
        for a in range(a_range[0], a_range[1] + 1):
            value += _split_count(a, h) * _split_count(total - a, ones - h)
    return value


def circulant_hadamard_bound(m: int, oracle: bool = False) -> BoundReport:
    """
    Bound on circulant Hadamard matrices of order 4m^2 whose two halves have
    weights a and 2m^2 - m - a.
    """
    report = BoundReport(dict(m=m), method="refined")
    if m < 2:
        report.applicable = False
        report.notes.append("order 4 is the single-sequence case n - 4 = 0")
        return report
    m2 = m * m
    a_range = (-(-(m2 - m) // 2), (3 * m2 - m) // 2)
    report.value = _refined((m, m2 - 1), a_range, 2 * m2 - m, m2)
    report.notes.append("split counts multiplied across halves")
    report.notes.append(f"weight window {a_range} rounded inward")
    if oracle:
        report.oracle = len(_two_level_orbits(4 * m2, 0, 2 * m2 - m))
    return report


def perfect_case_params(n: int) -> list[tuple[int, int]]:
    """
    All (d, a) with d in -2..2 for which a perfect sequence of weight a could exist.

    Weights 0 and n are left out: the constant sequences have d = n.
    """
    if n < 2:
        raise InvalidParameterError("n", n, "must be at least 2")
    found = set()
    for d in PERFECT_LEVELS:
        if (n - d) % 4:
            continue
        disc = (n - 1) * d + n
        if disc < 0 or isqrt(disc) ** 2 != disc:
            continue
        root = isqrt(disc)
        for a2 in (n - root, n + root):
            if a2 % 2 == 0 and 0 < a2 // 2 < n:
                found.add((d, a2 // 2))
    return sorted(found)


def perfect_bounds(u: int, case: str) -> BoundReport:
    """
    case "d1": n = 2u^2 + 2u + 1, d = 1.
    case "d2a": n = 12u^2 - 16u + 6, d = 2.
    case "d2b": n = 12u^2 - 4u + 2, d = 2.
    """
    if u < 1:
        raise InvalidParameterError("u", u, "must be positive")
    if case == "d1":
        n = 2 * u * u + 2 * u + 1
        report = bound_B(n, 1, 1, u * u)
        report.params = dict(u=u, n=n)
        return report
    if case == "d2a":
        n = 12 * u * u - 16 * u + 6
        total = 6 * u * u - 11 * u + 5
        ones = 3 * u * u - 4 * u + 1
        h_range = (3 * u - 3, 3 * u * u - 4 * u)
        a_range = (-(-(3 * u * u - 7 * u + 4) // 2), (9 * u * u - 15 * u + 2) // 2)
        notes = [
            f"l = {6 * u * u - 8 * u + 2} from (n - d)/2",
            f"weight window {a_range}: lower end rounded up, upper end rounded down",
        ]
    elif case == "d2b":
        n = 12 * u * u - 4 * u + 2
        total = 6 * u * u - 5 * u + 2
        ones = 3 * u * u - 2 * u
        h_range = (3 * u - 2, 3 * u * u - u + 1)
        a_range = ((3 * u * u - 4 * u + 3) // 2, (3 * u * u + 2 * u) // 2)
        notes = [f"weight window {a_range}: both ends rounded down"]
    else:
        raise InvalidParameterError("case", case, "must be one of d1, d2a, d2b")
    report = BoundReport(dict(u=u, n=n), method="refined", notes=notes)
    report.value = _refined(h_range, a_range, total, ones)
    return report


@dataclass
class TwoLevelScan:
    """
    Every sequence of period n whose off-peak autocorrelation is d

    Attributes
        n           period
        d           off-peak value
        orbits      least rotation of each shift orbit, sorted
        classes     orbits grouped under decimation and negation
    """

    n: int
    d: int
    orbits: list[str] = field(default_factory=list)
    classes: list[list[str]] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "d": self.d, "orbits": self.orbits, "classes": self.classes}


def two_level_scan(n: int, d: int) -> TwoLevelScan:
    logger.debug(locals())
    orbits = _two_level_orbits(n, d)
    keys = {str(x) for x in orbits}
    seen: set[str] = set()
    classes = []
    for x in orbits:
        if str(x) in seen:
            continue
        group = set()
        for y in (x, negate(x)):
            for r in range(1, n + 1):
                if gcd(r, n) == 1:
                    group.add(str(canonical_rotation(decimate(y, r))))
        group &= keys
        seen |= group
        classes.append(sorted(group))
    return TwoLevelScan(n, d, [str(x) for x in orbits], classes)


def bound_table(reports: Iterable[BoundReport]) -> DataFrame:
    rows = []
    for report in reports:
        row: dict[str, Any] = dict(report.params)
        row.update(
            {
                "value": report.value,
                "oracle": report.oracle,
                "applicable": report.applicable,
                "method": report.method,
            }
        )
        rows.append(row)
    return DataFrame(rows)


def dominance_grid(max_nq: int = 18, max_n: int = 12, nontrivial_only: bool = False) -> list[BoundReport]:
    """bound_B with its oracle for every (n, q, c, a) bucket with nq <= max_nq."""
    reports = []
    for n in range(2, max_n + 1):
        for q in range(1, max_nq // n + 1):
            counts = count_families(n, q, nontrivial_only)
            for (c, a), count in sorted(counts.items()):
                if n * q - c <= 0:
                    continue
                report = bound_B(n, q, c, a)
                if not report.applicable:
                    continue
                report.oracle = count
                reports.append(report)
    return reports


class BoundDominanceVerifier(Verifier):
    """
    Checks exhaustive family counts against bound_B and the partition sums
    against direct composition counts

    Attributes
        max_nq      largest concatenated length in the grid
        max_n       largest period in the grid
    """

    name = "bound_dominance"

    def __init__(self, max_nq: int = 18, max_n: int = 12) -> None:
        self.max_nq = max_nq
        self.max_n = max_n

    def run(self) -> VerificationReport:
        logger.debug(locals())
        findings = []
        details: dict[str, Any] = {}

        partition_mismatches = [
            (t, k, o)
            for t in range(0, 31)
            for k in range(0, 13)
            for o in range(0, k + 1)
            if mps(t, k, o) != count_compositions(t, k, o)
        ]
        enumerated: Counter = Counter()
        for t in range(0, 15):
            for parts in enumerate_compositions(t):
                enumerated[(t, len(parts), parts.count(1))] += 1
        partition_mismatches += [
            key for key, count in enumerated.items() if mps(*key) != count
        ]
        details["partition_mismatches"] = partition_mismatches

        example = bound_B(5, 2, -2, 4, oracle=True)
        details["example"] = example.to_dict()

        every = dominance_grid(self.max_nq, self.max_n)
        violations = [r for r in every if not r.dominated]
        details["grid_points"] = len(every)
        details["violations"] = [r.to_dict() for r in violations]
        for r in violations:
            findings.append(
                f"bound {r.value} below exhaustive count {r.oracle} at {r.params}"
            )
        if violations:
            logger.warning("%d grid points exceed bound_B", len(violations))
        passed = (
            not partition_mismatches
            and example.value == 18
            and example.dominated
            and not violations
        )
        return VerificationReport(self.name, passed, details, findings)


class CirculantHadamardVerifier(Verifier):
    """
    Scans all sequences of period 16 and 4 for off-peak value 0
    """

    name = "circulant_hadamard"

    def run(self) -> VerificationReport:
        logger.debug(locals())
        order16 = two_level_scan(16, 0)
        order4 = two_level_scan(4, 0)
        bound = circulant_hadamard_bound(2)
        bound.oracle = 0 if not order16.orbits else None
        details = {
            "n16": order16.to_dict(),
            "n4": order4.to_dict(),
            "bound_m2": bound.to_dict(),
        }
        passed = not order16.orbits and order4.orbits == ["+++-", "+---"] and len(order4.classes) == 1
        return VerificationReport(self.name, passed, details)


class PerfectSequenceVerifier(Verifier):
    """
    Checks the period-13 perfect sequence and that no other class exists

    Attributes
        sequence    the perfect sequence under test
    """

    name = "perfect_sequence"

    def __init__(self, sequence: str = "+-++---+-----") -> None:
        self.sequence = sequence

    def run(self) -> VerificationReport:
        logger.debug(locals())
        x = parse(self.sequence)
        d = autocorrelation(x).two_level
        runs = cyclic_run_vector(x).lengths
        l = orbit_run_length(x)
        ones = pattern_counts(x, x.n)[(1,)]
        scan = two_level_scan(x.n, 1)
        in_class = [c for c in scan.classes if str(canonical_rotation(x)) in c]
        bound = perfect_bounds(2, "d1")
        bound.oracle = len(_two_level_orbits(x.n, 1, x.weight))
        details = {
            "d": d,
            "runs": list(runs),
            "l": l,
            "N_R1": ones,
            "params": perfect_case_params(x.n),
            "scan": scan.to_dict(),
            "bound_u2": bound.to_dict(),
        }
        findings = []
        passed = (
            d == 1
            and runs == (1, 1, 2, 3, 1, 5)
            and l == 6
            and ones == 3
            and len(scan.classes) == 1
            and bool(in_class)
            and (1, x.weight) in perfect_case_params(x.n)
        )
        if not bound.dominated:
            findings.append(f"perfect bound {bound.value} below count {bound.oracle}")
        return VerificationReport(self.name, passed, details, findings)
