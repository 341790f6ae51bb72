# SPDX-License-Identifier: Apache-2.0
"""
Schur-ring partitions of Z_2^n: Hamming weight classes, circulant orbits and
decimation classes, with the composition view of run vectors.
"""

# Standard
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, gcd, lcm
from typing import Any, Iterator, Optional

# Third Party
from sympy import divisors, isprime, totient

# Local
from .exceptions import InvalidParameterError
from .logger_config import setup_logger
from .runstruct import cyclic_run_vector
from .seqcore import (
    BinarySequence,
    decimate,
    parse,
    product,
    reverse,
    rotate_bits,
    shift,
    smallest_period,
)
from .verifier import VerificationReport, Verifier

logger = setup_logger(__name__)


@dataclass(frozen=True)
class HammingClass:
    """
    G_n(a), the sequences of period n and weight a

    Attributes
        n   period
        a   weight
    """

    n: int
    a: int

    def __post_init__(self) -> None:
        if not 0 <= self.a <= self.n:
            raise InvalidParameterError("a", self.a, f"weight must lie in 0..{self.n}")

    @property
    def size(self) -> int:
        return comb(self.n, self.a)

    def negation(self) -> "HammingClass":
        return HammingClass(self.n, self.n - self.a)

    def members(self) -> Iterator[BinarySequence]:
        for positions in combinations(range(self.n), self.a):
            yield BinarySequence(self.n, sum(1 << i for i in positions))


def hamming_product(n: int, a: int, b: int) -> frozenset[int]:
    """
    Weights w such that G_n(w) meets G_n(a)G_n(b).

    The closed form has two branches; pairs outside both are handled by
    swapping a and b.
    """
    for name, value in (("a", a), ("b", b)):
        if not 0 <= value <= n:
            raise InvalidParameterError(name, value, f"weight must lie in 0..{n}")
    half = n // 2
    for x, y in ((a, b), (b, a)):
        if x <= half and x <= y <= n - x:
            return frozenset(n - x - y + 2 * i for i in range(x + 1))
        if x >= half + 1 and n - x <= y <= x:
            return frozenset(x + y - n + 2 * i for i in range(n - x + 1))
    raise InvalidParameterError("(a, b)", (a, b), "outside both product ranges")


def product_weight_table(n: int) -> dict[tuple[int, int], frozenset[int]]:
    """Brute force over every pair of sequences of period n."""
    table: dict[tuple[int, int], set[int]] = {}
    size = 1 << n
    for x in range(size):
        wx = x.bit_count()
        for y in range(size):
            table.setdefault((wx, y.bit_count()), set()).add(n - (x ^ y).bit_count())
    return {key: frozenset(value) for key, value in table.items()}


def product_weights(n: int, a: int, b: int) -> frozenset[int]:
    """Brute force with one factor fixed; permutations of positions preserve weights."""
    fixed = (1 << a) - 1
    return frozenset(
        n - (fixed ^ y.bits).bit_count() for y in HammingClass(n, b).members()
    )


@dataclass(frozen=True)
class EvenOddPartition:
    n: int
    even_size: int
    odd_size: int
    even_closed: bool
    odd_closed: bool

    @property
    def indicated(self) -> str:
        # the even part is the subgroup for even n, the odd part for odd n
        return "E" if self.n % 2 == 0 else "O"

    @property
    def indicated_closed(self) -> bool:
        return self.even_closed if self.n % 2 == 0 else self.odd_closed

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "even_size": self.even_size,
            "odd_size": self.odd_size,
            "even_closed": self.even_closed,
            "odd_closed": self.odd_closed,
            "indicated": self.indicated,
            "indicated_closed": self.indicated_closed,
        }


def _weights_closed(n: int, weights: list[int]) -> bool:
    allowed = set(weights)
    return all(
        product_weights(n, a, b) <= allowed for a in weights for b in weights
    )


def even_odd_partition(n: int) -> EvenOddPartition:
    logger.debug(locals())
    evens = [w for w in range(n + 1) if w % 2 == 0]
    odds = [w for w in range(n + 1) if w % 2 == 1]
    return EvenOddPartition(
        n=n,
        even_size=sum(comb(n, w) for w in evens),
        odd_size=sum(comb(n, w) for w in odds),
        even_closed=_weights_closed(n, evens),
        odd_closed=_weights_closed(n, odds),
    )


def canonical_rotation(x: BinarySequence) -> BinarySequence:
    """Lexicographically least rotation, with '+' before '-'."""
    text = str(x)
    return parse(min(text[i:] + text[:i] for i in range(x.n)))


def is_palindrome(x: BinarySequence) -> bool:
    return reverse(x) == x


@dataclass(frozen=True)
class CirculantOrbit:
    """
    Orbit of a sequence under cyclic shift

    Attributes
        rep     lexicographically least rotation
        size    number of distinct rotations, equal to the smallest period
    """

    rep: BinarySequence
    size: int

    @property
    def n(self) -> int:
        return self.rep.n

    @property
    def free(self) -> bool:
        return self.size == self.n

    @property
    def period(self) -> int:
        return self.size

    @property
    def symmetric(self) -> bool:
        return any(is_palindrome(shift(self.rep, i)) for i in range(self.size))

    def members(self) -> Iterator[BinarySequence]:
        for i in range(self.size):
            yield shift(self.rep, i)

    def to_dict(self) -> dict[str, Any]:
        return {
            "rep": str(self.rep),
            "size": self.size,
            "free": self.free,
            "sym": self.symmetric,
            "d": self.period,
        }


@dataclass(frozen=True)
class OrbitFlags:
    free: bool
    fhat: bool
    period: int
    symmetric: bool


def orbit_of(x: BinarySequence) -> CirculantOrbit:
    return CirculantOrbit(canonical_rotation(x), smallest_period(x))


def classify_orbit(orbit: CirculantOrbit) -> OrbitFlags:
    # constant sequences sit in both F and F-hat
    constant = orbit.rep.is_constant
    return OrbitFlags(
        free=orbit.free or constant,
        fhat=not orbit.free or constant,
        period=orbit.period,
        symmetric=orbit.symmetric,
    )


def enumerate_orbits(n: int) -> list[CirculantOrbit]:
    if n < 1:
        raise InvalidParameterError("n", n, "period must be positive")
    seen: set[int] = set()
    orbits = []
    for bits in range(1 << n):
        if bits in seen:
            continue
        rotations = {rotate_bits(bits, n, i) for i in range(n)}
        seen |= rotations
        rep = min((BinarySequence(n, r) for r in rotations), key=str)
        orbits.append(CirculantOrbit(rep, len(rotations)))
    return sorted(orbits, key=lambda o: str(o.rep))


def orbit_catalog(n: int) -> dict[str, Any]:
    return {"n": n, "orbits": [o.to_dict() for o in enumerate_orbits(n)]}


def necklace_count(n: int) -> int:
    return int(sum(totient(d) * 2 ** (n // d) for d in divisors(n))) // n


@dataclass
class ClosureReport:
    n: int
    closed: bool
    witness: Optional[tuple[str, str, str]] = None

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "closed": self.closed, "witness": self.witness}


def free_closure(n: int) -> ClosureReport:
    """
    Checks whether products of free orbits stay free (constants allowed).

    The witness is (X, C^kY, product) for the first product that is not free.
    """
    logger.debug(locals())
    free_reps = [o.rep for o in enumerate_orbits(n) if o.free]
    for x in free_reps:
        for y in free_reps:
            for k in range(n):
                z = product(x, shift(y, k))
                if not z.is_constant and smallest_period(z) != n:
                    return ClosureReport(n, False, (str(x), str(shift(y, k)), str(z)))
    return ClosureReport(n, True)


@dataclass
class SymmetricSquareReport:
    n: int
    symmetric: bool
    witness: Optional[tuple[str, int]] = None
    nonfree_products: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "symmetric": self.symmetric,
            "witness": self.witness,
            "nonfree_products": self.nonfree_products,
        }


def symmetric_square_check(n: int) -> SymmetricSquareReport:
    """For every palindromic free X and shift k, is the orbit of X * C^k X symmetric?"""
    report = SymmetricSquareReport(n, True)
    for orbit in enumerate_orbits(n):
        if not (orbit.free and orbit.symmetric):
            continue
        x = next(m for m in orbit.members() if is_palindrome(m))
        for k in range(1, n):
            z = product(x, shift(x, k))
            if not orbit_of(z).symmetric and report.symmetric:
                report.symmetric = False
                report.witness = (str(x), k)
            if not z.is_constant and smallest_period(z) != n:
                report.nonfree_products += 1
    return report


@dataclass
class FhatProductReport:
    """
    Predicted and observed class of a product of orbit classes

    Attributes
        n                   period
        d1, d2              periods of the factors; n stands for the free class F
        predicted           "F" or "F^_t"
        holds               whether every observed product lies in the predicted class
        observed_periods    smallest periods of all products
        witness             first product outside the predicted class
        note                remark on how the prediction was formed
    """

    n: int
    d1: int
    d2: int
    predicted: str
    holds: bool
    observed_periods: list[int]
    witness: Optional[tuple[str, str, str]] = None
    note: Optional[str] = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "d1": self.d1,
            "d2": self.d2,
            "predicted": self.predicted,
            "holds": self.holds,
            "observed_periods": self.observed_periods,
            "witness": self.witness,
            "note": self.note,
        }


def predict_fhat_product(n: int, d1: int, d2: int) -> tuple[Optional[int], Optional[str]]:
    """
    Returns (t, note): the product lands in F^_t, or in F when t is None.
    """
    if d1 == n or d2 == n:
        return None, None
    if d1 == d2:
        return d1, None
    if d2 % d1 == 0:
        return d2, None
    if d1 % d2 == 0:
        return d1, None
    if d1 * d2 == n:
        return None, None
    t = lcm(d1, d2)
    note = None if t == d1 * d2 else f"lcm({d1}, {d2}) = {t} used in place of {d1 * d2}"
    return t, note


def fhat_product_law(n: int, d1: int, d2: int) -> FhatProductReport:
    logger.debug(locals())
    for name, value in (("d1", d1), ("d2", d2)):
        if value < 1 or n % value != 0:
            raise InvalidParameterError(name, value, f"must divide n={n}")
    t, note = predict_fhat_product(n, d1, d2)
    orbits = enumerate_orbits(n)
    left = [o.rep for o in orbits if o.period == d1]
    right = [o.rep for o in orbits if o.period == d2]
    periods: set[int] = set()
    witness = None
    for x in left:
        for y in right:
            for k in range(d2):
                z = product(x, shift(y, k))
                period = smallest_period(z)
                periods.add(period)
                inside = period in (1, n) if t is None else t % period == 0
                if not inside and witness is None:
                    witness = (str(x), str(shift(y, k)), str(z))
    predicted = "F" if t is None else f"F^_{t}"
    return FhatProductReport(
        n=n,
        d1=d1,
        d2=d2,
        predicted=predicted,
        holds=witness is None,
        observed_periods=sorted(periods),
        witness=witness,
        note=note,
    )


@dataclass
class DimensionReport:
    enumerated: int
    formula: Optional[int]
    notes: list[str] = field(default_factory=list)

    @property
    def match(self) -> bool:
        return self.formula == self.enumerated

    @property
    def delta(self) -> Optional[int]:
        return None if self.formula is None else self.formula - self.enumerated

    def to_dict(self) -> dict[str, Any]:
        return {
            "enumerated": self.enumerated,
            "formula": self.formula,
            "match": self.match,
            "delta": self.delta,
            "notes": self.notes,
        }


def dim_SC_prime(p: int) -> int:
    if p == 2 or not isprime(p):
        raise InvalidParameterError("p", p, "must be an odd prime")
    return (2**p + 2 * p - 2) // p


def _binom(top: Fraction, bottom: Fraction) -> int:
    # zero outside the integral, non-negative range
    if top.denominator != 1 or bottom.denominator != 1:
        return 0
    top_int, bottom_int = int(top), int(bottom)
    if top_int < 0 or bottom_int < 0 or bottom_int > top_int:
        return 0
    return comb(top_int, bottom_int)


def prime_power_formula(p: int, m: int) -> Fraction:
    """
    Orbit-count closed form for period p^m, evaluated term by term.

    The weight-one orbit is included in the first sum (a >= 1).
    """
    P = Fraction(p)
    n = p**m
    total = Fraction(2)
    total += Fraction(sum(comb(n, a) for a in range(1, n) if gcd(a, n) == 1), n)
    for i in range(1, m + 1):
        scale = P ** (m - i + 1)
        upper = p ** (m - i) - 1
        inner = sum(
            _binom(P ** (m - i + 1), Fraction(a * p)) - _binom(P ** (m - i), Fraction(a))
            for a in range(1, upper + 1)
            if a % p != 0
        )
        total += Fraction(inner) / scale
    for i in range(1, m + 1):
        scale = P ** (m - i + 1)
        inner = 0
        for k in range(2, m - i + 1):
            for a in range(1, p):
                inner += _binom(P ** (m - i + 1), a * P ** (k - i + 1))
                inner -= sum(
                    _binom(P ** (m - j - i), a * P ** (k - j - i)) for j in range(1, k + 1)
                )
        total += Fraction(inner) / scale
    return total


def dim_SC_prime_power(p: int, m: int) -> DimensionReport:
    logger.debug(locals())
    if p == 2 or not isprime(p):
        raise InvalidParameterError("p", p, "must be an odd prime")
    if m < 1:
        raise InvalidParameterError("m", m, "exponent must be at least 1")
    enumerated = necklace_count(p**m)
    value = prime_power_formula(p, m)
    notes = []
    formula: Optional[int] = None
    if value.denominator == 1:
        formula = int(value)
    else:
        notes.append(f"closed form is not integral: {value}")
    if formula != enumerated:
        notes.append(f"closed form {value} differs from orbit count {enumerated}")
        logger.info("prime power (%s, %s): %s", p, m, notes[-1])
    return DimensionReport(enumerated, formula, notes)


@dataclass(frozen=True)
class DecimationClass:
    """
    Circulant orbits closed under every coprime decimation

    Attributes
        rep     least orbit representative of the class
        orbits  member orbits, sorted by representative
    """

    rep: BinarySequence
    orbits: tuple[CirculantOrbit, ...]

    @property
    def size(self) -> int:
        return sum(o.size for o in self.orbits)


class _UnionFind:
    def __init__(self, items) -> None:
        self.parent = {x: x for x in items}

    def find(self, x):
        root = self.parent[x]
        if self.parent[root] != root:
            root = self.parent[x] = self.find(root)
        return root

    def union(self, x, y) -> None:
        x, y = self.find(x), self.find(y)
        if x != y:
            # keep the lexicographically least representative as root
            if y < x:
                x, y = y, x
            self.parent[y] = x


def units(n: int) -> list[int]:
    return [r for r in range(1, n + 1) if gcd(r, n) == 1] if n > 1 else [1]


def decimation_classes(n: int) -> list[DecimationClass]:
    logger.debug(locals())
    orbits = {str(o.rep): o for o in enumerate_orbits(n)}
    uf = _UnionFind(orbits)
    for key, orbit in orbits.items():
        for r in units(n):
            uf.union(key, str(canonical_rotation(decimate(orbit.rep, r))))
    grouped: dict[str, list[CirculantOrbit]] = {}
    for key, orbit in orbits.items():
        grouped.setdefault(uf.find(key), []).append(orbit)
    return [
        DecimationClass(parse(root), tuple(sorted(members, key=lambda o: str(o.rep))))
        for root, members in sorted(grouped.items())
    ]


def _affine_cycles(n: int, r: int, i: int) -> int:
    """Number of cycles of j -> r*j + i on Z_n."""
    seen = [False] * n
    cycles = 0
    for start in range(n):
        if seen[start]:
            continue
        cycles += 1
        j = start
        while not seen[j]:
            seen[j] = True
            j = (r * j + i) % n
    return cycles


def affine_burnside(n: int) -> int:
    """Number of sequence classes under j -> r*j + i, counted by Burnside's lemma."""
    group = units(n)
    total = sum(2 ** _affine_cycles(n, r, i) for r in group for i in range(n))
    return total // (n * len(group))


def decimated_formula(n: int) -> Fraction:
    """
    Printed closed form for the decimation class count, with the exponent
    read as the cycle count of j -> k*j + i and k running over 1..n-1.

    At n = 1 the k range is empty and the form gives 0.
    """
    if n < 1:
        raise InvalidParameterError("n", n, "period must be positive")
    total = sum(
        2 ** _affine_cycles(n, k, i)
        for i in range(n)
        for k in range(1, n)
        if gcd(k, n) == 1
    )
    return Fraction(total, n * int(totient(n)))


def dim_SD(n: int) -> DimensionReport:
    """
    Decimation class count against the printed closed form. The Burnside
    count over all of U(Z_n) is kept in the notes.
    """
    logger.debug(locals())
    enumerated = len(decimation_classes(n))
    value = decimated_formula(n)
    burnside = affine_burnside(n)
    notes = [f"burnside count {burnside}"]
    formula: Optional[int] = None
    if value.denominator == 1:
        formula = int(value)
    else:
        notes.append(f"closed form is not integral: {value}")
    if formula != enumerated:
        notes.append(f"closed form {value} differs from class count {enumerated}")
        logger.info("decimated n=%s: %s", n, notes[-1])
    return DimensionReport(enumerated, formula, notes)


@dataclass(frozen=True)
class AlternatingComposition:
    """
    P interleaved with Q, (p_1, q_1, ..., p_r, q_r)

    Attributes
        P   composition of the '+' runs
        Q   composition of the '-' runs
    """

    P: tuple[int, ...]
    Q: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.P) != len(self.Q):
            raise InvalidParameterError(
                "Q", self.Q, f"has {len(self.Q)} parts but P has {len(self.P)}"
            )
        if not self.P or any(part < 1 for part in self.P + self.Q):
            raise InvalidParameterError("P", self.P, "parts must be positive")

    @property
    def r(self) -> int:
        return len(self.P)

    @property
    def interleaved(self) -> tuple[int, ...]:
        return tuple(part for pair in zip(self.P, self.Q) for part in pair)

    def cbar_action(self, t: int) -> "AlternatingComposition":
        """Rotates the interleaved vector left by t places."""
        vector = self.interleaved
        t %= len(vector)
        rotated = vector[t:] + vector[:t]
        return AlternatingComposition(rotated[0::2], rotated[1::2])

    def to_sequence(self) -> BinarySequence:
        text = "".join(
            ("+" if i % 2 == 0 else "-") * part for i, part in enumerate(self.interleaved)
        )
        return parse(text)


def alternating_product(P, Q) -> AlternatingComposition:
    return AlternatingComposition(tuple(P), tuple(Q))


def cbar_action(composition: AlternatingComposition, t: int) -> AlternatingComposition:
    return composition.cbar_action(t)


def composition_shift(parts: tuple[int, ...], i: int) -> tuple[int, ...]:
    i %= len(parts)
    return parts[i:] + parts[:i]


def partitioned_form(x: BinarySequence) -> AlternatingComposition:
    """Splits the cyclic run vector into '+' runs P and '-' runs Q, starting at a '+' run."""
    runs = cyclic_run_vector(x)
    lengths = runs.lengths
    if runs.first < 0:
        lengths = lengths[1:] + lengths[:1]
    return AlternatingComposition(lengths[0::2], lengths[1::2])


@dataclass(frozen=True)
class CompleteSet:
    """
    Weight classes of a complete set for G_n(a)

    Attributes
        n           period
        a           target product weight
        interval    weight interval [(n - a)/2, (n + a)/2], rounded inward
        weights     member weight classes, one parity class of the interval
    """

    n: int
    a: int
    interval: tuple[int, int]
    weights: tuple[int, ...]


def complete_SH_set(n: int, a: int) -> CompleteSet:
    """
    Complete set for G_n(a): every other weight from (n - a)/2 to (n + a)/2.

    A product of weights i and j has the parity of n - i - j, so no square
    reaches a when n - a is odd; the set is then empty and vacuously complete.
    For a <= n/2 the other parity class of the interval is complete as well,
    e.g. (8, 2) gives (3, 5) and (4,) also passes verify_complete_set. For
    a > n/2 the end weights (n - a)/2 and (n + a)/2 multiply to weights of at
    most n - a < a, so verify_complete_set rejects the result.
    """
    if not 0 <= a < n:
        raise InvalidParameterError("a", a, f"must satisfy 0 <= a < n={n}")
    interval = ((n - a + 1) // 2, (n + a) // 2)
    if (n - a) % 2:
        return CompleteSet(n, a, interval, ())
    return CompleteSet(n, a, interval, tuple(range(interval[0], interval[1] + 1, 2)))


def verify_complete_set(complete: CompleteSet) -> bool:
    """Brute-force check of both defining conditions."""
    n, a = complete.n, complete.a
    members = set(complete.weights)
    for i in members:
        for j in members:
            if a not in product_weights(n, i, j):
                return False
    for b in range(n + 1):
        if b in members:
            continue
        if a in product_weights(n, b, b) and all(
            a in product_weights(n, b, k) for k in members
        ):
            return False
    return True


class DimensionVerifier(Verifier):
    """
    Checks orbit-count closed forms against enumeration

    Attributes
        primes      primes for the prime-period count
        max_n       largest period for decimation class counts
    """

    name = "dimension"

    def __init__(self, primes: tuple[int, ...] = (3, 5, 7, 11, 13), max_n: int = 13) -> None:
        self.primes = primes
        self.max_n = max_n

    def run(self) -> VerificationReport:
        logger.debug(locals())
        details: dict[str, Any] = {"prime": {}, "decimated": {}, "prime_power": {}}
        findings = []
        passed = True
        for p in self.primes:
            enumerated = len(enumerate_orbits(p))
            report = DimensionReport(enumerated, dim_SC_prime(p))
            details["prime"][p] = report.to_dict()
            passed &= report.match
        for n in range(1, self.max_n + 1):
            report = dim_SD(n)
            details["decimated"][n] = report.to_dict()
            passed &= report.enumerated == affine_burnside(n)
            if not report.match:
                findings.append(
                    f"decimated closed form at n={n}: {report.formula} vs {report.enumerated}"
                )
        for p, m in ((3, 1), (5, 1), (3, 2), (5, 2), (3, 3)):
            report = dim_SC_prime_power(p, m)
            details["prime_power"][f"{p}^{m}"] = report.to_dict()
            if not report.match:
                findings.append(
                    f"prime power closed form at {p}^{m}: {report.formula} vs {report.enumerated}"
                )
        return VerificationReport(self.name, passed, details, findings)


class ProductLawVerifier(Verifier):
    """
    Checks the Hamming product closed form against brute force and reports
    closure laws of the orbit classes

    Attributes
        max_n       largest period checked
    """

    name = "product_law"

    def __init__(self, max_n: int = 8) -> None:
        self.max_n = max_n

    def run(self) -> VerificationReport:
        logger.debug(locals())
        mismatches = []
        for n in range(1, self.max_n + 1):
            table = product_weight_table(n)
            for a in range(n + 1):
                for b in range(n + 1):
                    if hamming_product(n, a, b) != table[(a, b)]:
                        mismatches.append({"n": n, "a": a, "b": b})
        findings = []
        closure = {}
        for n in range(2, 10):
            report = free_closure(n)
            closure[n] = report.to_dict()
            if not report.closed and n % 2 == 1:
                findings.append(f"free orbits not closed at odd n={n}: {report.witness}")
        laws = []
        for n in (4, 6, 8, 9):
            for d1 in divisors(n):
                for d2 in divisors(n):
                    if d1 > d2 or d1 == 1:
                        continue
                    report = fhat_product_law(n, int(d1), int(d2))
                    laws.append(report.to_dict())
                    if not report.holds:
                        findings.append(
                            f"F^_{d1} * F^_{d2} at n={n} leaves {report.predicted}: {report.witness}"
                        )
        return VerificationReport(
            self.name,
            not mismatches,
            {"mismatches": mismatches, "free_closure": closure, "fhat_laws": laws},
            findings,
        )
