# SPDX-License-Identifier: Apache-2.0
"""
Families of periodic compatible sequences: q circulant orbits whose
off-peak autocorrelations add up to one constant c.
"""

# Standard
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Any, Iterable, Optional
import json

# Third Party
from pandas import DataFrame
from sympy import isprime
from tqdm import tqdm
import numpy as np

# Local
from .config import SearchConfig, resolve_shards
from .exceptions import (
    InvalidParameterError,
    MixedPeriodError,
    SearchLimitError,
)
from .logger_config import setup_logger
from .runstruct import family_run_profile
from .schur import canonical_rotation, enumerate_orbits
from .seqcore import (
    BinarySequence,
    all_sequences,
    autocorrelation,
    autocorrelation_at,
    decimate,
    negate,
    parse,
    reverse,
)
from .verifier import VerificationReport, Verifier

logger = setup_logger(__name__)

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_CATALOG_PATH = DATA_DIR / "golden_catalog.json"

EquivalenceKey = tuple[str, ...]


@dataclass(frozen=True)
class PComSFamily:
    """
    q sequences of period n whose off-peak autocorrelations sum to c

    Attributes
        n           common period
        c           constant off-peak autocorrelation sum
        members     the q member sequences (orbit representatives)
    """

    n: int
    c: int
    members: tuple[BinarySequence, ...]

    @property
    def q(self) -> int:
        return len(self.members)

    @property
    def key(self) -> EquivalenceKey:
        return canonical_key(self.members)

    def to_list(self) -> list[str]:
        return [str(x) for x in self.members]

    def __str__(self) -> str:
        return f"PComS({self.n},{self.q},{self.c}) = {{{', '.join(self.to_list())}}}"


def family_from_strings(texts: Iterable[str], c: Optional[int] = None) -> PComSFamily:
    """Parses members; c defaults to the observed sum at shift 1."""
    members = tuple(parse(text) for text in texts)
    _require_common_period(members)
    if c is None:
        c = family_sum(members)[0] if members[0].n > 1 else 0
    return PComSFamily(members[0].n, c, members)


def _require_common_period(members) -> int:
    if not members:
        raise InvalidParameterError("members", members, "family is empty")
    periods = {x.n for x in members}
    if len(periods) > 1:
        raise MixedPeriodError([x.n for x in members])
    return members[0].n


def family_sum(members: Iterable[BinarySequence]) -> tuple[int, ...]:
    """Sum of P(k) over the members, for k = 1..n-1."""
    members = tuple(members)
    n = _require_common_period(members)
    return tuple(sum(autocorrelation_at(x, k) for x in members) for k in range(1, n))


def is_pcoms(members: Iterable[BinarySequence]) -> tuple[bool, Optional[int]]:
    sums = family_sum(members)
    if not sums:
        raise InvalidParameterError("n", 1, "families need period at least 2")
    if len(set(sums)) == 1:
        return True, sums[0]
    return False, None


def member_key(x: BinarySequence) -> str:
    """Least orbit representative over negation and reversal."""
    return min(
        str(canonical_rotation(y)) for y in (x, negate(x), reverse(x), negate(reverse(x)))
    )


def canonical_key(members: Iterable[BinarySequence]) -> EquivalenceKey:
    return tuple(sorted(member_key(x) for x in members))


def reduced_vector(x: BinarySequence) -> tuple[int, ...]:
    """(P(2) - P(1), ..., P(h) - P(1)) with h = n // 2; a family is compatible iff these sum to zero."""
    h = x.n // 2
    first = autocorrelation_at(x, 1)
    return tuple(autocorrelation_at(x, k) - first for k in range(2, h + 1))


def is_trivial(members: Iterable[BinarySequence]) -> bool:
    """
    True when some proper, nonempty sub-multiset is itself a compatible family.

    Every split is tested, not only splits into previously catalogued families.
    """
    vectors = [reduced_vector(x) for x in members]
    q = len(vectors)
    for size in range(1, q):
        for subset in combinations(range(q), size):
            if all(sum(vectors[i][j] for i in subset) == 0 for j in range(len(vectors[0]))):
                return True
    return False


def trivial_family_Gn1(n: int) -> list[PComSFamily]:
    if n < 2:
        raise InvalidParameterError("n", n, "must be at least 2")
    x = BinarySequence(n, 1)
    return [PComSFamily(n, n - 4, (x,))]


def verify_trivial_family_Gn1(n: int) -> bool:
    """Single sequences with off-peak value n - 4 are exactly weights 1 and n - 1."""
    x = trivial_family_Gn1(n)[0].members[0]
    if autocorrelation(x).two_level != n - 4:
        return False
    for y in all_sequences(n):
        if y.is_constant:
            continue
        single = autocorrelation(y).two_level == n - 4
        if single != (y.weight in (1, n - 1)):
            return False
    return True


def prime_decimation_family(
    p: int, a: int, x: Optional[BinarySequence] = None
) -> PComSFamily:
    """
    The (p - 1)/2 decimations of a weight-a sequence of prime period p.

    x defaults to a '+' symbols followed by p - a '-' symbols.
    """
    if p == 2 or not isprime(p):
        raise InvalidParameterError("p", p, "must be an odd prime")
    if not 1 < a < p:
        raise InvalidParameterError("a", a, f"must satisfy 1 < a < {p}")
    if x is None:
        x = BinarySequence(p, (1 << a) - 1)
    elif x.n != p or x.weight != a:
        raise InvalidParameterError("x", str(x), f"must have period {p} and weight {a}")
    members = tuple(decimate(x, r) for r in range(1, (p - 1) // 2 + 1))
    c = 2 * a * (a - p) + p * (p - 1) // 2
    return PComSFamily(p, c, members)


def compose(first: PComSFamily, second: PComSFamily) -> PComSFamily:
    if first.n != second.n:
        raise MixedPeriodError([first.n, second.n])
    return PComSFamily(first.n, first.c + second.c, first.members + second.members)


def containing_complete_set(family: PComSFamily) -> tuple[int, int]:
    """Weight window [(nq - c)/4, (3nq + c)/4] of the concatenated family."""
    nq = family.n * family.q
    if (nq - family.c) % 4 != 0:
        raise InvalidParameterError("c", family.c, f"nq - c must be divisible by 4 (nq={nq})")
    return (nq - family.c) // 4, (3 * nq + family.c) // 4


@dataclass
class CatalogEntry:
    q: int
    c: int
    families: list[PComSFamily] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "q": self.q,
            "c": self.c,
            "families": [f.to_list() for f in self.families],
        }


@dataclass
class Catalog:
    """
    Non-equivalent families for one period, grouped by (q, c)

    Attributes
        n           period
        entries     (q, c) groups sorted by q then c
        source      provenance, "search" or "golden"
        distinct    True when members were restricted to distinct orbits
    """

    n: int
    entries: list[CatalogEntry] = field(default_factory=list)
    source: str = "search"
    distinct: bool = False

    @classmethod
    def from_families(
        cls,
        n: int,
        families: Iterable[PComSFamily],
        source: str = "search",
        distinct: bool = False,
    ) -> "Catalog":
        grouped: dict[tuple[int, int], list[PComSFamily]] = {}
        for family in families:
            grouped.setdefault((family.q, family.c), []).append(family)
        entries = [
            CatalogEntry(q, c, sorted(group, key=lambda f: (f.key, f.to_list())))
            for (q, c), group in sorted(grouped.items())
        ]
        return cls(n, entries, source, distinct)

    @classmethod
    def from_dict(cls, data: dict[str, Any], source: str = "golden") -> "Catalog":
        families = [
            family_from_strings(texts, entry["c"])
            for entry in data["entries"]
            for texts in entry["families"]
        ]
        return cls.from_families(data["n"], families, source)

    @property
    def families(self) -> list[PComSFamily]:
        return [f for entry in self.entries for f in entry.families]

    def keys(self) -> set[EquivalenceKey]:
        return {f.key for f in self.families}

    def to_dict(self) -> dict[str, Any]:
        return {"n": self.n, "entries": [e.to_dict() for e in self.entries]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_frame(self) -> DataFrame:
        return DataFrame(
            [
                {"n": self.n, "q": f.q, "c": f.c, "family": " ".join(f.to_list())}
                for f in self.families
            ],
            columns=["n", "q", "c", "family"],
        )


def load_golden(n: int, path: Path = GOLDEN_CATALOG_PATH) -> Catalog:
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    if str(n) not in data:
        raise InvalidParameterError("n", n, f"no golden catalog (have {sorted(data, key=int)})")
    return Catalog.from_dict({"n": n, **data[str(n)]})


def golden_periods(path: Path = GOLDEN_CATALOG_PATH) -> list[int]:
    with open(path, encoding="utf-8") as f:
        return sorted(int(n) for n in json.load(f))


def _within_alphabet(family: PComSFamily) -> bool:
    # members mapped to weight <= n/2 must be distinct orbits
    reps = []
    for x in family.members:
        y = negate(x) if x.weight > x.n // 2 else x
        reps.append(str(canonical_rotation(y)))
    return len(reps) == len(set(reps))


DIFF_STATUSES = ("missing", "surplus", "invalid_golden", "trivial_golden", "outside_golden")


@dataclass
class CatalogDiff:
    """
    Structured comparison of a searched catalog with the golden one

    Attributes
        n               period
        missing         valid, nontrivial golden families that the search did not produce
        surplus         searched families with no golden counterpart
        invalid_golden  golden families whose sums are not constant or not equal to the listed c
        trivial_golden  golden families that split into smaller compatible families
        outside_golden  golden families that repeat an orbit while the search used distinct orbits
    """

    n: int
    missing: list[PComSFamily] = field(default_factory=list)
    surplus: list[PComSFamily] = field(default_factory=list)
    invalid_golden: list[PComSFamily] = field(default_factory=list)
    trivial_golden: list[PComSFamily] = field(default_factory=list)
    outside_golden: list[PComSFamily] = field(default_factory=list)

    @property
    def matches(self) -> bool:
        return not any(self.counts().values())

    def counts(self) -> dict[str, int]:
        return {status: len(getattr(self, status)) for status in DIFF_STATUSES}

    def summary(self) -> str:
        return ", ".join(f"{status}={count}" for status, count in self.counts().items() if count)

    def to_frame(self) -> DataFrame:
        rows = []
        for status in DIFF_STATUSES:
            for family in getattr(self, status):
                rows.append(
                    {
                        "status": status,
                        "q": family.q,
                        "c": family.c,
                        "family": " ".join(family.to_list()),
                    }
                )
        return DataFrame(rows, columns=["status", "q", "c", "family"])

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "matches": self.matches,
            "counts": self.counts(),
            "rows": self.to_frame().to_dict(orient="records"),
        }


def catalog_diff(found: Catalog, golden: Catalog) -> CatalogDiff:
    diff = CatalogDiff(found.n)
    found_keys = found.keys()
    golden_keys = set()
    for family in golden.families:
        golden_keys.add(family.key)
        valid, c = is_pcoms(family.members)
        if not valid or c != family.c:
            diff.invalid_golden.append(family)
        elif family.key in found_keys:
            continue
        elif family.q > 1 and is_trivial(family.members):
            diff.trivial_golden.append(family)
        elif found.distinct and not _within_alphabet(family):
            diff.outside_golden.append(family)
        else:
            diff.missing.append(family)
    diff.surplus = [f for f in found.families if f.key not in golden_keys]
    return diff


@dataclass(frozen=True)
class _Alphabet:
    n: int
    reps: tuple[BinarySequence, ...]
    # reduced vectors divided by 4; off-peak values of one sequence agree mod 4
    vectors: tuple[tuple[int, ...], ...]
    two_level: tuple[BinarySequence, ...]


def _build_alphabet(n: int) -> _Alphabet:
    reps = []
    vectors = []
    two_level = []
    for orbit in enumerate_orbits(n):
        if not 1 <= orbit.rep.weight <= n // 2:
            continue
        vector = reduced_vector(orbit.rep)
        if any(vector):
            reps.append(orbit.rep)
            vectors.append(tuple(v // 4 for v in vector))
        else:
            two_level.append(orbit.rep)
    return _Alphabet(n, tuple(reps), tuple(vectors), tuple(two_level))


def estimate_cost(alphabet_size: int, q_max: int, allow_repeats: bool = False) -> int:
    if allow_repeats:
        return sum(comb(alphabet_size + k - 1, k) for k in range(1, q_max + 1))
    return sum(comb(alphabet_size, k) for k in range(1, q_max + 1))


def _encode(vector, base: int) -> int:
    return sum(int(v) * base**i for i, v in enumerate(vector))


# dense completion tables are used while they stay below this many cells
DENSE_TABLE_CELLS = 50_000_000


class _DenseCompletion:
    """
    table[s][x] is the fewest alphabet entries from index s onwards summing to x,
    or `limit + 1` when no selection of at most `limit` entries does.
    """

    def __init__(self, vectors, limit: int, allow_repeats: bool) -> None:
        dims = len(vectors[0])
        self.limit = limit
        self.radius = [limit * max(abs(v[j]) for v in vectors) for j in range(dims)]
        shape = tuple(2 * r + 1 for r in self.radius)
        unreachable = limit + 1
        table = np.full(shape, unreachable, dtype=np.int16)
        table[tuple(self.radius)] = 0
        tables = [table]
        for v in reversed(vectors):
            current = np.minimum(tables[-1], self._shifted(tables[-1], v) + 1)
            if allow_repeats:
                while True:
                    extended = np.minimum(current, self._shifted(current, v) + 1)
                    if np.array_equal(extended, current):
                        break
                    current = extended
            tables.append(np.minimum(current, unreachable))
        tables.reverse()
        self.tables = tables

    @staticmethod
    def cells(vectors, limit: int) -> int:
        dims = len(vectors[0])
        total = len(vectors) + 1
        for j in range(dims):
            total *= 2 * limit * max(abs(v[j]) for v in vectors) + 1
        return total

    def _shifted(self, table: np.ndarray, v) -> np.ndarray:
        out = np.full_like(table, self.limit + 1)
        dst = []
        src = []
        for j, step in enumerate(v):
            size = table.shape[j]
            if step >= 0:
                dst.append(slice(step, size))
                src.append(slice(0, size - step))
            else:
                dst.append(slice(0, size + step))
                src.append(slice(-step, size))
        out[tuple(dst)] = table[tuple(src)]
        return out

    def reachable(self, start: int, target, remaining: int) -> bool:
        index = []
        for t, r in zip(target, self.radius):
            if not -r <= t <= r:
                return False
            index.append(t + r)
        return int(self.tables[start][tuple(index)]) <= remaining


class _SparseCompletion:
    """Exact subset-sum sets up to a small depth, a coordinate box beyond it."""

    def __init__(self, vectors, encoded, limit: int, allow_repeats: bool) -> None:
        size = len(vectors)
        dims = len(vectors[0])
        self.depth = min(limit, 3 if size <= 64 else 2)
        reach = [[{0}] + [set() for _ in range(self.depth)] for _ in range(size + 1)]
        for s in range(size - 1, -1, -1):
            for k in range(1, self.depth + 1):
                table = set(reach[s + 1][k])
                source = reach[s][k - 1] if allow_repeats else reach[s + 1][k - 1]
                table.update(encoded[s] + y for y in source)
                reach[s][k] = table
        self.reach = reach
        self.encoded = encoded
        self.boxes = []
        for s in range(size + 1):
            tail = vectors[s:] or [(0,) * dims]
            self.boxes.append(
                (
                    [min(min(v[j] for v in tail), 0) for j in range(dims)],
                    [max(max(v[j] for v in tail), 0) for j in range(dims)],
                )
            )

    def reachable(self, start: int, target, remaining: int, base: int) -> bool:
        if remaining <= self.depth:
            target_enc = _encode(target, base)
            return any(target_enc in self.reach[start][k] for k in range(1, remaining + 1))
        lows, highs = self.boxes[start]
        return all(
            remaining * low <= t <= remaining * high
            for t, low, high in zip(target, lows, highs)
        )


def _search_roots(
    vectors: tuple[tuple[int, ...], ...],
    base: int,
    q_max: int,
    roots: list[int],
    max_nodes: int,
    allow_repeats: bool,
) -> tuple[list[tuple[int, ...]], int, bool]:
    """
    Depth-first search for minimal zero-sum selections starting at the given roots.

    The partial selection is kept zero-sum free by tracking all of its subset
    sums; a branch is entered only when the tail can still cancel its total.
    Returns (selections as index tuples, nodes visited, whether the node cap was hit).
    """
    size = len(vectors)
    found: list[tuple[int, ...]] = []
    if size == 0 or q_max < 2:
        return found, 0, False
    encoded = [_encode(v, base) for v in vectors]
    limit = q_max - 1
    completion: _DenseCompletion | _SparseCompletion
    if _DenseCompletion.cells(vectors, limit) <= DENSE_TABLE_CELLS:
        completion = _DenseCompletion(vectors, limit, allow_repeats)

        def reachable(start: int, total: list[int], remaining: int) -> bool:
            return start < size and completion.reachable(
                start, [-t for t in total], remaining
            )
    else:
        completion = _SparseCompletion(vectors, encoded, limit, allow_repeats)
        logger.debug("completion tables too large, pruning with coordinate boxes")

        def reachable(start: int, total: list[int], remaining: int) -> bool:
            return start < size and completion.reachable(
                start, [-t for t in total], remaining, base
            )

    nodes = 0

    class _NodeLimit(Exception):
        pass

    def visit(start: int, chosen: tuple[int, ...], total: list[int], total_enc: int, sums: set[int]) -> None:
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise _NodeLimit
        remaining = q_max - len(chosen)
        for j in range(start, size):
            x_enc = encoded[j]
            new_enc = total_enc + x_enc
            if new_enc == 0:
                found.append(chosen + (j,))
                continue
            # a proper subset would already cancel x
            if -x_enc in sums or remaining == 1:
                continue
            next_start = j if allow_repeats else j + 1
            new_total = [t + v for t, v in zip(total, vectors[j])]
            if not reachable(next_start, new_total, remaining - 1):
                continue
            new_sums = sums | {s + x_enc for s in sums}
            new_sums.add(x_enc)
            visit(next_start, chosen + (j,), new_total, new_enc, new_sums)

    try:
        for root in roots:
            next_start = root if allow_repeats else root + 1
            total = list(vectors[root])
            if reachable(next_start, total, q_max - 1):
                visit(next_start, (root,), total, encoded[root], {encoded[root]})
    except _NodeLimit:
        return found, nodes, True
    return found, nodes, False


def search(n: int, q_max: int, config: Optional[SearchConfig] = None) -> Catalog:
    """
    All nontrivial, non-equivalent families of period n with at most q_max members.

    Members are circulant orbits of weight 1..n//2 and may repeat; with
    config.allow_repeats unset they are distinct orbits.
    """
    logger.debug(locals())
    config = config or SearchConfig.from_env()
    if n < 2:
        raise InvalidParameterError("n", n, "must be at least 2")
    if q_max < 1:
        raise InvalidParameterError("q_max", q_max, "must be at least 1")
    alphabet = _build_alphabet(n)
    estimate = estimate_cost(len(alphabet.reps), q_max, config.allow_repeats)
    if n > config.n_limit or q_max > config.q_limit:
        raise SearchLimitError(
            n, q_max, estimate, f"n <= {config.n_limit}, q_max <= {config.q_limit}"
        )

    spread = max((abs(v) for vec in alphabet.vectors for v in vec), default=0)
    base = 2 * q_max * spread + 1
    shards = min(resolve_shards(config.shards), max(len(alphabet.reps), 1))
    shard_roots = [list(range(i, len(alphabet.reps), shards)) for i in range(shards)]
    selections: list[tuple[int, ...]] = []
    total_nodes = 0
    args = (alphabet.vectors, base, q_max)
    if shards == 1:
        results = [
            _search_roots(*args, shard_roots[0], config.max_nodes, config.allow_repeats)
        ]
    else:
        results = []
        with ProcessPoolExecutor(max_workers=shards) as executor:
            futures = [
                executor.submit(
                    _search_roots, *args, roots, config.max_nodes, config.allow_repeats
                )
                for roots in shard_roots
            ]
            for future in tqdm(as_completed(futures), total=len(futures)):
                results.append(future.result())
    for found, nodes, capped in results:
        if capped:
            raise SearchLimitError(n, q_max, estimate, config.max_nodes)
        selections.extend(found)
        total_nodes += nodes
    if total_nodes > config.max_nodes:
        raise SearchLimitError(n, q_max, total_nodes, config.max_nodes)
    logger.debug("search n=%s q_max=%s visited %s nodes", n, q_max, total_nodes)

    by_key: dict[EquivalenceKey, PComSFamily] = {}
    candidates = [
        PComSFamily(n, autocorrelation_at(x, 1), (x,)) for x in alphabet.two_level
    ]
    for selection in sorted(selections):
        members = tuple(sorted((alphabet.reps[i] for i in selection), key=str))
        candidates.append(PComSFamily(n, family_sum(members)[0], members))
    for family in candidates:
        known = by_key.get(family.key)
        if known is None or family.to_list() < known.to_list():
            by_key[family.key] = family
    return Catalog.from_families(n, by_key.values(), distinct=not config.allow_repeats)


class CatalogVerifier(Verifier):
    """
    Searches each period and compares the result with the golden catalogs

    Differences from a golden catalog are reported with per-status counts
    under details[n]["discrepancy"]; they fail the run only with strict_paper.

    Attributes
        periods         periods to search
        q_max           largest family size
        strict_paper    fail on any difference from the golden catalogs
        config          search configuration
    """

    name = "catalog"

    def __init__(
        self,
        periods: Optional[Iterable[int]] = None,
        q_max: int = 12,
        strict_paper: bool = False,
        config: Optional[SearchConfig] = None,
    ) -> None:
        self.periods = list(periods) if periods is not None else golden_periods()
        self.q_max = q_max
        self.strict_paper = strict_paper
        self.config = config

    def run(self) -> VerificationReport:
        logger.debug(locals())
        details: dict[str, Any] = {}
        findings = []
        passed = True
        for n in self.periods:
            found = search(n, self.q_max, self.config)
            diff = catalog_diff(found, load_golden(n))
            details[str(n)] = {
                "catalog": found.to_dict(),
                "diff": diff.to_dict(),
                "discrepancy": diff.counts(),
            }
            for family in found.families:
                valid, c = is_pcoms(family.members)
                profile = family_run_profile(family.members, family.c)
                if not valid or c != family.c or not profile.passed:
                    passed = False
                    findings.append(f"searched family fails its own checks: {family}")
                if (n * family.q - family.c) % 4 != 0:
                    passed = False
                    findings.append(f"c is not congruent to nq mod 4: {family}")
            if not diff.matches:
                findings.append(f"n={n} differs from the golden catalog: {diff.summary()}")
                logger.warning("catalog for n=%s differs from golden: %s", n, diff.summary())
                if self.strict_paper:
                    passed = False
        return VerificationReport(self.name, passed, details, findings)


class DecimationFamilyVerifier(Verifier):
    """
    Builds the decimation family for every prime and weight and checks its sum

    Attributes
        primes      odd primes to sweep
    """

    name = "decimation_family"

    def __init__(self, primes: tuple[int, ...] = (5, 7, 11, 13)) -> None:
        self.primes = primes

    def run(self) -> VerificationReport:
        logger.debug(locals())
        failures = []
        checked = 0
        for p in self.primes:
            for a in range(2, p):
                family = prime_decimation_family(p, a)
                valid, c = is_pcoms(family.members)
                checked += 1
                if not valid or c != family.c:
                    failures.append({"p": p, "a": a, "expected": family.c, "observed": c})
        return VerificationReport(
            self.name,
            not failures,
            {"checked": checked, "failures": failures},
            [f"decimation family p={f['p']}, a={f['a']} fails" for f in failures],
        )
