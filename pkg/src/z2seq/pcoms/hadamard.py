# SPDX-License-Identifier: Apache-2.0
"""
+/- matrices built from circulants of sequences, and exact Gram checks.
"""

# Standard
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence
import json

# Third Party
import numpy as np

# Local
from .bounds import two_level_scan
from .config import SearchConfig
from .exceptions import (
    InvalidParameterError,
    MatrixFormatError,
    MixedPeriodError,
    NotCompatibleError,
    PComsError,
)
from .families import (
    DATA_DIR,
    PComSFamily,
    family_from_strings,
    golden_periods,
    is_pcoms,
    load_golden,
    search,
)
from .logger_config import setup_logger
from .schur import enumerate_orbits
from .seqcore import BinarySequence, autocorrelation_at, negate, parse, shift
from .verifier import VerificationReport, Verifier

logger = setup_logger(__name__)

PARTIAL_HADAMARD_PATH = DATA_DIR / "partial_hadamard.json"


@dataclass(frozen=True, eq=False)
class PMMatrix:
    """
    A matrix with entries +1 and -1

    Attributes
        data    int64 array of shape (rows, cols)
    """

    data: np.ndarray

    def __post_init__(self) -> None:
        if self.data.ndim != 2:
            raise InvalidParameterError("data", self.data.shape, "matrix must be 2-dimensional")
        if not np.all(np.abs(self.data) == 1):
            raise InvalidParameterError("data", "entries", "every entry must be +1 or -1")

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PMMatrix) and np.array_equal(self.data, other.data)

    def to_lines(self) -> list[str]:
        return ["".join("+" if v == 1 else "-" for v in row) for row in self.data]

    def to_text(self) -> str:
        return "\n".join(self.to_lines()) + "\n"

    def to_dict(self) -> dict[str, Any]:
        return {"rows": self.rows, "cols": self.cols, "data": self.to_lines()}

    @classmethod
    def from_lines(cls, lines: Sequence[str]) -> "PMMatrix":
        rows = [parse(line).to_array() for line in lines]
        if not rows or len({len(r) for r in rows}) != 1:
            raise InvalidParameterError("lines", len(lines), "rows must be nonempty and equally long")
        return cls(np.vstack(rows))


@dataclass
class GramReport:
    """
    Result of comparing M M^t with a multiple of the identity

    Attributes
        gram            exact integer Gram matrix
        expected_scale  multiple of the identity that was required
        passed          gram equals expected_scale * I
        scale           diagonal value when gram is a scaled identity
        first_failure   (i, j, value) of the first entry that differs, row-major
    """

    gram: np.ndarray
    expected_scale: int
    passed: bool
    scale: Optional[int] = None
    first_failure: Optional[tuple[int, int, int]] = None

    @property
    def is_scaled_identity(self) -> bool:
        return self.scale is not None

    def to_dict(self) -> dict[str, Any]:
        return {
            "pass": self.passed,
            "expected_scale": self.expected_scale,
            "scale": self.scale,
            "first_failure": list(self.first_failure) if self.first_failure else None,
        }


def circulant_from(x: BinarySequence) -> PMMatrix:
    """Row i is x shifted by i, so the second row starts with the last symbol."""
    return PMMatrix(np.vstack([shift(x, i).to_array() for i in range(x.n)]))


def back_circulant_R(n: int) -> np.ndarray:
    return np.fliplr(np.eye(n, dtype=np.int64))


def gram_check(m: PMMatrix, expected_scale: Optional[int] = None) -> GramReport:
    if expected_scale is None:
        expected_scale = m.cols
    gram = m.data @ m.data.T
    expected = expected_scale * np.eye(m.rows, dtype=np.int64)
    diagonal = set(np.diag(gram).tolist())
    off_diagonal_zero = np.count_nonzero(gram - np.diag(np.diag(gram))) == 0
    scale = diagonal.pop() if off_diagonal_zero and len(diagonal) == 1 else None
    bad = np.argwhere(gram != expected)
    first = None
    if len(bad):
        i, j = (int(v) for v in bad[0])
        first = (i, j, int(gram[i, j]))
    return GramReport(gram, expected_scale, first is None, scale, first)


def order_law_holds(m: PMMatrix) -> bool:
    """A square Hadamard matrix with more than 2 rows has order divisible by 4."""
    if m.rows != m.cols or not gram_check(m).passed:
        return True
    return m.rows <= 2 or m.rows % 4 == 0


def _require_sum(members: Sequence[BinarySequence], expected: int) -> None:
    n = members[0].n
    if any(x.n != n for x in members):
        raise MixedPeriodError([x.n for x in members])
    for k in range(1, n):
        value = sum(autocorrelation_at(x, k) for x in members)
        if value != expected:
            raise NotCompatibleError(k, value, expected)


def _bordered(core: np.ndarray) -> PMMatrix:
    n = core.shape[0]
    top = np.ones((1, n + 1), dtype=np.int64)
    body = np.hstack([np.ones((n, 1), dtype=np.int64), core])
    return PMMatrix(np.vstack([top, body]))


def one_core_embed(x: BinarySequence) -> tuple[PMMatrix, int]:
    """
    Borders the circulant of x, or of its negation, with a row and column of +1.

    The polarity (+1 or -1) applied to the core is the first one whose
    bordered matrix passes gram_check, and is returned with the matrix. When
    neither does, the core is negated exactly when its row sum is +1.
    """
    core = circulant_from(x).data
    for polarity in (1, -1):
        matrix = _bordered(polarity * core)
        if gram_check(matrix).passed:
            return matrix, polarity
    polarity = -1 if int(core[0].sum()) == 1 else 1
    logger.warning("no polarity of %s gives a Hadamard matrix; using %d", x, polarity)
    return _bordered(polarity * core), polarity


def _require_odd_pair(a: BinarySequence, b: BinarySequence) -> int:
    if a.n != b.n:
        raise MixedPeriodError([a.n, b.n])
    if a.n < 3 or a.n % 2 == 0:
        raise InvalidParameterError("n", a.n, "two-core sequences need odd period at least 3")
    return a.n


def two_core_check(a: BinarySequence, b: BinarySequence) -> bool:
    n = _require_odd_pair(a, b)
    return all(autocorrelation_at(a, k) + autocorrelation_at(b, k) == -2 for k in range(1, n))


def two_core_embed(a: BinarySequence, b: BinarySequence) -> PMMatrix:
    n = _require_odd_pair(a, b)
    _require_sum((a, b), -2)
    # row sums must be -1
    a = negate(a) if a.weight > n // 2 else a
    b = negate(b) if b.weight > n // 2 else b
    am = circulant_from(a).data
    bm = circulant_from(b).data
    ones = np.ones((n, 1), dtype=np.int64)
    plus = np.ones((1, n), dtype=np.int64)
    rows = [
        np.ones((1, 2 * n + 2), dtype=np.int64),
        np.hstack([[[1, -1]], plus, -plus]),
        np.hstack([ones, ones, am, bm]),
        np.hstack([ones, -ones, bm.T, -am.T]),
    ]
    return PMMatrix(np.vstack(rows))


def gs_embed(
    a: BinarySequence, b: BinarySequence, c: BinarySequence, d: BinarySequence
) -> PMMatrix:
    members = (a, b, c, d)
    n = a.n
    if n % 2 == 0:
        raise InvalidParameterError("n", n, "Goethals-Seidel sequences need odd period")
    _require_sum(members, 0)
    am, bm, cm, dm = (circulant_from(x).data for x in members)

    def rev(block: np.ndarray) -> np.ndarray:
        # multiplication by the back-circulant identity on the right
        return block[:, ::-1]

    array = np.block(
        [
            [am, rev(bm), rev(cm), rev(dm)],
            [-rev(bm), am, rev(dm.T), -rev(cm.T)],
            [-rev(cm), -rev(dm.T), am, rev(bm.T)],
            [-rev(dm), rev(cm.T), -rev(bm.T), am],
        ]
    )
    return PMMatrix(array)


def is_skew(m: PMMatrix) -> bool:
    if m.rows != m.cols:
        return False
    return bool(np.array_equal(m.data + m.data.T, 2 * np.eye(m.rows, dtype=np.int64)))


def is_skew_sequence(x: BinarySequence) -> bool:
    return x.symbol(0) == 1 and all(x.symbol(k) == -x.symbol(-k) for k in range(1, x.n))


def skew_gs_embed(
    a: BinarySequence, b: BinarySequence, c: BinarySequence, d: BinarySequence
) -> PMMatrix:
    """Goethals-Seidel array whose first block is skew; the result is skew Hadamard."""
    if not is_skew_sequence(a):
        raise InvalidParameterError("a", str(a), "first sequence must satisfy x_0 = + and x_k = -x_{-k}")
    return gs_embed(a, b, c, d)


def amicable_check(m: PMMatrix, other: PMMatrix) -> bool:
    """True when M N^t equals N M^t."""
    if m.data.shape != other.data.shape:
        return False
    return bool(np.array_equal(m.data @ other.data.T, other.data @ m.data.T))


def ph_from_pcoms(family: PComSFamily) -> PMMatrix:
    """n x (nq + |c|) partial Hadamard: |c| all-plus columns then the member circulants."""
    if family.c > 0:
        raise InvalidParameterError("c", family.c, "construction needs c <= 0")
    _require_sum(family.members, family.c)
    blocks = [np.ones((family.n, -family.c), dtype=np.int64)]
    blocks += [circulant_from(x).data for x in family.members]
    return PMMatrix(np.hstack(blocks))


def ph_paired(first: PComSFamily, second: PComSFamily) -> PMMatrix:
    """
    2n x 2(nq + 1) partial Hadamard from two families whose sums add to -2.

    The second row of blocks uses transposed circulants.
    """
    if (first.n, first.q) != (second.n, second.q):
        raise InvalidParameterError(
            "families", (first.q, second.q), "both families need the same n and q"
        )
    if first.c + second.c != -2:
        raise InvalidParameterError(
            "c", (first.c, second.c), "family sums must add to -2"
        )
    _require_sum(first.members, first.c)
    _require_sum(second.members, second.c)
    n = first.n
    e = np.ones((n, 1), dtype=np.int64)
    a_blocks = [circulant_from(x).data for x in first.members]
    b_blocks = [circulant_from(x).data for x in second.members]
    top = np.hstack([e, e, *a_blocks, *b_blocks])
    bottom = np.hstack([e, -e, *(b.T for b in b_blocks), *(-a.T for a in a_blocks)])
    return PMMatrix(np.vstack([top, bottom]))


def read_matrix(path: str | Path) -> PMMatrix:
    """Reads '+'/'-' rows, or the JSON form {"rows", "cols", "data"}."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
        if path.suffix == ".json":
            data = json.loads(text)
            lines, declared = data["data"], (data["rows"], data["cols"])
        else:
            lines, declared = [line.strip() for line in text.splitlines() if line.strip()], None
        matrix = PMMatrix.from_lines(lines)
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(path, str(exc)) from exc
    except PComsError as exc:
        raise MatrixFormatError(path, exc.message) from exc
    if declared is not None and (matrix.rows, matrix.cols) != tuple(declared):
        raise MatrixFormatError(
            path, f"declared {declared[0]}x{declared[1]}, found {matrix.rows}x{matrix.cols}"
        )
    return matrix


def write_matrix(m: PMMatrix, path: str | Path) -> None:
    path = Path(path)
    if path.suffix == ".json":
        path.write_text(json.dumps(m.to_dict(), indent=2) + "\n", encoding="utf-8")
    else:
        path.write_text(m.to_text(), encoding="utf-8")


@dataclass
class PartialHadamardCase:
    name: str
    kind: str
    ones: int
    rows: int
    cols: int
    families: list[PComSFamily] = field(default_factory=list)

    def build(self) -> PMMatrix:
        if self.kind == "paired":
            return ph_paired(*self.families)
        return ph_from_pcoms(self.families[0])


def load_partial_hadamard(path: Path = PARTIAL_HADAMARD_PATH) -> list[PartialHadamardCase]:
    with open(path, encoding="utf-8") as f:
        data = json.load(f)
    return [
        PartialHadamardCase(
            name=item["name"],
            kind=item["kind"],
            ones=item["ones"],
            rows=item["rows"],
            cols=item["cols"],
            families=[family_from_strings(texts) for texts in item["families"]],
        )
        for item in data
    ]


class PartialHadamardVerifier(Verifier):
    """
    Builds every recorded partial Hadamard matrix and checks its Gram matrix

    Attributes
        path    JSON file of matrix recipes
    """

    name = "partial_hadamard"

    def __init__(self, path: Path = PARTIAL_HADAMARD_PATH) -> None:
        self.path = path

    def run(self) -> VerificationReport:
        logger.debug(locals())
        details: dict[str, Any] = {}
        findings = []
        passed = True
        for case in load_partial_hadamard(self.path):
            matrix = case.build()
            report = gram_check(matrix, case.cols)
            shape_ok = (matrix.rows, matrix.cols) == (case.rows, case.cols)
            details[case.name] = {"shape": [matrix.rows, matrix.cols], **report.to_dict()}
            if not report.passed or not shape_ok:
                passed = False
                findings.append(f"{case.name} fails: {report.first_failure}")
        return VerificationReport(self.name, passed, details, findings)


class ConstructiveClosureVerifier(Verifier):
    """
    Builds a matrix from every catalog or searched family and family pair that
    allows one, and checks the square constructions

    Attributes
        periods             catalog periods to use
        searched_periods    periods whose searched families are built as well
        q_max               largest family searched
        config              search settings, SearchConfig.from_env() when None
    """

    name = "constructive_closure"

    def __init__(
        self,
        periods: Optional[Iterable[int]] = None,
        searched_periods: Iterable[int] = (4, 5, 6, 7),
        q_max: int = 8,
        config: Optional[SearchConfig] = None,
    ) -> None:
        self.periods = list(periods) if periods is not None else golden_periods()
        self.searched_periods = list(searched_periods)
        self.q_max = q_max
        self.config = config

    def _build_all(self, families: list[PComSFamily], label: str) -> tuple[int, list[str]]:
        built = 0
        failures = []
        for family in families:
            if family.c <= 0:
                built += 1
                if not gram_check(ph_from_pcoms(family)).passed:
                    failures.append(f"{label} family {family}")
        for f1, f2 in combinations_with_replacement(families, 2):
            if f1.q == f2.q and f1.c + f2.c == -2:
                built += 1
                if not gram_check(ph_paired(f1, f2)).passed:
                    failures.append(f"{label} paired {f1} / {f2}")
        return built, failures

    def _square_cases(self) -> list[tuple[str, PMMatrix]]:
        cases = []
        for p in (3, 7, 11):
            for rep in two_level_scan(p, -1).orbits:
                cases.append((f"one_core {rep}", one_core_embed(parse(rep))[0]))
        cases.append(("two_core ++---,+--+-", two_core_embed(parse("++---"), parse("+--+-"))))
        cases.append(
            ("gs ++-,+--,+--,+++", skew_gs_embed(*(parse(t) for t in ("++-", "+--", "+--", "+++"))))
        )
        return cases

    def run(self) -> VerificationReport:
        logger.debug(locals())
        failures = []
        built = 0
        for n in self.periods:
            count, failed = self._build_all(load_golden(n).families, "catalog")
            built += count
            failures += failed
        searched_built = 0
        for n in self.searched_periods:
            catalog = search(n, self.q_max, self.config)
            count, failed = self._build_all(catalog.families, "searched")
            searched_built += count
            failures += failed

        square = self._square_cases()
        for label, matrix in square:
            if not gram_check(matrix).passed or not order_law_holds(matrix):
                failures.append(label)

        # two-core condition agrees with a two-member family of sum -2
        mismatched = []
        for n in (3, 5, 7):
            for o1, o2 in combinations(enumerate_orbits(n), 2):
                valid, c = is_pcoms((o1.rep, o2.rep))
                if two_core_check(o1.rep, o2.rep) != (valid and c == -2):
                    mismatched.append(f"{o1.rep},{o2.rep}")
        failures += [f"two-core check disagrees for {pair}" for pair in mismatched]

        details = {
            "built": built,
            "searched_built": searched_built,
            "square": [label for label, _ in square],
            "failures": failures,
        }
        return VerificationReport(self.name, not failures, details, failures)
