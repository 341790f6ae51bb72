# SPDX-License-Identifier: Apache-2.0
"""
Command-line front end.

Exit codes: 0 when every check passes, 1 on a verified mismatch, 2 on a
usage or parameter error.
"""

# Standard
from typing import Any, Callable, Optional, Sequence
import argparse
import json
import logging
import sys

# Third Party
from pandas import DataFrame
from pydantic import ValidationError
from sympy import isprime

# Local
from .bounds import (
    BoundDominanceVerifier,
    CirculantHadamardVerifier,
    PerfectSequenceVerifier,
    bound_B,
    bound_table,
    circulant_hadamard_bound,
    gs_bound,
    one_core_bound,
    perfect_bounds,
)
from .config import RunConfig, SearchConfig
from .exceptions import InvalidParameterError, PComsError
from .families import (
    CatalogVerifier,
    DecimationFamilyVerifier,
    catalog_diff,
    family_from_strings,
    golden_periods,
    load_golden,
    search,
)
from .hadamard import (
    ConstructiveClosureVerifier,
    PartialHadamardVerifier,
    circulant_from,
    gram_check,
    gs_embed,
    one_core_embed,
    ph_from_pcoms,
    ph_paired,
    read_matrix,
    skew_gs_embed,
    two_core_embed,
    write_matrix,
)
from .logger_config import setup_logger
from .runstruct import RunEquivalenceVerifier, cyclic_run_vector, orbit_run_length, pattern_counts
from .schur import (
    DimensionVerifier,
    ProductLawVerifier,
    classify_orbit,
    dim_SC_prime,
    dim_SD,
    enumerate_orbits,
    even_odd_partition,
    free_closure,
    necklace_count,
    orbit_of,
    symmetric_square_check,
)
from .seqcore import autocorrelation, parse
from .verifier import Verifier

logger = setup_logger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2

VERIFIERS: dict[str, Callable[[RunConfig], Verifier]] = {
    "run_equivalence": lambda cfg: RunEquivalenceVerifier(),
    "dimension": lambda cfg: DimensionVerifier(),
    "product_law": lambda cfg: ProductLawVerifier(),
    "catalog": lambda cfg: CatalogVerifier(
        q_max=cfg.q_max or 12, strict_paper=cfg.strict_paper, config=cfg.search
    ),
    "decimation_family": lambda cfg: DecimationFamilyVerifier(),
    "bound_dominance": lambda cfg: BoundDominanceVerifier(),
    "circulant_hadamard": lambda cfg: CirculantHadamardVerifier(),
    "perfect_sequence": lambda cfg: PerfectSequenceVerifier(),
    "partial_hadamard": lambda cfg: PartialHadamardVerifier(),
    "constructive_closure": lambda cfg: ConstructiveClosureVerifier(config=cfg.search),
}

CONSTRUCTIONS = ("circulant", "one_core", "two_core", "gs", "skew_gs", "ph", "paired")


def _shards(value: str) -> int | str:
    if value == "auto":
        return value
    try:
        return int(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"shards must be an integer or 'auto', got {value!r}") from exc


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default="json")
    common.add_argument("--out", help="write the report to this file instead of stdout")
    common.add_argument("--verbose", action="store_true", help="log at DEBUG level")

    parser = argparse.ArgumentParser(
        prog="z2seq-pcoms",
        description="Families of binary sequences with constant autocorrelation sum.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    analyze = sub.add_parser("analyze", parents=[common], help="describe one sequence")
    analyze.add_argument("sequence")

    search_cmd = sub.add_parser("search", parents=[common], help="search families of period n")
    search_cmd.add_argument("--n", type=int, required=True)
    search_cmd.add_argument("--qmax", dest="q_max", type=int, default=12)
    search_cmd.add_argument("--shards", type=_shards, default=1)
    search_cmd.add_argument(
        "--distinct-orbits",
        action="store_true",
        help="members are distinct orbits; by default a family is a multiset of orbits",
    )
    search_cmd.add_argument("--strict-paper", action="store_true")

    bounds_cmd = sub.add_parser("bounds", parents=[common], help="evaluate a counting bound")
    bounds_cmd.add_argument("--n", type=int)
    bounds_cmd.add_argument("--q", type=int)
    bounds_cmd.add_argument("--c", type=int)
    bounds_cmd.add_argument("--a", type=int)
    bounds_cmd.add_argument("--m", type=int, help="circulant Hadamard order 4m^2")
    bounds_cmd.add_argument("--p", type=int, help="single-core length")
    bounds_cmd.add_argument("--u", type=int, help="perfect sequence parameter")
    bounds_cmd.add_argument("--case", choices=["d1", "d2a", "d2b"], default="d1")
    bounds_cmd.add_argument("--sums", type=int, nargs=4, metavar=("A", "B", "C", "D"))
    bounds_cmd.add_argument("--oracle", action="store_true", help="attach an exhaustive count")

    verify = sub.add_parser("verify", parents=[common], help="Gram-check a matrix file")
    verify.add_argument("matrix")
    verify.add_argument("--scale", type=int)

    construct = sub.add_parser("construct", parents=[common], help="build a matrix")
    construct.add_argument("kind", choices=CONSTRUCTIONS)
    construct.add_argument(
        "sequences", nargs="+", help="member sequences; for paired, separate the families with '/'"
    )

    schur_cmd = sub.add_parser("schur", parents=[common], help="orbit and dimension report")
    schur_cmd.add_argument("--n", type=int, required=True)

    check = sub.add_parser("check", parents=[common], help="run verifiers")
    check.add_argument("names", nargs="*", metavar="NAME", help=f"one of {', '.join(VERIFIERS)}")
    check.add_argument("--qmax", dest="q_max", type=int)
    check.add_argument("--shards", type=_shards, default=1)
    check.add_argument("--distinct-orbits", action="store_true")
    check.add_argument("--strict-paper", action="store_true")

    return parser.parse_args(argv)


def _run_config(args: argparse.Namespace) -> RunConfig:
    search_config = SearchConfig.from_env(
        shards=getattr(args, "shards", 1),
        allow_repeats=not getattr(args, "distinct_orbits", False),
    )
    return RunConfig(
        subcommand=args.subcommand,
        n=getattr(args, "n", None),
        q=getattr(args, "q", None),
        c=getattr(args, "c", None),
        a=getattr(args, "a", None),
        m=getattr(args, "m", None),
        u=getattr(args, "u", None),
        p=getattr(args, "p", None),
        q_max=getattr(args, "q_max", None),
        format=args.format,
        strict_paper=getattr(args, "strict_paper", False),
        out=args.out,
        search=search_config,
    )


def _emit(payload: Any, cfg: RunConfig, frame: Optional[DataFrame] = None) -> None:
    if cfg.format == "csv":
        if frame is None:
            raise InvalidParameterError("format", "csv", f"{cfg.subcommand} has no tabular output")
        text = frame.to_csv(index=False)
    elif cfg.format == "text":
        if isinstance(payload, dict):
            text = "".join(f"{key}: {json.dumps(value, sort_keys=True)}\n" for key, value in payload.items())
        else:
            text = f"{payload}\n"
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args: argparse.Namespace, cfg: RunConfig) -> int:
    x = parse(args.sequence)
    acf = autocorrelation(x)
    orbit = orbit_of(x)
    flags = classify_orbit(orbit)
    report: dict[str, Any] = {
        "seq": str(x),
        "n": x.n,
        "weight": x.weight,
        "autocorrelation": acf.to_list(),
        "two_level": acf.two_level,
        "orbit": {
            "rep": str(orbit.rep),
            "free": flags.free,
            "fhat": flags.fhat,
            "period": flags.period,
            "symmetric": flags.symmetric,
        },
    }
    if x.is_constant:
        report["runs"] = None
        report["notes"] = ["constant sequence has no run structure"]
    else:
        report["runs"] = cyclic_run_vector(x).to_dict()
        report["l"] = orbit_run_length(x)
        report["N_R1"] = pattern_counts(x, x.n)[(1,)]
    _emit(report, cfg)
    return EXIT_OK


def cmd_search(args: argparse.Namespace, cfg: RunConfig) -> int:
    assert cfg.n is not None and cfg.q_max is not None
    found = search(cfg.n, cfg.q_max, cfg.search)
    payload: dict[str, Any] = {"catalog": found.to_dict()}
    status = EXIT_OK
    frame = found.to_frame()
    if cfg.n in golden_periods():
        diff = catalog_diff(found, load_golden(cfg.n))
        payload["diff"] = diff.to_dict()
        if not diff.matches:
            logger.warning("catalog for n=%s differs from golden", cfg.n)
            if cfg.strict_paper:
                status = EXIT_MISMATCH
    _emit(payload, cfg, frame)
    return status


def cmd_bounds(args: argparse.Namespace, cfg: RunConfig) -> int:
    if cfg.m is not None:
        report = circulant_hadamard_bound(cfg.m, oracle=args.oracle)
    elif cfg.p is not None:
        report = one_core_bound(cfg.p, oracle=args.oracle)
    elif cfg.u is not None:
        report = perfect_bounds(cfg.u, args.case)
    elif args.sums is not None:
        if cfg.n is None:
            raise InvalidParameterError("n", None, "--sums needs --n")
        report = gs_bound(cfg.n, *args.sums)
    else:
        missing = [name for name in ("n", "q", "c", "a") if getattr(cfg, name) is None]
        if missing:
            raise InvalidParameterError(
                "parameters", missing, "give --n --q --c --a, or one of --m --p --u --sums"
            )
        assert cfg.n is not None and cfg.q is not None and cfg.c is not None and cfg.a is not None
        report = bound_B(cfg.n, cfg.q, cfg.c, cfg.a, oracle=args.oracle)
    _emit(report.to_dict(), cfg, bound_table([report]))
    return EXIT_OK if report.dominated else EXIT_MISMATCH


def cmd_verify(args: argparse.Namespace, cfg: RunConfig) -> int:
    matrix = read_matrix(args.matrix)
    report = gram_check(matrix, args.scale)
    payload = {"matrix": args.matrix, "rows": matrix.rows, "cols": matrix.cols, **report.to_dict()}
    _emit(payload, cfg)
    return EXIT_OK if report.passed else EXIT_MISMATCH


def _build(kind: str, texts: list[str]):
    if kind == "paired":
        if texts.count("/") != 1:
            raise InvalidParameterError("sequences", texts, "paired needs two families separated by '/'")
        cut = texts.index("/")
        return ph_paired(family_from_strings(texts[:cut]), family_from_strings(texts[cut + 1 :]))
    if kind == "ph":
        return ph_from_pcoms(family_from_strings(texts))
    sequences = [parse(t) for t in texts]
    expected = {"circulant": 1, "one_core": 1, "two_core": 2, "gs": 4, "skew_gs": 4}[kind]
    if len(sequences) != expected:
        raise InvalidParameterError("sequences", texts, f"{kind} takes {expected} sequences")
    if kind == "circulant":
        return circulant_from(sequences[0])
    if kind == "one_core":
        matrix, polarity = one_core_embed(sequences[0])
        logger.info("core polarity %+d", polarity)
        return matrix
    if kind == "two_core":
        return two_core_embed(*sequences)
    if kind == "gs":
        return gs_embed(*sequences)
    return skew_gs_embed(*sequences)


def cmd_construct(args: argparse.Namespace, cfg: RunConfig) -> int:
    matrix = _build(args.kind, args.sequences)
    report = gram_check(matrix)
    if cfg.out:
        write_matrix(matrix, cfg.out)
    elif cfg.format == "json":
        _emit({**matrix.to_dict(), "gram": report.to_dict()}, cfg)
    else:
        sys.stdout.write(matrix.to_text())
    return EXIT_OK if report.passed else EXIT_MISMATCH


def cmd_schur(args: argparse.Namespace, cfg: RunConfig) -> int:
    assert cfg.n is not None
    n = cfg.n
    orbits = enumerate_orbits(n)
    payload: dict[str, Any] = {
        "n": n,
        "orbits": [o.to_dict() for o in orbits],
        "necklaces": necklace_count(n),
        "even_odd": even_odd_partition(n).to_dict(),
        "decimation": dim_SD(n).to_dict(),
    }
    if n >= 2:
        payload["free_closure"] = free_closure(n).to_dict()
        payload["symmetric_square"] = symmetric_square_check(n).to_dict()
    if isprime(n):
        payload["prime_dimension"] = {"formula": dim_SC_prime(n), "enumerated": len(orbits)}
    _emit(payload, cfg, DataFrame([o.to_dict() for o in orbits]))
    return EXIT_OK


def cmd_check(args: argparse.Namespace, cfg: RunConfig) -> int:
    names = args.names or list(VERIFIERS)
    unknown = [name for name in names if name not in VERIFIERS]
    if unknown:
        raise InvalidParameterError("names", unknown, f"known verifiers: {sorted(VERIFIERS)}")
    reports = []
    for name in names:
        logger.info("running verifier %s", name)
        reports.append(VERIFIERS[name](cfg).run())
    payload = {"passed": all(r.passed for r in reports), "reports": [r.to_dict() for r in reports]}
    frame = DataFrame(
        [{"name": r.name, "passed": r.passed, "findings": len(r.findings)} for r in reports]
    )
    _emit(payload, cfg, frame)
    return EXIT_OK if payload["passed"] else EXIT_MISMATCH


COMMANDS: dict[str, Callable[[argparse.Namespace, RunConfig], int]] = {
    "analyze": cmd_analyze,
    "search": cmd_search,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
    "construct": cmd_construct,
    "schur": cmd_schur,
    "check": cmd_check,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = _run_config(args)
        return COMMANDS[args.subcommand](args, cfg)
    except ValidationError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except PComsError as exc:
        print(exc.message, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
