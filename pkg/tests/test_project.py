# SPDX-License-Identifier: Apache-2.0
# Standard
from importlib.metadata import entry_points

# First Party
from z2seq.pcoms.bounds import (
    BoundDominanceVerifier,
    CirculantHadamardVerifier,
    PerfectSequenceVerifier,
)
from z2seq.pcoms.families import CatalogVerifier, DecimationFamilyVerifier
from z2seq.pcoms.hadamard import ConstructiveClosureVerifier, PartialHadamardVerifier
from z2seq.pcoms.runstruct import RunEquivalenceVerifier
from z2seq.pcoms.schur import DimensionVerifier, ProductLawVerifier
from z2seq.pcoms.verifier import Verifier


def test_verifier_eps():
    expected = {
        "run_equivalence": RunEquivalenceVerifier,
        "dimension": DimensionVerifier,
        "product_law": ProductLawVerifier,
        "catalog": CatalogVerifier,
        "decimation_family": DecimationFamilyVerifier,
        "bound_dominance": BoundDominanceVerifier,
        "circulant_hadamard": CirculantHadamardVerifier,
        "perfect_sequence": PerfectSequenceVerifier,
        "partial_hadamard": PartialHadamardVerifier,
        "constructive_closure": ConstructiveClosureVerifier,
    }
    eps = entry_points(group="z2seq.pcoms.verifier")
    found = {}
    for ep in eps:
        # different project
        if not ep.module.startswith("z2seq.pcoms"):
            continue
        verifier = ep.load()
        assert issubclass(verifier, Verifier)
        assert verifier.name == ep.name
        found[ep.name] = verifier

    assert found == expected
