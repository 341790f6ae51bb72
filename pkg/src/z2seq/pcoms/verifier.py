# SPDX-License-Identifier: Apache-2.0
# Standard
from dataclasses import dataclass, field
from typing import Any


@dataclass
class VerificationReport:
    """
    Outcome of a single verifier run

    Attributes
        name        name of the verifier that produced the report
        passed      True when every checked claim held
        details     machine-readable results, keyed by check
        findings    human-readable notes on claims that did not hold as printed
    """

    name: str
    passed: bool
    details: dict[str, Any] = field(default_factory=dict)
    findings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "details": self.details,
            "findings": self.findings,
        }


class Verifier:
    """
    Parent class for Verifiers
    """

    name: str

    def __init__(self) -> None:
        pass

    def run(self) -> VerificationReport:
        raise NotImplementedError
