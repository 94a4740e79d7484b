"""
Machine readable reports. Every polynomial in a report is written in canonical text, and index tuples
are 1-based so they read against the variable names u1..uN.
"""

from __future__ import annotations

from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union

from pydantic import BaseModel, ConfigDict
from typing_extensions import Literal

from hydrobracket.verification import RelationVerdict, VerificationReport

__all__ = ["CheckResult", "Report", "ResidualEntry", "build_report", "check_result", "write_report"]

Verdict = Literal["pass", "fail"]


class ResidualEntry(BaseModel):
    model_config = ConfigDict(frozen=True)

    indices: List[int]
    value: str


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    verdict: Verdict
    residual_count: int
    residuals: List[ResidualEntry]


class Report(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: str
    input: str
    input_digest: str
    verdict: Verdict
    checks: List[CheckResult]
    outputs: Dict[str, List[str]]
    elapsed_seconds: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True)


def _verdict(passed: bool) -> Verdict:
    return "pass" if passed else "fail"


def check_result(relation: RelationVerdict, limit: int) -> CheckResult:
    """
    Summarize a relation, keeping at most `limit` residual entries.
    """
    return CheckResult(
        name=relation.name,
        verdict=_verdict(relation.passed),
        residual_count=len(relation.residuals),
        residuals=[
            ResidualEntry(indices=[i + 1 for i in r.indices], value=str(r.value)) for r in relation.residuals[:limit]
        ],
    )


def build_report(
    command: str,
    source: str,
    digest: str,
    verifications: Iterable[VerificationReport],
    outputs: Optional[Dict[str, List[str]]] = None,
    *,
    limit: int,
    elapsed_seconds: Optional[float] = None,
) -> Report:
    checks = [check_result(r, limit) for v in verifications for r in v.relations]
    return Report(
        command=command,
        input=source,
        input_digest=digest,
        verdict=_verdict(all(c.verdict == "pass" for c in checks)),
        checks=checks,
        outputs=outputs or {},
        elapsed_seconds=elapsed_seconds,
    )


def write_report(report: Report, path: Union[str, Path]) -> None:
    Path(path).write_text(report.to_json() + "\n", encoding="utf-8")
