from __future__ import annotations

from typing import List

from envolved.describe.util import prefix_description, wrap_description

from hydrobracket.frontend.report import CheckResult, Report

__all__ = ["describe_report"]


def _describe_check(check: CheckResult, width: int) -> List[str]:
    head = f"[{check.verdict}] {check.name}"
    if check.residual_count:
        head += f" ({check.residual_count} nonzero residuals)"
    ret = list(wrap_description(head, width=width, initial_indent="  ", subsequent_indent="      "))
    for r in check.residuals:
        key = "(" + ", ".join(map(str, r.indices)) + "): "
        ret.extend(
            wrap_description(
                prefix_description(key, r.value),
                width=width,
                initial_indent="    ",
                subsequent_indent="    " + " " * len(key),
                break_on_hyphens=False,
            )
        )
    hidden = check.residual_count - len(check.residuals)
    if hidden:
        ret.append(f"    ... and {hidden} more")
    return ret


def describe_report(report: Report, width: int = 100) -> List[str]:
    """
    A human readable rendering of a report, wrapped to `width` columns.
    """
    ret = [f"{report.command} {report.input}: {report.verdict}"]
    for check in report.checks:
        ret.extend(_describe_check(check, width))
    for name, values in report.outputs.items():
        ret.append(f"{name}:")
        for value in values:
            ret.extend(
                wrap_description(value, width=width, initial_indent="  ", subsequent_indent="      ", break_on_hyphens=False)
            )
    if report.elapsed_seconds is not None:
        ret.append(f"elapsed: {report.elapsed_seconds:.3f}s")
    return ret
