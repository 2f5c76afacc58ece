"""Report containers and rendering for the verification runner.

The structured rendering is canonical: stable key order, floats printed with
6 significant digits, and no wall-clock content, so identical configurations
and seeds produce byte-identical documents. Timings appear only in the
human-readable markdown rendering.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


def _canonical_value(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, float):
        if v != v:  # NaN
            return "nan"
        return float(f"{v:.6g}")
    if isinstance(v, complex):
        return {"re": float(f"{v.real:.6g}"), "im": float(f"{v.imag:.6g}")}
    if isinstance(v, dict):
        return {str(k): _canonical_value(x) for k, x in sorted(v.items(), key=lambda kv: str(kv[0]))}
    if isinstance(v, (list, tuple)):
        return [_canonical_value(x) for x in v]
    return v


@dataclass
class CaseResult:
    name: str
    params: dict
    stratum: str | None
    passed: bool
    metrics: dict = field(default_factory=dict)
    diagnostics: str | None = None

    def to_record(self) -> dict:
        return {
            "name": self.name,
            "params": _canonical_value(self.params),
            "stratum": self.stratum,
            "passed": self.passed,
            "metrics": _canonical_value(self.metrics),
            "diagnostics": self.diagnostics,
        }


@dataclass
class SuiteReport:
    suite: str
    cases: list[CaseResult]
    runtime_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def summary(self) -> dict:
        return {
            "cases": len(self.cases),
            "passed": sum(1 for c in self.cases if c.passed),
            "failed": sum(1 for c in self.cases if not c.passed),
        }

    def to_record(self) -> dict:
        return {
            "suite": self.suite,
            "cases": [c.to_record() for c in self.cases],
            "summary": self.summary,
        }


def render_structured(reports: list[SuiteReport], config_record: dict) -> str:
    """Canonical JSON document; deterministic bytes for a fixed config and seed."""
    doc = {
        "schema": "vmrt-verify-report/1",
        "config": _canonical_value(config_record),
        "suites": [r.to_record() for r in reports],
        "overall_pass": all(r.passed for r in reports),
    }
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def _metric_text(metrics: dict) -> str:
    parts = []
    for k in sorted(metrics):
        v = _canonical_value(metrics[k])
        parts.append(f"{k}={v}")
    return ", ".join(parts)


def render_markdown(reports: list[SuiteReport], config_record: dict) -> str:
    """Human-readable summary with one table per suite."""
    lines = ["# Verification report", ""]
    lines.append(f"- seed: {config_record.get('seed')}")
    lines.append(f"- suites: {', '.join(r.suite for r in reports) or '(none)'}")
    overall = all(r.passed for r in reports)
    lines.append(f"- overall: {'PASS' if overall else 'FAIL'}")
    lines.append("")
    for rep in reports:
        s = rep.summary
        lines.append(f"## {rep.suite} — {'PASS' if rep.passed else 'FAIL'} "
                     f"({s['passed']}/{s['cases']} cases, {rep.runtime_s:.2f}s)")
        lines.append("")
        lines.append("| case | stratum | status | metrics |")
        lines.append("|---|---|---|---|")
        for c in rep.cases:
            status = "pass" if c.passed else f"FAIL ({c.diagnostics or 'see metrics'})"
            lines.append(f"| {c.name} | {c.stratum or '-'} | {status} | "
                         f"{_metric_text(c.metrics)} |")
        lines.append("")
    return "\n".join(lines)
