"""JSON document schemas for inputs, reports and certifications.

Exact numbers cross the process boundary losslessly: every dyadic is carried
as a decimal-string mantissa plus exponent (with a double alongside for
convenience), budgets and targets keep their original decimal strings.  A
report re-read from disk therefore reconstructs the construction exactly: the
budgets are re-sorted and re-partitioned, the claimed structure is checked
against that recomputation, and the claimed values are handed to the
verifiers.

Document emission is deterministic: fixed key order, fixed float rendering,
no timestamps.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .analysis import BoundSequence, kkl_ratio, summarize, talagrand_ratio
from .construction import (
    MU_MAX_TOLERANCE,
    CheckResult,
    ConstructionInfeasible,
    ConstructionReport,
    MuNotAchievable,
    build,
    evaluate_checks,
    partition,
    select_m_star,
    sort_bounds,
)
from .exact import DYADIC_ONE, Dyadic, parse_decimal, render_decimal
from .verify import QuantityCheck, VerificationFailure, VerificationReport

__all__ = [
    "DocumentError",
    "load_json",
    "emit_json",
    "parse_input_document",
    "build_output_document",
    "reconstruct_report",
]


class DocumentError(Exception):
    """The document is unreadable, malformed, or missing required fields."""


def load_json(path: str | Path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise DocumentError(f"{path} must hold a JSON object")
    return doc


def emit_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def parse_input_document(doc: dict) -> tuple[BoundSequence, str | None]:
    """Read {"bounds": [decimal strings], "mu": optional decimal string}."""
    if "bounds" not in doc:
        raise DocumentError('input document needs a "bounds" array')
    raw = doc["bounds"]
    if not isinstance(raw, list) or not raw:
        raise DocumentError('"bounds" must be a non-empty array')
    if not all(isinstance(b, str) for b in raw):
        raise DocumentError(
            '"bounds" entries must be decimal strings (floats lose exactness)'
        )
    try:
        bounds = BoundSequence.from_decimals(raw)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
    mu = doc.get("mu")
    if mu is not None and not isinstance(mu, str):
        raise DocumentError('"mu" must be a decimal string')
    return bounds, mu


def _dyadic_json(d: Dyadic) -> dict:
    return {"mantissa": str(d.mantissa), "exponent": d.exponent, "approx": float(d)}


def _dyadic_from_json(obj: Any, label: str) -> Dyadic:
    if not isinstance(obj, dict):
        raise DocumentError(f"{label} must be an object")
    mantissa = obj.get("mantissa")
    if not isinstance(mantissa, (str, int)):
        raise DocumentError(f"{label} needs an integer mantissa string")
    try:
        return Dyadic(int(mantissa), int(obj["exponent"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"{label} is malformed: {exc}") from exc


def _margin_exact_json(margin: Fraction | None) -> str | None:
    if margin is None:
        return None
    return render_decimal(margin)


def _checks_json(checks: tuple[CheckResult, ...]) -> dict:
    return {c.name: {"pass": c.passed, "margin": c.margin} for c in checks}


def _theorem_checks_json(checks: tuple[CheckResult, ...]) -> dict:
    return {
        c.name: {
            "pass": c.passed,
            "margin": c.margin,
            "margin_exact": _margin_exact_json(c.margin_exact),
        }
        for c in checks
    }


def _quantity_json(q: QuantityCheck, mode: str) -> dict:
    out: dict[str, Any] = {}
    if q.position is not None:
        out["position"] = q.position + 1
    if q.original_index is not None:
        out["index"] = q.original_index + 1
    out["analytic"] = _dyadic_json(q.analytic)
    if mode == "exhaustive":
        out["oracle"] = _dyadic_json(q.oracle)
        out["equal"] = q.ok
    else:
        out["estimate"] = q.estimate
        out["stderr"] = q.stderr
        out["z"] = q.z
        out["within_threshold"] = q.ok
    return out


def _verification_json(vr: VerificationReport) -> dict:
    out: dict[str, Any] = {"mode": vr.mode}
    if vr.mode == "sampled":
        out["samples"] = vr.samples
        out["seed"] = vr.seed
        out["z_threshold"] = vr.z_threshold
    out["passed"] = vr.passed
    out["expectation_match"] = _quantity_json(vr.expectation, vr.mode)
    out["influence_matches"] = [
        _quantity_json(q, vr.mode) for q in vr.influences
    ]
    out["theorem_checks"] = _theorem_checks_json(vr.theorem_checks)
    return out


def build_output_document(
    report: ConstructionReport, verification: VerificationReport | None = None
) -> dict:
    """The full construction document, key order fixed."""
    var = report.expectation * (DYADIC_ONE - report.expectation)
    diagnostics = {
        "talagrand_ratio": talagrand_ratio(report.influences, var),
        "kkl_ratio": (
            kkl_ratio(report.influences, report.bounds.n, var)
            if report.bounds.n >= 2
            else None
        ),
    }
    doc: dict[str, Any] = {
        "n": report.bounds.n,
        "talagrand_sum": report.summary.talagrand_sum,
        "alpha": report.summary.alpha,
        "mu": report.mu_source,
        "mu_max": report.summary.mu_max,
        "guaranteed": report.guaranteed,
        "m": report.partition.m,
        "tribe_sizes": list(report.partition.sizes),
        "residual": report.partition.residual,
        "m_star": report.m_star,
        "expectation": _dyadic_json(report.expectation),
        "influences": [
            {
                "index": j + 1,
                "mantissa": str(report.influences[j].mantissa),
                "exponent": report.influences[j].exponent,
                "approx": float(report.influences[j]),
                "bound": report.bounds.sources[j],
                "strictly_below": report.influences[j] < report.bounds.values[j],
            }
            for j in range(report.bounds.n)
        ],
        "checks": _checks_json(report.checks),
    }
    if verification is not None:
        doc["verification"] = _verification_json(verification)
    doc["diagnostics"] = diagnostics
    return doc


def _require(doc: dict, key: str) -> Any:
    if key not in doc:
        raise DocumentError(f'document is missing "{key}"')
    return doc[key]


def reconstruct_report(doc: dict) -> ConstructionReport:
    """Rebuild a ConstructionReport from a construction document.

    The budgets and target are re-read exactly; sorting, partitioning and
    tribe selection are recomputed from them, and the document's structural
    claims (n, m, tribe_sizes, residual, m_star) must agree with the
    recomputation or VerificationFailure is raised.  The claimed expectation
    and influences are carried over as-is for the verifiers to test.
    """
    entries = _require(doc, "influences")
    if not isinstance(entries, list) or not entries:
        raise DocumentError('"influences" must be a non-empty array')
    for pos, entry in enumerate(entries, start=1):
        if not isinstance(entry, dict):
            raise DocumentError("influence entries must be objects")
        if entry.get("index") != pos:
            raise DocumentError(
                f"influence entries must be ordered by index; found "
                f"{entry.get('index')!r} at position {pos}"
            )
        if not isinstance(entry.get("bound"), str):
            raise DocumentError("influence entries need a decimal-string bound")

    try:
        bounds = BoundSequence.from_decimals(e["bound"] for e in entries)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc

    mu_source = _require(doc, "mu")
    if not isinstance(mu_source, str):
        raise DocumentError('"mu" must be a decimal string')
    try:
        mu = parse_decimal(mu_source)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
    if not 0 < mu < 1:
        raise DocumentError(f"mu must satisfy 0 < mu < 1, got {mu_source}")

    claimed_sizes = _require(doc, "tribe_sizes")
    claimed_m = _require(doc, "m")
    claimed_residual = _require(doc, "residual")
    claimed_m_star = _require(doc, "m_star")
    claimed_n = _require(doc, "n")

    summary = summarize(bounds)
    sb = sort_bounds(bounds)
    part = partition(sb)

    if claimed_n != bounds.n:
        raise VerificationFailure("n", claimed_n, bounds.n)
    if list(part.sizes) != claimed_sizes:
        raise VerificationFailure("tribe_sizes", claimed_sizes, list(part.sizes))
    if claimed_m != part.m:
        raise VerificationFailure("m", claimed_m, part.m)
    if claimed_residual != part.residual:
        raise VerificationFailure("residual", claimed_residual, part.residual)
    try:
        m_star = select_m_star(part, mu)
    except (ConstructionInfeasible, MuNotAchievable) as exc:
        raise VerificationFailure("m_star", claimed_m_star, f"none ({exc})") from exc
    if claimed_m_star != m_star:
        raise VerificationFailure("m_star", claimed_m_star, m_star)

    tribes = build(part, m_star, sb)
    expectation = _dyadic_from_json(_require(doc, "expectation"), "expectation")
    influences = tuple(
        _dyadic_from_json(
            {"mantissa": e.get("mantissa"), "exponent": e.get("exponent")},
            f"influence {e.get('index')}",
        )
        for e in entries
    )

    checks = evaluate_checks(
        expectation=expectation,
        influences=influences,
        bounds=bounds,
        mu=mu,
        partition=part,
        m_star=m_star,
        alpha_value=summary.alpha,
    )
    guaranteed = summary.feasible and float(mu) <= summary.mu_max + MU_MAX_TOLERANCE
    return ConstructionReport(
        bounds=bounds,
        mu=mu,
        mu_source=mu_source,
        summary=summary,
        guaranteed=guaranteed,
        partition=part,
        m_star=m_star,
        tribes=tribes,
        expectation=expectation,
        influences=influences,
        checks=checks,
    )
