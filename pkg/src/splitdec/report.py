"""Deterministic JSON run reports.

A report is a plain dict with four fixed top-level keys:

``schema``
    the literal version string ``"splitdec-report/1"``;
``metadata``
    run context: graph spec, derived parameters, wall-clock timings,
    library versions, and an echo of the configuration that produced the
    run.  Timings live here and only here, so the rest of the report is
    reproducible byte-for-byte;
``checks``
    a list of check entries, each ``{name, paper_anchor, status,
    max_residual, ...}`` with ``status`` one of ``pass``/``fail``/
    ``skipped``.  Exact checks report the literal string ``"0"`` as
    their residual; failures carry a ``witness`` payload.  Every
    executed check appears exactly once;
``tables``
    structured side data (intersection array, eigenvalues, tilde
    dimension grids, module inventories, artifact paths).

:func:`canonical_json` renders a report with sorted keys and fixed
separators, so two runs with identical configuration produce identical
bytes.
"""

from __future__ import annotations

import json
import platform
from typing import Iterable, Mapping

from .errors import ReportInvariantViolation

SCHEMA = "splitdec-report/1"

STATUSES = ("pass", "fail", "skipped")

_REQUIRED_KEYS = ("name", "paper_anchor", "status", "max_residual")
_OPTIONAL_KEYS = ("mode", "witness", "suite")


def versions() -> dict:
    """Library versions recorded in report metadata."""
    import numpy

    from . import __version__

    return {
        "splitdec": __version__,
        "numpy": numpy.__version__,
        "python": platform.python_version(),
    }


def normalize_check(entry: Mapping) -> dict:
    """Validate one check entry and return a clean copy.

    Fails loudly on missing keys, unknown keys, or a bad status; fills a
    ``None`` residual on a failed check with the string ``"nonzero"`` so
    the JSON stays schema-stable.
    """
    if not isinstance(entry, Mapping):
        raise ReportInvariantViolation(f"check entry is not a mapping: {entry!r}")
    unknown = set(entry) - set(_REQUIRED_KEYS) - set(_OPTIONAL_KEYS)
    if unknown:
        raise ReportInvariantViolation(
            f"check {entry.get('name')!r} has unknown keys {sorted(unknown)}"
        )
    missing = [k for k in _REQUIRED_KEYS if k not in entry]
    if missing:
        raise ReportInvariantViolation(
            f"check {entry.get('name')!r} is missing keys {missing}"
        )
    if entry["status"] not in STATUSES:
        raise ReportInvariantViolation(
            f"check {entry['name']!r} has status {entry['status']!r}"
        )
    out = dict(entry)
    if out["max_residual"] is None:
        out["max_residual"] = "nonzero" if out["status"] == "fail" else "0"
    if out["status"] == "fail" and "witness" not in out:
        out["witness"] = {"detail": "unavailable"}
    return out


def build_report(metadata: Mapping, checks: Iterable[Mapping],
                 tables: Mapping) -> dict:
    """Assemble and validate a full report dict."""
    clean = [normalize_check(c) for c in checks]
    names = [c["name"] for c in clean]
    dupes = sorted({x for x in names if names.count(x) > 1})
    if dupes:
        raise ReportInvariantViolation(f"duplicate check names: {dupes}")
    meta = dict(metadata)
    meta.setdefault("versions", versions())
    return {
        "schema": SCHEMA,
        "metadata": meta,
        "checks": clean,
        "tables": dict(tables),
    }


def canonical_json(obj) -> str:
    """Deterministic JSON text: sorted keys, fixed separators, ASCII."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      ensure_ascii=True, allow_nan=False) + "\n"


def checks_bytes(report: Mapping) -> bytes:
    """Canonical bytes of the checks array alone (determinism probe)."""
    return canonical_json(report["checks"]).encode("ascii")


def write_report(report: Mapping, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(canonical_json(report))


def summarize(report: Mapping) -> dict:
    """Counts by status, plus the failing check names."""
    counts = {s: 0 for s in STATUSES}
    failures = []
    for c in report["checks"]:
        counts[c["status"]] += 1
        if c["status"] == "fail":
            failures.append(c["name"])
    return {"counts": counts, "failures": failures}


def all_executed_pass(report: Mapping) -> bool:
    """True iff no executed check failed (skipped entries do not count)."""
    return not any(c["status"] == "fail" for c in report["checks"])
