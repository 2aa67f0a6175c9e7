"""Check records and report assembly shared by all suites and the CLI."""

from __future__ import annotations

from typing import Any, Dict, List, Optional

SCHEMA = 1


def record(name: str, anchor: str, ok: bool, witness: Any = None,
           status_ok: str = "pass") -> Dict[str, Any]:
    """One check result. ``witness`` is a JSON-friendly counterexample or note."""
    return {
        "name": name,
        "anchor": anchor,
        "status": status_ok if ok else "fail",
        "witness": witness,
    }


def all_passed(checks: List[Dict[str, Any]]) -> bool:
    return all(c["status"] != "fail" for c in checks)


def summary(checks: List[Dict[str, Any]]) -> Dict[str, int]:
    out = {"pass": 0, "fail": 0, "sampled": 0}
    for c in checks:
        out[c["status"]] = out.get(c["status"], 0) + 1
    return out


def first_failure(checks: List[Dict[str, Any]]) -> Optional[Dict[str, Any]]:
    return next((c for c in checks if c["status"] == "fail"), None)
