"""Deterministic report serialization: JSON with integers as decimal strings, and a TSV a-table."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

SCHEMA_VERSION = "1"
TSV_HEADER = "i\tj\ta_closed\ta_engine"


def canonical(obj):
    """Exact values become strings; tuple keys become comma-joined strings."""
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, str):
        return obj
    if isinstance(obj, dict):
        return {(",".join(map(str, k)) if isinstance(k, tuple) else str(k)): canonical(v)
                for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class Report:
    command: str
    inputs: dict
    results: list = field(default_factory=list)
    timing_ms: int = 0

    @property
    def verdicts(self) -> list[str]:
        return [r["verdict"] for r in self.results if isinstance(r, dict) and "verdict" in r]

    @property
    def ok(self) -> bool:
        """True iff every verdict is ``pass`` (``unsupported`` counts against it)."""
        return all(v == "pass" for v in self.verdicts)

    def to_dict(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "command": self.command,
                "inputs": canonical(self.inputs), "results": canonical(self.results),
                "timing_ms": canonical(self.timing_ms)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def table_tsv(rows: list[dict]) -> str:
    lines = [TSV_HEADER]
    for r in rows:
        eng = r.get("a_engine")
        lines.append(f"{r['i']}\t{r['j']}\t{r['a_closed']}\t{'' if eng is None else eng}")
    return "\n".join(lines) + "\n"
