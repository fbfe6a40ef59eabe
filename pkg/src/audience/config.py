"""User-tunable lists that the analyses need but the data does not carry."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

DEFAULT_ABBREVIATIONS = frozenset(
    {
        "dr", "mr", "mrs", "ms", "prof", "st", "jr", "sr", "vs", "mt",
        "op", "approx", "dept", "inc", "ltd", "co", "feat", "ft",
    }
)


@dataclass(frozen=True)
class AnalysisConfig:
    # promotion codes that mark a ticket as student-class regardless of price group
    student_promotion_codes: frozenset[str] = frozenset()
    # lower-case, without the trailing period
    abbreviations: frozenset[str] = field(default=DEFAULT_ABBREVIATIONS)

    @classmethod
    def from_json(cls, path: str | Path) -> AnalysisConfig:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
        kwargs = {}
        if "student_promotion_codes" in raw:
            kwargs["student_promotion_codes"] = frozenset(raw["student_promotion_codes"])
        if "abbreviations" in raw:
            kwargs["abbreviations"] = frozenset(a.lower().rstrip(".") for a in raw["abbreviations"])
        return cls(**kwargs)
