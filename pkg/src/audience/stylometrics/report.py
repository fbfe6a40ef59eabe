from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable

from ..config import AnalysisConfig
from ..errors import InsufficientDataError, UndefinedCorrelationError
from ..ingest import Performance, Transaction, seats_by_performance
from .metrics import PolyFit, fk_grade, formality, pearson, polyfit
from .pos import pos_tag
from .text import tokenize

logger = logging.getLogger(__name__)

METRICS = ("readability", "formality", "length")
FIT_DEGREE = {"readability": 2, "formality": 1, "length": 1}


@dataclass(frozen=True)
class StyleRecord:
    performance_id: str
    readability: float
    formality: float
    length: int
    pct_seats_sold: float


@dataclass(frozen=True)
class StyleReport:
    records: list[StyleRecord]
    correlations: dict[str, float]
    fits: dict[str, PolyFit]
    readability_vertex: float | None
    diagnostics: list[str] = field(default_factory=list)


def style_record(
    performance: Performance, seats_sold: int, config: AnalysisConfig | None = None
) -> tuple[StyleRecord, str | None]:
    config = config or AnalysisConfig()
    doc = tokenize(performance.description, config.abbreviations)
    pct = seats_sold / performance.capacity
    note = None
    if pct > 1.0:
        note = (
            f"{performance.performance_id}: {seats_sold} seats sold exceeds capacity "
            f"{performance.capacity}; clamped to 100%"
        )
        pct = 1.0
    record = StyleRecord(
        performance_id=performance.performance_id,
        readability=fk_grade(doc),
        formality=formality(pos_tag(doc)),
        length=len(doc.tokens),
        pct_seats_sold=pct,
    )
    return record, note


def style_report(
    catalog: Iterable[Performance],
    transactions: Iterable[Transaction],
    config: AnalysisConfig | None = None,
) -> StyleReport:
    """Style metrics per described show against the share of seats sold
    outside subscriptions, with correlations and polynomial trend fits.

    Shows without a description are skipped.  Records come back sorted by
    performance id so the output does not depend on catalog order.
    """
    sold = seats_by_performance(transactions, exclude_subscriptions=True)
    described = sorted(
        (p for p in catalog if p.description and p.description.strip()),
        key=lambda p: p.performance_id,
    )
    if len(described) < 3:
        raise InsufficientDataError(
            f"style analysis needs >= 3 described performances, got {len(described)}"
        )
    records, notes = [], []
    for p in described:
        rec, note = style_record(p, sold.get(p.performance_id, 0), config)
        records.append(rec)
        if note:
            notes.append(note)
            logger.warning(note)

    y = [r.pct_seats_sold for r in records]
    correlations, fits = {}, {}
    for metric in METRICS:
        x = [getattr(r, metric) for r in records]
        try:
            correlations[metric] = pearson(x, y)
        except UndefinedCorrelationError as exc:
            raise UndefinedCorrelationError(f"{metric}: {exc}") from None
        fits[metric] = polyfit(x, y, FIT_DEGREE[metric])
    quad = fits["readability"]
    vertex = quad.vertex() if quad.coefficients[2] != 0.0 else None
    return StyleReport(records, correlations, fits, vertex, notes)
