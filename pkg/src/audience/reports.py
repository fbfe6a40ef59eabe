"""Model-free descriptive statistics: activity spans, revenue mix, purchase
calendars and genre shares."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from datetime import date
from decimal import Decimal
from typing import Iterable

import numpy as np

from .errors import ConsistencyError, EmptyDatasetError
from .ingest import Performance, Transaction

HEATMAP_ROWS = 54  # ISO weeks 1..53 plus row 0 for early-January spill-over


@dataclass(frozen=True)
class ActivityDuration:
    account_id: str
    first_purchase: date
    last_purchase: date
    span_days: int
    single_purchase: bool


def activity_durations(
    transactions: Iterable[Transaction],
) -> tuple[list[ActivityDuration], float]:
    """Per-account first/last purchase span and the share of accounts with
    exactly one transaction line."""
    first: dict[str, date] = {}
    last: dict[str, date] = {}
    count: dict[str, int] = defaultdict(int)
    for t in transactions:
        a = t.account_id
        count[a] += 1
        if a not in first or t.order_date < first[a]:
            first[a] = t.order_date
        if a not in last or t.order_date > last[a]:
            last[a] = t.order_date
    if not count:
        raise EmptyDatasetError("no transactions")
    records = [
        ActivityDuration(
            account_id=a,
            first_purchase=first[a],
            last_purchase=last[a],
            span_days=(last[a] - first[a]).days,
            single_purchase=count[a] == 1,
        )
        for a in sorted(count)
    ]
    share = sum(r.single_purchase for r in records) / len(records)
    return records, share


def revenue_composition(transactions: Iterable[Transaction]) -> dict[str, float]:
    totals: dict[str, Decimal] = defaultdict(Decimal)
    for t in transactions:
        totals[t.price_group] += t.price_paid
    grand = sum(totals.values(), Decimal(0))
    if grand <= 0:
        raise EmptyDatasetError("total revenue is zero")
    # exact decimal division keeps the float shares summing to 1 within rounding
    return {g: float(v / grand) for g, v in sorted(totals.items())}


def heatmap_cell(d: date, year: int) -> tuple[int, int]:
    """(row, column) of a calendar-year date in the week x weekday grid.

    Rows are ISO week numbers; days of early January that belong to the
    previous ISO year go to row 0 and late-December days that belong to
    week 1 of the next ISO year go to row 53.
    """
    iso_year, week, weekday = d.isocalendar()
    if iso_year < year:
        week = 0
    elif iso_year > year:
        week = 53
    return week, weekday - 1


def purchase_heatmap(
    transactions: Iterable[Transaction], year: int, subscription_only: bool | None = None
) -> np.ndarray:
    """Seats ordered per day of ``year`` laid out as a 54 x 7 integer grid.

    ``subscription_only``: None counts every ticket, True only subscription
    tickets, False only non-subscription tickets.
    """
    grid = np.zeros((HEATMAP_ROWS, 7), dtype=np.int64)
    seen_year = False
    for t in transactions:
        if t.order_date.year != year:
            continue
        seen_year = True
        if subscription_only is not None and (t.price_group == "subscription") != subscription_only:
            continue
        r, c = heatmap_cell(t.order_date, year)
        grid[r, c] += t.seats
    if not seen_year:
        raise EmptyDatasetError(f"no transactions in {year}")
    return grid


@dataclass(frozen=True)
class GenreShare:
    genre: str
    performance_share: float
    seat_share: float


def genre_breakdown(
    transactions: Iterable[Transaction], catalog: Iterable[Performance]
) -> list[GenreShare]:
    catalog = list(catalog)
    if not catalog:
        raise EmptyDatasetError("empty catalog")
    genre_of = {p.performance_id: p.genre for p in catalog}
    shows: dict[str, int] = defaultdict(int)
    for p in catalog:
        shows[p.genre] += 1
    seats: dict[str, int] = defaultdict(int)
    for t in transactions:
        try:
            seats[genre_of[t.performance_id]] += t.seats
        except KeyError:
            raise ConsistencyError(f"unknown performance_id {t.performance_id!r}") from None
    total_seats = sum(seats.values())
    if total_seats == 0:
        raise EmptyDatasetError("no seats sold")
    n = len(catalog)
    return [
        GenreShare(g, shows[g] / n, seats.get(g, 0) / total_seats) for g in sorted(shows)
    ]
