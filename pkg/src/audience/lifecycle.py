"""Annual active / inactive / dead lifecycle states and the Markov chain fitted
to their transitions."""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Sequence

import numpy as np

from .errors import ContractError, EmptyDatasetError, ForecastError, InsufficientDataError
from .ingest import Transaction

ACTIVE, INACTIVE, DEAD = "active", "inactive", "dead"
STATES = (ACTIVE, INACTIVE, DEAD)
STATE_INDEX = {s: i for i, s in enumerate(STATES)}
DEAD_AFTER = 2  # consecutive purchase-free years


@dataclass(frozen=True)
class StateSequence:
    account_id: str
    first_year: int
    states: tuple[str, ...]

    @property
    def years(self) -> range:
        return range(self.first_year, self.first_year + len(self.states))


def season_of(d: date, season_start_month: int = 1) -> int:
    """Year label of a date; seasons starting mid-year are named by their
    starting calendar year."""
    return d.year if d.month >= season_start_month else d.year - 1


def states_from_activity(active_years: Iterable[int], last_year: int) -> list[tuple[int, list[str]]]:
    """Split one account's purchase years into (first_year, states) runs.

    A purchase after the account has died starts a fresh run.
    """
    active = sorted(set(active_years))
    runs: list[tuple[int, list[str]]] = []
    if not active:
        return runs
    pending = set(active)
    year = active[0]
    start, states, gap = year, [], 0
    while year <= last_year:
        if year in pending:
            if states and states[-1] == DEAD:
                runs.append((start, states))
                start, states = year, []
            states.append(ACTIVE)
            gap = 0
        else:
            gap += 1
            states.append(DEAD if gap >= DEAD_AFTER else INACTIVE)
        year += 1
    runs.append((start, states))
    return runs


def assign_states(
    transactions: Iterable[Transaction],
    year_range: tuple[int, int],
    season_start_month: int = 1,
) -> list[StateSequence]:
    """One state per year from each account's first purchase year through the
    end of ``year_range`` (inclusive).  Sequences are ordered by account id,
    then first year."""
    first, last = year_range
    if first > last:
        raise ContractError(f"empty year range {year_range}")
    if not 1 <= season_start_month <= 12:
        raise ContractError("season_start_month must be in 1..12")
    years: dict[str, set[int]] = defaultdict(set)
    for t in transactions:
        y = season_of(t.order_date, season_start_month)
        if not first <= y <= last:
            raise ContractError(f"transaction year {y} outside range {first}-{last}")
        years[t.account_id].add(y)
    if not years:
        raise EmptyDatasetError("no transactions")
    out = []
    for account in sorted(years):
        for start, states in states_from_activity(years[account], last):
            out.append(StateSequence(account, start, tuple(states)))
    return out


def resurrection_count(sequences: Iterable[StateSequence]) -> int:
    """Number of runs that restarted an account after it had died."""
    per_account = Counter(s.account_id for s in sequences)
    return sum(n - 1 for n in per_account.values())


@dataclass(frozen=True)
class LifecycleModel:
    transition_counts: np.ndarray  # 3x3 int, rows = from-state
    transition_probs: np.ndarray  # 3x3, NaN rows where undefined
    undefined_rows: tuple[str, ...]
    cohort_sizes: dict[int, int]

    def prob(self, src: str, dst: str) -> float:
        return float(self.transition_probs[STATE_INDEX[src], STATE_INDEX[dst]])


def transition_counts(sequences: Iterable[StateSequence]) -> np.ndarray:
    counts = np.zeros((3, 3), dtype=np.int64)
    for seq in sequences:
        idx = [STATE_INDEX[s] for s in seq.states]
        for a, b in zip(idx, idx[1:]):
            counts[a, b] += 1
    return counts


def model_from_counts(counts: np.ndarray, cohort_sizes: dict[int, int] | None = None) -> LifecycleModel:
    counts = np.asarray(counts, dtype=np.int64)
    if counts.sum() == 0:
        raise InsufficientDataError("no observed transitions")
    probs = np.full((3, 3), np.nan)
    undefined = []
    for s in (ACTIVE, INACTIVE):
        i = STATE_INDEX[s]
        total = counts[i].sum()
        if total == 0:
            undefined.append(s)
        else:
            probs[i] = counts[i] / total
    probs[STATE_INDEX[DEAD]] = (0.0, 0.0, 1.0)
    return LifecycleModel(counts, probs, tuple(undefined), dict(sorted((cohort_sizes or {}).items())))


def fit_transitions(sequences: Sequence[StateSequence]) -> LifecycleModel:
    """Maximum-likelihood transition probabilities; dead is forced absorbing
    and non-dead rows without outgoing observations are left undefined."""
    cohorts = Counter(s.first_year for s in sequences)
    return model_from_counts(transition_counts(sequences), dict(cohorts))


def forecast(model: LifecycleModel, initial, n_years: int) -> np.ndarray:
    dist = np.asarray(initial, dtype=float)
    if dist.shape != (3,) or np.any(dist < 0) or abs(dist.sum() - 1.0) > 1e-12:
        raise ContractError("initial distribution must be 3 non-negative entries summing to 1")
    if n_years < 0:
        raise ContractError("n_years must be >= 0")
    P = model.transition_probs
    bad = [STATE_INDEX[s] for s in model.undefined_rows]
    for _ in range(n_years):
        if any(dist[i] > 0 for i in bad):
            raise ForecastError("probability mass reaches a state with undefined transitions")
        dist = dist @ np.nan_to_num(P, nan=0.0)
    return dist


@dataclass(frozen=True)
class ChurnSummary:
    inactive_share: float  # P(active -> inactive)
    return_rate: float  # P(inactive -> active)
    new_customers: dict[int, int]  # accounts by first purchase year
    resurrections: int


def churn_summary(model: LifecycleModel, sequences: Sequence[StateSequence]) -> ChurnSummary:
    first_year: dict[str, int] = {}
    for s in sequences:
        if s.account_id not in first_year or s.first_year < first_year[s.account_id]:
            first_year[s.account_id] = s.first_year
    return ChurnSummary(
        inactive_share=model.prob(ACTIVE, INACTIVE),
        return_rate=model.prob(INACTIVE, ACTIVE),
        new_customers=dict(sorted(Counter(first_year.values()).items())),
        resurrections=resurrection_count(sequences),
    )
