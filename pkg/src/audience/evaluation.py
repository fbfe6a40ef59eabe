"""Leave-one-out ranking evaluation of the factor model against popularity."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .factorization import FactorModel
from .ingest import PurchaseMatrix


@dataclass(frozen=True)
class HoldoutSplit:
    train: PurchaseMatrix
    held_out: tuple[tuple[int, int], ...]  # (customer row, performance column)


def leave_one_out(matrix: PurchaseMatrix, seed: int = 0, min_bought: int = 2) -> HoldoutSplit:
    """Hide one bought cell per customer with at least ``min_bought`` purchases.

    The hidden cell stays observed in the training matrix as not-bought, which
    is how an unseen future purchase looks to the model.
    """
    rng = np.random.default_rng(seed)
    values = np.array(matrix.values)
    bought = matrix.bought
    held = []
    for i in range(matrix.shape[0]):
        cols = np.flatnonzero(bought[i])
        if cols.size >= min_bought:
            j = int(cols[rng.integers(cols.size)])
            values[i, j] = 0.0
            held.append((i, j))
    return HoldoutSplit(matrix.with_values(values), tuple(held))


def _hit_rate(scores: np.ndarray, split: HoldoutSplit, n: int) -> float:
    train = split.train
    if not split.held_out:
        return float("nan")
    # ties resolve towards the lower column index (catalog order)
    hits = 0
    for i, j in split.held_out:
        eligible = train.observed[i] & ~train.bought[i]
        cols = np.flatnonzero(eligible)
        order = cols[np.lexsort((cols, -scores[i, cols]))]
        hits += j in order[:n]
    return hits / len(split.held_out)


def model_hit_rate(model: FactorModel, split: HoldoutSplit, n: int = 10) -> float:
    return _hit_rate(model.reconstruct(), split, n)


def popularity_hit_rate(split: HoldoutSplit, n: int = 10) -> float:
    counts = split.train.bought.sum(axis=0).astype(float)
    return _hit_rate(np.broadcast_to(counts, split.train.shape), split, n)
