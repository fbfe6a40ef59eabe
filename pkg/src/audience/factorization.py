"""Biased matrix factorization of purchase histories trained by masked ALS.

The model approximates ``X ~ L R^T + bL 1^T + 1 bR^T`` and minimizes

    sum over observed (i, j) of (X_ij - pred_ij)^2 + lam/2 (|L|_F^2 + |R|_F^2)

Missing cells are never read.  Each half-iteration solves, for every
customer (then every performance), the exact ridge problem over that row's
observed cells, with the bias carried as an unpenalized constant column.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    ContractError,
    DegenerateEntityError,
    UndefinedDirectionError,
    UnknownEntityError,
)
from .ingest import PurchaseMatrix

logger = logging.getLogger(__name__)

DEFAULT_K = 3
DEFAULT_LAMBDA = 0.1
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITERS = 300
INIT_SCALE = 0.01


@dataclass(eq=False)
class FactorModel:
    L: np.ndarray  # customers x k
    R: np.ndarray  # performances x k
    bL: np.ndarray
    bR: np.ndarray
    lam: float
    customers: tuple[str, ...]
    performances: tuple[str, ...]
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.L = np.asarray(self.L, dtype=float)
        self.R = np.asarray(self.R, dtype=float)
        self.bL = np.asarray(self.bL, dtype=float)
        self.bR = np.asarray(self.bR, dtype=float)
        self.customers = tuple(self.customers)
        self.performances = tuple(self.performances)
        nc, np_ = len(self.customers), len(self.performances)
        if self.L.ndim != 2 or self.R.ndim != 2 or self.L.shape[1] != self.R.shape[1]:
            raise ContractError("L and R must be 2-D with the same number of columns")
        if self.L.shape[0] != nc or self.bL.shape != (nc,):
            raise ContractError("customer factors do not match the customer index")
        if self.R.shape[0] != np_ or self.bR.shape != (np_,):
            raise ContractError("performance factors do not match the performance index")
        if self.lam < 0:
            raise ContractError("lambda must be non-negative")
        for name in ("L", "R", "bL", "bR"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise ContractError(f"{name} has non-finite entries")

    @property
    def k(self) -> int:
        return self.L.shape[1]

    @cached_property
    def customer_index(self) -> dict[str, int]:
        return {c: i for i, c in enumerate(self.customers)}

    @cached_property
    def performance_index(self) -> dict[str, int]:
        return {p: j for j, p in enumerate(self.performances)}

    def _row(self, customer: str) -> int:
        try:
            return self.customer_index[customer]
        except KeyError:
            raise UnknownEntityError("customer", customer) from None

    def _col(self, performance: str) -> int:
        try:
            return self.performance_index[performance]
        except KeyError:
            raise UnknownEntityError("performance", performance) from None

    def reconstruct(self) -> np.ndarray:
        return self.L @ self.R.T + self.bL[:, None] + self.bR[None, :]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "lambda": self.lam,
            "customers": list(self.customers),
            "performances": list(self.performances),
            "L": self.L.tolist(),
            "R": self.R.tolist(),
            "bL": self.bL.tolist(),
            "bR": self.bR.tolist(),
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> FactorModel:
        k = int(d["k"])
        L = np.array(d["L"], dtype=float).reshape(len(d["customers"]), k)
        R = np.array(d["R"], dtype=float).reshape(len(d["performances"]), k)
        return cls(L, R, d["bL"], d["bR"], float(d["lambda"]),
                   d["customers"], d["performances"], dict(d.get("metadata", {})))

    def save(self, path: str | Path) -> None:
        # json writes floats with repr(), which round-trips exactly
        Path(path).write_text(json.dumps(self.to_dict(), indent=1), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> FactorModel:
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


@dataclass
class FitReport:
    # objective before training, then after every half-iteration
    trajectory: list[float]
    iterations: int
    converged: bool
    rmse: float

    def to_dict(self) -> dict:
        return {
            "trajectory": self.trajectory,
            "iterations": self.iterations,
            "converged": self.converged,
            "rmse": self.rmse,
        }


def _check_shapes(model: FactorModel, matrix: PurchaseMatrix):
    if matrix.shape != (len(model.customers), len(model.performances)):
        raise ContractError(
            f"model is {len(model.customers)}x{len(model.performances)}, "
            f"matrix is {matrix.shape[0]}x{matrix.shape[1]}"
        )


def _residuals(L, R, bL, bR, values, observed):
    pred = L @ R.T + bL[:, None] + bR[None, :]
    return np.where(observed, values - pred, 0.0)


def _objective(L, R, bL, bR, lam, values, observed) -> float:
    res = _residuals(L, R, bL, bR, values, observed)
    return float(np.sum(res * res) + 0.5 * lam * (np.sum(L * L) + np.sum(R * R)))


def objective(model: FactorModel, matrix: PurchaseMatrix) -> float:
    _check_shapes(model, matrix)
    values = np.where(matrix.observed, matrix.values, 0.0)
    return _objective(model.L, model.R, model.bL, model.bR, model.lam, values, matrix.observed)


def observed_rmse(model: FactorModel, matrix: PurchaseMatrix) -> float:
    _check_shapes(model, matrix)
    values = np.where(matrix.observed, matrix.values, 0.0)
    res = _residuals(model.L, model.R, model.bL, model.bR, values, matrix.observed)
    n = int(matrix.observed.sum())
    return float(np.sqrt(np.sum(res * res) / n)) if n else 0.0


def _solve_side(other, other_bias, values, weights, lam):
    """Solve every row's ridge problem against the fixed ``other`` factors.

    Row i minimizes sum_j w_ij (values_ij - other_bias_j - [other_j, 1] . theta)^2
    + lam/2 |theta[:k]|^2; returns (factors, biases).
    """
    n_other, k = other.shape
    design = np.hstack([other, np.ones((n_other, 1))])
    outer = (design[:, :, None] * design[:, None, :]).reshape(n_other, -1)
    gram = (weights @ outer).reshape(-1, k + 1, k + 1)
    target = weights * (values - other_bias[None, :])
    rhs = target @ design
    # the loss is not halved, so the normal equations carry lam/2
    ridge = np.full(k + 1, 0.5 * lam)
    ridge[k] = 0.0
    gram = gram + np.diag(ridge)[None, :, :]
    try:
        theta = np.linalg.solve(gram, rhs[..., None])[..., 0]
        if not np.all(np.isfinite(theta)):
            raise np.linalg.LinAlgError
    except np.linalg.LinAlgError:
        theta = np.empty_like(rhs)
        for i in range(gram.shape[0]):
            # minimum-norm solution of the (singular) normal equations is
            # still an exact minimizer of the row problem
            theta[i] = np.linalg.lstsq(gram[i], rhs[i], rcond=None)[0]
    return theta[:, :k], theta[:, k]


def als_fit(
    matrix: PurchaseMatrix,
    k: int = DEFAULT_K,
    lam: float = DEFAULT_LAMBDA,
    seed: int = 0,
    max_iters: int = DEFAULT_MAX_ITERS,
    tol: float = DEFAULT_TOL,
) -> tuple[FactorModel, FitReport]:
    """Fit the biased factorization by alternating exact least-squares solves.

    R starts uniform in [-0.01, 0.01] from ``np.random.default_rng(seed)``;
    L and both biases start at zero and the first half-step solves the
    customer side.  Training stops after ``max_iters`` full iterations or
    once a full iteration lowers the objective by a relative amount below
    ``tol``.
    """
    nc, np_ = matrix.shape
    if k < 1 or k > min(nc, np_):
        raise ContractError(f"k must be in [1, {min(nc, np_)}], got {k}")
    if lam < 0:
        raise ContractError("lambda must be non-negative")
    if max_iters < 1:
        raise ContractError("max_iters must be >= 1")
    observed = matrix.observed
    empty_rows = np.flatnonzero(~observed.any(axis=1))
    if empty_rows.size:
        raise DegenerateEntityError("customer", matrix.customers[empty_rows[0]])
    empty_cols = np.flatnonzero(~observed.any(axis=0))
    if empty_cols.size:
        raise DegenerateEntityError("performance", matrix.performances[empty_cols[0]])

    weights = observed.astype(float)
    values = np.where(observed, matrix.values, 0.0)
    rng = np.random.default_rng(seed)
    R = rng.uniform(-INIT_SCALE, INIT_SCALE, size=(np_, k))
    L = np.zeros((nc, k))
    bL = np.zeros(nc)
    bR = np.zeros(np_)

    def obj():
        return _objective(L, R, bL, bR, lam, values, observed)

    trajectory = [obj()]
    converged = False
    it = 0
    for it in range(1, max_iters + 1):
        before = trajectory[-1]
        L, bL = _solve_side(R, bR, values, weights, lam)
        trajectory.append(obj())
        R, bR = _solve_side(L, bL, values.T, weights.T, lam)
        trajectory.append(obj())
        after = trajectory[-1]
        if before <= 0.0 or (before - after) / before < tol:
            converged = True
            break
    logger.info("ALS stopped after %d iteration(s), objective %.6g", it, trajectory[-1])

    model = FactorModel(
        L, R, bL, bR, lam, matrix.customers, matrix.performances,
        metadata={"seed": seed, "max_iters": max_iters, "tol": tol,
                  "iterations": it, "converged": converged, "objective": trajectory[-1]},
    )
    report = FitReport(trajectory, it, converged, observed_rmse(model, matrix))
    model.metadata["rmse"] = report.rmse
    return model, report


def predict(model: FactorModel, customer: str, performance: str) -> float:
    i = model._row(customer)
    j = model._col(performance)
    return float(model.L[i] @ model.R[j] + model.bL[i] + model.bR[j])


def recommend_top_k(
    model: FactorModel,
    customer: str,
    candidates: Iterable[str] | None = None,
    n: int = 10,
    purchased: Iterable[str] = (),
) -> list[tuple[str, float]]:
    """Highest-scoring candidates the customer has not bought.

    ``candidates`` defaults to every performance in the model; ties are broken
    by ascending performance id.
    """
    i = model._row(customer)
    pool = model.performances if candidates is None else tuple(dict.fromkeys(candidates))
    if not pool:
        raise ContractError("candidate set is empty")
    owned = set(purchased)
    cols = [model._col(p) for p in pool]
    scores = model.L[i] @ model.R[cols].T + model.bL[i] + model.bR[cols]
    ranked = sorted(
        ((p, float(s)) for p, s in zip(pool, scores) if p not in owned),
        key=lambda ps: (-ps[1], ps[0]),
    )
    return ranked[:n]


def performance_similarity(model: FactorModel, a: str, b: str) -> float:
    """Cosine between two performance latent vectors (biases excluded)."""
    ra = model.R[model._col(a)]
    rb = model.R[model._col(b)]
    na, nb = np.linalg.norm(ra), np.linalg.norm(rb)
    if na == 0.0 or nb == 0.0:
        raise UndefinedDirectionError("zero latent vector has no direction")
    return float(np.clip(ra @ rb / (na * nb), -1.0, 1.0))


def most_similar(model: FactorModel, performance: str, n: int = 10) -> list[tuple[str, float]]:
    if not np.any(model.R[model._col(performance)]):
        raise UndefinedDirectionError("zero latent vector has no direction")
    out = [
        (other, performance_similarity(model, performance, other))
        for other, vec in zip(model.performances, model.R)
        if other != performance and np.any(vec)
    ]
    out.sort(key=lambda ps: (-ps[1], ps[0]))
    return out[:n]


def dimension_order(model: FactorModel) -> np.ndarray:
    """Latent dimensions by decreasing energy (sum of squared loadings in L and R)."""
    energy = np.sum(model.L**2, axis=0) + np.sum(model.R**2, axis=0)
    return np.argsort(-energy, kind="stable")


@dataclass(frozen=True)
class EmbeddingRow:
    entity: str
    kind: str  # "customer" or "performance"
    group: str
    coordinates: tuple[float, ...]
    magnitude: float


def embedding_export(
    model: FactorModel,
    dims: int = 3,
    student_flags: Mapping[str, bool] | None = None,
    performance_groups: Mapping[str, str] | None = None,
) -> list[EmbeddingRow]:
    """Project customers and performances onto the ``dims`` most energetic
    latent directions.  Magnitudes are norms of the full latent vectors."""
    if dims < 1 or dims > model.k:
        raise ContractError(f"dims must be in [1, {model.k}], got {dims}")
    order = dimension_order(model)[:dims]
    flags = student_flags or {}
    groups = performance_groups or {}
    rows = []
    for c, vec in zip(model.customers, model.L):
        group = "student" if flags.get(c, False) else "general"
        rows.append(EmbeddingRow(c, "customer", group, tuple(vec[order].tolist()),
                                 float(np.linalg.norm(vec))))
    for p, vec in zip(model.performances, model.R):
        rows.append(EmbeddingRow(p, "performance", groups.get(p, "performance"),
                                 tuple(vec[order].tolist()), float(np.linalg.norm(vec))))
    return rows
