"""Parsing of transaction/catalog tables and construction of the purchase matrix."""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from datetime import date
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Iterable, Mapping, TextIO

import numpy as np

from .config import AnalysisConfig
from .errors import ConsistencyError, IngestError, SchemaError

logger = logging.getLogger(__name__)

CUSTOMER_TYPES = frozenset({"household", "individual", "organization"})
PRICE_GROUPS = ("regular", "subscription", "student", "other")
GENRES = ("Orchestra", "Chamber", "Jazz", "Theater", "Dance", "Choral", "Other")

TRANSACTION_COLUMNS = (
    "account_id",
    "account_created",
    "customer_type",
    "performance_id",
    "order_date",
    "seats",
    "price_paid",
    "price_group",
    "promotion_code",
    "mode_of_sale",
    "postal_code",
)
CATALOG_COLUMNS = (
    "performance_id",
    "name",
    "date",
    "venue",
    "capacity",
    "genre",
    "subscription_series",
    "description_path",
)


@dataclass(frozen=True)
class Transaction:
    account_id: str
    account_created: date
    customer_type: str
    performance_id: str
    order_date: date
    seats: int
    price_paid: Decimal
    price_group: str
    promotion_code: str | None = None
    mode_of_sale: str = ""
    postal_code: str | None = None


@dataclass(frozen=True)
class Performance:
    performance_id: str
    name: str
    date: date
    venue: str
    capacity: int
    genre: str
    subscription_series: str | None = None
    description: str | None = None


@dataclass(frozen=True)
class Diagnostic:
    row: int  # 1-based line number in the source, header is line 1
    message: str

    def __str__(self):
        return f"row {self.row}: {self.message}"


@dataclass(frozen=True, eq=False)
class PurchaseMatrix:
    """Customers x performances; ``values`` is only meaningful where ``observed``.

    Bought cells hold 1.0 and not-bought 0.0.  Real-valued matrices (used to
    exercise the factorization on planted data) reuse the same container.
    """

    customers: tuple[str, ...]
    performances: tuple[str, ...]
    values: np.ndarray
    observed: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        observed = np.array(self.observed, dtype=bool)
        shape = (len(self.customers), len(self.performances))
        if values.shape != shape or observed.shape != shape:
            raise ValueError(f"matrix arrays must have shape {shape}")
        values.setflags(write=False)
        observed.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "observed", observed)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def missing(self) -> np.ndarray:
        return ~self.observed

    @property
    def bought(self) -> np.ndarray:
        return self.observed & (self.values == 1.0)

    def cell(self, customer: str, performance: str) -> int | float | None:
        i = self.customers.index(customer)
        j = self.performances.index(performance)
        if not self.observed[i, j]:
            return None
        v = self.values[i, j]
        return int(v) if v in (0.0, 1.0) else float(v)

    def with_values(self, values: np.ndarray) -> PurchaseMatrix:
        return PurchaseMatrix(self.customers, self.performances, values, self.observed)

    def with_observed(self, observed: np.ndarray) -> PurchaseMatrix:
        return PurchaseMatrix(self.customers, self.performances, self.values, observed)

    def dense(self) -> np.ndarray:
        """Values with NaN in missing cells."""
        return np.where(self.observed, self.values, np.nan)

    def __eq__(self, other):
        if not isinstance(other, PurchaseMatrix):
            return NotImplemented
        return (
            self.customers == other.customers
            and self.performances == other.performances
            and np.array_equal(self.observed, other.observed)
            and np.array_equal(np.where(self.observed, self.values, 0.0),
                               np.where(other.observed, other.values, 0.0))
        )


def _check_header(reader: csv.DictReader, required: Iterable[str], what: str):
    header = reader.fieldnames or []
    absent = [c for c in required if c not in header]
    if absent:
        raise SchemaError(f"{what} table is missing required column(s): {', '.join(absent)}")


def _optional(s: str | None) -> str | None:
    s = (s or "").strip()
    return s or None


def _parse_transaction_row(row: Mapping[str, str]) -> Transaction:
    # raises ValueError with a human-readable message
    account_id = (row["account_id"] or "").strip()
    performance_id = (row["performance_id"] or "").strip()
    if not account_id:
        raise ValueError("empty account_id")
    if not performance_id:
        raise ValueError("empty performance_id")
    try:
        created = date.fromisoformat(row["account_created"].strip())
    except (ValueError, AttributeError):
        raise ValueError(f"unparseable account_created {row['account_created']!r}") from None
    try:
        ordered = date.fromisoformat(row["order_date"].strip())
    except (ValueError, AttributeError):
        raise ValueError(f"unparseable order_date {row['order_date']!r}") from None
    try:
        seats = int(row["seats"])
    except (ValueError, TypeError):
        raise ValueError(f"unparseable seats {row['seats']!r}") from None
    try:
        price = Decimal(row["price_paid"].strip())
    except (InvalidOperation, AttributeError):
        raise ValueError(f"unparseable price_paid {row['price_paid']!r}") from None
    customer_type = (row["customer_type"] or "").strip().lower()
    if customer_type not in CUSTOMER_TYPES:
        raise ValueError(f"unknown customer_type {row['customer_type']!r}")
    if seats < 1:
        raise ValueError(f"seats must be >= 1, got {seats}")
    if not price.is_finite() or price < 0:
        raise ValueError(f"price_paid must be >= 0, got {price}")
    if ordered < created:
        raise ValueError("order precedes account creation")
    group = (row["price_group"] or "").strip().lower()
    if group not in PRICE_GROUPS:
        group = "other"
    return Transaction(
        account_id=account_id,
        account_created=created,
        customer_type=customer_type,
        performance_id=performance_id,
        order_date=ordered,
        seats=seats,
        price_paid=price,
        price_group=group,
        promotion_code=_optional(row["promotion_code"]),
        mode_of_sale=(row["mode_of_sale"] or "").strip(),
        postal_code=_optional(row["postal_code"]),
    )


def parse_transactions(
    source: TextIO, strict: bool = False
) -> tuple[list[Transaction], list[Diagnostic]]:
    """Parse a transactions CSV stream.

    Malformed rows are skipped and reported as diagnostics; with ``strict``
    any diagnostic raises :class:`IngestError` after the whole stream is read.
    """
    reader = csv.DictReader(source)
    _check_header(reader, TRANSACTION_COLUMNS, "transactions")
    out, diags = [], []
    for row in reader:
        line = reader.line_num
        if None in row or any(v is None for v in row.values()):
            diags.append(Diagnostic(line, "wrong number of fields"))
            continue
        try:
            out.append(_parse_transaction_row(row))
        except ValueError as exc:
            diags.append(Diagnostic(line, str(exc)))
    if diags:
        logger.warning("%d transaction row(s) rejected", len(diags))
        if strict:
            raise IngestError(diags)
    return out, diags


def parse_catalog(
    source: TextIO, strict: bool = False, descriptions_root: str | Path | None = None
) -> tuple[list[Performance], list[Diagnostic]]:
    """Parse a catalog CSV stream; ``description_path`` is resolved against
    ``descriptions_root`` when given, otherwise descriptions stay absent."""
    reader = csv.DictReader(source)
    _check_header(reader, CATALOG_COLUMNS, "catalog")
    root = Path(descriptions_root) if descriptions_root is not None else None
    out, diags, seen = [], [], set()
    for row in reader:
        line = reader.line_num
        if None in row or any(v is None for v in row.values()):
            diags.append(Diagnostic(line, "wrong number of fields"))
            continue
        pid = row["performance_id"].strip()
        try:
            if not pid:
                raise ValueError("empty performance_id")
            if pid in seen:
                raise ValueError(f"duplicate performance_id {pid!r}")
            try:
                when = date.fromisoformat(row["date"].strip())
            except ValueError:
                raise ValueError(f"unparseable date {row['date']!r}") from None
            try:
                capacity = int(row["capacity"])
            except ValueError:
                raise ValueError(f"unparseable capacity {row['capacity']!r}") from None
            if capacity < 1:
                raise ValueError(f"capacity must be >= 1, got {capacity}")
            genre = row["genre"].strip()
            if genre not in GENRES:
                raise ValueError(f"unknown genre {genre!r}")
            description = None
            rel = _optional(row["description_path"])
            if rel is not None and root is not None:
                try:
                    description = (root / rel).read_text(encoding="utf-8")
                except OSError as exc:
                    raise ValueError(f"cannot read description {rel!r}: {exc.strerror}") from None
        except ValueError as exc:
            diags.append(Diagnostic(line, str(exc)))
            continue
        seen.add(pid)
        out.append(
            Performance(
                performance_id=pid,
                name=row["name"].strip(),
                date=when,
                venue=row["venue"].strip(),
                capacity=capacity,
                genre=genre,
                subscription_series=_optional(row["subscription_series"]),
                description=description,
            )
        )
    if diags:
        logger.warning("%d catalog row(s) rejected", len(diags))
        if strict:
            raise IngestError(diags)
    return out, diags


def read_transactions(path: str | Path, strict: bool = False):
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_transactions(fh, strict=strict)


def read_catalog(path: str | Path, strict: bool = False, descriptions_root=None):
    path = Path(path)
    root = path.parent if descriptions_root is None else descriptions_root
    with open(path, newline="", encoding="utf-8") as fh:
        return parse_catalog(fh, strict=strict, descriptions_root=root)


def account_creation_dates(transactions: Iterable[Transaction]) -> dict[str, date]:
    # an account listed with several creation dates keeps the earliest
    created: dict[str, date] = {}
    for t in transactions:
        prev = created.get(t.account_id)
        if prev is None or t.account_created < prev:
            created[t.account_id] = t.account_created
    return created


def build_matrix(
    transactions: Iterable[Transaction],
    catalog: Iterable[Performance],
    exclude_subscriptions: bool = False,
) -> PurchaseMatrix:
    """Binary purchase matrix with rows sorted by account id and columns in
    catalog order.  A cell is missing when the performance took place
    strictly before the customer's account was created."""
    transactions = list(transactions)
    catalog = list(catalog)
    col = {p.performance_id: j for j, p in enumerate(catalog)}
    unknown = sorted({t.performance_id for t in transactions} - col.keys())
    if unknown:
        raise ConsistencyError(
            f"transactions reference unknown performance_id(s): {', '.join(unknown[:10])}"
        )
    created = account_creation_dates(transactions)
    customers = tuple(sorted(created))
    row = {c: i for i, c in enumerate(customers)}

    values = np.zeros((len(customers), len(catalog)))
    for t in transactions:
        if exclude_subscriptions and t.price_group == "subscription":
            continue
        values[row[t.account_id], col[t.performance_id]] = 1.0

    created_ord = np.array([created[c].toordinal() for c in customers], dtype=np.int64)
    perf_ord = np.array([p.date.toordinal() for p in catalog], dtype=np.int64)
    observed = perf_ord[None, :] >= created_ord[:, None]
    # masking is purely date-based and overrides any purchase on the same cell
    return PurchaseMatrix(customers, tuple(col), values, observed)


def student_flags(
    transactions: Iterable[Transaction], config: AnalysisConfig | None = None
) -> dict[str, bool]:
    codes = (config or AnalysisConfig()).student_promotion_codes
    flags: dict[str, bool] = {}
    for t in transactions:
        is_student = t.price_group == "student" or (
            t.promotion_code is not None and t.promotion_code in codes
        )
        flags[t.account_id] = flags.get(t.account_id, False) or is_student
    return flags


def seats_by_performance(
    transactions: Iterable[Transaction], exclude_subscriptions: bool = False
) -> dict[str, int]:
    seats: dict[str, int] = {}
    for t in transactions:
        if exclude_subscriptions and t.price_group == "subscription":
            continue
        seats[t.performance_id] = seats.get(t.performance_id, 0) + t.seats
    return seats
