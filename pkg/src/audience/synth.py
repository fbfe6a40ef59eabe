"""Seeded synthetic ticketing datasets with planted ground truth.

Every random quantity comes from one ``numpy.random.Generator`` built as
``np.random.default_rng(config.seed)`` (PCG64), consumed in this order:

1. genre style centroids (7 x latent_dim normals);
2. per performance, in id order: date, genre, series membership, latent
   vector, popularity bias, base price, target readability grade, then the
   description text and the sales noise;
3. per customer, in id order: student flag, latent vector, buying-power bias,
   customer type, first year, lifecycle path, single-purchase draw,
   subscriber draw, mode-of-sale preference, postal code;
4. per customer, in id order: purchases year by year (single tickets, then
   subscriptions), account creation offset after the first purchase.

Capacities are derived last so that the share of non-subscription seats
sold follows the planted quadratic in readability.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from datetime import date, timedelta
from decimal import Decimal
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .ingest import (
    CATALOG_COLUMNS,
    GENRES,
    TRANSACTION_COLUMNS,
    Performance,
    PurchaseMatrix,
    Transaction,
)
from .lifecycle import STATE_INDEX
from .stylometrics import count_syllables, fk_grade, tokenize

DEFAULT_TRANSITIONS = (
    (0.35, 0.65, 0.0),
    (0.10, 0.0, 0.90),
    (0.0, 0.0, 1.0),
)

GENRE_WEIGHTS = (0.22, 0.18, 0.14, 0.12, 0.10, 0.10, 0.14)
SERIES = {
    "Dance": "Dance and Theater",
    "Theater": "Dance and Theater",
    "Jazz": "Jazz",
    "Choral": "Choral Union",
    "Chamber": "Chamber Arts",
}
SERIES_MEMBERSHIP = 0.7
VENUES = {
    "Orchestra": "Hill Auditorium",
    "Choral": "Hill Auditorium",
    "Jazz": "Michigan Theater",
    "Chamber": "Rackham Auditorium",
    "Theater": "Power Center",
    "Dance": "Power Center",
    "Other": "Hill Auditorium",
}
SEASON_MONTHS = (1, 2, 3, 4, 9, 10, 11, 12)
CUSTOMER_TYPES = ("household", "individual", "organization")
CUSTOMER_TYPE_WEIGHTS = (0.6, 0.35, 0.05)
MODES = ("web", "phone", "box office")
POSTAL_CODES = ("48103", "48104", "48105", "48108", "48109", "48197", "48226", "49503")

STYLE_SPREAD = 1.6  # norm of genre centroids
PERF_JITTER = 0.45
TASTE_SCALE = 1.1
PERF_BIAS = (-1.6, 0.5)
CUSTOMER_BIAS = (-0.6, 0.5)
ORDER_LEAD_DAYS = 60
ACCOUNT_LEAD_DAYS = 240  # mean days an account predates its first order
SALES_PEAK = 0.85
SALES_CURVATURE = 0.003
SALES_NOISE = 0.02
GRADE_SPREAD = 8.0
DEFAULT_CAPACITY = 500


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int = 0
    n_customers: int = 2000
    n_performances: int = 60
    latent_dim: int = 3
    student_fraction: float = 0.15
    student_magnitude_scale: float = 0.5
    single_purchase_target: float = 0.66
    true_transition_matrix: tuple[tuple[float, ...], ...] = DEFAULT_TRANSITIONS
    readability_vertex: float = 15.0
    years: tuple[int, int] = (2011, 2015)
    subscription_fraction: float = 0.056

    def __post_init__(self):
        P = np.asarray(self.true_transition_matrix, dtype=float)
        object.__setattr__(
            self, "true_transition_matrix", tuple(tuple(float(v) for v in row) for row in P)
        )
        object.__setattr__(self, "years", (int(self.years[0]), int(self.years[1])))
        self.validate()

    @property
    def year_list(self) -> list[int]:
        return list(range(self.years[0], self.years[1] + 1))

    def validate(self):
        if self.n_customers < 1 or self.n_performances < 1:
            raise ConfigError("need at least one customer and one performance")
        if self.latent_dim < 1:
            raise ConfigError("latent_dim must be >= 1")
        if self.years[0] > self.years[1]:
            raise ConfigError(f"empty year range {self.years}")
        if self.n_performances < len(self.year_list):
            raise ConfigError("need at least one performance per year")
        for name in ("student_fraction", "single_purchase_target", "subscription_fraction"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {v}")
        if self.student_magnitude_scale <= 0:
            raise ConfigError("student_magnitude_scale must be > 0")
        P = np.asarray(self.true_transition_matrix)
        if P.shape != (3, 3) or np.any(P < 0) or np.any(P > 1):
            raise ConfigError("transition matrix must be 3x3 with entries in [0, 1]")
        if not np.allclose(P.sum(axis=1), 1.0, atol=1e-12, rtol=0):
            raise ConfigError("transition rows must sum to 1")
        a, i, d = STATE_INDEX["active"], STATE_INDEX["inactive"], STATE_INDEX["dead"]
        if P[d, d] != 1.0:
            raise ConfigError("dead must be absorbing")
        # observed states: death needs two silent years, so a purchase-free year
        # after an active one is always 'inactive' and one after 'inactive' is 'dead'
        if P[a, d] != 0.0 or P[i, i] != 0.0:
            raise ConfigError("active->dead and inactive->inactive must be 0 for observed states")
        if self.single_purchase_target > self.single_year_probability() + 1e-12:
            raise ConfigError(
                f"single_purchase_target {self.single_purchase_target} exceeds the share of "
                f"customers active in only one year ({self.single_year_probability():.4f})"
            )
        if self.subscription_fraction > 1.0 - self.single_purchase_target + 1e-12:
            raise ConfigError("subscription_fraction exceeds the share of repeat customers")

    def single_year_probability(self) -> float:
        """Chance that a customer, with a uniformly drawn first year, is active
        in exactly one year of the range under the transition matrix."""
        P = np.asarray(self.true_transition_matrix)
        a = STATE_INDEX["active"]
        no_return = P.copy()
        no_return[:, a] = 0.0
        years = self.year_list
        total = 0.0
        for first in years:
            v = np.zeros(3)
            v[a] = 1.0
            for _ in range(years[-1] - first):
                v = v @ no_return
            total += v.sum()
        return total / len(years)


@dataclass
class SyntheticDataset:
    config: GeneratorConfig
    transactions: list[Transaction]
    catalog: list[Performance]
    description_paths: dict[str, str]
    truth: dict = field(repr=False)

    def transactions_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TRANSACTION_COLUMNS)
        for t in self.transactions:
            w.writerow([
                t.account_id, t.account_created.isoformat(), t.customer_type,
                t.performance_id, t.order_date.isoformat(), t.seats, f"{t.price_paid:.2f}",
                t.price_group, t.promotion_code or "", t.mode_of_sale, t.postal_code or "",
            ])
        return buf.getvalue()

    def catalog_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CATALOG_COLUMNS)
        for p in self.catalog:
            w.writerow([
                p.performance_id, p.name, p.date.isoformat(), p.venue, p.capacity, p.genre,
                p.subscription_series or "", self.description_paths.get(p.performance_id, ""),
            ])
        return buf.getvalue()

    def truth_json(self) -> str:
        return json.dumps(self.truth, indent=1, sort_keys=True)

    def write(self, out_dir: str | Path) -> dict[str, Path]:
        out = Path(out_dir)
        (out / "descriptions").mkdir(parents=True, exist_ok=True)
        paths = {
            "transactions": out / "transactions.csv",
            "catalog": out / "catalog.csv",
            "truth": out / "truth.json",
        }
        paths["transactions"].write_text(self.transactions_csv(), encoding="utf-8")
        paths["catalog"].write_text(self.catalog_csv(), encoding="utf-8")
        paths["truth"].write_text(self.truth_json(), encoding="utf-8")
        for p in self.catalog:
            rel = self.description_paths[p.performance_id]
            (out / rel).write_text(p.description, encoding="utf-8")
        return paths


# -- description text -------------------------------------------------------

_VOCAB = """
the a of in with and we you it to for on by at from his her its our their
night stage song dance piece work score choir band voice sound light hall art
show heart world year time hand joy grace fire soul string horn drum
music concert program season artist journey story culture vibrant brilliant
moving stunning premiere quartet students presents returns performs rising
evening festival composer ensemble orchestra symphony audience tradition
performance history century energy harmony melody beautiful powerful dramatic
intimate classical virtuoso musicians signature
celebration legendary remarkable original innovative community experience
ambitious repertoire conservatory
collaboration extraordinary contemporary imaginative international
unforgettable interpretation
""".split()


def _syllable_pools() -> dict[int, list[str]]:
    pools: dict[int, list[str]] = {}
    for w in _VOCAB:
        pools.setdefault(min(count_syllables(w), 5), []).append(w)
    return {s: sorted(set(ws)) for s, ws in sorted(pools.items())}


_POOLS = _syllable_pools()


def describe(rng: np.random.Generator, target_grade: float) -> str:
    """Text whose grade level lands near ``target_grade``.

    Sentence length and syllable mix are solved from the grade formula; the
    exact grade of the result is measured afterwards by the caller.
    """
    n_sentences = int(rng.integers(3, 9))
    words_per = int(rng.integers(12, 31))
    spw = (target_grade + 15.59 - 0.39 * words_per) / 11.8
    lo, hi = min(_POOLS), max(_POOLS)
    spw = float(np.clip(spw, lo + 0.05, hi - 0.05))
    sentences = []
    for _ in range(n_sentences):
        target = spw * words_per
        base = int(np.floor(spw))
        extra = int(round(target - base * words_per))
        counts = np.full(words_per, base)
        counts[rng.permutation(words_per)[:extra]] += 1
        counts = np.clip(counts, lo, hi)
        words = [_POOLS[int(c)][int(rng.integers(len(_POOLS[int(c)])))] for c in counts]
        words[0] = words[0].capitalize()
        sentences.append(" ".join(words) + ".")
    return " ".join(sentences)


# -- generation ---------------------------------------------------------------

def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def _season_date(rng, year: int) -> date:
    month = SEASON_MONTHS[int(rng.integers(len(SEASON_MONTHS)))]
    day = int(rng.integers(1, 29))
    return date(year, month, day)


def _order_date(rng, show: date, not_before: date) -> date:
    # same calendar year as the show and no earlier than ``not_before``
    earliest = max(show - timedelta(days=ORDER_LEAD_DAYS), date(show.year, 1, 1), not_before)
    span = (show - earliest).days
    return earliest + timedelta(days=int(rng.integers(0, span + 1)))


def _price(base: float, seats: int, factor: float) -> Decimal:
    return (Decimal(str(round(base * factor, 2))) * seats).quantize(Decimal("0.01"))


def generate(config: GeneratorConfig) -> SyntheticDataset:
    rng = np.random.default_rng(config.seed)
    k = config.latent_dim
    years = config.year_list
    last_year = years[-1]

    centroids = rng.normal(size=(len(GENRES), k))
    centroids *= STYLE_SPREAD / np.linalg.norm(centroids, axis=1, keepdims=True)

    # performances
    per_year = [config.n_performances // len(years)] * len(years)
    for y in range(config.n_performances % len(years)):
        per_year[y] += 1
    perf_rows = []
    for y, count in zip(years, per_year):
        for _ in range(count):
            when = _season_date(rng, y)
            g = int(rng.choice(len(GENRES), p=GENRE_WEIGHTS))
            genre = GENRES[g]
            in_series = genre in SERIES and rng.random() < SERIES_MEMBERSHIP
            vec = centroids[g] + rng.normal(scale=PERF_JITTER, size=k)
            bias = rng.normal(*PERF_BIAS)
            base_price = float(rng.integers(25, 91))
            grade = config.readability_vertex + rng.uniform(-GRADE_SPREAD, GRADE_SPREAD)
            text = describe(rng, grade)
            noise = rng.normal(scale=SALES_NOISE)
            perf_rows.append(dict(date=when, genre=genre, series=SERIES[genre] if in_series else None,
                                  vec=vec, bias=bias, base=base_price, text=text, noise=noise))
    perf_rows.sort(key=lambda r: r["date"])  # stable: ties keep draw order
    n_p = len(perf_rows)
    pids = [f"P{j + 1:04d}" for j in range(n_p)]
    R = np.array([r["vec"] for r in perf_rows])
    bR = np.array([r["bias"] for r in perf_rows])
    perf_dates = [r["date"] for r in perf_rows]
    by_year = {y: [j for j in range(n_p) if perf_dates[j].year == y] for y in years}

    # customers
    P = np.asarray(config.true_transition_matrix)
    single_q = (config.single_purchase_target / config.single_year_probability()
                if config.single_purchase_target > 0 else 0.0)
    repeat_share = 1.0 - config.single_purchase_target
    subscriber_q = config.subscription_fraction / repeat_share if repeat_share > 0 else 0.0
    n_c = config.n_customers
    cids = [f"A{i + 1:06d}" for i in range(n_c)]
    L = np.empty((n_c, k))
    bL = np.empty(n_c)
    cust = []
    for i in range(n_c):
        student = rng.random() < config.student_fraction
        L[i] = rng.normal(scale=TASTE_SCALE, size=k)
        bL[i] = rng.normal(*CUSTOMER_BIAS)
        if student:
            L[i] *= config.student_magnitude_scale
            # halve the purchase odds as well as the taste magnitude
            bL[i] += np.log(0.5)
        ctype = CUSTOMER_TYPES[int(rng.choice(3, p=CUSTOMER_TYPE_WEIGHTS))]
        first = years[int(rng.integers(len(years)))]
        path = ["active"]
        state = STATE_INDEX["active"]
        for _ in range(first + 1, last_year + 1):
            state = int(rng.choice(3, p=P[state]))
            path.append(("active", "inactive", "dead")[state])
        single_draw = rng.random()
        subscriber_draw = rng.random()
        n_active = path.count("active")
        single = n_active == 1 and single_draw < single_q
        subscriber = not single and subscriber_draw < subscriber_q
        mode = MODES[int(rng.integers(len(MODES)))]
        postal = POSTAL_CODES[int(rng.integers(len(POSTAL_CODES)))]
        cust.append(dict(student=student, type=ctype, first=first, path=path, single=single,
                         subscriber=subscriber, mode=mode, postal=postal))

    transactions: list[Transaction] = []
    for i, c in enumerate(cust):
        scores = _sigmoid(L[i] @ R.T + bL[i] + bR)
        orders: list[tuple[int, date, str]] = []  # (performance, order date, price group)
        created = None
        active_years = [y for y, s in zip(range(c["first"], last_year + 1), c["path"]) if s == "active"]
        need_two = not c["single"] and len(active_years) == 1
        for y in active_years:
            cands = [j for j in by_year[y] if created is None or perf_dates[j] >= created]
            p = scores[cands]
            if c["single"]:
                picks = [cands[int(rng.choice(len(cands), p=p / p.sum()))]]
            else:
                hit = rng.random(len(cands)) < p
                picks = [j for j, h in zip(cands, hit) if h]
                minimum = 2 if need_two else 1
                while len(picks) < minimum:
                    rest = [j for j in cands if j not in picks] or cands
                    q = scores[rest]
                    picks.append(rest[int(rng.choice(len(rest), p=q / q.sum()))])
            # earliest show first: its order fixes the account creation date,
            # which then precedes every later show
            for j in sorted(picks, key=lambda j: perf_dates[j]):
                floor = created or date(y, 1, 1)
                od = _order_date(rng, perf_dates[j], floor)
                if created is None:
                    created = od - timedelta(days=int(rng.exponential(ACCOUNT_LEAD_DAYS)))
                group = "student" if c["student"] else ("other" if rng.random() < 0.08 else "regular")
                orders.append((j, od, group))
            if c["subscriber"]:
                sub_day = date(y, 4, 1) + timedelta(days=int(rng.integers(0, 91)))
                season = [j for j in range(n_p)
                          if date(y, 9, 1) <= perf_dates[j] < date(y + 1, 5, 1)
                          and perf_rows[j]["series"] is not None]
                if season and sub_day >= created:
                    series = sorted({perf_rows[j]["series"] for j in season})
                    affinity = np.array([scores[[j for j in season if perf_rows[j]["series"] == s]].mean()
                                         for s in series])
                    chosen = series[int(rng.choice(len(series), p=affinity / affinity.sum()))]
                    for j in season:
                        if perf_rows[j]["series"] == chosen:
                            orders.append((j, sub_day, "subscription"))
        for j, od, group in orders:
            seats = 1 if group == "student" else int(rng.integers(1, 5))
            base = perf_rows[j]["base"]
            factor = {"regular": 1.0, "student": 0.25, "other": 0.8, "subscription": 0.85}[group]
            promo = {"student": "STUDENT", "other": "GROUP"}.get(group)
            transactions.append(Transaction(
                account_id=cids[i], account_created=created, customer_type=c["type"],
                performance_id=pids[j], order_date=od, seats=seats,
                price_paid=_price(base, seats, factor), price_group=group,
                promotion_code=promo, mode_of_sale=c["mode"], postal_code=c["postal"],
            ))
    transactions.sort(key=lambda t: (t.order_date, t.account_id, t.performance_id))

    # capacities follow the planted sales curve
    nonsub = np.zeros(n_p, dtype=np.int64)
    pid_index = {p: j for j, p in enumerate(pids)}
    for t in transactions:
        if t.price_group != "subscription":
            nonsub[pid_index[t.performance_id]] += t.seats
    catalog, paths, grades, targets = [], {}, [], []
    for j, row in enumerate(perf_rows):
        grade = fk_grade(tokenize(row["text"]))
        target = SALES_PEAK - SALES_CURVATURE * (grade - config.readability_vertex) ** 2 + row["noise"]
        target = float(np.clip(target, 0.05, 0.98))
        capacity = max(1, int(round(nonsub[j] / target))) if nonsub[j] else DEFAULT_CAPACITY
        grades.append(grade)
        targets.append(target)
        paths[pids[j]] = f"descriptions/{pids[j]}.txt"
        catalog.append(Performance(
            performance_id=pids[j],
            name=f"{row['genre']} performance {pids[j]}",
            date=row["date"],
            venue=VENUES[row["genre"]],
            capacity=capacity,
            genre=row["genre"],
            subscription_series=row["series"],
            description=row["text"],
        ))

    truth = {
        "config": {**asdict(config), "true_transition_matrix": [list(r) for r in P.tolist()]},
        "customers": cids,
        "performances": pids,
        "L": L.tolist(),
        "R": R.tolist(),
        "bL": bL.tolist(),
        "bR": bR.tolist(),
        "latent_dim": k,
        "transition_matrix": P.tolist(),
        "readability_vertex": config.readability_vertex,
        "sales_curve": {"peak": SALES_PEAK, "curvature": SALES_CURVATURE, "noise_sd": SALES_NOISE},
        "readability": grades,
        "target_pct_sold": targets,
        "students": [cids[i] for i, c in enumerate(cust) if c["student"]],
        "subscribers": [cids[i] for i, c in enumerate(cust) if c["subscriber"]],
        "shares": {
            "single_purchase_target": config.single_purchase_target,
            "single_year_probability": config.single_year_probability(),
            "student_fraction": config.student_fraction,
            "subscription_fraction": config.subscription_fraction,
        },
    }
    return SyntheticDataset(config, transactions, catalog, paths, truth)


def planted_truth(config: GeneratorConfig) -> dict:
    return generate(config).truth


def planted_factor_matrix(
    n_customers: int,
    n_performances: int,
    k: int,
    seed: int = 0,
    missing_fraction: float = 0.0,
    noise: float = 0.0,
) -> tuple[PurchaseMatrix, dict]:
    """Real-valued matrix ``L R^T + bL + bR`` from planted standard-normal
    factors, with a random mask (every row and column keeps an observed cell)."""
    if not 0.0 <= missing_fraction < 1.0:
        raise ConfigError("missing_fraction must lie in [0, 1)")
    rng = np.random.default_rng(seed)
    L = rng.normal(size=(n_customers, k))
    R = rng.normal(size=(n_performances, k))
    bL = rng.normal(size=n_customers)
    bR = rng.normal(size=n_performances)
    X = L @ R.T + bL[:, None] + bR[None, :]
    if noise:
        X = X + rng.normal(scale=noise, size=X.shape)
    observed = rng.random(X.shape) >= missing_fraction
    observed[np.arange(n_customers), rng.integers(n_performances, size=n_customers)] = True
    observed[rng.integers(n_customers, size=n_performances), np.arange(n_performances)] = True
    matrix = PurchaseMatrix(
        tuple(f"C{i:05d}" for i in range(n_customers)),
        tuple(f"P{j:04d}" for j in range(n_performances)),
        X, observed,
    )
    return matrix, {"L": L, "R": R, "bL": bL, "bR": bR}
