from datetime import date, timedelta

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from audience.errors import EmptyDatasetError
from audience.reports import (
    activity_durations,
    genre_breakdown,
    heatmap_cell,
    purchase_heatmap,
    revenue_composition,
)
from conftest import make_perf, make_tx


def test_single_account_single_purchase():
    records, share = activity_durations([make_tx("a")])
    assert share == 1.0
    assert records[0].span_days == 0 and records[0].single_purchase


def test_activity_hand_count():
    txs = [make_tx("A", order=date(2013, 1, 1)), make_tx("A", order=date(2013, 1, 31)),
           make_tx("B", order=date(2014, 6, 1))]
    records, share = activity_durations(txs)
    assert share == 0.5
    a = next(r for r in records if r.account_id == "A")
    assert a.span_days == 30 and not a.single_purchase


def test_activity_empty():
    with pytest.raises(EmptyDatasetError):
        activity_durations([])


def test_revenue_single_group():
    assert revenue_composition([make_tx(price="5.00"), make_tx(price="7.50")]) == {"regular": 1.0}


def test_revenue_two_groups():
    shares = revenue_composition([make_tx(price="10"), make_tx(price="30", group="subscription")])
    assert shares == {"regular": 0.25, "subscription": 0.75}


def test_revenue_zero_total():
    with pytest.raises(EmptyDatasetError):
        revenue_composition([make_tx(price="0")])


prices = st.decimals(min_value=0, max_value=1000, places=2)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.tuples(prices, st.sampled_from(["regular", "student", "subscription", "other"])),
                min_size=1, max_size=30))
def test_revenue_shares_sum_to_one(items):
    txs = [make_tx(price=str(p), group=g) for p, g in items]
    if sum(p for p, _ in items) == 0:
        return
    shares = revenue_composition(txs)
    assert all(s >= 0 for s in shares.values())
    assert abs(sum(shares.values()) - 1.0) <= 1e-12


def test_heatmap_single_transaction():
    d = date(2013, 5, 15)  # Wednesday of ISO week 20
    grid = purchase_heatmap([make_tx(order=d, seats=4)], 2013)
    assert grid.sum() == 4 and np.count_nonzero(grid) == 1
    assert grid[20, 2] == 4


def test_heatmap_same_day_sums():
    d = date(2013, 10, 2)
    grid = purchase_heatmap([make_tx(order=d, seats=2), make_tx(order=d, seats=3)], 2013)
    r, c = heatmap_cell(d, 2013)
    assert grid[r, c] == 5 and grid.sum() == 5


def test_heatmap_year_edges():
    # 2010-01-01 falls in ISO week 53 of 2009; 2013-12-30 in ISO week 1 of 2014
    assert heatmap_cell(date(2010, 1, 1), 2010) == (0, 4)
    assert heatmap_cell(date(2013, 12, 30), 2013) == (53, 0)


def test_heatmap_missing_year():
    with pytest.raises(EmptyDatasetError):
        purchase_heatmap([make_tx(order=date(2013, 1, 1))], 2012)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 364 * 2), st.integers(1, 6), st.booleans()),
                min_size=1, max_size=40))
def test_heatmap_partition_identity(items):
    txs = [make_tx(order=date(2012, 6, 1) + timedelta(days=d), seats=s,
                   group="subscription" if sub else "regular") for d, s, sub in items]
    for year in sorted({t.order_date.year for t in txs}):
        every = purchase_heatmap(txs, year)
        subs = purchase_heatmap(txs, year, subscription_only=True)
        rest = purchase_heatmap(txs, year, subscription_only=False)
        np.testing.assert_array_equal(subs + rest, every)
        assert every.sum() == sum(t.seats for t in txs if t.order_date.year == year)


def test_genre_single():
    out = genre_breakdown([make_tx(perf="p1", seats=3)], [make_perf("p1", genre="Dance")])
    assert [(g.genre, g.performance_share, g.seat_share) for g in out] == [("Dance", 1.0, 1.0)]


def test_genre_dance_ratio():
    catalog = [make_perf("d", genre="Dance")] + [make_perf(f"o{i}", genre="Orchestra") for i in range(9)]
    txs = [make_tx(perf="d", seats=217)] + [make_tx(perf=f"o{i % 9}", seats=1) for i in range(783)]
    shares = {g.genre: g for g in genre_breakdown(txs, catalog)}
    assert shares["Dance"].performance_share == pytest.approx(0.1, abs=1e-15)
    assert shares["Dance"].seat_share == pytest.approx(0.217, abs=1e-15)
    assert sum(g.seat_share for g in shares.values()) == pytest.approx(1.0, abs=1e-12)
    assert genre_breakdown(list(reversed(txs)), catalog) == genre_breakdown(txs, catalog)
