import io
from datetime import date

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from audience.config import AnalysisConfig
from audience.errors import ConsistencyError, IngestError, SchemaError
from audience.ingest import (
    build_matrix,
    parse_catalog,
    parse_transactions,
    student_flags,
)
from conftest import csv_text, make_perf, make_tx

GOOD = ["c1", "2012-01-05", "household", "p1", "2013-02-01", "2", "40.00", "regular", "", "web", "48104"]


def row(**changes):
    r = list(GOOD)
    cols = ["account_id", "account_created", "customer_type", "performance_id", "order_date",
            "seats", "price_paid", "price_group", "promotion_code", "mode_of_sale", "postal_code"]
    for k, v in changes.items():
        r[cols.index(k)] = v
    return r


def test_clean_file_parses_every_row():
    src = io.StringIO(csv_text([row(), row(account_id="c2"), row(performance_id="p2")]))
    txs, diags = parse_transactions(src)
    assert len(txs) == 3 and diags == []
    assert txs[0].seats == 2 and txs[0].price_group == "regular"
    assert txs[0].promotion_code is None


def test_zero_seats_is_a_row_diagnostic():
    src = io.StringIO(csv_text([row(), row(seats="0"), row(account_id="c3")]))
    txs, diags = parse_transactions(src)
    assert len(txs) == 2
    assert len(diags) == 1 and diags[0].row == 3
    assert "row 3" in str(diags[0]) and "seats" in diags[0].message


def test_order_before_account_creation():
    src = io.StringIO(csv_text([row(account_created="2013-03-01", order_date="2013-02-01")]))
    txs, diags = parse_transactions(src)
    assert txs == []
    assert diags[0].message == "order precedes account creation"


@pytest.mark.parametrize("field,value", [("order_date", "2013-13-01"), ("price_paid", "abc"),
                                         ("seats", "two"), ("customer_type", "alien"),
                                         ("price_paid", "-1")])
def test_bad_values_are_diagnostics(field, value):
    txs, diags = parse_transactions(io.StringIO(csv_text([row(**{field: value})])))
    assert txs == [] and len(diags) == 1


def test_strict_mode_aborts():
    src = io.StringIO(csv_text([row(), row(seats="0")]))
    with pytest.raises(IngestError) as exc:
        parse_transactions(src, strict=True)
    assert exc.value.diagnostics[0].row == 3


def test_missing_column_is_fatal():
    src = io.StringIO("account_id,order_date\nc1,2013-01-01\n")
    with pytest.raises(SchemaError, match="seats"):
        parse_transactions(src)


def test_unknown_price_group_passes_through_as_other():
    txs, _ = parse_transactions(io.StringIO(csv_text([row(price_group="comp")])))
    assert txs[0].price_group == "other"


def test_catalog_parsing(tmp_path):
    (tmp_path / "d").mkdir()
    (tmp_path / "d" / "p1.txt").write_text("A night of jazz.", encoding="utf-8")
    text = (
        "performance_id,name,date,venue,capacity,genre,subscription_series,description_path\n"
        "p1,Jazz Night,2013-03-10,Hill,3536,Jazz,Jazz,d/p1.txt\n"
        "p2,Dup,2013-03-11,Hill,10,Dance,,\n"
        "p2,Dup again,2013-03-12,Hill,10,Dance,,\n"
        "p3,Bad genre,2013-03-12,Hill,10,Polka,,\n"
        "p4,No seats,2013-03-12,Hill,0,Other,,\n"
    )
    perfs, diags = parse_catalog(io.StringIO(text), descriptions_root=tmp_path)
    assert [p.performance_id for p in perfs] == ["p1", "p2"]
    assert perfs[0].description == "A night of jazz." and perfs[0].subscription_series == "Jazz"
    assert perfs[1].description is None and perfs[1].subscription_series is None
    assert [d.row for d in diags] == [4, 5, 6]


# -- purchase matrix -----------------------------------------------------------

def two_by_three():
    catalog = [make_perf("p1"), make_perf("p2"), make_perf("p3")]
    txs = [make_tx("c1", "p1"), make_tx("c2", "p3", group="subscription")]
    return txs, catalog


def test_matrix_cells_enumerated_by_hand():
    txs, catalog = two_by_three()
    m = build_matrix(txs, catalog)
    assert m.customers == ("c1", "c2") and m.performances == ("p1", "p2", "p3")
    np.testing.assert_array_equal(m.values, [[1, 0, 0], [0, 0, 1]])
    assert not m.missing.any()


def test_exclude_subscriptions_drops_bought_cell():
    txs, catalog = two_by_three()
    m = build_matrix(txs, catalog, exclude_subscriptions=True)
    assert m.cell("c2", "p3") == 0
    assert m.cell("c1", "p1") == 1


def test_show_before_account_creation_is_missing():
    catalog = [make_perf("p1", when=date(2012, 5, 1)), make_perf("p2", when=date(2013, 5, 1))]
    txs = [make_tx("c1", "p2", created=date(2013, 1, 1), order=date(2013, 4, 1)),
           make_tx("c1", "p1", created=date(2013, 1, 1), order=date(2013, 4, 2))]
    m = build_matrix(txs, catalog)
    assert m.cell("c1", "p1") is None
    assert m.cell("c1", "p2") == 1


def test_same_day_creation_is_observable():
    catalog = [make_perf("p1", when=date(2013, 1, 1))]
    m = build_matrix([make_tx("c1", "p1", created=date(2013, 1, 1), order=date(2013, 1, 1))], catalog)
    assert m.cell("c1", "p1") == 1


def test_unknown_performance_is_fatal():
    with pytest.raises(ConsistencyError, match="p9"):
        build_matrix([make_tx("c1", "p9")], [make_perf("p1")])


def test_repeat_purchases_collapse():
    m = build_matrix([make_tx("c1", "p1"), make_tx("c1", "p1", seats=3)], [make_perf("p1")])
    np.testing.assert_array_equal(m.values, [[1.0]])


dates = st.dates(min_value=date(2010, 1, 1), max_value=date(2015, 12, 31))


@st.composite
def datasets(draw):
    n_perf = draw(st.integers(1, 5))
    catalog = [make_perf(f"p{j}", when=draw(dates)) for j in range(n_perf)]
    created = {f"c{i}": draw(dates) for i in range(draw(st.integers(1, 5)))}
    txs = []
    for _ in range(draw(st.integers(1, 15))):
        c = draw(st.sampled_from(sorted(created)))
        p = draw(st.sampled_from(catalog))
        txs.append(make_tx(c, p.performance_id, created=created[c], order=created[c],
                           group=draw(st.sampled_from(["regular", "subscription", "student"]))))
    return txs, catalog, created


@settings(max_examples=60, deadline=None)
@given(datasets(), st.randoms(use_true_random=False), st.booleans())
def test_matrix_properties(data, rnd, exclude):
    txs, catalog, created = data
    m = build_matrix(txs, catalog, exclude)
    shuffled = list(txs)
    rnd.shuffle(shuffled)
    assert build_matrix(shuffled, catalog, exclude) == m
    assert build_matrix(txs, catalog, exclude) == m
    assert m.bought.sum() <= len({(t.account_id, t.performance_id) for t in txs})
    for i, c in enumerate(m.customers):
        for j, p in enumerate(catalog):
            assert m.missing[i, j] == (p.date < created[c])


def test_student_flags():
    txs = [make_tx("s", group="regular"), make_tx("s", group="student"), make_tx("s"),
           make_tx("g"), make_tx("g"),
           make_tx("promo", promo="UMSTU")]
    flags = student_flags(txs)
    assert flags == {"s": True, "g": False, "promo": False}
    flags = student_flags(txs, AnalysisConfig(student_promotion_codes=frozenset({"UMSTU"})))
    assert flags["promo"] is True


def test_config_from_json(tmp_path):
    p = tmp_path / "cfg.json"
    p.write_text('{"student_promotion_codes": ["X1"], "abbreviations": ["Dr."]}')
    cfg = AnalysisConfig.from_json(p)
    assert cfg.student_promotion_codes == {"X1"} and cfg.abbreviations == {"dr"}
