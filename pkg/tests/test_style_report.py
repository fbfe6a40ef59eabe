from datetime import date

import pytest

from audience.errors import InsufficientDataError, UndefinedCorrelationError
from audience.stylometrics import style_report
from audience.synth import GeneratorConfig, generate
from conftest import make_perf, make_tx

TEXTS = [
    "Go now. We sing.",
    "The remarkable orchestra performs a celebrated symphony tonight.",
    "Join us for an extraordinary international collaboration of contemporary dance and music.",
    "A quiet evening of chamber music.",
]


def catalog_and_sales(texts=TEXTS):
    catalog = [make_perf(f"p{j}", capacity=100, description=t) for j, t in enumerate(texts)]
    txs = []
    for j in range(len(texts)):
        txs.append(make_tx("c1", f"p{j}", seats=10 + 20 * j))
        txs.append(make_tx("c2", f"p{j}", seats=50, group="subscription"))
    return catalog, txs


def test_records_exclude_subscription_seats():
    catalog, txs = catalog_and_sales()
    rep = style_report(catalog, txs)
    assert [r.pct_seats_sold for r in rep.records] == [0.1, 0.3, 0.5, 0.7]
    assert rep.records[0].length == 6  # Go . now . We sing . -> tokens incl. periods
    assert set(rep.correlations) == {"readability", "formality", "length"}
    assert rep.fits["readability"].degree == 2 and rep.fits["length"].degree == 1


def test_over_capacity_is_clamped_with_diagnostic():
    catalog, txs = catalog_and_sales()
    txs.append(make_tx("c3", "p0", seats=500))
    rep = style_report(catalog, txs)
    assert rep.records[0].pct_seats_sold == 1.0
    assert len(rep.diagnostics) == 1 and "p0" in rep.diagnostics[0]


def test_identical_descriptions_have_undefined_correlation():
    catalog, txs = catalog_and_sales(["Same words here."] * 4)
    with pytest.raises(UndefinedCorrelationError, match="readability"):
        style_report(catalog, txs)


def test_too_few_described_shows():
    catalog, txs = catalog_and_sales(TEXTS[:2])
    catalog.append(make_perf("undescribed", when=date(2013, 1, 1)))
    with pytest.raises(InsufficientDataError):
        style_report(catalog, txs)


def test_catalog_permutation_invariance():
    catalog, txs = catalog_and_sales()
    a = style_report(catalog, txs)
    b = style_report(list(reversed(catalog)), list(reversed(txs)))
    assert a.correlations == b.correlations
    assert a.records == b.records


def test_planted_vertex_recovered():
    ds = generate(GeneratorConfig(seed=11, n_customers=3000, n_performances=60))
    rep = style_report(ds.catalog, ds.transactions)
    assert rep.readability_vertex == pytest.approx(15.0, abs=0.5)
