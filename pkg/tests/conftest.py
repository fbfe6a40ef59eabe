from datetime import date
from decimal import Decimal

import pytest

from audience.ingest import TRANSACTION_COLUMNS, Performance, Transaction


def make_tx(account="c1", perf="p1", order=date(2013, 3, 1), created=date(2010, 1, 1),
            seats=1, price="10.00", group="regular", promo=None):
    return Transaction(
        account_id=account,
        account_created=created,
        customer_type="household",
        performance_id=perf,
        order_date=order,
        seats=seats,
        price_paid=Decimal(price),
        price_group=group,
        promotion_code=promo,
        mode_of_sale="web",
        postal_code="48104",
    )


def make_perf(pid="p1", when=date(2013, 3, 10), capacity=100, genre="Jazz", description=None,
              series=None):
    return Performance(pid, f"Show {pid}", when, "Hill Auditorium", capacity, genre, series,
                       description)


def csv_text(rows):
    header = ",".join(TRANSACTION_COLUMNS)
    return "\n".join([header] + [",".join(r) for r in rows]) + "\n"


@pytest.fixture
def tx():
    return make_tx


@pytest.fixture
def perf():
    return make_perf


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        ok, detail = RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}")
