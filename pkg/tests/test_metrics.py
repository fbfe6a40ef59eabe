import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from audience.errors import SingularFitError, UndefinedCorrelationError
from audience.stylometrics import (
    PosProfile,
    fk_grade,
    formality,
    pearson,
    polyfit,
    pos_tag,
    tokenize,
)


def pearson_oracle(x, y):
    """Textbook product-moment formula with compensated sums."""
    n = len(x)
    mx = math.fsum(x) / n
    my = math.fsum(y) / n
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = math.fsum((a - mx) ** 2 for a in x)
    syy = math.fsum((b - my) ** 2 for b in y)
    return sxy / math.sqrt(sxx * syy)


def test_fk_grade_hand_values():
    assert fk_grade(tokenize("The cat sat on the mat.")) == -1.45
    assert fk_grade(tokenize("Go.")) == -3.40


def test_fk_grade_ratio_invariance():
    text = "The orchestra plays tonight. We sing along with joy."
    doubled = " ".join(s + "." for s in text.rstrip(".").split(". ") for _ in range(2))
    assert fk_grade(tokenize(doubled)) == fk_grade(tokenize(text))


def test_fk_grade_whitespace_invariance():
    a = tokenize("A  grand\tnight.\n\nWe   celebrate   music.")
    b = tokenize("A grand night. We celebrate music.")
    assert fk_grade(a) == fk_grade(b)


def test_formality_extremes():
    assert formality(PosProfile(noun=100.0)) == 100.0
    assert formality(PosProfile(pronoun=100.0)) == 0.0
    assert formality(PosProfile(noun=50.0, verb=50.0)) == 50.0


def test_formality_from_text():
    assert formality(pos_tag(tokenize("Violin cello piano."))) == 100.0
    assert formality(pos_tag(tokenize("I you we."))) == 0.0


profiles = st.lists(st.integers(0, 50), min_size=9, max_size=9).filter(lambda c: sum(c) > 0)


@given(profiles)
def test_formality_in_range(counts):
    total = sum(counts)
    names = ["noun", "adjective", "preposition", "article", "pronoun", "verb", "adverb",
             "interjection", "other"]
    profile = PosProfile(**{n: 100.0 * c / total for n, c in zip(names, counts)})
    assert 0.0 <= formality(profile) <= 100.0


def test_profile_rejects_bad_sum():
    with pytest.raises(ValueError):
        PosProfile(noun=60.0)


def test_pearson_identity_and_negation():
    x = [1.0, 2.0, 5.0, 7.0]
    assert pearson(x, x) == pytest.approx(1.0, abs=1e-15)
    assert pearson(x, [-v for v in x]) == pytest.approx(-1.0, abs=1e-15)


def test_pearson_small_oracle():
    assert pearson([1, 2, 3], [1, 2, 4]) == pytest.approx(pearson_oracle([1, 2, 3], [1, 2, 4]), abs=1e-15)
    # 3 / sqrt(2 * 14/3)
    assert pearson([1, 2, 3], [1, 2, 4]) == pytest.approx(3 / math.sqrt(28 / 3), abs=1e-15)


def test_pearson_constant_vector():
    with pytest.raises(UndefinedCorrelationError):
        pearson([1, 1, 1], [1, 2, 3])


finite = st.integers(-10_000, 10_000).map(lambda v: v / 10)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=3, max_size=30),
       st.floats(-50, 50).filter(lambda a: abs(a) > 1e-3), finite)
def test_pearson_properties(pairs, a, b):
    x = np.array([p[0] for p in pairs])
    y = np.array([p[1] for p in pairs])
    assume(np.ptp(x) > 1e-3 and np.ptp(y) > 1e-3)
    r = pearson(x, y)
    assert -1.0 <= r <= 1.0
    assert pearson(y, x) == pytest.approx(r, abs=1e-12)
    assert pearson(a * x + b, y) == pytest.approx(math.copysign(1, a) * r, abs=1e-9)


def test_polyfit_exact_line():
    x = np.arange(6.0)
    fit = polyfit(x, 2 * x + 1, 1)
    np.testing.assert_allclose(fit.coefficients, (1.0, 2.0), atol=1e-9)
    assert fit.rss < 1e-18


def test_polyfit_exact_parabola():
    x = np.linspace(-3, 4, 9)
    fit = polyfit(x, x**2, 2)
    np.testing.assert_allclose(fit.coefficients, (0.0, 0.0, 1.0), atol=1e-9)
    assert fit.vertex() == pytest.approx(0.0, abs=1e-9)


def test_polyfit_matches_normal_equations():
    rng = np.random.default_rng(3)
    x = rng.uniform(0, 20, 30)
    y = 0.5 - 0.01 * (x - 12) ** 2 + rng.normal(scale=0.05, size=30)
    A = np.vander(x, 3, increasing=True)
    beta = np.linalg.solve(A.T @ A, A.T @ y)
    fit = polyfit(x, y, 2)
    np.testing.assert_allclose(fit.coefficients, beta, rtol=1e-8)
    assert fit.rss == pytest.approx(float(np.sum((y - A @ beta) ** 2)), rel=1e-9)
    assert fit.vertex() == pytest.approx(-beta[1] / (2 * beta[2]), rel=1e-8)


def test_polyfit_singular():
    with pytest.raises(SingularFitError):
        polyfit([1.0, 1.0, 1.0], [1.0, 2.0, 3.0], 1)
    with pytest.raises(SingularFitError):
        polyfit([1.0, 2.0], [1.0, 2.0], 2)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=3, max_size=30))
def test_polyfit_rss_nested(pairs):
    x = np.array([p[0] for p in pairs])
    y = np.array([p[1] for p in pairs])
    assume(np.unique(x).size >= 3)
    r1 = polyfit(x, y, 1).rss
    r2 = polyfit(x, y, 2).rss
    # least-squares residuals of nested models, up to float round-off
    assert r2 <= r1 + 1e-9 * max(1.0, r1)
