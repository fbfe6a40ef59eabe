from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import ContractError, SingularFitError, UndefinedCorrelationError
from .pos import PosProfile
from .text import TokenizedDoc

_FK_WORDS = Fraction("0.39")
_FK_SYLLABLES = Fraction("11.8")
_FK_OFFSET = Fraction("15.59")


def fk_grade(doc: TokenizedDoc) -> float:
    """Flesch-Kincaid grade level.

    Evaluated in exact rational arithmetic and rounded once, so hand-derived
    values such as -1.45 compare equal to the float literal.
    """
    if doc.word_count < 1 or doc.sentence_count < 1:
        raise ContractError("grade level needs at least one word and one sentence")
    grade = (
        _FK_WORDS * Fraction(doc.word_count, doc.sentence_count)
        + _FK_SYLLABLES * Fraction(doc.syllable_count, doc.word_count)
        - _FK_OFFSET
    )
    return float(grade)


def formality(profile: PosProfile) -> float:
    formal = profile.noun + profile.adjective + profile.preposition + profile.article
    deictic = profile.pronoun + profile.verb + profile.adverb + profile.interjection
    return (formal - deictic + 100.0) / 2.0


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ContractError("pearson needs two 1-D vectors of equal length")
    if x.size < 2:
        raise ContractError("pearson needs at least two points")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = dx @ dx
    syy = dy @ dy
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelationError("correlation undefined for a constant vector")
    r = (dx @ dy) / np.sqrt(sxx * syy)
    return float(np.clip(r, -1.0, 1.0))


@dataclass(frozen=True)
class PolyFit:
    coefficients: tuple[float, ...]  # ascending powers: c0 + c1 x + c2 x^2
    rss: float

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        return np.polynomial.polynomial.polyval(np.asarray(x, dtype=float), self.coefficients)

    def vertex(self) -> float:
        if self.degree != 2 or self.coefficients[2] == 0.0:
            raise ContractError("vertex is defined only for a proper quadratic")
        return -self.coefficients[1] / (2.0 * self.coefficients[2])


def polyfit(x, y, degree: int) -> PolyFit:
    """Least-squares polynomial of degree 1 or 2."""
    if degree not in (1, 2):
        raise ContractError(f"degree must be 1 or 2, got {degree}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.ndim != 1 or x.shape != y.shape:
        raise ContractError("polyfit needs two 1-D vectors of equal length")
    if x.size <= degree or np.unique(x).size < degree + 1:
        raise SingularFitError(f"need at least {degree + 1} distinct x values")
    # centre and scale x so the Vandermonde system stays well conditioned
    shift = x.mean()
    scale = np.abs(x - shift).max()
    design = np.vander((x - shift) / scale, degree + 1, increasing=True)
    coef_u, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < degree + 1:
        raise SingularFitError("rank-deficient design matrix")
    coef = _unscale(coef_u, shift, scale)
    resid = y - design @ coef_u
    return PolyFit(tuple(float(c) for c in coef), float(resid @ resid))


def _unscale(coef_u, shift, scale):
    # p(u) with u = (x - shift)/scale, expanded into powers of x
    inner = np.polynomial.Polynomial([-shift / scale, 1.0 / scale])
    coef = np.polynomial.Polynomial(coef_u)(inner).coef
    out = np.zeros(len(coef_u))
    out[: len(coef)] = coef
    return out
