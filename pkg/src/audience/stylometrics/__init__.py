"""Description style metrics (readability, formality, length) and their
relationship with ticket sales."""

from .metrics import PolyFit, fk_grade, formality, pearson, polyfit
from .pos import PosProfile, pos_tag, tag_word
from .report import StyleRecord, StyleReport, style_record, style_report
from .text import TokenizedDoc, count_syllables, tokenize

__all__ = [
    "PolyFit",
    "PosProfile",
    "StyleRecord",
    "StyleReport",
    "TokenizedDoc",
    "count_syllables",
    "fk_grade",
    "formality",
    "pearson",
    "polyfit",
    "pos_tag",
    "style_record",
    "style_report",
    "tag_word",
    "tokenize",
]
