"""Lexicon + suffix-rule part-of-speech tagging for formality scores.

Closed classes come from bundled word lists; anything else is classified by
suffix, falling back to noun.  Conjunctions, determiners other than articles,
numerals and negation land in ``other``.
"""
from __future__ import annotations

from dataclasses import dataclass, fields

from .text import TokenizedDoc, is_word

CLASSES = (
    "noun",
    "adjective",
    "preposition",
    "article",
    "pronoun",
    "verb",
    "adverb",
    "interjection",
    "other",
)

ARTICLES = frozenset({"a", "an", "the"})

PREPOSITIONS = frozenset(
    """
    aboard about above across after against along amid amidst among amongst
    around as at atop before behind below beneath beside besides between beyond
    by concerning despite down during except excluding following for from in
    inside into like near of off on onto opposite out outside over past per
    regarding round since than through throughout till to toward towards under
    underneath unlike until unto up upon versus via with within without
    """.split()
)

PRONOUNS = frozenset(
    """
    i me my mine myself you your yours yourself yourselves he him his himself
    she her hers herself it its itself we us our ours ourselves they them their
    theirs themselves who whom whose whoever whomever what whatever which
    whichever someone somebody something anyone anybody anything everyone
    everybody everything noone nobody nothing one oneself
    this that these those
    """.split()
)

INTERJECTIONS = frozenset(
    """
    oh ah aha alas bravo hey hi hello hooray hurray oops ouch wow yay yes no
    hmm huh ha haha encore whoa uh um bye goodbye ugh
    """.split()
)

AUXILIARIES = frozenset(
    """
    am is are was were be been being have has had having do does did done doing
    will would shall should can could may might must ought
    """.split()
)

CONJUNCTIONS = frozenset(
    """
    and or but nor so yet because although though while whereas if unless
    whether either neither both
    """.split()
)

DETERMINERS = frozenset(
    """
    all any each every few many more most much other another some such several
    no not own same
    """.split()
)

COMMON_VERBS = frozenset(
    """
    say says said go goes went gone get gets got make makes made know knows knew
    think thinks thought take takes took taken see sees saw seen come comes came
    want wants look looks use uses find finds found give gives gave given tell
    tells told try tries feel feels leave leaves put puts mean means keep keeps
    let lets begin begins began seem seems hear hears heard bring brings
    brought write writes wrote sit sits sat stand stands stood lose loses lost
    pay pays paid meet meets met include includes continue continues learn
    learns understand understands spend spends grow grows grew join joins sing
    sings sang perform performs conducts celebrate celebrates presents explore
    explores
    """.split()
)

COMMON_ADVERBS = frozenset(
    """
    very too also often never always sometimes here there now then just still
    even soon again already almost quite rather perhaps ever once twice
    together tonight today tomorrow yesterday abroad away back forth
    """.split()
)

COMMON_ADJECTIVES = frozenset(
    """
    new old good great best better big small large little young long short
    high low first last next early late own great beautiful rare fresh bold
    grand famous whole true free full fine rich deep bright dark live major
    minor classic modern
    """.split()
)

_ADVERB_SUFFIXES = ("ly", "ward", "wards", "wise")
_VERB_SUFFIXES = ("ize", "izes", "ized", "ise", "ises", "ised", "ify", "ifies", "ified",
                  "ate", "ates", "ated", "ing", "ed")
_ADJECTIVE_SUFFIXES = ("ous", "ful", "ive", "able", "ible", "al", "ial", "ic", "ical",
                       "less", "ish", "ary")
_NOUN_SUFFIXES = ("tion", "sion", "ment", "ness", "ity", "ism", "ist", "ship", "hood",
                  "ance", "ence", "er", "or", "ery", "dom")
# ordered so that longer, more specific endings win
_SUFFIX_RULES = sorted(
    [(s, "adverb") for s in _ADVERB_SUFFIXES]
    + [(s, "verb") for s in _VERB_SUFFIXES]
    + [(s, "adjective") for s in _ADJECTIVE_SUFFIXES]
    + [(s, "noun") for s in _NOUN_SUFFIXES],
    key=lambda r: -len(r[0]),
)
_MIN_STEM = 3


def tag_word(word: str) -> str:
    w = word.lower().replace("’", "'")
    if not any(ch.isalpha() for ch in w):
        return "other"
    if w in ARTICLES:
        return "article"
    if w in PREPOSITIONS:
        return "preposition"
    if w in PRONOUNS:
        return "pronoun"
    if w in AUXILIARIES:
        return "verb"
    if w in CONJUNCTIONS or w in DETERMINERS:
        return "other"
    if w in INTERJECTIONS:
        return "interjection"
    if w in COMMON_VERBS:
        return "verb"
    if w in COMMON_ADVERBS:
        return "adverb"
    if w in COMMON_ADJECTIVES:
        return "adjective"
    if "'" in w:
        # contractions: "don't", "we're", "it's" -> classify the head
        head = w.split("'", 1)[0]
        return tag_word(head) if head else "other"
    for suffix, cls in _SUFFIX_RULES:
        if w.endswith(suffix) and len(w) - len(suffix) >= _MIN_STEM:
            return cls
    return "noun"


@dataclass(frozen=True)
class PosProfile:
    """Class frequencies per 100 words."""

    noun: float = 0.0
    adjective: float = 0.0
    preposition: float = 0.0
    article: float = 0.0
    pronoun: float = 0.0
    verb: float = 0.0
    adverb: float = 0.0
    interjection: float = 0.0
    other: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not 0.0 <= v <= 100.0:
                raise ValueError(f"{f.name} frequency {v} outside [0, 100]")
        total = sum(getattr(self, f.name) for f in fields(self))
        if abs(total - 100.0) > 1e-9:
            raise ValueError(f"frequencies sum to {total}, expected 100")

    def as_dict(self) -> dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def pos_tag(doc: TokenizedDoc) -> PosProfile:
    words = [t for t in doc.tokens if is_word(t)]
    if not words:
        raise ValueError("document has no words")
    counts = dict.fromkeys(CLASSES, 0)
    for w in words:
        counts[tag_word(w)] += 1
    n = len(words)
    return PosProfile(**{c: 100.0 * k / n for c, k in counts.items()})
