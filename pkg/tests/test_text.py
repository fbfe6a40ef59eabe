import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from audience.errors import EmptyDocumentError
from audience.stylometrics import count_syllables, pos_tag, tag_word, tokenize

FIXTURE_ABBREVIATIONS = frozenset({"dr", "mr"})


def test_single_word_sentence():
    doc = tokenize("Go.")
    assert doc.tokens == ("Go", ".")
    assert (doc.word_count, doc.sentence_count, doc.syllable_count) == (1, 1, 1)


def test_abbreviation_does_not_split():
    doc = tokenize("Dr. Smith conducts. Applause!", FIXTURE_ABBREVIATIONS)
    assert doc.sentence_count == 2
    assert doc.sentences == ((0, 5), (5, 7))


def test_cat_sentence_counts():
    doc = tokenize("The cat sat on the mat.")
    assert doc.word_count == 6 and doc.sentence_count == 1 and doc.syllable_count == 6


def test_terminator_runs_and_trailing_text():
    doc = tokenize("Wow!!! What a night... and then")
    assert doc.sentence_count == 3
    assert doc.sentences[-1][1] == len(doc.tokens)


def test_numbers_and_symbols_are_tokens_not_words():
    doc = tokenize("Tickets cost $45.50 - 3 shows.")
    assert "45.50" in doc.tokens and "$" in doc.tokens
    assert doc.word_count == 3 and doc.sentence_count == 1


@pytest.mark.parametrize("text", ["", "   ", "... !!", "42 7"])
def test_empty_document(text):
    with pytest.raises(EmptyDocumentError):
        tokenize(text)


@pytest.mark.parametrize("word,expected", [
    ("cat", 1), ("table", 2), ("rhythm", 1), ("agree", 2), ("cake", 1), ("the", 1),
    ("music", 2), ("orchestra", 3), ("don't", 1), ("well-known", 2), ("Beautiful", 3),
])
def test_syllables(word, expected):
    assert count_syllables(word) == expected


@given(st.text(alphabet="abcdefghijklmnopqrstuvwxyz", min_size=1, max_size=20))
def test_syllables_at_least_one(word):
    assert count_syllables(word) >= 1


words = st.sampled_from(["the", "orchestra", "plays", "tonight", "with", "grace", "Dr"])


@settings(max_examples=60)
@given(st.lists(st.lists(words, min_size=1, max_size=8), min_size=1, max_size=5),
       st.sampled_from([" ", "  ", "\n", "\t "]))
def test_sentences_partition_tokens(sentences, sep):
    text = sep.join(" ".join(s) + "." for s in sentences)
    doc = tokenize(text)
    spans = doc.sentences
    assert spans[0][0] == 0 and spans[-1][1] == len(doc.tokens)
    assert all(a[1] == b[0] for a, b in zip(spans, spans[1:]))
    assert doc.word_count >= doc.sentence_count >= 1
    # whitespace layout never changes the tokens
    assert tokenize(" ".join(text.split())).tokens == doc.tokens


def test_closed_class_membership():
    assert tag_word("the") == "article"
    assert tag_word("beneath") == "preposition"
    assert tag_word("They") == "pronoun"
    assert tag_word("is") == "verb"
    assert tag_word("and") == "other"
    assert tag_word("bravo") == "interjection"


def test_open_class_suffixes():
    assert tag_word("quickly") == "adverb"
    assert tag_word("celebrated") == "verb"
    assert tag_word("glorious") == "adjective"
    assert tag_word("celebration") == "noun"
    assert tag_word("violin") == "noun"  # default


def test_all_pronouns():
    profile = pos_tag(tokenize("I you we."))
    assert profile.pronoun == 100.0
    assert sum(profile.as_dict().values()) == pytest.approx(100.0, abs=1e-9)


HAND_TAGGED = [
    ("The", "article"), ("orchestra", "noun"), ("returns", "verb"), ("to", "preposition"),
    ("the", "article"), ("historic", "adjective"), ("stage", "noun"), ("with", "preposition"),
    ("a", "article"), ("powerful", "adjective"), ("program", "noun"), ("of", "preposition"),
    ("symphonic", "adjective"), ("works", "noun"), ("We", "pronoun"), ("are", "verb"),
    ("thrilled", "verb"), ("to", "preposition"), ("welcome", "verb"), ("them", "pronoun"),
    ("back", "adverb"), ("Their", "pronoun"), ("performances", "noun"), ("are", "verb"),
    ("truly", "adverb"), ("unforgettable", "adjective"), ("and", "other"), ("always", "adverb"),
    ("beautiful", "adjective"), ("Tickets", "noun"), ("sold", "verb"), ("quickly", "adverb"),
    ("last", "adjective"), ("season", "noun"), ("so", "other"), ("you", "pronoun"),
    ("should", "verb"), ("reserve", "verb"), ("early", "adjective"), ("Bravo", "interjection"),
]


def test_hand_tagged_accuracy():
    correct = sum(tag_word(w) == tag for w, tag in HAND_TAGGED)
    assert correct / len(HAND_TAGGED) >= 0.8
