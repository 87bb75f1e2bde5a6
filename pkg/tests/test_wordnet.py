from __future__ import annotations

import pytest

from edu_prompting.wordnet import (
    LexiconIndex,
    Pos,
    Synset,
    TermNotFound,
    UsageBundle,
    WndbParseError,
    load_wordnet_dir,
    lookup,
    normalize_term,
    parse_wndb,
    synset_listing,
)

from conftest import WORDNET_DIR

# Minimal two-synset corpus, verified by hand against the WNDB column layout.
TWO_SYNSET_DATA = (
    '00000100 05 n 02 dog 0 hound 0 000 | a domesticated canid; "the dog barked"\n'
    "00000200 05 n 01 leash 0 000 | a strap for restraining an animal\n"
)
TWO_SYNSET_INDEX = (
    "dog n 1 0 1 0 00000100\n"
    "hound n 1 0 1 0 00000100\n"
    "leash n 1 0 1 0 00000200\n"
)


def test_two_synset_fixture_parses() -> None:
    index = parse_wndb(TWO_SYNSET_INDEX, TWO_SYNSET_DATA, Pos.NOUN)
    assert len(index.synsets) == 2
    assert index.senses[("dog", Pos.NOUN)] == (100,)
    assert index.senses[("hound", Pos.NOUN)] == (100,)
    synset = index.synsets[(Pos.NOUN, 100)]
    assert synset.lemmas == ("dog", "hound")
    assert synset.gloss == "a domesticated canid"
    assert synset.examples == ("the dog barked",)


def test_empty_data_section_gives_empty_index() -> None:
    index = parse_wndb("", "", Pos.NOUN)
    assert index.synsets == {}
    assert index.senses == {}


def test_non_numeric_offset_names_the_line() -> None:
    bad = TWO_SYNSET_DATA + "BADROW 05 n 01 cat 0 000 | a feline\n"
    with pytest.raises(WndbParseError, match="line 3"):
        parse_wndb(TWO_SYNSET_INDEX, bad, Pos.NOUN)


def test_missing_gloss_separator_rejected() -> None:
    with pytest.raises(WndbParseError, match="gloss separator"):
        parse_wndb("", "00000100 05 n 01 dog 0 000 no gloss marker\n", Pos.NOUN)


def test_index_referencing_missing_synset_rejected() -> None:
    with pytest.raises(WndbParseError, match="missing synset"):
        parse_wndb("ghost n 1 0 1 0 00009999\n", TWO_SYNSET_DATA, Pos.NOUN)


def test_header_lines_are_skipped() -> None:
    data = "  1 license text that mentions 00000100 and | bars\n" + TWO_SYNSET_DATA
    index = parse_wndb(TWO_SYNSET_INDEX, data, Pos.NOUN)
    assert len(index.synsets) == 2


def test_wrong_pos_file_rejected() -> None:
    with pytest.raises(WndbParseError, match="does not belong"):
        parse_wndb("", TWO_SYNSET_DATA, Pos.VERB)


def test_lookup_synonyms_exclude_the_term(wordnet_index: LexiconIndex) -> None:
    bundle = lookup("dog", wordnet_index)
    assert bundle.synonyms == ("hound",)
    assert bundle.definitions == ("a domesticated carnivorous mammal kept as a pet or for work",)
    assert bundle.examples == ("the dog barked all night",)
    assert bundle.usage_patterns == (("noun", 1),)


def test_lookup_single_lemma_term_has_no_synonyms(wordnet_index: LexiconIndex) -> None:
    assert lookup("essay", wordnet_index).synonyms == ()


def test_lookup_absent_term(wordnet_index: LexiconIndex) -> None:
    with pytest.raises(TermNotFound):
        lookup("zeppelin", wordnet_index)


def test_lookup_normalizes_case_and_spaces(wordnet_index: LexiconIndex) -> None:
    assert lookup("True Cat", wordnet_index).definitions == lookup("true_cat", wordnet_index).definitions


def test_lookup_spans_parts_of_speech(wordnet_index: LexiconIndex) -> None:
    bundle = lookup("bark", wordnet_index)
    assert bundle.usage_patterns == (("verb", 1),)
    assert "make the sound of a dog" in bundle.definitions[0]


def test_adjective_marker_stripped(wordnet_index: LexiconIndex) -> None:
    bundle = lookup("concise", wordnet_index)
    assert bundle.definitions == ("expressing much in few words",)
    assert bundle.usage_patterns == (("adjective", 1),)


def test_self_exclusion_holds_for_every_lemma(wordnet_index: LexiconIndex) -> None:
    for (lemma, _pos) in wordnet_index.senses:
        bundle = lookup(lemma, wordnet_index)
        assert normalize_term(lemma) not in {normalize_term(s) for s in bundle.synonyms}


def test_parse_is_stable_across_runs() -> None:
    first = load_wordnet_dir(WORDNET_DIR)
    second = load_wordnet_dir(WORDNET_DIR)
    assert synset_listing(first) == synset_listing(second)


def test_fixture_counts(wordnet_index: LexiconIndex) -> None:
    assert len(wordnet_index.synsets) == 10
    assert len(wordnet_index.senses) == 13


def test_usage_bundle_text_rendering(wordnet_index: LexiconIndex) -> None:
    text = lookup("dog", wordnet_index).as_text()
    assert "definitions:" in text and "synonyms: hound" in text
    assert UsageBundle().as_text() == "(no dictionary entry found)"


def test_synset_invariants() -> None:
    with pytest.raises(ValueError):
        Synset(offset=1, pos=Pos.NOUN, lemmas=("two words",), gloss="g", examples=())
    with pytest.raises(ValueError):
        Synset(offset=1, pos=Pos.NOUN, lemmas=("ok",), gloss="", examples=())
