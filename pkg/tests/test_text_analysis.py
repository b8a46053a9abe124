"""Tokenizer, sentence splitter, syllable counter and morphology."""
import pytest
from hypothesis import given, strategies as st

from agelex.errors import LexiconError
from agelex.text_analysis import (DictionaryMorphology, HeuristicMorphology,
                                  Pos, analyze, count_syllables,
                                  load_abbreviations, split_sentences,
                                  tokenize)

CYR_WORDS = st.text(alphabet="абвгдежзиклмнопрстуфхцчшщыьэюя", min_size=1, max_size=12)


class TestTokenize:
    def test_hyphenated_word_kept_whole(self):
        assert tokenize("Жил-был кот.") == ["Жил-был", "кот"]

    def test_empty_text(self):
        assert tokenize("") == []

    def test_runs_with_digits_are_not_tokens(self):
        assert tokenize("A1 b") == ["b"]

    def test_char_count_still_covers_digit_runs(self):
        t = analyze("A1 b", HeuristicMorphology())
        assert t.char_count == 3  # A, 1, b
        assert t.letter_count == 2

    def test_punctuation_excluded(self):
        assert tokenize("кот, пёс; ёж!") == ["кот", "пёс", "ёж"]

    def test_underscore_is_not_a_word_character(self):
        assert tokenize("a_b") == ["a", "b"]

    @given(st.text(max_size=60))
    def test_tokens_are_nonempty_and_alphabetic(self, text):
        for tok in tokenize(text):
            assert tok
            assert all(ch.isalpha() or ch == "-" for ch in tok)

    @given(st.text(max_size=60))
    def test_tokens_appear_in_order(self, text):
        pos = 0
        for tok in tokenize(text):
            found = text.find(tok, pos)
            assert found >= 0
            pos = found + 1


class TestSplitSentences:
    def test_two_sentences(self):
        assert len(split_sentences("Кот. Пёс!")) == 2

    def test_no_terminator_is_one_sentence(self):
        assert len(split_sentences("привет")) == 1

    def test_abbreviation_suppresses_split(self):
        spans = split_sentences("г. Москва слово", abbreviations=frozenset({"г"}))
        assert len(spans) == 1

    def test_without_abbreviation_list_it_splits(self):
        assert len(split_sentences("г. Москва слово")) == 2

    def test_lowercase_continuation_does_not_split(self):
        assert len(split_sentences("Он ушёл... и вернулся.")) == 1

    def test_terminator_run_is_one_boundary(self):
        assert len(split_sentences("Как?! Так.")) == 2

    def test_spans_are_trimmed(self):
        text = "Кот.  Пёс."
        spans = split_sentences(text)
        assert [text[a:b] for a, b in spans] == ["Кот.", "Пёс."]

    def test_empty_text(self):
        assert split_sentences("") == []

    @given(st.text(max_size=80))
    def test_spans_ordered_and_disjoint(self, text):
        spans = split_sentences(text)
        for (a1, b1), (a2, b2) in zip(spans, spans[1:]):
            assert a1 < b1 <= a2 < b2


class TestCountSyllables:
    @pytest.mark.parametrize("word,expected", [
        ("кот", 1),
        ("молоко", 3),
        ("всплеск", 1),
        ("мама", 2),
        ("ёж", 1),
        ("яблоко", 3),
        ("cat", 1),
        ("banana", 3),
        ("rhythm", 1),  # y counts as a vowel
    ])
    def test_known_words(self, word, expected):
        assert count_syllables(word) == expected

    def test_floor_of_one_for_vowelless(self):
        assert count_syllables("стрч") == 1

    def test_case_insensitive(self):
        assert count_syllables("МОЛОКО") == count_syllables("молоко")

    @given(CYR_WORDS)
    def test_at_least_one(self, word):
        assert count_syllables(word) >= 1

    @given(CYR_WORDS, st.integers(min_value=0, max_value=5))
    def test_monotone_under_vowel_insertion(self, word, pos):
        pos = min(pos, len(word))
        augmented = word[:pos] + "о" + word[pos:]
        assert count_syllables(augmented) >= count_syllables(word)


class TestDictionaryMorphology:
    def test_bundled_lookup(self, morph):
        assert morph.analyze("кот") == ("кот", Pos.NOUN)
        assert morph.analyze("спит") == ("спать", Pos.VERB)

    def test_lookup_is_case_insensitive(self, morph):
        assert morph.analyze("КОТ") == morph.analyze("кот")

    def test_unknown_surface_returns_none(self, morph):
        assert morph.analyze("qqqq") is None

    def test_load_rejects_wrong_field_count(self, tmp_path):
        p = tmp_path / "m.tsv"
        p.write_text("кот\tкот\n", encoding="utf-8")
        with pytest.raises(LexiconError, match="row 1"):
            DictionaryMorphology.load(p)

    def test_load_rejects_unknown_pos(self, tmp_path):
        p = tmp_path / "m.tsv"
        p.write_text("кот\tкот\tNOU\n", encoding="utf-8")
        with pytest.raises(LexiconError, match="row 1"):
            DictionaryMorphology.load(p)

    def test_first_duplicate_wins(self, tmp_path):
        p = tmp_path / "m.tsv"
        p.write_text("кот\tкот\tNOUN\nкот\tдруг\tVERB\n", encoding="utf-8")
        md = DictionaryMorphology.load(p)
        assert md.analyze("кот") == ("кот", Pos.NOUN)

    def test_comments_and_blanks_skipped(self, tmp_path):
        p = tmp_path / "m.tsv"
        p.write_text("# header\n\nкот\tкот\tNOUN\n", encoding="utf-8")
        assert len(DictionaryMorphology.load(p)) == 1


class TestHeuristicMorphology:
    def test_adjective_suffix(self):
        assert HeuristicMorphology().analyze("красивый")[1] is Pos.ADJ

    def test_verb_suffix(self):
        assert HeuristicMorphology().analyze("бежать")[1] is Pos.VERB

    def test_noun_suffix(self):
        assert HeuristicMorphology().analyze("радость")[1] is Pos.NOUN

    def test_known_adverb(self):
        assert HeuristicMorphology().analyze("быстро")[1] is Pos.ADV

    def test_titlecase_fallback_is_proper_noun(self):
        assert HeuristicMorphology().analyze("Маша")[1] is Pos.PROPN

    def test_everything_else_is_other(self):
        assert HeuristicMorphology().analyze("и")[1] is Pos.OTHER

    def test_lemma_is_lowercased_surface(self):
        assert HeuristicMorphology().analyze("Быстро")[0] == "быстро"


class TestAnalyze:
    def test_dictionary_annotation(self, morph):
        t = analyze("Кот спит.", morph)
        assert t.n_tokens == 2
        assert t.n_sentences == 1
        assert (t.tokens[0].lemma, t.tokens[0].pos) == ("кот", Pos.NOUN)
        assert (t.tokens[1].lemma, t.tokens[1].pos) == ("спать", Pos.VERB)

    def test_empty_text(self, morph):
        t = analyze("", morph)
        assert t.n_tokens == 0 and t.n_sentences == 0

    def test_oov_fallback_is_other(self, morph):
        t = analyze("Qqqq zzz.", morph)
        assert [tok.pos for tok in t.tokens] == [Pos.OTHER, Pos.OTHER]
        assert t.tokens[0].lemma == "qqqq"

    def test_counts(self, morph):
        t = analyze("Кот спит.", morph)
        assert t.char_count == 7
        assert t.letter_count == 7
        assert t.symbol_count == 8  # includes the period
        assert t.sentence_symbols == [8]

    def test_char_count_never_exceeds_symbol_count(self, morph):
        for text in ("Кот, пёс!", "A1 b.", "- тире - и №5"):
            t = analyze(text, morph)
            assert t.char_count <= t.symbol_count

    def test_token_only_spans_kept(self, morph):
        t = analyze("Кот. ... Пёс.", morph)
        assert t.n_sentences == 2

    @given(st.text(alphabet="абв АБВ.!?…-", max_size=60))
    def test_token_count_matches_tokenize(self, text):
        md = HeuristicMorphology()
        assert analyze(text, md).n_tokens == len(tokenize(text))

    @given(st.text(alphabet="абвг АБВГ.!?", max_size=60))
    def test_sentence_ranges_partition_tokens(self, text):
        t = analyze(text, HeuristicMorphology())
        prev_end = 0
        for first, last in t.sentences:
            assert first == prev_end
            assert last > first
            prev_end = last
        assert prev_end == t.n_tokens

    def test_deterministic(self, morph):
        text = "Кот спит. Пёс бежит! Маша читает?"
        first = analyze(text, morph)
        second = analyze(text, morph)
        assert first == second


class TestAbbreviations:
    def test_load(self, tmp_path):
        p = tmp_path / "abbr.txt"
        p.write_text("г.\nУл\n# comment\n\nт.е.\n", encoding="utf-8")
        abbr = load_abbreviations(p)
        assert "г" in abbr and "ул" in abbr
        assert "т.е" in abbr

    def test_bundled_list_suppresses_geographic_dot(self, resources):
        spans = split_sentences("г. Москва слово", resources.abbreviations)
        assert len(spans) == 1
