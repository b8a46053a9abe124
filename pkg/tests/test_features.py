"""Feature families, the 56-column schema and the readability formulas."""
import math

import pytest
from hypothesis import given, strategies as st

from agelex.corpus import AgeRating, Document, Label
from agelex.errors import ConfigError, FeatureError
from agelex.features import (ALL_FEATURE_NAMES, FAMILY_NAMES,
                             DEFAULT_COEFFICIENTS, FeatureVector,
                             ReadabilityCoefficients, automated_readability,
                             coleman_liau, dale_chall, extract_all,
                             flesch_kincaid, general_features,
                             grammatical_features, lexical_features,
                             publishing_features, readability_features,
                             sentiment_features, smog_index)
from agelex.lexicons import (FrequencyDictionary, FrequencyRecord, Polarity,
                             SentimentCategory, SentimentLexicon, WordList)
from agelex.resources import GRADE_COEFFICIENTS_FILE
from agelex.text_analysis import DictionaryMorphology, Pos, analyze

import agelex.features as features_mod

# Frozen fingerprint of the 56-name schema; a change here is a breaking
# change for every stored model.
SCHEMA_HASH = "2e752fe0748945c23a0fa469383851823d5403881bba2a99836eb14933576199"


def dict_morph(entries: dict[str, tuple[str, str]]) -> DictionaryMorphology:
    return DictionaryMorphology({s: (l, Pos(p)) for s, (l, p) in entries.items()})


def analyzed(text: str, entries: dict[str, tuple[str, str]]):
    return analyze(text, dict_morph(entries))


class TestSchema:
    def test_width_is_56(self):
        assert len(ALL_FEATURE_NAMES) == 56

    def test_family_widths(self):
        widths = {name: len(cols) for name, cols in FAMILY_NAMES.items()}
        assert widths == {"general": 11, "readability": 5, "lexical": 26,
                          "grammatical": 3, "sentiment": 6, "publishing": 5}

    def test_names_unique(self):
        assert len(set(ALL_FEATURE_NAMES)) == 56

    def test_schema_hash_frozen(self):
        assert features_mod.schema_hash() == SCHEMA_HASH


class TestFeatureVector:
    def test_length_mismatch_rejected(self):
        with pytest.raises(FeatureError):
            FeatureVector(("a", "b"), (1.0,))

    def test_duplicate_names_rejected(self):
        with pytest.raises(FeatureError):
            FeatureVector(("a", "a"), (1.0, 2.0))

    def test_non_finite_rejected(self):
        with pytest.raises(FeatureError, match="a"):
            FeatureVector(("a",), (float("nan"),))
        with pytest.raises(FeatureError):
            FeatureVector(("a",), (float("inf"),))

    def test_concat_and_as_dict(self):
        fv = FeatureVector.concat([FeatureVector(("a",), (1.0,)),
                                   FeatureVector(("b",), (2.0,), ("w",))])
        assert fv.as_dict() == {"a": 1.0, "b": 2.0}
        assert fv.warnings == ("w",)


class TestReadabilityFormulas:
    """The five index formulas against hand-computed values."""

    def test_first_index_worked_example(self):
        assert flesch_kincaid(10, 1.5) == pytest.approx(69.785, abs=1e-9)

    def test_letters_based_index_worked_example(self):
        assert coleman_liau(500, 5) == pytest.approx(12.12, abs=1e-9)

    def test_character_index_worked_example(self):
        assert automated_readability(5, 10) == pytest.approx(7.12, abs=1e-9)

    def test_polysyllable_index_worked_example(self):
        assert smog_index(30, 30) == pytest.approx(8.841846274778883, abs=1e-9)

    def test_familiar_words_index_worked_example(self):
        assert dale_chall(0.1, 10) == pytest.approx(2.075, abs=1e-9)


class TestCoefficients:
    def test_defaults(self):
        c = DEFAULT_COEFFICIENTS
        assert c.fk == (206.835, -1.015, -84.6)
        assert c.dc == (0.0, 0.1579, 0.0496)

    def test_partial_override_keeps_other_defaults(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text('{"fk": {"base": 1.0, "asl": 2.0, "asw": 3.0}}', encoding="utf-8")
        c = ReadabilityCoefficients.from_file(p)
        assert c.fk == (1.0, 2.0, 3.0)
        assert c.cl == DEFAULT_COEFFICIENTS.cl

    def test_missing_key_rejected(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text('{"fk": {"base": 1.0, "asl": 2.0}}', encoding="utf-8")
        with pytest.raises(ConfigError, match="fk"):
            ReadabilityCoefficients.from_file(p)

    def test_unknown_index_rejected(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text('{"xx": {"base": 1.0}}', encoding="utf-8")
        with pytest.raises(ConfigError, match="xx"):
            ReadabilityCoefficients.from_file(p)

    def test_malformed_json_rejected(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text("{oops", encoding="utf-8")
        with pytest.raises(ConfigError, match="JSON"):
            ReadabilityCoefficients.from_file(p)

    def test_bundled_grade_variant_rises_with_difficulty(self):
        grade = ReadabilityCoefficients.from_file(GRADE_COEFFICIENTS_FILE)
        easy = flesch_kincaid(5, 1.2, grade)
        hard = flesch_kincaid(25, 2.4, grade)
        assert hard > easy
        # default orientation is reading ease: harder means lower
        assert flesch_kincaid(25, 2.4) < flesch_kincaid(5, 1.2)


class TestGeneralFeatures:
    def test_ttr_definition(self):
        # 10 tokens, 7 unique lemmas
        entries = {c: (c, "OTHER") for c in "абвгдеж"}
        t = analyzed("а б в г д е ж а б в.", entries)
        fv = general_features(t).as_dict()
        assert fv["ttr"] == pytest.approx(0.7)

    def test_uniform_word_lengths(self):
        t = analyzed("кот кот кот.", {"кот": ("кот", "NOUN")})
        fv = general_features(t).as_dict()
        assert fv["avg_words_len"] == 3.0
        assert fv["med_words_len"] == 3.0
        assert fv["ttr"] == pytest.approx(1 / 3)

    def test_nav_ratio(self):
        entries = {"кот": ("кот", "NOUN"), "рыжий": ("рыжий", "ADJ"),
                   "спит": ("спать", "VERB")}
        t = analyzed("кот кот рыжий рыжий спит спит.", entries)
        fv = general_features(t).as_dict()
        assert fv["ttr_n"] == pytest.approx(0.5)
        assert fv["ttr_a"] == pytest.approx(0.5)
        assert fv["ttr_v"] == pytest.approx(0.5)
        assert fv["nav"] == pytest.approx(2.0)

    def test_nav_zero_when_no_verbs(self):
        t = analyzed("кот кот.", {"кот": ("кот", "NOUN")})
        assert general_features(t).as_dict()["nav"] == 0.0

    def test_proper_nouns_not_counted_in_ttr_n(self):
        entries = {"маша": ("маша", "PROPN"), "кот": ("кот", "NOUN")}
        t = analyzed("Маша кот.", entries)
        fv = general_features(t).as_dict()
        assert fv["ttr_n"] == pytest.approx(1.0)  # only "кот"

    def test_many_syllables_share(self):
        # пятиэтажный has 5 vowels; кот has 1
        entries = {"пятиэтажный": ("пятиэтажный", "ADJ"), "кот": ("кот", "NOUN")}
        t = analyzed("пятиэтажный кот.", entries)
        assert general_features(t).as_dict()["many_syllables"] == pytest.approx(0.5)

    def test_sentence_lengths_in_symbols(self):
        t = analyzed("Кот спит. Да.", {"кот": ("кот", "NOUN"), "спит": ("спать", "VERB")})
        fv = general_features(t).as_dict()
        assert fv["avg_sent_len"] == pytest.approx((8 + 3) / 2)
        assert fv["med_sent_len"] == pytest.approx(5.5)

    def test_empty_text_rejected(self):
        t = analyzed("", {})
        with pytest.raises(FeatureError):
            general_features(t)


class TestReadabilityFeatures:
    def test_difficult_words_exclude_familiar_and_proper(self):
        entries = {"маша": ("маша", "PROPN"), "видит": ("видеть", "VERB"),
                   "кота": ("кот", "NOUN")}
        familiar = WordList("familiar", {"видеть": None})
        t = analyzed("Маша видит кота.", entries)
        fv = readability_features(t, familiar).as_dict()
        # one difficult token of three: share 1/3, 3 words in 1 sentence
        assert fv["index_dc"] == pytest.approx(0.1579 * (100.0 / 3.0) + 0.0496 * 3.0)

    def test_all_familiar_leaves_only_length_term(self):
        entries = {"кот": ("кот", "NOUN"), "спит": ("спать", "VERB")}
        familiar = WordList("familiar", {"кот": None, "спать": None})
        t = analyzed("кот спит.", entries)
        assert readability_features(t, familiar).as_dict()["index_dc"] == pytest.approx(0.0496 * 2.0)

    def test_custom_coefficients_applied(self):
        entries = {"кот": ("кот", "NOUN")}
        t = analyzed("кот.", entries)
        coef = ReadabilityCoefficients(fk=(1.0, 0.0, 0.0))
        fv = readability_features(t, WordList("f", {}), coef).as_dict()
        assert fv["index_fk"] == pytest.approx(1.0)


def make_freq(rows):
    return FrequencyDictionary([FrequencyRecord(*row) for row in rows])


class TestLexicalFeatures:
    def test_full_top5000_coverage(self):
        entries = {"кот": ("кот", "NOUN"), "спит": ("спать", "VERB")}
        top = WordList("top5000", {"кот": 100.0, "спать": 200.0})
        t = analyzed("кот спит.", entries)
        fv = lexical_features(t, make_freq([]), top).as_dict()
        assert fv["5000_proc"] == 1.0
        assert fv["5000_freq"] == pytest.approx(150.0)

    def test_attribute_averages_per_bucket(self):
        entries = {"кот": ("кот", "NOUN"), "пёс": ("пёс", "NOUN")}
        freq = make_freq([("кот", Pos.NOUN, 100.0, 10, 20.0, 5),
                          ("пёс", Pos.NOUN, 300.0, 30, 40.0, 15)])
        t = analyzed("кот пёс.", entries)
        fv = lexical_features(t, freq, WordList("top", {})).as_dict()
        assert fv["words_fr"] == pytest.approx(200.0)
        assert fv["s_fr"] == pytest.approx(200.0)
        assert fv["words_r"] == pytest.approx(20.0)
        assert fv["words_d"] == pytest.approx(30.0)
        assert fv["words_doc"] == pytest.approx(10.0)
        assert fv["v_fr"] == 0.0  # no verbs matched

    def test_unmatched_token_skips_denominator(self):
        entries = {"кот": ("кот", "NOUN"), "ёж": ("ёж", "NOUN")}
        freq = make_freq([("кот", Pos.NOUN, 100.0, 10, 20.0, 5)])
        t = analyzed("кот ёж.", entries)
        fv = lexical_features(t, freq, WordList("top", {})).as_dict()
        assert fv["words_fr"] == pytest.approx(100.0)

    def test_no_matches_warns_and_zeroes(self):
        t = analyzed("ёж.", {"ёж": ("ёж", "NOUN")})
        fv = lexical_features(t, make_freq([]), WordList("top", {}))
        assert fv.warnings == ("no_frequency_matches",)
        assert fv.as_dict()["words_fr"] == 0.0

    def test_top5000_without_ipm_falls_back_to_dictionary(self):
        entries = {"кот": ("кот", "NOUN")}
        freq = make_freq([("кот", Pos.NOUN, 123.0, 10, 20.0, 5)])
        top = WordList("top", {"кот": None})
        t = analyzed("кот.", entries)
        assert lexical_features(t, freq, top).as_dict()["5000_freq"] == pytest.approx(123.0)

    def test_pos_specific_lookup_beats_average(self):
        # "печь" noun and verb entries differ; a noun token must take the
        # noun row, not the cross-pos average
        entries = {"печь": ("печь", "NOUN")}
        freq = make_freq([("печь", Pos.NOUN, 100.0, 10, 20.0, 5),
                          ("печь", Pos.VERB, 300.0, 30, 40.0, 15)])
        t = analyzed("печь.", entries)
        assert lexical_features(t, freq, WordList("top", {})).as_dict()["words_fr"] == pytest.approx(100.0)


class TestGrammaticalFeatures:
    def test_mixed_pos_shares(self):
        entries = {"кот": ("кот", "NOUN"), "пёс": ("пёс", "NOUN"),
                   "спит": ("спать", "VERB"), "и": ("и", "OTHER")}
        t = analyzed("кот пёс спит и.", entries)
        fv = grammatical_features(t).as_dict()
        assert (fv["count_n"], fv["count_v"], fv["count_a"]) == (0.5, 0.25, 0.0)

    def test_all_adjectives(self):
        t = analyzed("рыжий рыжий.", {"рыжий": ("рыжий", "ADJ")})
        fv = grammatical_features(t).as_dict()
        assert (fv["count_n"], fv["count_v"], fv["count_a"]) == (0.0, 0.0, 1.0)

    def test_bundled_dictionary_example(self, resources):
        t = analyze("кот спит", resources.morphology)
        fv = grammatical_features(t).as_dict()
        assert (fv["count_n"], fv["count_v"], fv["count_a"]) == (0.5, 0.5, 0.0)

    def test_proper_nouns_are_not_nouns(self):
        t = analyzed("Маша.", {"маша": ("маша", "PROPN")})
        assert grammatical_features(t).as_dict()["count_n"] == 0.0


class TestSentimentFeatures:
    def _lexicon(self):
        return SentimentLexicon({
            "ужасный": (Polarity.NEGATIVE, SentimentCategory.OPINION),
            "радость": (Polarity.POSITIVE, SentimentCategory.FEELING),
        })

    def test_share_of_matching_tokens(self):
        entries = {c: (c, "OTHER") for c in "абвгдежз"}
        entries["ужасный"] = ("ужасный", "ADJ")
        t = analyzed("ужасный ужасный а б в г д е ж з.", entries)
        fv = sentiment_features(t, self._lexicon()).as_dict()
        assert fv["neg_opinion"] == pytest.approx(0.2)
        assert fv["pos_feeling"] == 0.0

    def test_no_hits_all_zero(self):
        t = analyzed("кот.", {"кот": ("кот", "NOUN")})
        fv = sentiment_features(t, self._lexicon())
        assert all(v == 0.0 for v in fv.values)

    def test_lookup_is_by_lemma(self):
        entries = {"ужасного": ("ужасный", "ADJ")}
        t = analyzed("ужасного.", entries)
        assert sentiment_features(t, self._lexicon()).as_dict()["neg_opinion"] == 1.0


class TestPublishingFeatures:
    def test_middle_rating(self):
        assert publishing_features(AgeRating.R12).values == (0, 0, 1, 0, 0)

    def test_unknown_is_all_zero(self):
        assert publishing_features(AgeRating.UNKNOWN).values == (0, 0, 0, 0, 0)

    def test_last_rating(self):
        assert publishing_features(AgeRating.R18).values == (0, 0, 0, 0, 1)

    @pytest.mark.parametrize("rating", [r for r in AgeRating if r is not AgeRating.UNKNOWN])
    def test_one_hot_sums_to_one(self, rating):
        assert sum(publishing_features(rating).values) == 1.0


class TestExtractAll:
    def _doc(self, text="Кот спит. Пёс бежит и играет во дворе.", **kw):
        return Document(id="d", text=text, label=Label.CHILDREN, **kw)

    def test_width_and_order(self, resources):
        fv = extract_all(self._doc(), resources)
        assert fv.names == ALL_FEATURE_NAMES
        assert len(fv.values) == 56

    def test_deterministic(self, resources):
        a = extract_all(self._doc(), resources)
        b = extract_all(self._doc(), resources)
        assert a == b

    def test_empty_preview_rejected(self, resources):
        with pytest.raises(FeatureError, match="empty text"):
            extract_all(self._doc(text="   "), resources)

    def test_age_rating_reflected(self, resources):
        fv = extract_all(self._doc(age_rating=AgeRating.R6), resources)
        assert fv.as_dict()["age_rating_6"] == 1.0
        assert sum(fv.as_dict()[n] for n in FAMILY_NAMES["publishing"]) == 1.0

    def test_fraction_features_bounded(self, resources):
        fv = extract_all(self._doc(), resources).as_dict()
        for name in ("many_syllables", "ttr", "ttr_n", "ttr_a", "ttr_v",
                     "5000_proc", "count_n", "count_v", "count_a",
                     "neg_opinion", "pos_feeling"):
            assert 0.0 <= fv[name] <= 1.0
        assert 0.0 < fv["ttr"] <= 1.0

    @given(st.integers(min_value=0, max_value=2 ** 31))
    def test_self_concatenation_fixes_readability(self, seed):
        # ratios of doubled counts are unchanged, so all five indices must
        # agree between a text and the text repeated twice
        import random as _random
        rng = _random.Random(seed)
        words = ["кот", "молоко", "пятиэтажный", "дом", "и", "бежать"]
        sents = []
        for _ in range(rng.randint(1, 5)):
            sents.append(" ".join(rng.choice(words)
                                  for _ in range(rng.randint(2, 8))).capitalize() + ".")
        text = " ".join(sents)
        entries = {w: (w, "NOUN") for w in words}
        familiar = WordList("f", {"кот": None, "и": None})
        single = readability_features(analyzed(text, entries), familiar)
        double = readability_features(analyzed(text + " " + text, entries), familiar)
        for a, b in zip(single.values, double.values):
            assert a == pytest.approx(b, abs=1e-9)
