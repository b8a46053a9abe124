"""The six feature families and the fixed 56-column schema.

Families, in schema order: general text statistics (11), readability
indices (5), frequency-dictionary features (26), part-of-speech shares
(3), sentiment shares (6) and the age-rating one-hot (5).  The full
column order is frozen in ALL_FEATURE_NAMES and fingerprinted by
schema_hash(); trained models refuse inputs with a different schema.

Features are always computed on the full preview text, never on the
truncated fragments used by the bag-of-words vectorizer.
"""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from statistics import mean, median
from typing import TYPE_CHECKING

from .corpus import AgeRating, Document
from .errors import ConfigError, FeatureError
from .lexicons import FrequencyDictionary, SentimentLexicon, WordList, Polarity, SentimentCategory
from .text_analysis import AnalyzedText, Pos, analyze

if TYPE_CHECKING:
    from .resources import Resources

GENERAL_NAMES = (
    "avg_words_len", "med_words_len", "avg_sent_len", "med_sent_len",
    "avg_count_syl", "many_syllables",
    "ttr", "ttr_n", "ttr_a", "ttr_v", "nav",
)
READABILITY_NAMES = ("index_fk", "index_cl", "index_ari", "index_smog", "index_dc")
LEXICAL_NAMES = (
    "5000_proc", "5000_freq",
    "words_fr", "s_fr", "v_fr", "adj_fr", "adv_fr", "prop_fr",
    "words_r", "s_r", "v_r", "adj_r", "adv_r", "prop_r",
    "words_d", "s_d", "v_d", "adj_d", "adv_d", "prop_d",
    "words_doc", "s_doc", "v_doc", "adj_doc", "adv_doc", "prop_doc",
)
GRAMMATICAL_NAMES = ("count_n", "count_v", "count_a")
SENTIMENT_NAMES = (
    "neg_opinion", "neg_feeling", "neg_fact",
    "pos_opinion", "pos_feeling", "pos_fact",
)
PUBLISHING_NAMES = ("age_rating_0", "age_rating_6", "age_rating_12",
                    "age_rating_16", "age_rating_18")

FAMILY_NAMES: dict[str, tuple[str, ...]] = {
    "general": GENERAL_NAMES,
    "readability": READABILITY_NAMES,
    "lexical": LEXICAL_NAMES,
    "grammatical": GRAMMATICAL_NAMES,
    "sentiment": SENTIMENT_NAMES,
    "publishing": PUBLISHING_NAMES,
}

ALL_FEATURE_NAMES: tuple[str, ...] = sum(FAMILY_NAMES.values(), ())

QUANTITATIVE_FAMILIES = ("general", "readability", "lexical", "grammatical", "sentiment")


def schema_hash() -> str:
    """Fingerprint of the feature names in schema order."""
    payload = "\n".join(ALL_FEATURE_NAMES).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


@dataclass(frozen=True)
class FeatureVector:
    """Named feature values for one document, plus extraction warnings."""

    names: tuple[str, ...]
    values: tuple[float, ...]
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.names) != len(self.values):
            raise FeatureError(f"{len(self.names)} names but {len(self.values)} values")
        if len(set(self.names)) != len(self.names):
            raise FeatureError("duplicate feature names")
        for name, value in zip(self.names, self.values):
            if not math.isfinite(value):
                raise FeatureError(f"non-finite value for feature {name!r}")

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.names, self.values))

    @staticmethod
    def concat(parts: list["FeatureVector"]) -> "FeatureVector":
        names: tuple[str, ...] = ()
        values: tuple[float, ...] = ()
        warnings: tuple[str, ...] = ()
        for part in parts:
            names += part.names
            values += part.values
            warnings += part.warnings
        return FeatureVector(names, values, warnings)


# Readability coefficient triples.  Signs are part of the value, so a
# coefficient file can reorient an index (e.g. a grade-level variant of
# the first index) without code changes.
_COEF_FIELDS = {
    "fk": ("base", "asl", "asw"),
    "cl": ("base", "letters", "sentences"),
    "ari": ("base", "chars_per_word", "words_per_sentence"),
    "smog": ("base", "scale", "norm"),
    "dc": ("base", "difficult_percent", "words_per_sentence"),
}


@dataclass(frozen=True)
class ReadabilityCoefficients:
    fk: tuple[float, float, float] = (206.835, -1.015, -84.6)
    cl: tuple[float, float, float] = (-15.8, 0.0588, -0.296)
    ari: tuple[float, float, float] = (-21.43, 4.71, 0.5)
    smog: tuple[float, float, float] = (3.1291, 1.043, 30.0)
    dc: tuple[float, float, float] = (0.0, 0.1579, 0.0496)

    @classmethod
    def from_file(cls, path: str | Path) -> "ReadabilityCoefficients":
        """Read coefficient overrides from a JSON file keyed by index
        (fk, cl, ari, smog, dc); missing indices keep their defaults."""
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: malformed JSON: {exc}")
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: expected a JSON object")
        kwargs = {}
        for index, obj in raw.items():
            fields = _COEF_FIELDS.get(index)
            if fields is None:
                raise ConfigError(f"{path}: unknown index {index!r}")
            if not isinstance(obj, dict) or set(obj) != set(fields):
                raise ConfigError(f"{path}: index {index!r} needs exactly the keys {fields!r}")
            triple = tuple(float(obj[f]) for f in fields)
            if not all(math.isfinite(v) for v in triple):
                raise ConfigError(f"{path}: non-finite coefficient for {index!r}")
            kwargs[index] = triple
        return cls(**kwargs)


DEFAULT_COEFFICIENTS = ReadabilityCoefficients()


def flesch_kincaid(asl: float, asw: float,
                   coefficients: ReadabilityCoefficients = DEFAULT_COEFFICIENTS) -> float:
    base, a, b = coefficients.fk
    return base + a * asl + b * asw


def coleman_liau(letters_per_100: float, sentences_per_100: float,
                 coefficients: ReadabilityCoefficients = DEFAULT_COEFFICIENTS) -> float:
    base, a, b = coefficients.cl
    return base + a * letters_per_100 + b * sentences_per_100


def automated_readability(chars_per_word: float, words_per_sentence: float,
                          coefficients: ReadabilityCoefficients = DEFAULT_COEFFICIENTS) -> float:
    base, a, b = coefficients.ari
    return base + a * chars_per_word + b * words_per_sentence


def smog_index(polysyllables: int, sentences: int,
               coefficients: ReadabilityCoefficients = DEFAULT_COEFFICIENTS) -> float:
    base, scale, norm = coefficients.smog
    return base + scale * math.sqrt(polysyllables * norm / sentences)


def dale_chall(difficult_share: float, words_per_sentence: float,
               coefficients: ReadabilityCoefficients = DEFAULT_COEFFICIENTS) -> float:
    base, a, b = coefficients.dc
    return base + a * (difficult_share * 100.0) + b * words_per_sentence


def _require_tokens(t: AnalyzedText) -> None:
    if t.n_tokens == 0:
        raise FeatureError("text has no tokens")
    if t.n_sentences == 0:
        raise FeatureError("text has no sentences")


def _ttr(lemmas: list[str]) -> float:
    if not lemmas:
        return 0.0
    return len(set(lemmas)) / len(lemmas)


def general_features(t: AnalyzedText) -> FeatureVector:
    """Word/sentence length statistics and type-token ratios.

    Type-token ratios run over lemmas; ttr_n, ttr_a and ttr_v restrict to
    tokens tagged Noun, Adj and Verb (proper nouns are not counted as
    nouns here).  nav is (ttr_a + ttr_n) / ttr_v, with 0 when there are
    no verbs.
    """
    _require_tokens(t)
    word_lengths = [len(tok.surface) for tok in t.tokens]
    nouns = [tok.lemma for tok in t.tokens if tok.pos is Pos.NOUN]
    adjs = [tok.lemma for tok in t.tokens if tok.pos is Pos.ADJ]
    verbs = [tok.lemma for tok in t.tokens if tok.pos is Pos.VERB]
    ttr_n, ttr_a, ttr_v = _ttr(nouns), _ttr(adjs), _ttr(verbs)
    nav = (ttr_a + ttr_n) / ttr_v if ttr_v > 0 else 0.0
    values = (
        mean(word_lengths),
        float(median(word_lengths)),
        mean(t.sentence_symbols),
        float(median(t.sentence_symbols)),
        mean(tok.syllables for tok in t.tokens),
        sum(1 for tok in t.tokens if tok.syllables > 4) / t.n_tokens,
        _ttr([tok.lemma for tok in t.tokens]),
        ttr_n, ttr_a, ttr_v, nav,
    )
    return FeatureVector(GENERAL_NAMES, values)


def readability_features(t: AnalyzedText, familiar: WordList,
                         coefficients: ReadabilityCoefficients = DEFAULT_COEFFICIENTS) -> FeatureVector:
    """The five readability indices on the analyzed text.

    Difficult words for the familiar-list index are tokens whose lemma is
    missing from the familiar list, proper nouns excepted.
    """
    _require_tokens(t)
    words = t.n_tokens
    sentences = t.n_sentences
    syllables = sum(tok.syllables for tok in t.tokens)
    polysyllables = sum(1 for tok in t.tokens if tok.syllables > 3)
    difficult = sum(1 for tok in t.tokens
                    if tok.pos is not Pos.PROPN and tok.lemma not in familiar)
    asl = words / sentences
    asw = syllables / words
    values = (
        flesch_kincaid(asl, asw, coefficients),
        coleman_liau(t.letter_count / words * 100.0, sentences / words * 100.0, coefficients),
        automated_readability(t.char_count / words, words / sentences, coefficients),
        smog_index(polysyllables, sentences, coefficients),
        dale_chall(difficult / words, words / sentences, coefficients),
    )
    return FeatureVector(READABILITY_NAMES, values)


_POS_BUCKETS = {Pos.NOUN: "s", Pos.VERB: "v", Pos.ADJ: "adj",
                Pos.ADV: "adv", Pos.PROPN: "prop"}
_BUCKET_ORDER = ("words", "s", "v", "adj", "adv", "prop")
_ATTR_ORDER = ("fr", "r", "d", "doc")


def lexical_features(t: AnalyzedText, frequency: FrequencyDictionary,
                     top5000: WordList) -> FeatureVector:
    """Frequency-dictionary averages and top-5000 list coverage.

    Tokens absent from the dictionary are left out of every average (they
    do not enter the denominators).  If no token matches at all, every
    dictionary average is 0 and the vector carries a warning flag.
    """
    _require_tokens(t)
    hits = [tok for tok in t.tokens if tok.lemma in top5000]
    proc_5000 = len(hits) / t.n_tokens
    freq_values = []
    for tok in hits:
        ipm = top5000.ipm_of(tok.lemma)
        if ipm is None:
            rec = frequency.lookup(tok.lemma, tok.pos)
            stats = frequency.lookup_any(tok.lemma)
            ipm = rec.ipm if rec is not None else (stats.ipm if stats is not None else None)
        if ipm is not None:
            freq_values.append(ipm)
    freq_5000 = mean(freq_values) if freq_values else 0.0

    sums = {b: [0.0, 0.0, 0.0, 0.0] for b in _BUCKET_ORDER}
    counts = {b: 0 for b in _BUCKET_ORDER}
    matched = 0
    for tok in t.tokens:
        rec = frequency.lookup(tok.lemma, tok.pos)
        if rec is not None:
            attrs = (rec.ipm, float(rec.r), rec.d, float(rec.doc))
        else:
            stats = frequency.lookup_any(tok.lemma)
            if stats is None:
                continue
            attrs = (stats.ipm, stats.r, stats.d, stats.doc)
        matched += 1
        buckets = ["words"]
        bucket = _POS_BUCKETS.get(tok.pos)
        if bucket is not None:
            buckets.append(bucket)
        for b in buckets:
            counts[b] += 1
            for i, v in enumerate(attrs):
                sums[b][i] += v

    warnings: tuple[str, ...] = ()
    if matched == 0:
        warnings = ("no_frequency_matches",)

    values = [proc_5000, freq_5000]
    for i, _attr in enumerate(_ATTR_ORDER):
        for b in _BUCKET_ORDER:
            values.append(sums[b][i] / counts[b] if counts[b] else 0.0)
    return FeatureVector(LEXICAL_NAMES, tuple(values), warnings)


def grammatical_features(t: AnalyzedText) -> FeatureVector:
    """Shares of nouns, verbs and adjectives among all tokens."""
    _require_tokens(t)
    n = t.n_tokens
    values = (
        sum(1 for tok in t.tokens if tok.pos is Pos.NOUN) / n,
        sum(1 for tok in t.tokens if tok.pos is Pos.VERB) / n,
        sum(1 for tok in t.tokens if tok.pos is Pos.ADJ) / n,
    )
    return FeatureVector(GRAMMATICAL_NAMES, values)


def sentiment_features(t: AnalyzedText, lexicon: SentimentLexicon) -> FeatureVector:
    """Shares of sentiment-bearing tokens by polarity and category,
    relative to all tokens."""
    _require_tokens(t)
    counts = {(pol, cat): 0 for pol in Polarity for cat in SentimentCategory}
    for tok in t.tokens:
        entry = lexicon.lookup(tok.lemma)
        if entry is not None:
            counts[entry] += 1
    n = t.n_tokens
    values = tuple(
        counts[(pol, cat)] / n
        for pol in (Polarity.NEGATIVE, Polarity.POSITIVE)
        for cat in (SentimentCategory.OPINION, SentimentCategory.FEELING, SentimentCategory.FACT)
    )
    return FeatureVector(SENTIMENT_NAMES, values)


_RATING_SLOTS = (AgeRating.R0, AgeRating.R6, AgeRating.R12, AgeRating.R16, AgeRating.R18)


def publishing_features(age_rating: AgeRating) -> FeatureVector:
    """One-hot age rating; an unknown rating encodes as all zeros."""
    values = tuple(1.0 if age_rating is slot else 0.0 for slot in _RATING_SLOTS)
    return FeatureVector(PUBLISHING_NAMES, values)


def extract_all(doc: Document, resources: "Resources") -> FeatureVector:
    """All 56 features for one document, in schema order."""
    if not doc.text.strip():
        raise FeatureError(f"document {doc.id!r}: empty text")
    t = analyze(doc.text, resources.morphology, resources.abbreviations)
    if t.n_tokens == 0:
        raise FeatureError(f"document {doc.id!r}: text has no tokens")
    return FeatureVector.concat([
        general_features(t),
        readability_features(t, resources.familiar, resources.coefficients),
        lexical_features(t, resources.frequency, resources.top5000),
        grammatical_features(t),
        sentiment_features(t, resources.sentiment),
        publishing_features(doc.age_rating),
    ])
