"""Bundled and user-supplied lexical resources, gathered in one place.

Every resource has a small bundled default under agelex/data so the
package works out of the box; any of them can be swapped for a larger
file via the command line or a config file.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .features import ReadabilityCoefficients
from .lexicons import (FrequencyDictionary, SentimentLexicon, WordList,
                       load_frequency_dict, load_sentiment_lexicon, load_word_list)
from .text_analysis import (DictionaryMorphology, HeuristicMorphology,
                            MorphologyProvider, load_abbreviations)

_DATA_DIR = Path(__file__).resolve().parent / "data"

BUNDLED_FILES = {
    "morphology": _DATA_DIR / "morphology.tsv",
    "frequency": _DATA_DIR / "frequency.tsv",
    "sentiment": _DATA_DIR / "sentiment.csv",
    "top5000": _DATA_DIR / "top5000.txt",
    "familiar": _DATA_DIR / "familiar.txt",
    "stopwords": _DATA_DIR / "stopwords.txt",
    "abbreviations": _DATA_DIR / "abbreviations.txt",
    "coefficients": _DATA_DIR / "readability_default.json",
}

GRADE_COEFFICIENTS_FILE = _DATA_DIR / "readability_grade.json"


class ChainMorphology(MorphologyProvider):
    """Dictionary lookup with a heuristic fallback for unknown forms."""

    def __init__(self, primary: MorphologyProvider, fallback: MorphologyProvider):
        self._primary = primary
        self._fallback = fallback

    def analyze(self, surface: str):
        result = self._primary.analyze(surface)
        if result is None:
            result = self._fallback.analyze(surface)
        return result


@dataclass
class Resources:
    """Everything feature extraction and vectorization need to run."""

    morphology: MorphologyProvider
    abbreviations: frozenset[str]
    frequency: FrequencyDictionary
    sentiment: SentimentLexicon
    top5000: WordList
    familiar: WordList
    stopwords: frozenset[str]
    coefficients: ReadabilityCoefficients

    @classmethod
    def load(cls, paths: dict[str, str | Path] | None = None,
             heuristic_fallback: bool = False) -> "Resources":
        """Load resources from the given paths, falling back to the
        bundled defaults for any that are missing.

        With heuristic_fallback, forms missing from the morphology
        dictionary get a suffix-based part-of-speech guess instead of
        the plain pos=Other fallback.
        """
        resolved = dict(BUNDLED_FILES)
        for key, value in (paths or {}).items():
            if key not in resolved:
                raise KeyError(f"unknown resource {key!r}")
            if value is not None:
                resolved[key] = Path(value)
        morphology: MorphologyProvider = DictionaryMorphology.load(resolved["morphology"])
        if heuristic_fallback:
            morphology = ChainMorphology(morphology, HeuristicMorphology())
        return cls(
            morphology=morphology,
            abbreviations=load_abbreviations(resolved["abbreviations"]),
            frequency=load_frequency_dict(resolved["frequency"]),
            sentiment=load_sentiment_lexicon(resolved["sentiment"]),
            top5000=load_word_list(resolved["top5000"], "top5000"),
            familiar=load_word_list(resolved["familiar"], "familiar"),
            stopwords=frozenset(load_word_list(resolved["stopwords"], "stopwords").lemmas),
            coefficients=ReadabilityCoefficients.from_file(resolved["coefficients"]),
        )

    @classmethod
    def bundled(cls) -> "Resources":
        return cls.load()
