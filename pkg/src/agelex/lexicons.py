"""Loaders for the external lexical resources.

Three resource kinds: a frequency dictionary with ipm / rank / dispersion
/ document-count attributes per (lemma, pos), a sentiment lexicon mapping
lemmas to (polarity, category), and plain word lists such as the top-5000
frequency list or the familiar-words list used by the Dale-Chall style
index.  All loaders validate ranges and report the offending row number.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import LexiconError
from .text_analysis import Pos

FREQUENCY_HEADER = ("lemma", "pos", "ipm", "r", "d", "doc")


@dataclass(frozen=True)
class FrequencyRecord:
    """One row of the frequency dictionary.

    ipm is occurrences per million tokens; r is the number of corpus
    segments (0..100) the lemma appears in; d is Juilland's dispersion
    coefficient (0..100); doc_count is the number of documents.
    """

    lemma: str
    pos: Pos
    ipm: float
    r: int
    d: float
    doc: int


@dataclass(frozen=True)
class FrequencyStats:
    """Attribute averages returned by lookup_any; averaging over pos
    entries turns the integer attributes into floats."""

    ipm: float
    r: float
    d: float
    doc: float


class FrequencyDictionary:
    def __init__(self, records: list[FrequencyRecord]):
        self._by_key: dict[tuple[str, Pos], FrequencyRecord] = {}
        self._by_lemma: dict[str, list[FrequencyRecord]] = {}
        for rec in records:
            key = (rec.lemma, rec.pos)
            if key in self._by_key:
                raise LexiconError(f"duplicate frequency entry for {rec.lemma!r}/{rec.pos.value}")
            self._by_key[key] = rec
            self._by_lemma.setdefault(rec.lemma, []).append(rec)

    def __len__(self) -> int:
        return len(self._by_key)

    @property
    def records(self) -> list[FrequencyRecord]:
        return list(self._by_key.values())

    def lookup(self, lemma: str, pos: Pos) -> FrequencyRecord | None:
        return self._by_key.get((lemma.lower(), pos))

    def lookup_any(self, lemma: str) -> FrequencyStats | None:
        """Average the numeric attributes over every pos entry of the
        lemma; None when the lemma is absent entirely."""
        recs = self._by_lemma.get(lemma.lower())
        if not recs:
            return None
        n = len(recs)
        return FrequencyStats(
            ipm=sum(r.ipm for r in recs) / n,
            r=sum(r.r for r in recs) / n,
            d=sum(r.d for r in recs) / n,
            doc=sum(r.doc for r in recs) / n,
        )


def _parse_float(raw: str, what: str, path, lineno: int) -> float:
    try:
        return float(raw)
    except ValueError:
        raise LexiconError(f"{path}: row {lineno}: {what} is not a number: {raw!r}")


def _parse_int(raw: str, what: str, path, lineno: int) -> int:
    try:
        return int(raw)
    except ValueError:
        raise LexiconError(f"{path}: row {lineno}: {what} is not an integer: {raw!r}")


def load_frequency_dict(path: str | Path) -> FrequencyDictionary:
    """Load the tab-separated frequency dictionary.

    The first line must be the header "lemma pos ipm r d doc".  Rows with
    ipm < 0, r outside 0..100, d outside 0..100 or doc < 0 are rejected
    with their row number.  Pos tags beyond the six known classes (the
    source dictionary also tags conjunctions, particles and so on) are
    folded into Other.
    """
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines:
        raise LexiconError(f"{path}: empty file")
    header = tuple(h.strip().lower() for h in lines[0].split("\t"))
    if header != FREQUENCY_HEADER:
        raise LexiconError(f"{path}: bad header {header!r}, expected {FREQUENCY_HEADER!r}")
    records = []
    seen: set[tuple[str, Pos]] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 6:
            raise LexiconError(f"{path}: row {lineno}: expected 6 fields, got {len(parts)}")
        lemma = parts[0].strip().lower()
        if not lemma:
            raise LexiconError(f"{path}: row {lineno}: empty lemma")
        pos = Pos.from_tag(parts[1]) or Pos.OTHER
        ipm = _parse_float(parts[2], "ipm", path, lineno)
        r = _parse_int(parts[3], "r", path, lineno)
        d = _parse_float(parts[4], "d", path, lineno)
        doc = _parse_int(parts[5], "doc", path, lineno)
        if ipm < 0:
            raise LexiconError(f"{path}: row {lineno}: ipm must be >= 0, got {ipm}")
        if not 0 <= r <= 100:
            raise LexiconError(f"{path}: row {lineno}: r must be in 0..100, got {r}")
        if not 0.0 <= d <= 100.0:
            raise LexiconError(f"{path}: row {lineno}: d must be in 0..100, got {d}")
        if doc < 0:
            raise LexiconError(f"{path}: row {lineno}: doc must be >= 0, got {doc}")
        key = (lemma, pos)
        if key in seen:
            raise LexiconError(f"{path}: row {lineno}: duplicate entry for {lemma!r}/{pos.value}")
        seen.add(key)
        records.append(FrequencyRecord(lemma, pos, ipm, r, d, doc))
    return FrequencyDictionary(records)


def save_frequency_dict(dictionary: FrequencyDictionary, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(FREQUENCY_HEADER) + "\n")
        for rec in dictionary.records:
            fh.write(f"{rec.lemma}\t{rec.pos.value}\t{rec.ipm:g}\t{rec.r}\t{rec.d:g}\t{rec.doc}\n")


class Polarity(Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"


class SentimentCategory(Enum):
    OPINION = "opinion"
    FEELING = "feeling"
    FACT = "fact"


class SentimentLexicon:
    def __init__(self, entries: dict[str, tuple[Polarity, SentimentCategory]]):
        self._entries = entries

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> dict[str, tuple[Polarity, SentimentCategory]]:
        return dict(self._entries)

    def lookup(self, lemma: str) -> tuple[Polarity, SentimentCategory] | None:
        return self._entries.get(lemma.lower())


def load_sentiment_lexicon(path: str | Path) -> SentimentLexicon:
    """Load the sentiment CSV with columns lemma, polarity, category.

    Polarity must be positive/negative and category opinion/feeling/fact;
    anything else, and duplicate lemmas, fail with the row number.
    """
    entries: dict[str, tuple[Polarity, SentimentCategory]] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        for lineno, row in enumerate(reader, start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if lineno == 1 and [c.strip().lower() for c in row[:1]] == ["lemma"]:
                continue
            if len(row) != 3:
                raise LexiconError(f"{path}: row {lineno}: expected 3 columns, got {len(row)}")
            lemma = row[0].strip().lower()
            if not lemma:
                raise LexiconError(f"{path}: row {lineno}: empty lemma")
            try:
                polarity = Polarity(row[1].strip().lower())
            except ValueError:
                raise LexiconError(f"{path}: row {lineno}: unknown polarity {row[1]!r}")
            try:
                category = SentimentCategory(row[2].strip().lower())
            except ValueError:
                raise LexiconError(f"{path}: row {lineno}: unknown category {row[2]!r}")
            if lemma in entries:
                raise LexiconError(f"{path}: row {lineno}: duplicate lemma {lemma!r}")
            entries[lemma] = (polarity, category)
    return SentimentLexicon(entries)


def save_sentiment_lexicon(lexicon: SentimentLexicon, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("lemma,polarity,category\n")
        for lemma, (pol, cat) in lexicon.entries.items():
            fh.write(f"{lemma},{pol.value},{cat.value}\n")


class WordList:
    """A set of lemmas, optionally with an ipm value per lemma."""

    def __init__(self, name: str, ipm: dict[str, float | None]):
        self.name = name
        self._ipm = ipm

    def __len__(self) -> int:
        return len(self._ipm)

    def __contains__(self, lemma: str) -> bool:
        return lemma.lower() in self._ipm

    @property
    def lemmas(self) -> list[str]:
        return list(self._ipm)

    def ipm_of(self, lemma: str) -> float | None:
        return self._ipm.get(lemma.lower())


def load_word_list(path: str | Path, name: str | None = None) -> WordList:
    """Load a word list with one lemma per line, optionally followed by a
    tab and an ipm value.  Lemmas are lowercased; repeats collapse."""
    p = Path(path)
    ipm: dict[str, float | None] = {}
    for lineno, line in enumerate(p.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        lemma = parts[0].strip().lower()
        if not lemma:
            raise LexiconError(f"{path}: row {lineno}: empty lemma")
        value: float | None = None
        if len(parts) > 2:
            raise LexiconError(f"{path}: row {lineno}: expected at most 2 fields")
        if len(parts) == 2:
            value = _parse_float(parts[1], "ipm", path, lineno)
            if value < 0:
                raise LexiconError(f"{path}: row {lineno}: ipm must be >= 0, got {value}")
        ipm.setdefault(lemma, value)
    return WordList(name or p.stem, ipm)


def save_word_list(words: WordList, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for lemma in words.lemmas:
            value = words.ipm_of(lemma)
            if value is None:
                fh.write(lemma + "\n")
            else:
                fh.write(f"{lemma}\t{value:g}\n")
