"""Bag-of-words vectorization and numeric conditioning.

Covers the lemma preprocessing chain, fragment truncation, a smoothed
tf-idf weighter fitted on training fragments only, min-max scaling with
training extrema, and a truncated SVD that keeps the smallest basis
explaining at least the requested share of variance.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from .errors import VectorizerError
from .text_analysis import MorphologyProvider, tokenize

FRAGMENT_LIMIT = 256
MAX_VOCABULARY = 2000
SVD_TARGET = 0.95


def preprocess(text: str, morphology: MorphologyProvider,
               stopwords: frozenset[str]) -> list[str]:
    """Turn raw text into a lemma sequence.

    Steps, in order: drop non-word characters (tokenization), lowercase,
    lemmatize, remove stop words.  Unknown forms keep their lowercased
    surface as lemma.
    """
    lemmas = []
    for surface in tokenize(text):
        low = surface.lower()
        result = morphology.analyze(low)
        lemma = result[0] if result is not None else low
        if lemma not in stopwords:
            lemmas.append(lemma)
    return lemmas


def fragment(lemmas: list[str], limit: int = FRAGMENT_LIMIT) -> list[str]:
    """First min(len, limit) lemmas; the rest of the preview is ignored
    by the bag-of-words path."""
    if limit <= 0:
        raise VectorizerError(f"fragment limit must be positive, got {limit}")
    return list(lemmas[:limit])


def augment_with_abstract(preview: str, abstract: str | None) -> str:
    """Join preview and abstract with a single space; documents without
    an abstract pass through unchanged."""
    if abstract is None or not abstract.strip():
        return preview
    return preview + " " + abstract


@dataclass
class TfidfModel:
    """Fitted tf-idf weighter over a fixed vocabulary.

    Vocabulary holds the max_terms most frequent training lemmas by total
    count, ties broken lexicographically.  idf uses add-one smoothing:
    ln((1 + N) / (1 + df)) + 1.  Rows are L2-normalized, so a transformed
    vector has norm 1, or 0 when no term is in vocabulary.
    """

    vocabulary: tuple[str, ...]
    idf: np.ndarray
    n_docs: int
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not self._index:
            self._index = {term: i for i, term in enumerate(self.vocabulary)}

    def transform(self, lemmas: list[str]) -> np.ndarray:
        counts = Counter(lemmas)
        vec = np.zeros(len(self.vocabulary))
        for term, count in counts.items():
            i = self._index.get(term)
            if i is not None:
                vec[i] = count * self.idf[i]
        norm = np.linalg.norm(vec)
        if norm > 0:
            vec /= norm
        return vec

    def transform_many(self, documents: list[list[str]]) -> np.ndarray:
        if not documents:
            return np.zeros((0, len(self.vocabulary)))
        return np.vstack([self.transform(doc) for doc in documents])


def fit_tfidf(documents: list[list[str]], max_terms: int = MAX_VOCABULARY) -> TfidfModel:
    """Fit vocabulary and idf weights on training fragments."""
    if not documents:
        raise VectorizerError("cannot fit tf-idf on an empty document list")
    if max_terms <= 0:
        raise VectorizerError(f"max_terms must be positive, got {max_terms}")
    totals: Counter = Counter()
    doc_freq: Counter = Counter()
    for lemmas in documents:
        totals.update(lemmas)
        doc_freq.update(set(lemmas))
    ranked = sorted(totals, key=lambda term: (-totals[term], term))
    vocabulary = tuple(ranked[:max_terms])
    n = len(documents)
    idf = np.array([math.log((1 + n) / (1 + doc_freq[t])) + 1.0 for t in vocabulary])
    return TfidfModel(vocabulary=vocabulary, idf=idf, n_docs=n)


@dataclass
class MinMaxScaler:
    """Column-wise scaling to [0, 1] with training extrema.

    Constant columns map to 0; values outside the training range are
    clipped, so test rows stay inside the unit box.
    """

    mins: np.ndarray
    ranges: np.ndarray

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.mins.shape[0]:
            raise VectorizerError(f"expected {self.mins.shape[0]} columns, got {X.shape[-1]}")
        with np.errstate(divide="ignore", invalid="ignore"):
            scaled = np.where(self.ranges > 0, (X - self.mins) / np.where(self.ranges > 0, self.ranges, 1.0), 0.0)
        return np.clip(scaled, 0.0, 1.0)


def fit_minmax(X: np.ndarray) -> MinMaxScaler:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] == 0:
        raise VectorizerError("minmax scaling needs a non-empty 2-d matrix")
    if not np.all(np.isfinite(X)):
        raise VectorizerError("minmax scaling input contains non-finite values")
    mins = X.min(axis=0)
    ranges = X.max(axis=0) - mins
    return MinMaxScaler(mins=mins, ranges=ranges)


@dataclass
class SvdModel:
    """Truncated SVD basis fitted on a centered training matrix.

    components has orthonormal rows; retained is the achieved share of
    total variance, always at least the requested target.
    """

    mean: np.ndarray
    components: np.ndarray
    retained: float
    target: float

    @property
    def k(self) -> int:
        return self.components.shape[0]

    def transform(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.shape[-1] != self.mean.shape[0]:
            raise VectorizerError(f"expected {self.mean.shape[0]} columns, got {X.shape[-1]}")
        return (X - self.mean) @ self.components.T


def fit_svd(X: np.ndarray, target: float = SVD_TARGET) -> SvdModel:
    """Fit the smallest centered SVD basis whose cumulative explained
    variance reaches the target share.

    Solves the eigenproblem on the smaller of the covariance and Gram
    matrices, so wide matrices (many more columns than rows) stay cheap.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 2:
        raise VectorizerError("svd needs a matrix with at least 2 rows")
    if not np.all(np.isfinite(X)):
        raise VectorizerError("svd input contains non-finite values")
    if not 0.0 < target <= 1.0:
        raise VectorizerError(f"variance target must be in (0, 1], got {target}")
    n, p = X.shape
    mean = X.mean(axis=0)
    centered = X - mean
    if n <= p:
        gram = centered @ centered.T
        eigvals, eigvecs = np.linalg.eigh(gram)
    else:
        cov = centered.T @ centered
        eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)
    eigvecs = eigvecs[:, order]
    total = eigvals.sum()
    if total <= 0.0:
        raise VectorizerError("svd input has zero variance")
    ratio = np.cumsum(eigvals) / total
    k = int(np.searchsorted(ratio, target - 1e-12) + 1)
    k = min(k, int((eigvals > 0).sum()))
    if n <= p:
        # right singular vectors recovered from the Gram eigenvectors
        sigma = np.sqrt(eigvals[:k])
        components = (centered.T @ eigvecs[:, :k] / sigma).T
    else:
        components = eigvecs[:, :k].T
    return SvdModel(mean=mean, components=components,
                    retained=float(ratio[k - 1]), target=target)
