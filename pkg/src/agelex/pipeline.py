"""End-to-end training pipelines and the experiment grid.

A Recipe says which inputs a model sees: the tf-idf bag of words (fitted
on 256-lemma training fragments, optionally with the abstract appended
to the preview) and any subset of the six feature families computed on
full previews.  train_pipeline fits the vectorizers and scaler on the
training split only, optionally applies the variance-preserving SVD, and
trains one of the two classifiers.  The grid mirrors the published
experiment: a baseline bag-of-words model against every combination of
added feature families and publishing attributes.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .analysis import MetricsReport, metrics
from .corpus import Corpus, Document, Label, Split
from .errors import ArtifactError, ConfigError, ModelError
from .features import ALL_FEATURE_NAMES, FAMILY_NAMES, extract_all, schema_hash
from .models import (CHILDREN, ADULT, LinearSvcModel, RandomForestModel,
                     register_model_kind, train_linear_svc, train_random_forest)
from .resources import Resources
from .vectorizer import (FRAGMENT_LIMIT, MAX_VOCABULARY, SVD_TARGET, MinMaxScaler,
                         SvdModel, TfidfModel, augment_with_abstract, fit_minmax,
                         fit_svd, fit_tfidf, fragment, preprocess)

MODEL_KINDS = ("rf", "lsvc")


@dataclass(frozen=True)
class Recipe:
    """Input selection for one trained model."""

    use_tfidf: bool = True
    families: tuple[str, ...] = ()
    use_abstract: bool = False

    def __post_init__(self):
        unknown = [f for f in self.families if f not in FAMILY_NAMES]
        if unknown:
            raise ConfigError(f"unknown feature families {unknown}; known: {list(FAMILY_NAMES)}")
        # canonical family order, deduplicated
        ordered = tuple(f for f in FAMILY_NAMES if f in self.families)
        object.__setattr__(self, "families", ordered)
        if not self.use_tfidf and not self.families:
            raise ConfigError("recipe selects no inputs: enable tf-idf or at least one family")

    @property
    def feature_names(self) -> tuple[str, ...]:
        names: tuple[str, ...] = ()
        for family in self.families:
            names += FAMILY_NAMES[family]
        return names

    def feature_columns(self) -> list[int]:
        index = {name: i for i, name in enumerate(ALL_FEATURE_NAMES)}
        return [index[name] for name in self.feature_names]


def label_to_int(label: Label) -> int:
    return CHILDREN if label is Label.CHILDREN else ADULT


class CorpusVectors:
    """Per-document caches shared by every grid condition.

    Holds the 56-feature vector of each document plus the preprocessed
    lemma sequences with and without the abstract appended, so the
    expensive text analysis runs once per corpus.
    """

    def __init__(self, corpus: Corpus, resources: Resources):
        self.features: dict[str, np.ndarray] = {}
        self.warnings: dict[str, tuple[str, ...]] = {}
        self.lemmas: dict[str, list[str]] = {}
        self.lemmas_abstract: dict[str, list[str]] = {}
        for doc in corpus:
            fv = extract_all(doc, resources)
            self.features[doc.id] = np.asarray(fv.values)
            if fv.warnings:
                self.warnings[doc.id] = fv.warnings
            self.lemmas[doc.id] = preprocess(doc.text, resources.morphology, resources.stopwords)
            if doc.abstract is None:
                self.lemmas_abstract[doc.id] = self.lemmas[doc.id]
            else:
                augmented = augment_with_abstract(doc.text, doc.abstract)
                self.lemmas_abstract[doc.id] = preprocess(
                    augmented, resources.morphology, resources.stopwords)


@register_model_kind
@dataclass
class TrainedPipeline:
    """A fitted recipe: vectorizers, scaler, optional SVD and the model.

    The design matrix layout is the tf-idf block (when enabled) followed
    by the selected family columns in schema order; min-max scaling spans
    the whole matrix and the SVD basis, when present, sits after scaling.
    """

    KIND = "pipeline"

    recipe: Recipe
    model_kind: str
    model: LinearSvcModel | RandomForestModel
    scaler: MinMaxScaler
    tfidf: TfidfModel | None = None
    svd: SvdModel | None = None
    feature_schema: str = field(default_factory=schema_hash)
    fragment_limit: int = FRAGMENT_LIMIT
    seed: int = 42

    def _doc_lemmas(self, doc: Document, resources: Resources) -> list[str]:
        text = doc.text
        if self.recipe.use_abstract:
            text = augment_with_abstract(doc.text, doc.abstract)
        return preprocess(text, resources.morphology, resources.stopwords)

    def _fragments(self, docs: list[Document], resources: Resources,
                   cache: CorpusVectors | None) -> list[list[str]]:
        out = []
        for doc in docs:
            if cache is not None:
                lemmas = (cache.lemmas_abstract if self.recipe.use_abstract
                          else cache.lemmas)[doc.id]
            else:
                lemmas = self._doc_lemmas(doc, resources)
            out.append(fragment(lemmas, self.fragment_limit))
        return out

    def _raw_matrix(self, docs: list[Document], resources: Resources,
                    cache: CorpusVectors | None) -> np.ndarray:
        blocks = []
        if self.recipe.use_tfidf:
            assert self.tfidf is not None
            blocks.append(self.tfidf.transform_many(self._fragments(docs, resources, cache)))
        columns = self.recipe.feature_columns()
        if columns:
            if cache is not None:
                feats = np.vstack([cache.features[doc.id] for doc in docs])
            else:
                feats = np.vstack([np.asarray(extract_all(doc, resources).values) for doc in docs])
            blocks.append(feats[:, columns])
        return blocks[0] if len(blocks) == 1 else np.hstack(blocks)

    def _design_matrix(self, docs: list[Document], resources: Resources,
                       cache: CorpusVectors | None) -> np.ndarray:
        matrix = self.scaler.transform(self._raw_matrix(docs, resources, cache))
        if self.svd is not None:
            matrix = self.svd.transform(matrix)
        return matrix

    def predict_documents(self, docs: list[Document], resources: Resources,
                          cache: CorpusVectors | None = None) -> np.ndarray:
        if not docs:
            raise ModelError("no documents to classify")
        X = self._design_matrix(docs, resources, cache)
        return self.model.predict_many(X)

    def classify(self, doc: Document, resources: Resources) -> tuple[Label, float]:
        """Label one document; the score is the signed margin for the
        linear model and the winning vote share for the forest."""
        X = self._design_matrix([doc], resources, None)
        label_int, score = self.model.predict(X[0])
        return (Label.CHILDREN if label_int == CHILDREN else Label.ADULT), score

    def evaluate(self, docs: list[Document], resources: Resources,
                 cache: CorpusVectors | None = None,
                 positive: Label = Label.CHILDREN) -> MetricsReport:
        pred = self.predict_documents(docs, resources, cache)
        gold = np.array([label_to_int(d.label) for d in docs], dtype=np.int64)
        return metrics(pred, gold, positive)

    def to_json_dict(self) -> dict:
        payload = {
            "recipe": {
                "use_tfidf": self.recipe.use_tfidf,
                "families": list(self.recipe.families),
                "use_abstract": self.recipe.use_abstract,
            },
            "model_kind": self.model_kind,
            "feature_schema": self.feature_schema,
            "fragment_limit": self.fragment_limit,
            "seed": self.seed,
            "scaler": {"mins": self.scaler.mins.tolist(), "ranges": self.scaler.ranges.tolist()},
            "model": {"kind": self.model.KIND, "payload": self.model.to_json_dict()},
        }
        if self.tfidf is not None:
            payload["tfidf"] = {
                "vocabulary": list(self.tfidf.vocabulary),
                "idf": self.tfidf.idf.tolist(),
                "n_docs": self.tfidf.n_docs,
            }
        if self.svd is not None:
            payload["svd"] = {
                "mean": self.svd.mean.tolist(),
                "components": self.svd.components.tolist(),
                "retained": self.svd.retained,
                "target": self.svd.target,
            }
        return payload

    @classmethod
    def from_json_dict(cls, payload: dict) -> "TrainedPipeline":
        recipe = Recipe(
            use_tfidf=bool(payload["recipe"]["use_tfidf"]),
            families=tuple(payload["recipe"]["families"]),
            use_abstract=bool(payload["recipe"]["use_abstract"]),
        )
        stored_schema = payload["feature_schema"]
        if recipe.families and stored_schema != schema_hash():
            raise ArtifactError(
                f"feature schema mismatch: artifact was built with schema {stored_schema}, "
                f"current code produces {schema_hash()}")
        model_entry = payload["model"]
        model_cls = {LinearSvcModel.KIND: LinearSvcModel,
                     RandomForestModel.KIND: RandomForestModel}.get(model_entry["kind"])
        if model_cls is None:
            raise ArtifactError(f"unknown inner model kind {model_entry['kind']!r}")
        tfidf = None
        if "tfidf" in payload:
            tfidf = TfidfModel(
                vocabulary=tuple(payload["tfidf"]["vocabulary"]),
                idf=np.asarray(payload["tfidf"]["idf"], dtype=float),
                n_docs=int(payload["tfidf"]["n_docs"]),
            )
        svd = None
        if "svd" in payload:
            svd = SvdModel(
                mean=np.asarray(payload["svd"]["mean"], dtype=float),
                components=np.asarray(payload["svd"]["components"], dtype=float),
                retained=float(payload["svd"]["retained"]),
                target=float(payload["svd"]["target"]),
            )
        return cls(
            recipe=recipe,
            model_kind=str(payload["model_kind"]),
            model=model_cls.from_json_dict(model_entry["payload"]),
            scaler=MinMaxScaler(
                mins=np.asarray(payload["scaler"]["mins"], dtype=float),
                ranges=np.asarray(payload["scaler"]["ranges"], dtype=float),
            ),
            tfidf=tfidf,
            svd=svd,
            feature_schema=stored_schema,
            fragment_limit=int(payload["fragment_limit"]),
            seed=int(payload["seed"]),
        )


@dataclass
class TrainSettings:
    """Hyperparameters shared by train_pipeline and the grid."""

    seed: int = 42
    svc_c: float = 1.0
    svc_max_epochs: int = 200
    svc_tolerance: float = 1e-5
    n_trees: int = 100
    max_terms: int = MAX_VOCABULARY
    fragment_limit: int = FRAGMENT_LIMIT
    svd: str = "auto"  # auto: apply for lsvc only
    svd_target: float = SVD_TARGET

    def svd_applies(self, model_kind: str) -> bool:
        if self.svd == "auto":
            return model_kind == "lsvc"
        if self.svd in ("on", "off"):
            return self.svd == "on"
        raise ConfigError(f"svd must be auto, on or off, got {self.svd!r}")


def train_pipeline(corpus: Corpus, resources: Resources, recipe: Recipe,
                   model_kind: str, settings: TrainSettings | None = None,
                   cache: CorpusVectors | None = None) -> TrainedPipeline:
    """Fit a recipe on the corpus training split."""
    settings = settings or TrainSettings()
    if model_kind not in MODEL_KINDS:
        raise ConfigError(f"unknown model kind {model_kind!r}; known: {list(MODEL_KINDS)}")
    train_docs = corpus.subset(Split.TRAIN)
    if not train_docs:
        raise ConfigError("corpus has no training documents")

    draft = TrainedPipeline(
        recipe=recipe, model_kind=model_kind,
        model=None, scaler=None,  # type: ignore[arg-type]
        fragment_limit=settings.fragment_limit, seed=settings.seed,
    )
    if recipe.use_tfidf:
        draft.tfidf = fit_tfidf(draft._fragments(train_docs, resources, cache),
                                settings.max_terms)
    raw = draft._raw_matrix(train_docs, resources, cache)
    draft.scaler = fit_minmax(raw)
    X = draft.scaler.transform(raw)
    if settings.svd_applies(model_kind):
        draft.svd = fit_svd(X, settings.svd_target)
        X = draft.svd.transform(X)
    y = np.array([label_to_int(d.label) for d in train_docs], dtype=np.int64)
    if model_kind == "lsvc":
        draft.model = train_linear_svc(X, y, C=settings.svc_c,
                                       max_epochs=settings.svc_max_epochs,
                                       tolerance=settings.svc_tolerance, seed=settings.seed)
    else:
        draft.model = train_random_forest(X, y, n_trees=settings.n_trees, seed=settings.seed)
    return draft


# Conditions of the experiment grid, in report order.  "baseline" is the
# bag-of-words model alone; the age_rating rows are the publishing
# family (the one-hot) with and without the bag of words, and publ_attr
# bundles the abstract text with the age-rating one-hot.
_QUANT = ("readability", "sentiment", "lexical", "grammatical", "general")
_ALL_FAMILIES = tuple(FAMILY_NAMES)


def grid_conditions() -> list[tuple[str, Recipe]]:
    conditions: list[tuple[str, Recipe]] = [("baseline", Recipe(use_tfidf=True))]
    for family in _QUANT:
        conditions.append((f"baseline+{family}", Recipe(use_tfidf=True, families=(family,))))
        conditions.append((family, Recipe(use_tfidf=False, families=(family,))))
    conditions += [
        ("baseline+age_rating", Recipe(use_tfidf=True, families=("publishing",))),
        ("age_rating", Recipe(use_tfidf=False, families=("publishing",))),
        ("baseline+abstracts", Recipe(use_tfidf=True, use_abstract=True)),
        ("baseline+publ_attr", Recipe(use_tfidf=True, families=("publishing",), use_abstract=True)),
        ("baseline+all", Recipe(use_tfidf=True, families=_ALL_FAMILIES, use_abstract=True)),
        ("all", Recipe(use_tfidf=False, families=_ALL_FAMILIES)),
        ("baseline+all-publ_attr", Recipe(use_tfidf=True, families=_QUANT)),
    ]
    return conditions


@dataclass(frozen=True)
class GridRow:
    model_kind: str
    condition: str
    report: MetricsReport


def run_grid(corpus: Corpus, resources: Resources,
             model_kinds: tuple[str, ...] = MODEL_KINDS,
             settings: TrainSettings | None = None,
             conditions: list[tuple[str, Recipe]] | None = None) -> list[GridRow]:
    """Train and evaluate every (model, condition) pair on the corpus
    train/test splits, reusing one per-document cache throughout."""
    settings = settings or TrainSettings()
    for kind in model_kinds:
        if kind not in MODEL_KINDS:
            raise ConfigError(f"unknown model kind {kind!r}; known: {list(MODEL_KINDS)}")
    test_docs = corpus.subset(Split.TEST)
    if not test_docs:
        raise ConfigError("corpus has no test documents; assign splits first")
    cache = CorpusVectors(corpus, resources)
    rows = []
    for kind in model_kinds:
        for name, recipe in (conditions if conditions is not None else grid_conditions()):
            trained = train_pipeline(corpus, resources, recipe, kind, settings, cache)
            rows.append(GridRow(kind, name, trained.evaluate(test_docs, resources, cache)))
    return rows
