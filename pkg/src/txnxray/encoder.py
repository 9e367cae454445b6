"""Dense model-input assembly: text vector + one-hot code/day + normalized
numerics + binary flags, with the index->original-feature group map that
grouped attribution relies on.

Layout (fixed): [text(n) | code one-hot | day one-hot(7) | amount(1) | age(1)
| is_debit(1) | has_cents(1)].
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .corpus import Transaction
from .embedding import EmbeddingModel, embed_text
from .errors import ContractError, DataError

log = logging.getLogger(__name__)

OTHER_CODE = "__other__"
GROUPS = ["text", "code", "day_of_week", "amount", "age", "is_debit", "has_cents"]


@dataclass
class FeatureGroupMap:
    """Maps every encoded index to its original-feature group."""

    n_text: int
    k: int
    slices: dict[str, tuple[int, int]]
    feature_names: list[str]

    @property
    def n_features(self) -> int:
        return self.slices[GROUPS[-1]][1]

    def group_of(self, index: int) -> str:
        for name, (lo, hi) in self.slices.items():
            if lo <= index < hi:
                return name
        raise ContractError(f"index {index} outside feature space")

    def word_slot(self, index: int) -> int | None:
        """Word position 0..l-1 for text indices, None elsewhere."""
        if index < self.n_text:
            return index // self.k
        return None

    def indices(self, group: str) -> np.ndarray:
        lo, hi = self.slices[group]
        return np.arange(lo, hi)

    def group_index_lists(self) -> list[np.ndarray]:
        """One index array per group, in canonical GROUPS order."""
        return [self.indices(g) for g in GROUPS]

    def non_text_indices(self) -> np.ndarray:
        return np.arange(self.slices["code"][0], self.n_features)


@dataclass
class EncoderSpec:
    code_alphabet: list[str]              # seen codes plus OTHER_CODE, OTHER last
    amount_mean: float
    amount_std: float
    age_mean: float
    age_std: float
    k: int
    l: int
    _group_map: FeatureGroupMap | None = field(default=None, repr=False)

    @property
    def n_text(self) -> int:
        return self.k * self.l

    @property
    def n_features(self) -> int:
        return self.n_text + len(self.code_alphabet) + 7 + 4

    def group_map(self) -> FeatureGroupMap:
        if self._group_map is None:
            n = self.n_text
            c = len(self.code_alphabet)
            slices = {
                "text": (0, n),
                "code": (n, n + c),
                "day_of_week": (n + c, n + c + 7),
                "amount": (n + c + 7, n + c + 8),
                "age": (n + c + 8, n + c + 9),
                "is_debit": (n + c + 9, n + c + 10),
                "has_cents": (n + c + 10, n + c + 11),
            }
            names = [f"text_w{i // self.k}_d{i % self.k}" for i in range(n)]
            names += [f"code_{code}" for code in self.code_alphabet]
            names += [f"day_{d}" for d in range(7)]
            names += ["amount", "age", "is_debit", "has_cents"]
            self._group_map = FeatureGroupMap(
                n_text=n, k=self.k, slices=slices, feature_names=names
            )
        return self._group_map

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "code_alphabet": list(self.code_alphabet),
            "amount_mean": self.amount_mean,
            "amount_std": self.amount_std,
            "age_mean": self.age_mean,
            "age_std": self.age_std,
            "k": self.k,
            "l": self.l,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EncoderSpec":
        return cls(
            code_alphabet=list(d["code_alphabet"]),
            amount_mean=d["amount_mean"], amount_std=d["amount_std"],
            age_mean=d["age_mean"], age_std=d["age_std"], k=d["k"], l=d["l"],
        )


def fit_encoder(train: list[Transaction], embedding: EmbeddingModel) -> EncoderSpec:
    """Normalization constants and the code alphabet, from the train split only."""
    if not train:
        raise DataError("cannot fit an encoder on an empty train split")
    amounts = np.array([t.amount for t in train], dtype=np.float64)
    ages = np.array([t.age for t in train], dtype=np.float64)
    amount_std = float(amounts.std())
    age_std = float(ages.std())
    if amount_std == 0.0:
        log.warning("amount has zero variance on the train split; using std=1")
        amount_std = 1.0
    if age_std == 0.0:
        log.warning("age has zero variance on the train split; using std=1")
        age_std = 1.0
    codes = sorted({t.code for t in train})
    return EncoderSpec(
        code_alphabet=codes + [OTHER_CODE],
        amount_mean=float(amounts.mean()),
        amount_std=amount_std,
        age_mean=float(ages.mean()),
        age_std=age_std,
        k=embedding.config.k,
        l=embedding.config.l,
    )


def encode(
    t: Transaction, spec: EncoderSpec, embedding: EmbeddingModel
) -> tuple[np.ndarray, FeatureGroupMap]:
    gmap = spec.group_map()
    vec = np.zeros(spec.n_features)
    vec[: spec.n_text] = embed_text(t.text, embedding)
    try:
        code_slot = spec.code_alphabet.index(t.code)
    except ValueError:
        code_slot = len(spec.code_alphabet) - 1  # reserved OTHER_CODE slot
    vec[spec.n_text + code_slot] = 1.0
    day_base = gmap.slices["day_of_week"][0]
    vec[day_base + t.day_of_week] = 1.0
    vec[gmap.slices["amount"][0]] = (t.amount - spec.amount_mean) / spec.amount_std
    vec[gmap.slices["age"][0]] = (t.age - spec.age_mean) / spec.age_std
    vec[gmap.slices["is_debit"][0]] = 1.0 if t.is_debit else 0.0
    vec[gmap.slices["has_cents"][0]] = 1.0 if t.has_cents else 0.0
    return vec, gmap


def encode_dataset(
    transactions: list[Transaction],
    spec: EncoderSpec,
    embedding: EmbeddingModel,
    text_cache: dict[str, np.ndarray] | None = None,
) -> np.ndarray:
    """Encode a batch; caches per unique text since texts repeat heavily."""
    gmap = spec.group_map()
    cache = text_cache if text_cache is not None else {}
    X = np.zeros((len(transactions), spec.n_features))
    day_base = gmap.slices["day_of_week"][0]
    amount_i = gmap.slices["amount"][0]
    age_i = gmap.slices["age"][0]
    debit_i = gmap.slices["is_debit"][0]
    cents_i = gmap.slices["has_cents"][0]
    for row, t in enumerate(transactions):
        tv = cache.get(t.text)
        if tv is None:
            tv = embed_text(t.text, embedding)
            cache[t.text] = tv
        X[row, : spec.n_text] = tv
        try:
            code_slot = spec.code_alphabet.index(t.code)
        except ValueError:
            code_slot = len(spec.code_alphabet) - 1
        X[row, spec.n_text + code_slot] = 1.0
        X[row, day_base + t.day_of_week] = 1.0
        X[row, amount_i] = (t.amount - spec.amount_mean) / spec.amount_std
        X[row, age_i] = (t.age - spec.age_mean) / spec.age_std
        X[row, debit_i] = 1.0 if t.is_debit else 0.0
        X[row, cents_i] = 1.0 if t.has_cents else 0.0
    return X


def decode_code(vec: np.ndarray, spec: EncoderSpec) -> str:
    lo, hi = spec.group_map().slices["code"]
    return spec.code_alphabet[int(np.argmax(vec[lo:hi]))]


def decode_day(vec: np.ndarray, spec: EncoderSpec) -> int:
    lo, hi = spec.group_map().slices["day_of_week"]
    return int(np.argmax(vec[lo:hi]))
