"""Synthetic labeled transaction corpus: generation, rule labeling, class
balancing and train/validation/test splitting.

Texts are drawn from per-class template sets (one or two class-signal words
plus shared fillers, 2-5 lowercase words total) so that realistic merchant
strings recur across records. Numeric attributes follow per-class
distributions declared in the corpus spec.
"""

from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError
from .seeding import substream

CSV_COLUMNS = ["id", "text", "code", "day_of_week", "amount", "age", "label"]


@dataclass(frozen=True)
class Transaction:
    """One raw transaction record; the unit everything else consumes."""

    id: int
    text: str
    code: str
    day_of_week: int
    amount: float
    age: int
    label: int | None = None

    @property
    def is_debit(self) -> bool:
        return self.amount < 0

    @property
    def has_cents(self) -> bool:
        return round(abs(self.amount) * 100) % 100 != 0

    def with_label(self, label: int) -> "Transaction":
        return dataclasses.replace(self, label=label)

    def with_text(self, text: str) -> "Transaction":
        return dataclasses.replace(self, text=text)


@dataclass
class ClassProfile:
    """Generation parameters for one transaction class."""

    name: str
    pool: list[str]
    codes: dict[str, float]
    amount_lo: float = 20.0
    amount_hi: float = 1500.0
    debit_p: float = 1.0
    cents_p: float = 0.6
    age_mu: float = 45.0
    age_sigma: float = 14.0
    weight: float = 1.0
    # Rare merchant names, each sampled so seldom that they fall below the
    # vocabulary min_count and embed as UNK.
    rare_pool: list[str] = field(default_factory=list)
    rare_rate: float = 0.0
    rare_filler: str = "14"


@dataclass
class CorpusSpec:
    """Full recipe for a synthetic corpus; the seed fixes every byte."""

    n_transactions: int
    classes: list[ClassProfile]
    stop_words: list[str]
    seed: int
    templates_per_class: int = 160

    @property
    def m_classes(self) -> int:
        return len(self.classes)

    @property
    def class_names(self) -> list[str]:
        return [c.name for c in self.classes]

    @property
    def other_class(self) -> int:
        return len(self.classes) - 1

    def validate(self) -> None:
        if self.m_classes < 3:
            raise ConfigError("need at least two real classes plus 'other'")
        if self.n_transactions < 1:
            raise ConfigError("n_transactions must be positive")
        stop = set(self.stop_words)
        seen: dict[str, str] = {}
        for prof in self.classes:
            words = list(prof.pool) + list(prof.rare_pool)
            if not words:
                raise ConfigError(f"class {prof.name!r} has an empty word pool")
            for w in words:
                if w in stop:
                    raise ConfigError(f"pool word {w!r} of {prof.name!r} is also a stop word")
                if w in seen and seen[w] != prof.name:
                    raise ConfigError(f"word {w!r} shared by {seen[w]!r} and {prof.name!r}")
                seen[w] = prof.name
            if not prof.codes:
                raise ConfigError(f"class {prof.name!r} declares no transaction codes")


@dataclass
class DatasetSplit:
    """Disjoint row-index lists partitioning a corpus 80/10/10."""

    train: list[int]
    validation: list[int]
    test: list[int]


def default_corpus_spec(n_transactions: int = 20000, seed: int = 7) -> CorpusSpec:
    """The built-in Nordic retail profile: seven real classes plus 'other'."""
    kindergarten_rares = [
        p + s
        for p in ["sol", "gran", "bjoerk", "eike", "furu", "lille", "troll", "eventyr"]
        for s in ["skogen", "bakken", "tunet", "stua", "lia", "toppen"]
    ]
    property_rares = [
        p + s
        for p in ["vest", "oest", "nord", "soer", "midt", "oevre", "nedre", "indre"]
        for s in ["gaarden", "terrassen", "hagen", "kollen", "sletta", "aasen"]
    ]
    classes = [
        ClassProfile(
            name="groceries",
            pool=["rema", "kiwi", "meny", "coop", "joker", "bunnpris", "spar", "matkroken"],
            codes={"014": 0.75, "012": 0.25},
            amount_lo=30, amount_hi=1800, cents_p=0.8, age_mu=43, age_sigma=15, weight=1.12,
        ),
        ClassProfile(
            name="transport",
            pool=["ruter", "flytoget", "vy", "kolumbus", "skyss", "atb", "bysykkel"],
            codes={"031": 0.7, "012": 0.3},
            amount_lo=20, amount_hi=900, cents_p=0.3, age_mu=36, age_sigma=12, weight=1.0,
        ),
        ClassProfile(
            name="restaurants",
            pool=["peppes", "egon", "mcdonalds", "burgerking", "espresso", "kaffebrenneriet"],
            codes={"012": 0.6, "050": 0.4},
            amount_lo=80, amount_hi=1400, cents_p=0.5, age_mu=33, age_sigma=11, weight=0.95,
        ),
        ClassProfile(
            name="kindergarten",
            pool=["barnehage", "kanvas", "espira", "fus", "laeringsverkstedet"],
            codes={"014": 0.85, "012": 0.15},
            amount_lo=1500, amount_hi=3600, cents_p=0.1, age_mu=34, age_sigma=6, weight=0.95,
            rare_pool=kindergarten_rares, rare_rate=0.05,
        ),
        ClassProfile(
            name="property_mgmt",
            pool=["obos", "boligbyggelag", "sameie", "husleie", "boligdrift"],
            codes={"071": 0.8, "099": 0.2},
            amount_lo=2500, amount_hi=9000, cents_p=0.1, age_mu=48, age_sigma=13, weight=0.95,
            rare_pool=property_rares, rare_rate=0.035,
        ),
        ClassProfile(
            name="alcohol",
            pool=["vinmonopolet", "polet", "bryggeri", "mikrobryggeriet"],
            codes={"050": 0.7, "014": 0.3},
            amount_lo=100, amount_hi=1600, cents_p=0.6, age_mu=41, age_sigma=13, weight=0.9,
        ),
        ClassProfile(
            name="savings",
            pool=["sparekonto", "fondssparing", "bsu", "aksjesparekonto"],
            codes={"021": 0.8, "099": 0.2},
            amount_lo=200, amount_hi=8000, debit_p=0.5, cents_p=0.15, age_mu=39, age_sigma=12,
            weight=0.98,
        ),
        ClassProfile(
            name="other",
            pool=["giro", "overfoering", "vipps", "betaling", "faktura", "gebyr"],
            codes={"099": 0.5, "021": 0.25, "071": 0.25},
            amount_lo=50, amount_hi=5000, debit_p=0.75, cents_p=0.4, age_mu=45, age_sigma=16,
            weight=1.05,
        ),
    ]
    stop_words = [
        "1000", "2000", "12", "14", "22", "7", "99", "2021", "2022",
        "oslo", "bergen", "trondheim", "stavanger", "tromsoe", "drammen", "kristiansand",
        "as", "avd", "butikk", "senter", "nett",
    ]
    return CorpusSpec(
        n_transactions=n_transactions, classes=classes, stop_words=stop_words, seed=seed
    )


def _class_templates(spec: CorpusSpec, class_index: int) -> tuple[list[str], np.ndarray]:
    """Deterministic template texts and sampling probabilities for one class."""
    prof = spec.classes[class_index]
    rng = substream(spec.seed, "templates", class_index)
    length_p = np.array([0.30, 0.35, 0.25, 0.10])  # total words 2..5
    templates = []
    for _ in range(spec.templates_per_class):
        total = int(rng.choice([2, 3, 4, 5], p=length_p))
        n_signal = 2 if (len(prof.pool) >= 2 and total >= 3 and rng.random() < 0.25) else 1
        signal = list(rng.choice(prof.pool, size=n_signal, replace=False))
        fillers = list(rng.choice(spec.stop_words, size=total - n_signal, replace=True))
        templates.append(" ".join(signal + fillers))
    probs = np.full(len(templates), (1.0 - prof.rare_rate) / len(templates))
    if prof.rare_pool and prof.rare_rate > 0:
        rare = [f"{w} {prof.rare_filler}" for w in prof.rare_pool]
        templates.extend(rare)
        probs = np.concatenate([probs, np.full(len(rare), prof.rare_rate / len(rare))])
    return templates, probs / probs.sum()


def generate_corpus(spec: CorpusSpec) -> list[Transaction]:
    """Generate spec.n_transactions unlabeled records, fully seed-determined.

    Each record draws from its own RNG substream keyed by (seed, id), so
    generation could be parallelized per record without changing output.
    """
    spec.validate()
    m = spec.m_classes
    class_p = np.array([c.weight for c in spec.classes], dtype=float)
    class_p /= class_p.sum()
    templates = [_class_templates(spec, c) for c in range(m)]
    code_lists = [(sorted(c.codes), None) for c in spec.classes]
    code_lists = [
        (names, np.array([spec.classes[i].codes[n] for n in names], dtype=float))
        for i, (names, _) in enumerate(code_lists)
    ]

    records = []
    for rec_id in range(spec.n_transactions):
        rng = substream(spec.seed, "txn", rec_id)
        c = int(rng.choice(m, p=class_p))
        prof = spec.classes[c]
        texts, text_p = templates[c]
        text = texts[int(rng.choice(len(texts), p=text_p))]
        code_names, code_p = code_lists[c]
        code = code_names[int(rng.choice(len(code_names), p=code_p / code_p.sum()))]
        whole = int(rng.integers(int(prof.amount_lo), int(prof.amount_hi) + 1))
        cents = int(rng.integers(1, 100)) if rng.random() < prof.cents_p else 0
        sign = -1.0 if rng.random() < prof.debit_p else 1.0
        amount = sign * (whole * 100 + cents) / 100.0
        age = int(np.clip(round(rng.normal(prof.age_mu, prof.age_sigma)), 18, 95))
        day = int(rng.integers(0, 7))
        records.append(
            Transaction(id=rec_id, text=text, code=code, day_of_week=day, amount=amount, age=age)
        )
    return records


def build_rules(spec: CorpusSpec) -> list[tuple[str, int]]:
    """Ordered keyword->class table: every pool word (rare ones included)."""
    rules = []
    for idx, prof in enumerate(spec.classes):
        for word in list(prof.pool) + list(prof.rare_pool):
            rules.append((word, idx))
    return rules


def label_by_rules(t: Transaction, rules: list[tuple[str, int]], other_class: int) -> int:
    """First matching rule in table order wins; no match falls to `other_class`."""
    tokens = set(t.text.split())
    for keyword, cls in rules:
        if keyword in tokens:
            return cls
    return other_class


def apply_rules(
    corpus: list[Transaction], rules: list[tuple[str, int]], other_class: int
) -> list[Transaction]:
    return [t.with_label(label_by_rules(t, rules, other_class)) for t in corpus]


def class_counts(corpus: list[Transaction]) -> dict[int, int]:
    counts: dict[int, int] = {}
    for t in corpus:
        counts[t.label] = counts.get(t.label, 0) + 1
    return counts


def resample_uniform(corpus: list[Transaction], seed: int) -> list[Transaction]:
    """Downsample every class, without replacement, to the smallest class size."""
    by_class: dict[int, list[int]] = {}
    for pos, t in enumerate(corpus):
        if t.label is None:
            raise DataError("resample_uniform requires a labeled corpus")
        by_class.setdefault(t.label, []).append(pos)
    if any(len(v) == 0 for v in by_class.values()):
        raise DataError("every class must have at least one member")
    target = min(len(v) for v in by_class.values())
    keep: list[int] = []
    for cls in sorted(by_class):
        positions = by_class[cls]
        rng = substream(seed, "resample", cls)
        chosen = rng.choice(len(positions), size=target, replace=False)
        keep.extend(positions[i] for i in chosen)
    keep.sort()
    return [corpus[i] for i in keep]


def split_dataset(corpus: list[Transaction], seed: int) -> DatasetSplit:
    """Stratified 80/10/10 split over row positions, deterministic per seed."""
    if len(corpus) < 10:
        raise DataError("corpus too small to split (need >= 10 records)")
    by_class: dict[int, list[int]] = {}
    for pos, t in enumerate(corpus):
        if t.label is None:
            raise DataError("split_dataset requires a labeled corpus")
        by_class.setdefault(t.label, []).append(pos)
    train: list[int] = []
    val: list[int] = []
    test: list[int] = []
    for cls in sorted(by_class):
        positions = np.array(by_class[cls])
        rng = substream(seed, "split", cls)
        positions = positions[rng.permutation(len(positions))]
        n = len(positions)
        n_train = int(round(0.8 * n))
        n_val = int(round(0.1 * n))
        n_val = min(n_val, n - n_train)
        train.extend(positions[:n_train].tolist())
        val.extend(positions[n_train : n_train + n_val].tolist())
        test.extend(positions[n_train + n_val :].tolist())
    return DatasetSplit(train=sorted(train), validation=sorted(val), test=sorted(test))


def write_corpus_csv(path, corpus: list[Transaction]) -> None:
    """Fixed column order id,text,code,day_of_week,amount,age,label; text quoted."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, quoting=csv.QUOTE_NONNUMERIC)
        writer.writerow(CSV_COLUMNS)
        for t in corpus:
            writer.writerow(
                [t.id, t.text, t.code, t.day_of_week, float(f"{t.amount:.2f}"), t.age,
                 -1 if t.label is None else t.label]
            )


def read_corpus_csv(path) -> list[Transaction]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if [h.strip('"') for h in header] != CSV_COLUMNS:
            raise DataError(f"unexpected corpus header: {header}")
        out = []
        for row in reader:
            label = int(float(row[6]))
            out.append(
                Transaction(
                    id=int(float(row[0])),
                    text=row[1],
                    code=row[2],
                    day_of_week=int(float(row[3])),
                    amount=float(row[4]),
                    age=int(float(row[5])),
                    label=None if label < 0 else label,
                )
            )
        return out
