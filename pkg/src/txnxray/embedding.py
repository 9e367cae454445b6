"""Word vectors for transaction texts: skip-gram training with negative
sampling, fixed-length text encoding (k dims per word, l word slots), and
cosine similarity.
"""

from __future__ import annotations

import string
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, ContractError, TrainingError
from .seeding import substream

PAD, UNK = "<pad>", "<unk>"
PAD_ID, UNK_ID = 0, 1

_PUNCT_TABLE = str.maketrans("", "", string.punctuation)


def tokenize(text: str) -> list[str]:
    """Lowercase, strip punctuation, split on whitespace; digits stay tokens."""
    return [w for w in text.lower().translate(_PUNCT_TABLE).split() if w]


@dataclass
class Vocabulary:
    words: list[str]                      # index -> word, PAD=0, UNK=1
    counts: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        self.index = {w: i for i, w in enumerate(self.words)}
        if len(self.index) != len(self.words):
            raise ConfigError("vocabulary contains duplicate words")

    def __len__(self) -> int:
        return len(self.words)

    def token_id(self, word: str) -> int:
        return self.index.get(word, UNK_ID)

    def encode(self, text: str) -> list[int]:
        return [self.token_id(w) for w in tokenize(text)]


@dataclass
class EmbeddingConfig:
    k: int = 8                # dims per word
    l: int = 4                # word slots per text
    window: int = 2
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.05
    seed: int = 0
    min_count: int = 5
    batch_size: int = 1024

    @property
    def n(self) -> int:
        return self.k * self.l

    def validate(self) -> None:
        if self.k < 2 or self.l < 1:
            raise ConfigError("embedding needs k >= 2 and l >= 1")
        if self.window < 1 or self.negatives < 1 or self.epochs < 1:
            raise ConfigError("window, negatives and epochs must be >= 1")


@dataclass
class EmbeddingModel:
    config: EmbeddingConfig
    vocab: Vocabulary
    matrix: np.ndarray                    # |V| x k, PAD row frozen at zero
    losses: list[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "config": {
                "k": self.config.k, "l": self.config.l, "window": self.config.window,
                "negatives": self.config.negatives, "epochs": self.config.epochs,
                "learning_rate": self.config.learning_rate, "seed": self.config.seed,
                "min_count": self.config.min_count, "batch_size": self.config.batch_size,
            },
            "vocab": list(self.vocab.words),
            "matrix": [float(x) for x in self.matrix.ravel()],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EmbeddingModel":
        cfg = EmbeddingConfig(**d["config"])
        vocab = Vocabulary(words=list(d["vocab"]))
        matrix = np.array(d["matrix"], dtype=np.float64).reshape(len(vocab.words), cfg.k)
        return cls(config=cfg, vocab=vocab, matrix=matrix)


def build_vocab(texts: list[str], min_count: int = 1) -> Vocabulary:
    """Words below min_count fold into UNK; order is (freq desc, word asc)."""
    counts: dict[str, int] = {}
    for text in texts:
        for w in tokenize(text):
            counts[w] = counts.get(w, 0) + 1
    kept = sorted(
        ((w, c) for w, c in counts.items() if c >= min_count),
        key=lambda wc: (-wc[1], wc[0]),
    )
    unk_count = sum(c for w, c in counts.items() if c < min_count)
    vocab_counts = {PAD: 0, UNK: unk_count}
    vocab_counts.update({w: c for w, c in kept})
    return Vocabulary(words=[PAD, UNK] + [w for w, _ in kept], counts=vocab_counts)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _log_sigmoid(x: np.ndarray) -> np.ndarray:
    return -np.logaddexp(0.0, -x)


def train_skipgram(
    texts: list[str], config: EmbeddingConfig, vocab: Vocabulary | None = None
) -> EmbeddingModel:
    """Skip-gram with negative sampling over the given texts.

    Single-threaded and deterministic for a fixed (texts, config.seed). The
    PAD row is never a center, context or negative, so it stays zero.
    """
    config.validate()
    if vocab is None:
        vocab = build_vocab(texts, config.min_count)
    V, k = len(vocab), config.k
    rng = substream(config.seed, "skipgram")

    w_in = (rng.random((V, k)) - 0.5) / k
    w_in[PAD_ID] = 0.0
    w_out = np.zeros((V, k))

    # Unigram^0.75 noise distribution over trainable ids (PAD excluded).
    noise = np.array([vocab.counts.get(w, 0) for w in vocab.words], dtype=np.float64)
    noise[PAD_ID] = 0.0
    noise = noise**0.75
    if noise.sum() == 0:
        noise[UNK_ID:] = 1.0
    noise /= noise.sum()

    sequences = [vocab.encode(t) for t in texts]
    sequences = [s for s in sequences if len(s) >= 2]
    if not sequences:
        raise TrainingError("no text with at least two tokens to train on")

    lr, window, q = config.learning_rate, config.window, config.negatives
    losses: list[float] = []
    for epoch in range(config.epochs):
        order = rng.permutation(len(sequences))
        centers: list[int] = []
        contexts: list[int] = []
        loss_sum, n_pairs = 0.0, 0

        def flush():
            nonlocal loss_sum, n_pairs
            if not centers:
                return
            c = np.array(centers)
            t = np.array(contexts)
            negs = rng.choice(V, size=(len(c), q), p=noise)
            v = w_in[c]
            u = w_out[t]
            un = w_out[negs]
            pos_score = np.einsum("bk,bk->b", v, u)
            neg_score = np.einsum("bqk,bk->bq", un, v)
            loss_sum += float(-(_log_sigmoid(pos_score).sum() + _log_sigmoid(-neg_score).sum()))
            n_pairs += len(c)
            g_pos = _sigmoid(pos_score) - 1.0
            g_neg = _sigmoid(neg_score)
            grad_v = g_pos[:, None] * u + np.einsum("bq,bqk->bk", g_neg, un)
            grad_u = g_pos[:, None] * v
            grad_un = g_neg[..., None] * v[:, None, :]
            np.add.at(w_in, c, -lr * grad_v)
            np.add.at(w_out, t, -lr * grad_u)
            np.add.at(w_out, negs.ravel(), -lr * grad_un.reshape(-1, k))
            centers.clear()
            contexts.clear()

        for si in order:
            seq = sequences[si]
            for i, center in enumerate(seq):
                lo, hi = max(0, i - window), min(len(seq), i + window + 1)
                for j in range(lo, hi):
                    if j == i:
                        continue
                    centers.append(center)
                    contexts.append(seq[j])
                if len(centers) >= config.batch_size:
                    flush()
        flush()
        epoch_loss = loss_sum / max(n_pairs, 1)
        if not np.isfinite(epoch_loss):
            raise TrainingError(f"non-finite skip-gram loss at epoch {epoch}")
        losses.append(epoch_loss)

    w_in[PAD_ID] = 0.0
    return EmbeddingModel(config=config, vocab=vocab, matrix=w_in, losses=losses)


def embed_text(text: str, model: EmbeddingModel) -> np.ndarray:
    """Concatenate the first l word vectors, zero-padded on the right to n=k*l."""
    cfg = model.config
    out = np.zeros(cfg.n)
    for slot, tid in enumerate(model.vocab.encode(text)[: cfg.l]):
        out[slot * cfg.k : (slot + 1) * cfg.k] = model.matrix[tid]
    return out


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    """u.v / (|u||v|); defined as 0 when either vector has zero norm."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ContractError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))
