"""Deterministic RNG substreams derived from (seed, tags).

Every random choice in the pipeline draws from a stream derived here, so a
single integer seed fixes the whole run and independent stages never share
stream state.
"""

import hashlib

import numpy as np


def substream(seed: int, *tags) -> np.random.Generator:
    """Return a Generator keyed by the seed plus an arbitrary tag tuple."""
    digest = hashlib.sha256(":".join(str(t) for t in tags).encode("utf-8")).digest()
    return np.random.default_rng([int(seed), int.from_bytes(digest[:8], "big")])
