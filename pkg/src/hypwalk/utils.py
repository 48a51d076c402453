"""Small shared utilities."""

from __future__ import annotations

import numpy as np


def run_stream(seed: int, run_id: int) -> np.random.Generator:
    """Independent RNG stream keyed by (seed, run_id).

    Streams are independent of execution order and worker count, so any
    aggregation over run ids is reproducible bit for bit.
    """
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(run_id,)))
