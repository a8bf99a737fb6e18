"""Named, splittable random streams on top of numpy's counter-based Philox.

Every stochastic operation in the package takes an explicit stream.  Streams
are derived from a 64-bit seed plus a path of names/indices, so independent
parts of a computation (shards, sub-experiments, optimizer restarts) get
statistically independent generators that are reproducible run to run.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _path_part(part: int | str) -> int:
    if isinstance(part, str):
        # stable across processes, unlike hash()
        return int.from_bytes(hashlib.blake2b(part.encode(), digest_size=4).digest(), "little")
    if part < 0:
        raise ValueError(f"stream path indices must be non-negative, got {part}")
    return int(part)


def stream(seed: int, *path: int | str) -> np.random.Generator:
    """Return the generator for `seed` at `path`.

    The same (seed, path) always yields the same sequence; distinct paths
    yield independent streams.  Streams must not be shared across threads.
    """
    if not isinstance(seed, int) or seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be an integer in [0, 2^64), got {seed!r}")
    key = tuple(_path_part(p) for p in path)
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy=seed, spawn_key=key)))
