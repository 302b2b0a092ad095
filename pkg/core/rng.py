"""
Reproducible random streams.

A stream is identified by (master_seed, stream_index). The generator is numpy's PCG64
seeded through a SeedSequence built from that pair, which gives the same sequence on every
platform and statistically independent sequences for distinct pairs. Child streams extend
the SeedSequence spawn key, so a task tree (run -> estimator -> MC block) is addressed by
integers only and never depends on scheduling.
"""

from __future__ import annotations

from typing import Tuple

import numpy as np

from utilities.error_handler import InvalidArgumentError

_UINT64_MAX = 2**64 - 1


class RngStream:
    """Single-consumer random stream; one per logical task, never shared."""

    __slots__ = ("master_seed", "stream_index", "path", "_generator")

    def __init__(self, master_seed: int, stream_index: int = 0, path: Tuple[int, ...] = ()):
        for label, value in (("master_seed", master_seed), ("stream_index", stream_index)):
            if int(value) != value or not 0 <= int(value) <= _UINT64_MAX:
                raise InvalidArgumentError(f"{label} must be an integer in [0, 2^64), got {value!r}")
        if any(int(p) < 0 for p in path):
            raise InvalidArgumentError(f"child indices must be nonnegative, got {path!r}")
        self.master_seed = int(master_seed)
        self.stream_index = int(stream_index)
        self.path = tuple(int(p) for p in path)
        seq = np.random.SeedSequence(entropy=[self.master_seed, self.stream_index],
                                     spawn_key=self.path)
        self._generator = np.random.Generator(np.random.PCG64(seq))

    @property
    def generator(self) -> np.random.Generator:
        return self._generator

    def child(self, index: int) -> "RngStream":
        """Independent sub-stream addressed by ``index`` (does not consume this stream)."""
        return RngStream(self.master_seed, self.stream_index, self.path + (int(index),))

    def __repr__(self) -> str:
        suffix = f", path={self.path}" if self.path else ""
        return f"RngStream(master_seed={self.master_seed}, stream_index={self.stream_index}{suffix})"
