"""
Block-partitioned Monte-Carlo averaging.

A draw budget is cut into fixed blocks of ``config.MC_BLOCK_SIZE``; block ``b`` always
consumes ``rng.child(b)``. The merged mean therefore depends only on (budget, stream) and
not on how many workers evaluate the blocks.
"""

from __future__ import annotations

import math
from typing import Callable, List, Optional

import config
from core.rng import RngStream
from utilities.error_handler import DomainError

BlockSum = Callable[[int, RngStream], float]


def mc_block_sizes(total: int, min_block: int = 1, block_size: Optional[int] = None) -> List[int]:
    """Sizes of the draw blocks; a trailing block smaller than ``min_block`` is folded into the previous one."""
    if total < max(1, min_block):
        raise DomainError(f"Monte-Carlo size must be at least {max(1, min_block)}, got {total}")
    block = block_size or config.MC_BLOCK_SIZE
    sizes = [block] * (total // block)
    if total % block:
        sizes.append(total % block)
    if len(sizes) > 1 and sizes[-1] < min_block:
        sizes[-2] += sizes.pop()
    return sizes


def mc_mean(total: int, rng: RngStream, block_sum: BlockSum, processor=None,
            min_block: int = 1, label: str = "Monte Carlo") -> float:
    """Mean over ``total`` draws where ``block_sum(count, stream)`` sums one block's values."""
    tasks = list(enumerate(mc_block_sizes(total, min_block)))

    def run_block(task):
        index, count = task
        return float(block_sum(count, rng.child(index)))

    if processor is not None and len(tasks) > 1:
        sums = processor.map_ordered(tasks, run_block, label)
    else:
        sums = [run_block(task) for task in tasks]
    return math.fsum(sums) / total
