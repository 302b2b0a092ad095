#!/usr/bin/env python3
"""
Batch Processing System
Runs independent estimation tasks (simulation runs, CV repeats, Monte-Carlo blocks) on a
thread pool and returns their results in submission order.
"""

import logging
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Sequence

from rich.progress import BarColumn, Progress, SpinnerColumn, TaskProgressColumn, TextColumn
from rich.table import Table

import config
from utilities.error_handler import EstimationFailedError, console, error_handler

logger = logging.getLogger(__name__)

# rich allows a single live display per console
_progress_lock = threading.Lock()


class BatchProcessor:
    """Ordered parallel map with progress reporting and statistics.

    Results never depend on ``max_workers``: each task must carry its own random stream.
    """

    def __init__(self, max_workers: Optional[int] = None, show_progress: bool = True):
        self.max_workers = max(1, int(max_workers or config.DEFAULT_THREADS))
        self.show_progress = show_progress
        self.stats = {
            'total_tasks': 0,
            'completed_tasks': 0,
            'failed_tasks': 0,
            'total_processing_time': 0.0,
        }

    def map_ordered(self, items: Sequence[Any], func: Callable[[Any], Any],
                    label: str = "Batch") -> List[Any]:
        """Apply ``func`` to every item; the first failing task (by index) is re-raised."""
        items = list(items)
        if not items:
            return []

        start_time = time.time()
        owns_display = self.show_progress and len(items) > 1 and _progress_lock.acquire(blocking=False)
        try:
            if owns_display:
                with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"),
                              BarColumn(), TaskProgressColumn(), console=console, transient=True) as progress:
                    task = progress.add_task(f"{label}...", total=len(items))
                    results = self._run(items, func, label, lambda: progress.advance(task))
            else:
                results = self._run(items, func, label, lambda: None)
        finally:
            if owns_display:
                _progress_lock.release()
            self.stats['total_processing_time'] += time.time() - start_time

        logger.info(f"{label}: {len(items)} tasks completed in {time.time() - start_time:.2f}s")
        return results

    def _run(self, items: List[Any], func: Callable[[Any], Any], label: str,
             advance: Callable[[], None]) -> List[Any]:
        self.stats['total_tasks'] += len(items)
        results: List[Any] = [None] * len(items)
        failures: Dict[int, BaseException] = {}

        if self.max_workers == 1:
            for index, item in enumerate(items):
                try:
                    results[index] = func(item)
                except Exception as e:
                    failures[index] = e
                    break
                advance()
        else:
            with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
                futures = [executor.submit(func, item) for item in items]
                for index, future in enumerate(futures):
                    try:
                        results[index] = future.result()
                    except Exception as e:
                        failures[index] = e
                        for pending in futures[index + 1:]:
                            pending.cancel()
                        break
                    advance()

        if failures:
            index = min(failures)
            cause = failures[index]
            self.stats['failed_tasks'] += 1
            error_handler.record(cause)
            raise EstimationFailedError(f"{label} task {index} failed", context={'task': index},
                                        cause=cause) from cause

        self.stats['completed_tasks'] += len(items)
        return results

    def get_stats(self) -> Dict[str, Any]:
        """Get batch processing statistics."""
        total = max(self.stats['total_tasks'], 1)
        return {
            'total_tasks': self.stats['total_tasks'],
            'completed_tasks': self.stats['completed_tasks'],
            'failed_tasks': self.stats['failed_tasks'],
            'success_rate': f"{self.stats['completed_tasks'] / total * 100:.1f}%",
            'total_processing_time': f"{self.stats['total_processing_time']:.2f}s",
            'max_workers': self.max_workers,
        }

    def display_stats(self) -> None:
        stats = self.get_stats()
        table = Table(title="Worker pool", header_style=config.STYLE_HEADER)
        for column in ("Workers", "Tasks", "Failed", "Time"):
            table.add_column(column, justify="right")
        table.add_row(str(stats['max_workers']), str(stats['total_tasks']), str(stats['failed_tasks']),
                      stats['total_processing_time'])
        console.print(table)
