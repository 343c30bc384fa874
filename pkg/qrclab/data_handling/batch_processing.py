"""
Parallel task execution with memory management and progress tracking.

Bifurcation scans and hyperparameter sweeps are both embarrassingly parallel
lists of independent tasks. This module runs such a list either in-process or
on a process pool, keeps the worker count and memory footprint bounded, and
yields every outcome tagged with its task index so callers can aggregate in a
schedule-independent order.
"""

from __future__ import annotations

from collections.abc import Callable, Iterator, Sequence
import concurrent.futures
from dataclasses import dataclass
import gc
import logging
import os
from typing import Any, Generic, TypeVar

import psutil

from qrclab.validation.validators import validate_positive, validate_positive_int

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass
class BatchConfig:
    """
    Configuration for parallel task execution.

    Args:
        max_workers: Maximum number of worker processes (default: auto-detect);
            1 runs every task in the calling process
        chunk_size: Number of tasks submitted to the pool at a time
        memory_limit_gb: Resident-memory limit before forcing garbage collection
        enable_progress: Whether to show a progress bar
    """

    max_workers: int | None = None
    chunk_size: int = 64
    memory_limit_gb: float = 4.0
    enable_progress: bool = True

    def __post_init__(self) -> None:
        """Resolve the worker count and clamp the memory limit."""
        if self.max_workers is None:
            # 75% of available CPUs, capped at 8
            cpu_count = os.cpu_count() or 1
            self.max_workers = min(max(1, int(cpu_count * 0.75)), 8)
        self.max_workers = validate_positive_int(self.max_workers, "max_workers")
        self.chunk_size = validate_positive_int(self.chunk_size, "chunk_size")
        self.memory_limit_gb = validate_positive(self.memory_limit_gb, "memory_limit_gb")

        try:
            available_memory_gb = psutil.virtual_memory().available / (1024**3)
            # Don't use more than 50% of available memory
            max_recommended = available_memory_gb * 0.5
            if self.memory_limit_gb > max_recommended:
                self.memory_limit_gb = max(1.0, max_recommended)
        except Exception:
            pass  # If memory detection fails, use original limit


class MemoryMonitor:
    """Memory usage monitor for batch operations."""

    def __init__(self, limit_gb: float = 4.0):
        self.limit_bytes = limit_gb * 1024 * 1024 * 1024
        self.process = psutil.Process()

    def check_memory(self) -> bool:
        """Return True while resident memory stays below the limit."""
        try:
            return bool(self.process.memory_info().rss < self.limit_bytes)
        except Exception:
            return True  # If we can't check, assume it's fine

    def get_memory_usage_mb(self) -> float:
        try:
            return float(self.process.memory_info().rss / (1024 * 1024))
        except Exception:
            return 0.0

    def force_gc(self) -> None:
        """Drop the cached Pauli operators and collect garbage."""
        from qrclab.quantum.hamiltonian import pauli_operator

        pauli_operator.cache_clear()
        gc.collect()


@dataclass(frozen=True)
class TaskOutcome(Generic[R]):
    """Result of one task: either ``value`` or an error description."""

    index: int
    value: R | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def chunk_iterator(data: Sequence[T], chunk_size: int) -> Iterator[Sequence[T]]:
    """Yield successive chunks of ``data``."""
    for i in range(0, len(data), chunk_size):
        yield data[i : i + chunk_size]


def _initialize_progress_bar(config: BatchConfig, total: int, desc: str) -> Any:
    """Initialize progress bar if enabled."""
    if not config.enable_progress:
        return None

    from tqdm import tqdm

    return tqdm(total=total, desc=desc, leave=False)


def _run_one(func: Callable[[T], R], index: int, task: T) -> TaskOutcome[R]:
    try:
        return TaskOutcome(index, value=func(task))
    except Exception as e:
        logger.warning(
            "Task failed", extra={"task_index": index, "error": f"{type(e).__name__}: {e}"}
        )
        return TaskOutcome(index, error=f"{type(e).__name__}: {e}")


def map_tasks(
    func: Callable[[T], R],
    tasks: Sequence[T],
    config: BatchConfig | None = None,
    desc: str = "Processing tasks",
) -> Iterator[TaskOutcome[R]]:
    """
    Run ``func`` over ``tasks`` and yield outcomes as they complete.

    ``func`` must be a picklable module-level callable when more than one
    worker is used. Exceptions raised by a task are captured in its outcome;
    the remaining tasks keep running. Completion order depends on the
    schedule, so callers must aggregate by ``TaskOutcome.index``.

    Args:
        func: Task function
        tasks: Immutable work list
        config: Worker and progress settings
        desc: Progress bar label

    Yields:
        One ``TaskOutcome`` per task
    """
    config = config or BatchConfig()
    progress_bar = _initialize_progress_bar(config, len(tasks), desc)
    memory_monitor = MemoryMonitor(config.memory_limit_gb)

    try:
        if config.max_workers == 1:
            for index, task in enumerate(tasks):
                yield _run_one(func, index, task)
                if progress_bar is not None:
                    progress_bar.update(1)
            return

        with concurrent.futures.ProcessPoolExecutor(
            max_workers=config.max_workers
        ) as executor:
            offset = 0
            for chunk in chunk_iterator(tasks, config.chunk_size):
                futures = {
                    executor.submit(_run_one, func, offset + i, task): offset + i
                    for i, task in enumerate(chunk)
                }
                try:
                    for future in concurrent.futures.as_completed(futures):
                        try:
                            yield future.result()
                        except Exception as e:
                            # worker crash or unpicklable result
                            yield TaskOutcome(
                                futures[future], error=f"{type(e).__name__}: {e}"
                            )
                        if progress_bar is not None:
                            progress_bar.update(1)
                except BaseException:
                    for future in futures:
                        future.cancel()
                    raise
                offset += len(chunk)

                if not memory_monitor.check_memory():
                    memory_monitor.force_gc()
    finally:
        if progress_bar is not None:
            progress_bar.close()
