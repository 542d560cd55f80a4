"""Range partitioning and an order-preserving process pool map."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

THREADS_ENV = "PSTHUE_THREADS"


def default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return max(1, n)


def split_range(start: int, stop: int, chunk: int) -> list[tuple[int, int]]:
    """``[start, stop)`` cut into consecutive pieces of at most ``chunk``."""
    if chunk < 1:
        raise ValueError("chunk must be positive")
    return [(a, min(a + chunk, stop)) for a in range(start, stop, chunk)]


def pmap(fn: Callable[[T], R], tasks: Sequence[T], threads: int | None = None) -> list[R]:
    """``[fn(t) for t in tasks]``, optionally in worker processes; output order is task order."""
    threads = default_threads() if threads is None else threads
    if threads <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, tasks))
