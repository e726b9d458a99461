from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, TypeVar

logger = logging.getLogger("matroidlab.workers")

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(func: Callable[[T], R], items: Iterable[T], *, workers: int = 1, chunksize: int = 1) -> List[R]:
    """Map `func` over `items`, results in input order whatever finishes first.

    `func` must be a module-level function (it is pickled for the pool).
    workers <= 1 runs inline.
    """
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    logger.debug("parallel_map: %d items over %d workers", len(items), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items, chunksize=max(1, chunksize)))
