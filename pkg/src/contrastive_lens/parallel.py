"""Worker-thread budget shared by the sweep paths.

CONTRASTIVE_LENS_THREADS caps parallelism; 0 or unset means auto
(one worker per CPU). Per-alpha fits are independent eigendecompositions on
a shared read-only covariance pair, so threads give real speedup (LAPACK
releases the GIL) and results are assembled in grid order regardless of the
worker count.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Sequence

ENV_VAR = "CONTRASTIVE_LENS_THREADS"


def thread_budget() -> int:
    raw = os.environ.get(ENV_VAR, "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def ordered_map(fn: Callable, items: Sequence) -> list:
    """Apply ``fn`` to each item, in parallel when the budget allows.

    Output order always matches input order.
    """
    workers = min(thread_budget(), len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
