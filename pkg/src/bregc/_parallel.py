import math
import os
from concurrent.futures import ThreadPoolExecutor

# Below this many items the thread pool costs more than it saves.
MIN_PARALLEL_ITEMS = 512


def thread_count():
    """Worker cap from BREGC_THREADS, defaulting to the available cores."""
    raw = os.environ.get("BREGC_THREADS", "").strip()
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return os.cpu_count() or 1


def ordered_map(fn, items):
    """``list(map(fn, items))``, possibly threaded; output order is input order."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1 or len(items) < MIN_PARALLEL_ITEMS:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def fixed_sum(values):
    """Correctly rounded sum; independent of how the values were produced."""
    return math.fsum(values)
