import os
from concurrent.futures import ThreadPoolExecutor


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("TORICFLIP_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn, items):
    """Ordered map; fans out to threads when ``TORICFLIP_THREADS`` > 1."""
    items = list(items)
    n = thread_cap()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
