import os
from concurrent.futures import ThreadPoolExecutor

_override = None


def set_threads(n):
    global _override
    _override = None if n is None else max(1, int(n))


def thread_count() -> int:
    if _override is not None:
        return _override
    env = os.environ.get("SDL_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def run_blocks(fn, blocks):
    """Apply ``fn`` to every block; block boundaries never depend on the
    thread count, so results are identical for any number of workers."""
    blocks = list(blocks)
    n = min(thread_count(), len(blocks))
    if n <= 1:
        for b in blocks:
            fn(b)
        return
    with ThreadPoolExecutor(max_workers=n) as ex:
        list(ex.map(fn, blocks))
