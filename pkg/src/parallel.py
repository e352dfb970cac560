import time
import concurrent.futures
from typing import Callable, Iterable, List, TypeVar

from src.logging import get_logger

logger = get_logger("parallel")

T = TypeVar("T")
R = TypeVar("R")

def map_elements(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """
    Evaluates func on every item and returns the results in input order.

    workers <= 1 runs serially in-process; otherwise items fan out over a process pool.
    func must be picklable (module-level function or functools.partial of one).
    """
    items = list(items)
    start_time = time.time()

    if workers <= 1 or len(items) <= 1:
        results = [func(item) for item in items]
    else:
        results = [None] * len(items)
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            future_to_index = {executor.submit(func, item): i for i, item in enumerate(items)}
            for future in concurrent.futures.as_completed(future_to_index):
                # Re-raises the worker's exception (FracLatticeError subclasses pickle cleanly)
                results[future_to_index[future]] = future.result()

    logger.debug(f"Evaluated {len(items)} elements with {max(1, workers)} worker(s) in {time.time() - start_time:.2f}s")
    return results
