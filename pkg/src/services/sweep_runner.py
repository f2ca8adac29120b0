"""
FluxCoupler Sweep Runner

Bounded worker pool over flux points. Results come back in grid order; the
first failing point is re-raised with the offending flux attached.
"""

import logging
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from typing import Any, Callable, List, Optional, Sequence, TypeVar

from ..exceptions import FluxCouplerError, NumericError

logger = logging.getLogger(__name__)

T = TypeVar("T")


def _annotate(error: Exception, label: str, point: Any) -> Exception:
    if isinstance(error, FluxCouplerError):
        error.details.setdefault("flux_point", {label: point})
        return error
    return NumericError(
        f"Evaluation failed at {label}={point}: {error}",
        details={"flux_point": {label: point}},
    )


def run_sweep(
    fn: Callable[[Any], T],
    points: Sequence[Any],
    threads: Optional[int] = 1,
    label: str = "f",
) -> List[T]:
    """Evaluate `fn` at every point, preserving order."""
    points = list(points)
    start_time = time.time()
    threads = max(1, min(threads or 1, len(points) or 1))

    results: List[Optional[T]] = [None] * len(points)
    if threads == 1:
        for index, point in enumerate(points):
            try:
                results[index] = fn(point)
            except Exception as e:
                logger.error(f"Sweep over {label} failed at {point}: {e}")
                annotated = _annotate(e, label, point)
                if annotated is e:
                    raise
                raise annotated from e
    else:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            futures = {executor.submit(fn, point): index for index, point in enumerate(points)}
            for future in as_completed(futures):
                index = futures[future]
                try:
                    results[index] = future.result()
                except Exception as e:
                    for pending in futures:
                        pending.cancel()
                    logger.error(f"Sweep over {label} failed at {points[index]}: {e}")
                    annotated = _annotate(e, label, points[index])
                    if annotated is e:
                        raise
                    raise annotated from e

    logger.debug(
        f"Sweep over {label}: {len(points)} points on {threads} thread(s) "
        f"in {time.time() - start_time:.2f}s"
    )
    return results
