"""
Performance monitoring and the worker pool used by census runs
"""
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from datetime import datetime
from typing import Any, Callable, Dict, Iterable, List, Optional

import psutil

import config

logger = logging.getLogger(__name__)


class PerformanceMonitor:
    """Monitor stage timings and system usage"""

    def __init__(self):
        self.start_time = datetime.utcnow()
        self.stage_times: Dict[str, float] = {}
        self.item_counts: Dict[str, int] = {}
        self.error_count = 0

    @contextmanager
    def stage(self, name: str):
        """Time a named stage; repeated stages accumulate"""
        started = time.perf_counter()
        try:
            yield
        except Exception:
            self.record_error()
            raise
        finally:
            elapsed = time.perf_counter() - started
            self.stage_times[name] = self.stage_times.get(name, 0.0) + elapsed
            logger.info(f"Stage {name} finished in {elapsed:.2f}s")

    def record_items(self, name: str, count: int):
        self.item_counts[name] = self.item_counts.get(name, 0) + count

    def record_error(self):
        self.error_count += 1

    def get_system_stats(self) -> Dict[str, Any]:
        """Get current system statistics"""
        process = psutil.Process()
        return {
            'cpu_percent': psutil.cpu_percent(),
            'memory_percent': psutil.virtual_memory().percent,
            'process_rss_mb': process.memory_info().rss / (1024 * 1024),
            'cpu_count': psutil.cpu_count(logical=True),
            'uptime_seconds': (datetime.utcnow() - self.start_time).total_seconds(),
            'stages': dict(self.stage_times),
            'items': dict(self.item_counts),
            'errors': self.error_count,
        }

    def log_summary(self):
        stats = self.get_system_stats()
        stages = ', '.join(f"{k}={v:.2f}s" for k, v in stats['stages'].items())
        logger.info(f"Performance: {stages or 'no stages'}; rss {stats['process_rss_mb']:.1f} MB; "
                    f"errors {stats['errors']}")


class SearchPool:
    """
    Process pool over disjoint work items.

    With a single worker everything runs inline in the calling process.
    Results always come back in input order.
    """

    def __init__(self, max_workers: Optional[int] = None):
        workers = config.MAGICLAB_THREADS if max_workers is None else max_workers
        if workers < 1:
            logger.warning(f"Worker count {workers} is below 1; using 1")
            workers = 1
        self.max_workers = workers
        self.executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
        self.tasks_submitted = 0
        self.tasks_completed = 0
        logger.info(f"Search pool ready with {workers} worker(s)")

    def map_partitions(self, func: Callable, items: Iterable) -> List:
        items = list(items)
        self.tasks_submitted += len(items)
        try:
            if self.executor is None:
                results = [func(item) for item in items]
            else:
                results = list(self.executor.map(func, items))
        except Exception as e:
            logger.error(f"Error in partitioned search: {e}")
            raise
        self.tasks_completed += len(items)
        return results

    def get_stats(self) -> Dict[str, Any]:
        """Get pool statistics"""
        return {
            'max_workers': self.max_workers,
            'tasks_submitted': self.tasks_submitted,
            'tasks_completed': self.tasks_completed,
            'inline': self.executor is None,
        }

    def shutdown(self):
        """Shutdown the pool"""
        if self.executor is not None:
            self.executor.shutdown(wait=True)
            self.executor = None

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        self.shutdown()
        return False
