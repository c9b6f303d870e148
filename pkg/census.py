"""
Exhaustive enumeration of natural magic squares at small orders.

The search fills cells in a fixed plan: the main diagonal first, then the
anti-diagonal, then the rest row by row. Any line with one empty cell
forces that cell, complete lines are checked, and partial lines are
pruned with the smallest and largest sums their empty cells could still
reach. Only the dihedral representative with the smallest corner at the
top left and a₁₂ < a₂₁ is searched; each representative is expanded into
its eight images afterwards.
"""
import csv
import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, TextIO, Tuple

import numpy as np

import config
from classify import dudeney_type
from errors import InvariantViolation, UnsupportedOrderError
from linalg import IntMatrix, det_exact
from magic import Square, natural_mu
from performance import PerformanceMonitor, SearchPool
from transforms import dihedral_arrays

logger = logging.getLogger(__name__)

CHOOSE, FORCE = 0, 1
CLASSIFY_CHUNK = 256


@dataclass(frozen=True)
class PlanStep:
    kind: int
    cell: int
    sources: Tuple[int, ...]                    # other cells of the forcing line
    bounds: Tuple[Tuple[Tuple[int, ...], int], ...]  # (placed cells of a line, empty cells left)
    orders: Tuple[Tuple[int, int], ...]         # (smaller cell, larger cell)


def _lines(n: int) -> List[Tuple[int, ...]]:
    rows = [tuple(i * n + j for j in range(n)) for i in range(n)]
    cols = [tuple(i * n + j for i in range(n)) for j in range(n)]
    diag = [tuple(i * n + i for i in range(n)), tuple(i * n + (n - 1 - i) for i in range(n))]
    return rows + cols + diag


def _preferred_order(n: int) -> List[int]:
    order = [i * n + i for i in range(n - 1)]
    order += [i * n + (n - 1 - i) for i in range(n)]
    order += list(range(n * n))
    seen = set()
    return [c for c in order if not (c in seen or seen.add(c))]


def _canonical_orders(n: int) -> List[Tuple[int, int]]:
    corner = 0
    return [(corner, n - 1), (corner, (n - 1) * n), (corner, n * n - 1), (1, n)]


@lru_cache(maxsize=None)
def build_plan(n: int) -> Tuple[PlanStep, ...]:
    """Static fill plan: choose and force steps with their prune checks"""
    if n < 3:
        raise UnsupportedOrderError(f"Natural magic squares need order at least 3, got {n}")
    lines = _lines(n)
    pending_orders = _canonical_orders(n)
    placed = set()
    steps: List[PlanStep] = []

    def place(kind, cell, sources=()):
        placed.add(cell)
        bounds = []
        for line in lines:
            if cell in line:
                filled = tuple(c for c in line if c in placed)
                bounds.append((filled, len(line) - len(filled)))
        orders = [o for o in pending_orders if o[0] in placed and o[1] in placed]
        for o in orders:
            pending_orders.remove(o)
        steps.append(PlanStep(kind, cell, tuple(sources), tuple(bounds), tuple(orders)))

    def propagate():
        changed = True
        while changed:
            changed = False
            for line in lines:
                empty = [c for c in line if c not in placed]
                if len(empty) == 1:
                    place(FORCE, empty[0], [c for c in line if c != empty[0]])
                    changed = True

    for cell in _preferred_order(n):
        if cell in placed:
            continue
        place(CHOOSE, cell)
        propagate()
    if steps[0].kind != CHOOSE or steps[1].kind != CHOOSE:
        raise InvariantViolation(f"Plan for order {n} does not start with two free cells")
    return tuple(steps)


def _run(n: int, prefix: Tuple[int, int], emit) -> None:
    plan = build_plan(n)
    big = n * n
    mu = natural_mu(n)
    low = [e * (e + 1) // 2 for e in range(n + 1)]
    high = [e * big - e * (e - 1) // 2 for e in range(n + 1)]
    grid = [0] * big
    used = [False] * (big + 1)
    depth = len(plan)

    def step(k):
        if k == depth:
            emit(grid)
            return
        s = plan[k]
        if s.kind == FORCE:
            v = mu - sum(grid[c] for c in s.sources)
            if v < 1 or v > big or used[v]:
                return
            candidates = (v,)
        elif k < len(prefix):
            candidates = (prefix[k],)
        else:
            candidates = range(1, big + 1)
        cell = s.cell
        for v in candidates:
            if used[v]:
                continue
            grid[cell] = v
            ok = True
            too_large = False
            for cells, e in s.bounds:
                r = mu - sum(grid[c] for c in cells)
                if r < low[e]:
                    ok = False
                    too_large = True
                    break
                if r > high[e]:
                    ok = False
                    break
            if ok:
                for a, b in s.orders:
                    if grid[a] >= grid[b]:
                        ok = False
                        break
            if ok:
                used[v] = True
                step(k + 1)
                used[v] = False
            if too_large and s.kind == CHOOSE:
                break
        grid[cell] = 0

    step(0)


def _search_partition(task: Tuple[int, Tuple[int, int]]) -> List[Tuple[int, ...]]:
    """Canonical representatives with the given first two values"""
    n, prefix = task
    found: List[Tuple[int, ...]] = []
    _run(n, prefix, lambda grid: found.append(tuple(grid)))
    logger.debug(f"Partition {prefix}: {len(found)} representatives")
    return found


def _count_partition(task: Tuple[int, Tuple[int, int]]) -> int:
    n, prefix = task
    counter = [0]

    def emit(_grid):
        counter[0] += 1

    _run(n, prefix, emit)
    return counter[0]


def _partitions(n: int) -> List[Tuple[int, Tuple[int, int]]]:
    big = n * n
    return [(n, (a, b)) for a in range(1, big + 1) for b in range(1, big + 1) if a != b]


@dataclass(eq=False)
class Census:
    order: int
    matrices: List[Square]
    orbit_count: int
    by_type: Dict[str, int] = field(default_factory=dict)
    by_group: Dict[str, int] = field(default_factory=dict)
    determinant_histogram: Dict[int, int] = field(default_factory=dict)
    labels: Dict[tuple, str] = field(default_factory=dict)
    groups: Dict[tuple, str] = field(default_factory=dict)
    determinants: Dict[tuple, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.matrices)

    def __contains__(self, s: Square) -> bool:
        return s.key() in self.keys

    @property
    def keys(self) -> set:
        cached = self.__dict__.get('_keys')
        if cached is None:
            cached = {s.key() for s in self.matrices}
            self.__dict__['_keys'] = cached
        return cached


def _images_of(entries: Tuple[int, ...], n: int) -> List[Tuple[int, ...]]:
    arr = np.array(entries, dtype=object).reshape(n, n)
    return [tuple(a.ravel().tolist()) for a in dihedral_arrays(arr)]


def enumerate_natural(order: int, workers: Optional[int] = None,
                      monitor: Optional[PerformanceMonitor] = None) -> Census:
    """
    All natural magic squares of order 3 or 4.

    Args:
        order: 3 or 4
        workers: pool size, defaults to MAGICLAB_THREADS

    Returns:
        Census with matrices sorted by row-major entry sequence
    """
    if order not in config.CENSUS_ORDERS:
        raise UnsupportedOrderError(f"Census is available for orders {config.CENSUS_ORDERS}, got {order}")
    monitor = monitor or PerformanceMonitor()
    with monitor.stage(f"search_{order}"):
        with SearchPool(workers) as pool:
            chunks = pool.map_partitions(_search_partition, _partitions(order))
    reps = [rep for chunk in chunks for rep in chunk]

    with monitor.stage(f"expand_{order}"):
        keys = set()
        for rep in reps:
            keys.update(_images_of(rep, order))
        if len(keys) != 8 * len(reps):
            raise InvariantViolation(
                f"Order {order}: {len(reps)} orbits expand to {len(keys)} matrices, expected {8 * len(reps)}")
        matrices = [Square(IntMatrix._wrap(np.array(k, dtype=object).reshape(order, order))) for k in sorted(keys)]
    monitor.record_items(f"order_{order}", len(matrices))
    logger.info(f"Order {order} census: {len(matrices)} matrices in {len(reps)} orbits")
    return Census(order=order, matrices=matrices, orbit_count=len(reps))


def count_natural(order: int, workers: Optional[int] = None) -> int:
    """Count natural magic squares without storing them"""
    if order not in config.CENSUS_ORDERS + config.STREAMING_ORDERS:
        raise UnsupportedOrderError(f"Counting is available for orders "
                                    f"{config.CENSUS_ORDERS + config.STREAMING_ORDERS}, got {order}")
    with SearchPool(workers) as pool:
        counts = pool.map_partitions(_count_partition, _partitions(order))
    total = 8 * sum(counts)
    logger.info(f"Order {order}: {total} natural magic squares")
    return total


def canonical_key(s: Square) -> Tuple[int, ...]:
    """Lexicographically least entry sequence among the eight images"""
    return min(_images_of(s.key(), s.n))


def orbit_reduce(c: Census) -> List[Square]:
    """One representative per dihedral orbit, sorted"""
    reps = {canonical_key(s) for s in c.matrices}
    return [Square(IntMatrix._wrap(np.array(k, dtype=object).reshape(c.order, c.order))) for k in sorted(reps)]


def _classify_chunk(task: Tuple[int, List[Tuple[int, ...]]]) -> List[Tuple[str, str]]:
    n, keys = task
    out = []
    for key in keys:
        result = dudeney_type(Square(IntMatrix._wrap(np.array(key, dtype=object).reshape(n, n))))
        out.append((result.dudeney_label, result.trigg_group))
    return out


def _determinant_chunk(task: Tuple[int, List[Tuple[int, ...]]]) -> List[int]:
    n, keys = task
    return [det_exact(IntMatrix._wrap(np.array(key, dtype=object).reshape(n, n))) for key in keys]


def _chunks(c: Census) -> List[Tuple[int, List[Tuple[int, ...]]]]:
    keys = [s.key() for s in c.matrices]
    return [(c.order, keys[i:i + CLASSIFY_CHUNK]) for i in range(0, len(keys), CLASSIFY_CHUNK)]


def census_classify(c: Census, workers: Optional[int] = None) -> Dict[str, int]:
    """Dudeney label of every matrix; counts are stored on the census and returned"""
    if c.order != 4:
        raise UnsupportedOrderError(f"Census classification is defined at order 4, got {c.order}")
    with SearchPool(workers) as pool:
        results = pool.map_partitions(_classify_chunk, _chunks(c))
    flat = [r for chunk in results for r in chunk]
    c.labels = {s.key(): label for s, (label, _) in zip(c.matrices, flat)}
    c.groups = {s.key(): group for s, (_, group) in zip(c.matrices, flat)}
    c.by_type = dict(sorted(Counter(label for label, _ in flat).items()))
    c.by_group = dict(sorted(Counter(group for _, group in flat).items()))
    for label, count in c.by_type.items():
        if count % 8:
            raise InvariantViolation(f"Label {label} has {count} matrices, not a multiple of 8")
    logger.info(f"Census types: {c.by_type}")
    return c.by_type


def census_labels(c: Census, workers: Optional[int] = None) -> Dict[tuple, str]:
    if not c.labels:
        census_classify(c, workers)
    return c.labels


def census_determinants(c: Census, workers: Optional[int] = None) -> Dict[int, int]:
    """Histogram of exact determinants"""
    with SearchPool(workers) as pool:
        results = pool.map_partitions(_determinant_chunk, _chunks(c))
    flat = [d for chunk in results for d in chunk]
    c.determinants = {s.key(): d for s, d in zip(c.matrices, flat)}
    c.determinant_histogram = dict(sorted(Counter(flat).items()))
    return c.determinant_histogram


CSV_COLUMNS = ('entries', 'mu', 'dudeney', 'trigg', 'det')


def write_census_csv(c: Census, out: TextIO, orbits_only: bool = False):
    """Write entries,mu,dudeney,trigg,det rows; labels are blank where undefined"""
    if not c.determinants:
        census_determinants(c)
    if c.order == 4 and not c.labels:
        census_classify(c)
    rows = orbit_reduce(c) if orbits_only else c.matrices
    mu = natural_mu(c.order)
    writer = csv.writer(out, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)
    for s in rows:
        key = s.key()
        writer.writerow([
            ' '.join(str(x) for x in key),
            mu,
            c.labels.get(key, ''),
            c.groups.get(key, ''),
            c.determinants[key],
        ])
