"""
Permutation-matrix catalog.

A permutation matrix is stored in one-line notation: sigma[i-1] is the
column holding the 1 in row i. Products follow matrix multiplication, so
(P·Q).sigma = Q ∘ P.
"""
import logging
import re
from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import factorial, prod
from typing import Dict, Iterator, List, Sequence, Tuple

import numpy as np

from errors import InvariantViolation, MatrixFormatError, NotMCPMError, OrderMismatchError, UnsupportedOrderError
from linalg import IntMatrix, reverse_matrix, trace

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SymmetryFlags:
    symmetric: bool
    persymmetric: bool
    bisymmetric: bool
    rot90: bool
    mcpm: bool
    singly_symmetric: bool

    def names(self) -> List[str]:
        return [name for name, value in self.__dict__.items() if value]


@dataclass(frozen=True)
class PermMatrix:
    sigma: Tuple[int, ...]

    def __post_init__(self):
        sigma = tuple(int(x) for x in self.sigma)
        if sorted(sigma) != list(range(1, len(sigma) + 1)):
            raise MatrixFormatError(f"Not a permutation of 1..{len(sigma)}: {sigma}")
        object.__setattr__(self, 'sigma', sigma)

    @classmethod
    def identity(cls, n: int) -> 'PermMatrix':
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def reverse(cls, n: int) -> 'PermMatrix':
        """The reverse matrix J as a permutation"""
        return cls(tuple(range(n, 0, -1)))

    @property
    def n(self) -> int:
        return len(self.sigma)

    def __call__(self, i: int) -> int:
        return self.sigma[i - 1]

    @cached_property
    def index(self) -> np.ndarray:
        """0-based row → column map"""
        return np.array(self.sigma, dtype=np.intp) - 1

    @cached_property
    def inverse_index(self) -> np.ndarray:
        return np.argsort(self.index)

    def inverse(self) -> 'PermMatrix':
        return PermMatrix(tuple(int(x) + 1 for x in self.inverse_index))

    def matrix(self) -> IntMatrix:
        m = np.zeros((self.n, self.n), dtype=int)
        m[np.arange(self.n), self.index] = 1
        return IntMatrix._wrap(m.astype(object))

    def __matmul__(self, other: 'PermMatrix') -> 'PermMatrix':
        if not isinstance(other, PermMatrix):
            return NotImplemented
        if other.n != self.n:
            raise OrderMismatchError(f"Order mismatch: {self.n} vs {other.n}")
        return PermMatrix(tuple(other.sigma[s - 1] for s in self.sigma))

    def apply_left(self, arr: np.ndarray) -> np.ndarray:
        """P·M on a 0-based array: row i of the result is row sigma(i) of M"""
        return arr[self.index, :]

    def apply_right(self, arr: np.ndarray) -> np.ndarray:
        """M·P on a 0-based array: column sigma(j) of the result is column j of M"""
        return arr[:, self.inverse_index]

    def conjugate_array(self, arr: np.ndarray) -> np.ndarray:
        return self.apply_right(self.apply_left(arr))

    def is_involution(self) -> bool:
        return all(self.sigma[s - 1] == i for i, s in enumerate(self.sigma, start=1))

    def fixed_points(self) -> List[int]:
        return [i for i, s in enumerate(self.sigma, start=1) if s == i]

    def pairs(self) -> List[Tuple[int, int]]:
        """Transposition pairs (i < sigma(i)) of an involution"""
        return [(i, s) for i, s in enumerate(self.sigma, start=1) if i < s]

    def rank(self) -> int:
        return perm_rank(self)

    def one_line(self) -> str:
        return format_one_line(self)

    def __str__(self):
        return self.one_line()


def format_one_line(p: PermMatrix) -> str:
    return '(' + ' '.join(str(s) for s in p.sigma) + ')'


def parse_one_line(text: str) -> PermMatrix:
    """Parse '(2 3 1 4)', '2 3 1 4' or '2,3,1,4'"""
    body = text.strip()
    if body.startswith('(') and body.endswith(')'):
        body = body[1:-1]
    tokens = [t for t in re.split(r'[\s,]+', body) if t]
    if not tokens:
        raise MatrixFormatError(f"Empty permutation text: {text!r}")
    try:
        return PermMatrix(tuple(int(t) for t in tokens))
    except ValueError as e:
        raise MatrixFormatError(f"Cannot parse permutation {text!r}: {e}") from e


def perm_from_rank(n: int, k: int) -> PermMatrix:
    """The k-th permutation of order n in lexicographic order (1-based)"""
    if n < 1:
        raise UnsupportedOrderError(f"Order must be positive, got {n}")
    if not 1 <= k <= factorial(n):
        raise ValueError(f"Rank {k} outside 1..{factorial(n)} for order {n}")
    remaining = list(range(1, n + 1))
    k -= 1
    sigma = []
    for pos in range(n, 0, -1):
        block = factorial(pos - 1)
        sigma.append(remaining.pop(k // block))
        k %= block
    return PermMatrix(tuple(sigma))


def perm_rank(p: PermMatrix) -> int:
    remaining = list(range(1, p.n + 1))
    k = 0
    for pos, s in enumerate(p.sigma):
        idx = remaining.index(s)
        k += idx * factorial(p.n - 1 - pos)
        remaining.pop(idx)
    return k + 1


def classify_symmetry(p: PermMatrix) -> SymmetryFlags:
    """Symmetry flags computed from the matrix identities themselves"""
    n = p.n
    m = p.matrix()
    j = reverse_matrix(n)
    jm = j @ m
    symmetric = m == m.T
    persymmetric = jm == jm.T
    rot90 = m.T == jm
    if n % 2 == 0:
        mcpm = symmetric and trace(m) == 0
    else:
        c = (n + 1) // 2
        mcpm = symmetric and m.entry(c, c) == 1 and trace(m) == 1
    return SymmetryFlags(
        symmetric=symmetric,
        persymmetric=persymmetric,
        bisymmetric=symmetric and persymmetric,
        rot90=rot90,
        mcpm=mcpm,
        singly_symmetric=symmetric != persymmetric,
    )


def is_mcpm(p: PermMatrix) -> bool:
    return classify_symmetry(p).mcpm


def all_permutations(n: int) -> Iterator[PermMatrix]:
    """All n! permutations in rank order"""
    for k in range(1, factorial(n) + 1):
        yield perm_from_rank(n, k)


def _build(n: int, assignments: Iterator[Dict[int, int]]) -> List[PermMatrix]:
    return [PermMatrix(tuple(a[i] for i in range(1, n + 1))) for a in assignments]


def _bisymmetric_on(idx: List[int]) -> Iterator[Dict[int, int]]:
    m = len(idx)
    if m == 0:
        yield {}
        return
    if m % 2 == 1:
        c = idx[m // 2]
        for inner in _bisymmetric_on(idx[:m // 2] + idx[m // 2 + 1:]):
            yield {c: c, **inner}
        return
    first, last = idx[0], idx[-1]
    for pos in range(m):
        if pos == 0:
            for inner in _bisymmetric_on(idx[1:-1]):
                yield {first: first, last: last, **inner}
        elif pos == m - 1:
            for inner in _bisymmetric_on(idx[1:-1]):
                yield {first: last, last: first, **inner}
        else:
            j, mirror = idx[pos], idx[m - 1 - pos]
            rest = [x for x in idx[1:-1] if x not in (j, mirror)]
            for inner in _bisymmetric_on(rest):
                yield {first: j, j: first, mirror: last, last: mirror, **inner}


def _rot90_on(idx: List[int]) -> Iterator[Dict[int, int]]:
    m = len(idx)
    if m == 0:
        yield {}
        return
    if m % 2 == 1:
        c = idx[m // 2]
        for inner in _rot90_on(idx[:m // 2] + idx[m // 2 + 1:]):
            yield {c: c, **inner}
        return
    first, last = idx[0], idx[-1]
    for pos in range(1, m - 1):
        j, mirror = idx[pos], idx[m - 1 - pos]
        # the quarter-turn orbit of (first, j)
        rest = [x for x in idx[1:-1] if x not in (j, mirror)]
        for inner in _rot90_on(rest):
            yield {first: j, mirror: first, last: mirror, j: last, **inner}


def _matchings_on(idx: List[int]) -> Iterator[Dict[int, int]]:
    if not idx:
        yield {}
        return
    first = idx[0]
    for j in idx[1:]:
        rest = [x for x in idx[1:] if x != j]
        for inner in _matchings_on(rest):
            yield {first: j, j: first, **inner}


def gen_bisymmetric(n: int) -> List[PermMatrix]:
    """Bisymmetric permutation matrices, first-row column choices ascending"""
    if n < 1:
        raise UnsupportedOrderError(f"Order must be positive, got {n}")
    return _build(n, _bisymmetric_on(list(range(1, n + 1))))


def gen_rot90(n: int) -> List[PermMatrix]:
    if n < 1:
        raise UnsupportedOrderError(f"Order must be positive, got {n}")
    return _build(n, _rot90_on(list(range(1, n + 1))))


def gen_mcpm(n: int) -> List[PermMatrix]:
    if n < 2:
        raise UnsupportedOrderError(f"MCPMs need order at least 2, got {n}")
    idx = list(range(1, n + 1))
    if n % 2 == 1:
        c = (n + 1) // 2
        idx.remove(c)
        return _build(n, ({c: c, **inner} for inner in _matchings_on(idx)))
    return _build(n, _matchings_on(idx))


@lru_cache(maxsize=None)
def count_bisymmetric(n: int) -> int:
    """B(n) = 2B(n-2) + (n-2)B(n-4) for even n, B(n-1) for odd n"""
    if n < 0:
        raise UnsupportedOrderError(f"Order must be non-negative, got {n}")
    if n in (0, 1):
        return 1
    if n == 2:
        return 2
    if n % 2 == 1:
        return count_bisymmetric(n - 1)
    return 2 * count_bisymmetric(n - 2) + (n - 2) * count_bisymmetric(n - 4)


@lru_cache(maxsize=None)
def count_rot90(n: int) -> int:
    """R(n) = (n-2)R(n-4) for even n, R(n-1) for odd n"""
    if n < 0:
        raise UnsupportedOrderError(f"Order must be non-negative, got {n}")
    if n in (0, 1):
        return 1
    if n == 2:
        return 0
    if n % 2 == 1:
        return count_rot90(n - 1)
    return (n - 2) * count_rot90(n - 4)


def double_factorial(k: int) -> int:
    return prod(range(k, 0, -2)) if k > 0 else 1


def count_mcpm(n: int) -> int:
    """C(n) = (n-1)!! for even n, (n-2)!! for odd n"""
    if n < 2:
        raise UnsupportedOrderError(f"MCPMs need order at least 2, got {n}")
    return double_factorial(n - 1) if n % 2 == 0 else double_factorial(n - 2)


def shift_matrices(n: int) -> List[PermMatrix]:
    """The n-1 nontrivial cyclic shifts of the identity, shift k = 1..n-1"""
    if n < 2:
        raise UnsupportedOrderError(f"Shift matrices need order at least 2, got {n}")
    return [PermMatrix(tuple((i + k) % n + 1 for i in range(n))) for k in range(1, n)]


def mcpm_conjugator(p: PermMatrix, p2: PermMatrix) -> PermMatrix:
    """
    A symmetric permutation Q with Q·p·Q = p2 for even-order MCPMs p, p2.

    Both inputs are perfect matchings; their union splits into alternating
    cycles a1 -p- a2 -p2- a3 -p- ... -p2- a1. Each cycle is started at its
    smallest unvisited vertex and reflected through a1 (a_i -> a_{2-i}),
    which carries p-pairs onto p2-pairs and is its own inverse.
    """
    if p.n != p2.n:
        raise OrderMismatchError(f"Order mismatch: {p.n} vs {p2.n}")
    if p.n % 2 == 1:
        raise UnsupportedOrderError(f"Conjugation is defined for even-order MCPMs, got order {p.n}")
    for name, q in (('p', p), ('p2', p2)):
        if not is_mcpm(q):
            raise NotMCPMError(f"{name} = {q} is not an MCPM")

    phi: Dict[int, int] = {}
    for start in range(1, p.n + 1):
        if start in phi:
            continue
        cycle = [start]
        while True:
            nxt = p(cycle[-1]) if len(cycle) % 2 == 1 else p2(cycle[-1])
            if nxt == start:
                break
            cycle.append(nxt)
        k = len(cycle)
        for i, a in enumerate(cycle):
            phi[a] = cycle[(-i) % k]

    q = PermMatrix(tuple(phi[i] for i in range(1, p.n + 1)))
    if not q.is_involution() or q @ p @ q != p2:
        raise InvariantViolation(f"Conjugator {q} fails for {p} -> {p2}")
    logger.debug(f"Conjugator {q} maps {p} to {p2}")
    return q
