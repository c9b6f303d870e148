"""
Synthesis of magic squares with a prescribed type A or type B witness.

The unknown is Z = A − (μ/n)E, flattened row-major (cell (i, j) is index
i·n + j). Z must have zero line sums, zero diagonal traces and satisfy the
witness relation; random integer combinations of an integer basis of that
solution space give reproducible squares.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

import config
from errors import ConstructionError, NotMCPMError, OrderMismatchError, UnsupportedOrderError
from linalg import ExactMatrix, IntMatrix, integer_kernel_basis, nullspace_rational
from magic import Square
from perms import PermMatrix, is_mcpm

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
RELATIONS = ('conj', 'left', 'right')


class Lcg64:
    """
    x ← (6364136223846793005·x + 1442695040888963407) mod 2⁶⁴

    randint keeps the high 32 bits of each state and rejects draws from the
    incomplete top block, so every value in range is equally likely.
    """

    A = 6364136223846793005
    C = 1442695040888963407

    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next(self) -> int:
        self.state = (self.A * self.state + self.C) & MASK64
        return self.state

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi]"""
        if hi < lo:
            raise ValueError(f"Empty range [{lo}, {hi}]")
        span = hi - lo + 1
        limit = (1 << 32) - (1 << 32) % span
        while True:
            x = self.next() >> 32
            if x < limit:
                return lo + x % span

    def choice(self, values: Sequence[int]) -> int:
        return values[self.randint(0, len(values) - 1)]


def _partner(n: int, relation: str, sigma: Tuple[int, ...], i: int, j: int) -> Tuple[int, int]:
    """0-based cell whose Z-value is added to Z[i, j] by the relation"""
    inverse = [0] * n
    for k, s in enumerate(sigma):
        inverse[s - 1] = k
    if relation == 'conj':
        return sigma[i] - 1, inverse[j]
    if relation == 'left':
        return sigma[i] - 1, j
    return i, inverse[j]


@lru_cache(maxsize=None)
def _constraint_rows(n: int, relation: str, sigma: Tuple[int, ...]) -> Tuple[Tuple[int, ...], ...]:
    m = n * n
    rows = []

    def row(cells):
        r = [0] * m
        for c in cells:
            r[c] += 1
        rows.append(tuple(r))

    for i in range(n):
        row(i * n + j for j in range(n))
    for j in range(n):
        row(i * n + j for i in range(n))
    row(i * n + i for i in range(n))
    row(i * n + (n - 1 - i) for i in range(n))
    seen = set()
    for i in range(n):
        for j in range(n):
            a, b = i * n + j, _partner(n, relation, sigma, i, j)
            b = b[0] * n + b[1]
            key = (min(a, b), max(a, b))
            if key in seen:
                continue
            seen.add(key)
            row((a, b))
    return tuple(rows)


@lru_cache(maxsize=None)
def _integer_basis(n: int, relation: str, sigma: Tuple[int, ...]) -> Tuple[Tuple[int, ...], ...]:
    basis = integer_kernel_basis(_constraint_rows(n, relation, sigma), n * n)
    logger.debug(f"Integer basis for {relation} {sigma}: dimension {len(basis)}")
    return tuple(basis)


@dataclass(frozen=True)
class ConstraintSystem:
    """Linear conditions on vec(Z) for a type A (conj) or type B (left/right) witness"""

    n: int
    relation: str
    witness: PermMatrix

    def __post_init__(self):
        if self.relation not in RELATIONS:
            raise ValueError(f"relation must be one of {RELATIONS}, got {self.relation!r}")
        if self.witness.n != self.n:
            raise OrderMismatchError(f"Order mismatch: system {self.n} vs permutation {self.witness.n}")
        if self.n % 2 == 1:
            raise UnsupportedOrderError(f"Witness systems are defined for even orders, got {self.n}")
        if not is_mcpm(self.witness):
            raise NotMCPMError(f"{self.witness} is not an MCPM")

    @property
    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        return _constraint_rows(self.n, self.relation, self.witness.sigma)

    def integer_basis(self) -> Tuple[Tuple[int, ...], ...]:
        """Z-basis of the integer solutions"""
        return _integer_basis(self.n, self.relation, self.witness.sigma)

    def rational_basis(self) -> List[Tuple[Fraction, ...]]:
        return nullspace_rational(self.rows, self.n * self.n)

    def contains(self, z) -> bool:
        """True iff every constraint vanishes on z (matrix or row-major sequence)"""
        if isinstance(z, ExactMatrix):
            values = z.key()
        else:
            values = tuple(np.asarray(z, dtype=object).ravel().tolist())
        if len(values) != self.n * self.n:
            raise OrderMismatchError(f"Expected {self.n * self.n} entries, got {len(values)}")
        return all(sum(c * v for c, v in zip(r, values) if c) == 0 for r in self.rows)


def solution_space_dim(system: ConstraintSystem) -> int:
    return len(system.rational_basis())


def _parity_solution(basis: Sequence[Sequence[int]], m: int) -> Optional[List[int]]:
    """c ∈ {0,1}^k with Σ c_k v_k odd in every coordinate, or None"""
    k = len(basis)
    # one equation per coordinate: bitmask over the k coefficients, rhs 1
    equations = []
    for t in range(m):
        mask = 0
        for idx, v in enumerate(basis):
            if v[t] & 1:
                mask |= 1 << idx
        equations.append([mask, 1])
    if k == 0:
        return None if m else []
    pivots = []
    row = 0
    for bit in range(k):
        sel = next((r for r in range(row, m) if equations[r][0] >> bit & 1), None)
        if sel is None:
            continue
        equations[row], equations[sel] = equations[sel], equations[row]
        for r in range(m):
            if r != row and equations[r][0] >> bit & 1:
                equations[r][0] ^= equations[row][0]
                equations[r][1] ^= equations[row][1]
        pivots.append(bit)
        row += 1
    if any(mask == 0 and rhs for mask, rhs in equations[row:]):
        return None
    c = [0] * k
    for r, bit in enumerate(pivots):
        c[bit] = equations[r][1]
    return c


def _sample(system: ConstraintSystem, mu: int, seed: int, bound: int) -> Square:
    n = system.n
    if (2 * mu) % n:
        raise ConstructionError(f"2μ/n must be an integer: μ={mu}, n={n}")
    basis = system.integer_basis()
    m = n * n
    rng = Lcg64(seed)
    pair_sum = 2 * mu // n

    if pair_sum % 2 == 0:
        coeffs = [rng.randint(-bound, bound) for _ in basis]
        shift, halve = pair_sum // 2, False
    else:
        parity = _parity_solution(basis, m)
        if parity is None:
            raise ConstructionError(
                f"No integral {system.relation} square of order {n} with μ={mu}: μ/n is a half integer "
                f"and the solution space has no odd vector")
        coeffs = []
        for bit in parity:
            options = [v for v in range(-max(bound, 1), max(bound, 1) + 1) if v % 2 == bit]
            coeffs.append(rng.choice(options))
        shift, halve = pair_sum, True

    y = [0] * m
    for c, v in zip(coeffs, basis):
        if c:
            y = [a + c * b for a, b in zip(y, v)]
    entries = [(shift + t) // 2 if halve else shift + t for t in y]
    square = Square(IntMatrix(np.array(entries, dtype=object).reshape(n, n)))
    if not square.magic or square.mu != mu:
        raise ConstructionError(f"Sampled square is not magic with μ={mu}")
    if square.has_repeats:
        logger.debug(f"Constructed {system.relation} square of order {n} has repeated entries")
    return square


def random_type_a(n: int, p: PermMatrix, mu: int, seed: int, bound: int = config.COEFF_BOUND) -> Square:
    """Magic square with A + P·A·P = (2μ/n)E, reproducible from the seed"""
    return _sample(ConstraintSystem(n, 'conj', p), mu, seed, bound)


def random_type_b(n: int, p: PermMatrix, side: str, mu: int, seed: int,
                  bound: int = config.COEFF_BOUND) -> Square:
    """Magic square with A + P·A = (2μ/n)E (left) or A + A·P = (2μ/n)E (right)"""
    if side not in ('left', 'right'):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    return _sample(ConstraintSystem(n, side, p), mu, seed, bound)


def random_semimagic(n: int, seed: int, bound: int = config.COEFF_BOUND) -> Square:
    """
    Integer semi-magic square n²M − nR − nC + 2T from a random M.

    R and C hold the row and column sums of M, T its total; the result has
    line sum n·T.
    """
    if n < 1:
        raise UnsupportedOrderError(f"Order must be positive, got {n}")
    rng = Lcg64(seed)
    m = np.array([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)], dtype=object)
    r = m.sum(axis=1).reshape(n, 1)
    c = m.sum(axis=0).reshape(1, n)
    t = m.sum()
    return Square(IntMatrix(n * n * m - n * r - n * c + 2 * t))
