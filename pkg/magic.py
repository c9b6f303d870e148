"""
Magic-square predicates and metadata.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from errors import NotMagicError
from linalg import IntMatrix
from perms import PermMatrix, shift_matrices

logger = logging.getLogger(__name__)


def _line_sums(arr: np.ndarray):
    return arr.sum(axis=1).tolist(), arr.sum(axis=0).tolist()


def is_semimagic(m: IntMatrix) -> Tuple[bool, Optional[int]]:
    """True (with the common sum) iff every row and column sums to one value"""
    rows, cols = _line_sums(m.array)
    mu = rows[0]
    if all(r == mu for r in rows) and all(c == mu for c in cols):
        return True, mu
    return False, None


def is_magic(m: IntMatrix) -> Tuple[bool, Optional[int]]:
    ok, mu = is_semimagic(m)
    if not ok:
        return False, None
    arr = m.array
    if sum(arr.diagonal().tolist()) != mu or sum(np.fliplr(arr).diagonal().tolist()) != mu:
        return False, None
    return True, mu


def _is_consecutive(m: IntMatrix) -> bool:
    n = m.n
    return sorted(m.key()) == list(range(1, n * n + 1))


def is_natural(m: IntMatrix) -> bool:
    return is_magic(m)[0] and _is_consecutive(m)


def is_natural_semimagic(m: IntMatrix) -> bool:
    return is_semimagic(m)[0] and _is_consecutive(m)


@dataclass(frozen=True, eq=False)
class Square:
    """An integer matrix together with its (lazily computed) magic metadata"""

    m: IntMatrix

    @classmethod
    def from_rows(cls, rows) -> 'Square':
        return cls(rows if isinstance(rows, IntMatrix) else IntMatrix(rows))

    @property
    def n(self) -> int:
        return self.m.n

    @cached_property
    def _semi(self) -> Tuple[bool, Optional[int]]:
        return is_semimagic(self.m)

    @cached_property
    def _magic(self) -> Tuple[bool, Optional[int]]:
        return is_magic(self.m)

    @property
    def semi_magic(self) -> bool:
        return self._semi[0]

    @property
    def magic(self) -> bool:
        return self._magic[0]

    @property
    def mu(self) -> Optional[int]:
        """Magic number, present iff the square is magic"""
        return self._magic[1]

    @cached_property
    def natural(self) -> bool:
        return self.magic and _is_consecutive(self.m)

    @cached_property
    def has_repeats(self) -> bool:
        return len(set(self.m.key())) < self.n * self.n

    @property
    def pair_sum(self) -> Fraction:
        """2μ/n, the value every complementary pair adds to"""
        return Fraction(2 * self.require_magic(), self.n)

    def require_magic(self) -> int:
        if not self.magic:
            raise NotMagicError(f"Matrix of order {self.n} is not magic")
        return self.mu

    def key(self):
        return self.m.key()

    def __eq__(self, other):
        if not isinstance(other, Square):
            return NotImplemented
        return self.m == other.m

    def __hash__(self):
        return hash(self.m)

    def __lt__(self, other):
        return self.m.key() < other.m.key()

    def __repr__(self):
        return f"Square({self.m!r})"


def _diagonal_traces(arr: np.ndarray, p: PermMatrix) -> Tuple[int, int]:
    """(tr(M·P), tr(M·P·J)) computed by indexing"""
    mp = p.apply_right(arr)
    return sum(mp.diagonal().tolist()), sum(np.fliplr(mp).diagonal().tolist())


def is_pandiagonal(s: Square) -> bool:
    """Every broken diagonal in both directions sums to μ"""
    mu = s.require_magic()
    arr = s.m.array
    return all(_diagonal_traces(arr, p) == (mu, mu) for p in shift_matrices(s.n))


def is_semipandiagonal(s: Square) -> Optional[bool]:
    """
    The two broken diagonals of the half shift sum to μ.

    Returns None for odd orders, where no symmetric shift exists.
    """
    mu = s.require_magic()
    if s.n % 2 == 1:
        return None
    half = shift_matrices(s.n)[s.n // 2 - 1]
    return _diagonal_traces(s.m.array, half) == (mu, mu)


def is_regular(s: Square) -> bool:
    """Every centrally symmetric pair of cells sums to 2μ/n"""
    mu = s.require_magic()
    arr = s.m.array
    target = Fraction(2 * mu, s.n)
    return all(x == target for x in (arr + arr[::-1, ::-1]).ravel().tolist())


def natural_mu(n: int) -> int:
    return n * (n * n + 1) // 2
