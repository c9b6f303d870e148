"""
Exact dense linear algebra over arbitrary-precision integers and rationals.

Matrices keep their entries in read-only numpy object arrays, so every
entry is a Python int or a fractions.Fraction and nothing ever wraps or
rounds. Public accessors use 1-based (row, column) indices.
"""
import logging
from fractions import Fraction
from math import lcm
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from errors import InvariantViolation, MatrixFormatError, OrderMismatchError

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


class ExactMatrix:
    """Immutable square matrix with exact entries"""

    __slots__ = ('_a', '_key')

    def __init__(self, rows):
        arr = np.array(rows, dtype=object)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
            raise MatrixFormatError(f"Expected a non-empty square matrix, got shape {arr.shape}")
        n = arr.shape[0]
        data = np.empty((n, n), dtype=object)
        for i in range(n):
            for j in range(n):
                data[i, j] = self._coerce(arr[i, j])
        self._set(data)

    def _set(self, data: np.ndarray):
        data.flags.writeable = False
        self._a = data
        self._key = None

    @classmethod
    def _wrap(cls, data: np.ndarray):
        """Build from an object array whose entries are already canonical"""
        obj = cls.__new__(cls)
        obj._set(np.array(data, dtype=object))
        return obj

    @staticmethod
    def _coerce(x):
        raise NotImplementedError

    @property
    def n(self) -> int:
        return self._a.shape[0]

    @property
    def array(self) -> np.ndarray:
        """Read-only object array (0-based) holding the entries"""
        return self._a

    def entry(self, i: int, j: int) -> Scalar:
        """Entry at 1-based row i and column j"""
        if not (1 <= i <= self.n and 1 <= j <= self.n):
            raise IndexError(f"Index ({i}, {j}) outside a matrix of order {self.n}")
        return self._a[i - 1, j - 1]

    def rows(self) -> Tuple[Tuple[Scalar, ...], ...]:
        return tuple(tuple(row) for row in self._a.tolist())

    def key(self) -> Tuple[Scalar, ...]:
        """Row-major entry sequence, used for equality, hashing and ordering"""
        if self._key is None:
            self._key = tuple(self._a.ravel().tolist())
        return self._key

    @property
    def T(self):
        return transpose(self)

    def to_float(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self._a.tolist()], dtype=np.float64)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.n == other.n and self.key() == other.key()

    def __hash__(self):
        return hash((self.n, self.key()))

    def __lt__(self, other):
        return self.key() < other.key()

    def __matmul__(self, other):
        return mat_mul(self, other)

    def __add__(self, other):
        return _elementwise(self, other, lambda x, y: x + y)

    def __sub__(self, other):
        return _elementwise(self, other, lambda x, y: x - y)

    def __neg__(self):
        return type(self)._wrap(-self._a)

    def __mul__(self, scalar):
        return scale(self, scalar)

    __rmul__ = __mul__

    def __repr__(self):
        body = '; '.join(' '.join(str(x) for x in row) for row in self._a.tolist())
        return f"{type(self).__name__}([{body}])"


class IntMatrix(ExactMatrix):
    """Square matrix of Python integers"""

    __slots__ = ()

    @staticmethod
    def _coerce(x):
        if isinstance(x, (bool, np.bool_, int, np.integer)):
            return int(x)
        if isinstance(x, Fraction) and x.denominator == 1:
            return int(x)
        if isinstance(x, (float, np.floating)) and float(x).is_integer():
            return int(x)
        raise MatrixFormatError(f"Non-integer entry {x!r} in an integer matrix")


class RatMatrix(ExactMatrix):
    """Square matrix of rationals in lowest terms (positive denominators)"""

    __slots__ = ()

    @staticmethod
    def _coerce(x):
        if isinstance(x, (bool, np.bool_, int, np.integer)):
            return Fraction(int(x))
        if isinstance(x, (Fraction, str)):
            try:
                return Fraction(x)
            except (ValueError, ZeroDivisionError) as e:
                raise MatrixFormatError(f"Bad rational entry {x!r}: {e}") from e
        if isinstance(x, (float, np.floating)) and float(x).is_integer():
            return Fraction(int(x))
        raise MatrixFormatError(f"Non-rational entry {x!r} in a rational matrix")

    def denominator(self) -> int:
        """Least common multiple of all entry denominators"""
        return lcm(*(x.denominator for x in self.key()))

    def scaled_to_int(self) -> Tuple[IntMatrix, int]:
        """Return (d * M, d) with d the smallest positive integer clearing denominators"""
        d = self.denominator()
        return IntMatrix._wrap(np.array([[int(x * d) for x in row] for row in self._a.tolist()], dtype=object)), d


def _result_kind(a: ExactMatrix, b: ExactMatrix):
    return IntMatrix if isinstance(a, IntMatrix) and isinstance(b, IntMatrix) else RatMatrix


def _canonical(kind, data: np.ndarray):
    if kind is IntMatrix:
        return IntMatrix._wrap(data)
    return RatMatrix._wrap(np.array([[Fraction(x) for x in row] for row in data.tolist()], dtype=object))


def _check_orders(a: ExactMatrix, b: ExactMatrix):
    if a.n != b.n:
        raise OrderMismatchError(f"Order mismatch: {a.n} vs {b.n}")


def _elementwise(a: ExactMatrix, b: ExactMatrix, op):
    _check_orders(a, b)
    return _canonical(_result_kind(a, b), op(a.array, b.array))


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    """Exact product a·b; integer operands give an IntMatrix"""
    _check_orders(a, b)
    return _canonical(_result_kind(a, b), a.array @ b.array)


def scale(a: ExactMatrix, c: Scalar) -> ExactMatrix:
    kind = IntMatrix if isinstance(a, IntMatrix) and isinstance(c, int) else RatMatrix
    return _canonical(kind, a.array * c)


def trace(a: ExactMatrix) -> Scalar:
    return sum(a.array.diagonal().tolist(), 0)


def transpose(a: ExactMatrix) -> ExactMatrix:
    return type(a)._wrap(a.array.T)


def identity(n: int) -> IntMatrix:
    return IntMatrix._wrap(np.identity(n, dtype=int).astype(object))


def ones(n: int) -> IntMatrix:
    """The all-ones matrix E = e·eᵀ"""
    return IntMatrix._wrap(np.ones((n, n), dtype=int).astype(object))


def reverse_matrix(n: int) -> IntMatrix:
    """J with J[i, j] = 1 iff i + j = n + 1"""
    if n < 1:
        raise ValueError(f"Order must be positive, got {n}")
    return IntMatrix._wrap(np.fliplr(np.identity(n, dtype=int)).astype(object))


def _integer_rows(rows: Sequence[Sequence[Scalar]]) -> List[List[int]]:
    """Scale each row by the lcm of its denominators; row space is unchanged"""
    out = []
    for row in rows:
        d = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        out.append([int(Fraction(x) * d) for x in row])
    return out


def _bareiss_det(m: List[List[int]]) -> int:
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        pivot = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * pivot - mik * row_k[j]) // prev
        prev = pivot
    return sign * m[n - 1][n - 1]


def det_exact(a: ExactMatrix) -> Scalar:
    """
    Determinant by Bareiss fraction-free elimination.

    Every intermediate value is a minor of the input, so each division by
    the previous pivot is exact. Rational input is handled by clearing row
    denominators and dividing them back out.
    """
    rows = a.array.tolist()
    if isinstance(a, IntMatrix):
        return _bareiss_det([list(r) for r in rows])
    scale_factor = 1
    for row in rows:
        scale_factor *= lcm(*(x.denominator for x in row))
    return Fraction(_bareiss_det(_integer_rows(rows)), scale_factor)


def _fraction_free_rank(rows: List[List[int]], ncols: int) -> int:
    rows = [list(r) for r in rows]
    rank, prev = 0, 1
    for col in range(ncols):
        if rank == len(rows):
            break
        pivot_row = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        top = rows[rank]
        p = top[col]
        for r in range(rank + 1, len(rows)):
            row = rows[r]
            f = row[col]
            rows[r] = row[:col] + [(p * row[c] - f * top[c]) // prev for c in range(col, ncols)]
        prev = p
        rank += 1
    return rank


def rank_exact(a: Union[ExactMatrix, Sequence[Sequence[Scalar]]], ncols: Optional[int] = None) -> int:
    """Exact rank via fraction-free echelon form (also accepts rectangular rows)"""
    rows = a.array.tolist() if isinstance(a, ExactMatrix) else [list(r) for r in a]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return _fraction_free_rank(_integer_rows(rows), ncols)


def nullspace_rational(a: Union[ExactMatrix, Sequence[Sequence[Scalar]]],
                       ncols: Optional[int] = None) -> List[Tuple[Fraction, ...]]:
    """
    Basis of the right nullspace over the rationals.

    Args:
        a: square matrix or rectangular list of rational rows
        ncols: column count, required only when `a` has no rows

    Returns:
        One vector per free column of the reduced row echelon form; the
        vector has 1 in its free column and 0 in every other free column.
    """
    rows = a.array.tolist() if isinstance(a, ExactMatrix) else [list(r) for r in a]
    if ncols is None:
        if not rows:
            raise ValueError("ncols is required for an empty constraint matrix")
        ncols = len(rows[0])
    rows = [[Fraction(x) for x in r] for r in rows]
    for r in rows:
        if len(r) != ncols:
            raise MatrixFormatError(f"Ragged constraint row of length {len(r)}, expected {ncols}")

    pivots: List[int] = []
    rank = 0
    for col in range(ncols):
        if rank == len(rows):
            break
        pivot_row = next((r for r in range(rank, len(rows)) if rows[r][col] != 0), None)
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        inv = 1 / rows[rank][col]
        top = [x * inv if x else x for x in rows[rank]]
        rows[rank] = top
        for r in range(len(rows)):
            if r != rank and rows[r][col] != 0:
                f = rows[r][col]
                rows[r] = [x - f * y if y else x for x, y in zip(rows[r], top)]
        pivots.append(col)
        rank += 1

    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -rows[r][free]
        basis.append(tuple(v))
    logger.debug(f"Nullspace: {ncols} columns, rank {rank}, dimension {len(basis)}")
    return basis


def char_poly_exact(a: ExactMatrix) -> List[Scalar]:
    """
    Monic characteristic polynomial det(λI − A), highest degree first.

    Faddeev–LeVerrier: M₁ = I, c_k = −tr(A·M_k)/k, M_{k+1} = A·M_k + c_k·I.
    For integer A every c_k is an integer and the division is exact.
    """
    n = a.n
    arr = a.array
    eye = np.identity(n, dtype=int).astype(object)
    coeffs: List[Scalar] = [1]
    am = arr.copy()  # A·M₁
    for k in range(1, n + 1):
        t = sum(am.diagonal().tolist(), 0)
        if isinstance(a, IntMatrix):
            if t % k:
                raise InvariantViolation(f"Non-integral characteristic coefficient at step {k}")
            c = -(t // k)
        else:
            c = Fraction(-t, k) if isinstance(t, int) else -t / k
        coeffs.append(c)
        if k < n:
            am = arr @ (am + c * eye)
    return coeffs


def poly_eval(coeffs: Sequence, x):
    """Horner evaluation, coefficients highest degree first"""
    acc = 0
    for c in coeffs:
        acc = acc * x + c
    return acc


def poly_scale(coeffs: Sequence, x) -> float:
    """Σ|c_k|·|x|^k, the natural size against which |p(x)| is judged"""
    r = abs(x)
    acc = 0.0
    for c in coeffs:
        acc = acc * r + abs(float(c))
    return acc


def poly_divmod_linear(coeffs: Sequence[Scalar], root: Scalar) -> Tuple[List[Scalar], Scalar]:
    """Synthetic division by (λ − root); returns (quotient, remainder)"""
    out: List[Scalar] = []
    acc = 0
    for c in coeffs:
        acc = acc * root + c
        out.append(acc)
    return out[:-1], out[-1]


def zero_root_multiplicity(coeffs: Sequence[Scalar]) -> int:
    """Number of trailing zero coefficients, i.e. the multiplicity of λ = 0"""
    m = 0
    for c in reversed(coeffs):
        if c != 0:
            break
        m += 1
    return m


def mat_vec(a: ExactMatrix, v: Iterable[Scalar]) -> Tuple[Scalar, ...]:
    v = list(v)
    if len(v) != a.n:
        raise OrderMismatchError(f"Vector length {len(v)} does not match order {a.n}")
    return tuple(sum((x * y for x, y in zip(row, v)), 0) for row in a.array.tolist())


def integer_kernel_basis(rows: Sequence[Sequence[int]], ncols: int) -> List[Tuple[int, ...]]:
    """
    Z-basis of the integer vectors v with rows·v = 0.

    Each column of the constraint matrix becomes one working row augmented
    with a unit vector; unimodular (Euclidean) row operations bring the
    constraint part to echelon form, and the augmented parts of the rows
    left with an all-zero constraint part span the integer kernel.
    """
    r = len(rows)
    for row in rows:
        if len(row) != ncols:
            raise MatrixFormatError(f"Ragged constraint row of length {len(row)}, expected {ncols}")
    work = [[int(rows[i][k]) for i in range(r)] + [1 if t == k else 0 for t in range(ncols)]
            for k in range(ncols)]
    top = 0
    for col in range(r):
        while True:
            live = [i for i in range(top, ncols) if work[i][col] != 0]
            if not live:
                break
            best = min(live, key=lambda i: abs(work[i][col]))
            work[top], work[best] = work[best], work[top]
            pivot = work[top]
            settled = True
            for i in range(top + 1, ncols):
                if work[i][col] == 0:
                    continue
                q = work[i][col] // pivot[col]
                work[i] = [a - q * b for a, b in zip(work[i], pivot)]
                if work[i][col] != 0:
                    settled = False
            if settled:
                top += 1
                break
        if top == ncols:
            break
    return [tuple(row[r:]) for row in work[top:]]
