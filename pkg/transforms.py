"""
Transformations that carry magic squares to magic squares.

Covers the eight rotations/reflections, conjugation P·A·P by a permutation,
the family of transformations generated by the bisymmetric and
quarter-turn symmetric permutations, and the order-5 border-swap
reconciliation.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from errors import InvariantViolation, OrderMismatchError, UnsupportedOrderError
from linalg import IntMatrix
from magic import Square
from perms import (PermMatrix, classify_symmetry, count_bisymmetric, count_rot90, gen_bisymmetric,
                   gen_rot90, parse_one_line)

logger = logging.getLogger(__name__)

# Order of the images returned by dihedral_orbit
DIHEDRAL_MAPS = ("A", "JA", "AJ", "JAJ", "AT", "JAT", "ATJ", "JATJ")


def dihedral_arrays(arr: np.ndarray) -> List[np.ndarray]:
    """The eight rotations/reflections of a 0-based array, in DIHEDRAL_MAPS order"""
    t = arr.T
    return [
        arr, arr[::-1, :], arr[:, ::-1], arr[::-1, ::-1],
        t, t[::-1, :], t[:, ::-1], t[::-1, ::-1],
    ]


def dihedral_orbit(s: Square) -> List[Square]:
    """A, JA, AJ, JAJ, Aᵀ, JAᵀ, AᵀJ, JAᵀJ"""
    s.require_magic()
    return [Square(IntMatrix._wrap(a)) for a in dihedral_arrays(s.m.array)]


@dataclass(frozen=True)
class Conjugation:
    square: Square
    guaranteed: bool  # P bisymmetric or quarter-turn symmetric


def conjugate(s: Square, p: PermMatrix) -> Conjugation:
    """
    Return P·A·P.

    The result is always semi-magic. It is guaranteed magic when P is
    bisymmetric or 90°-symmetric; that guarantee is checked on every call.
    """
    if p.n != s.n:
        raise OrderMismatchError(f"Order mismatch: square {s.n} vs permutation {p.n}")
    flags = classify_symmetry(p)
    guaranteed = flags.bisymmetric or flags.rot90
    result = Square(IntMatrix._wrap(p.conjugate_array(s.m.array)))
    if guaranteed and s.magic and not result.magic:
        raise InvariantViolation(f"Conjugation by {p} lost the magic property")
    return Conjugation(result, guaranteed)


def rho(n: int) -> int:
    """Size of a family of transformations, 4(B(n) + R(n))"""
    if n < 3:
        raise UnsupportedOrderError(f"Families are defined for order 3 and above, got {n}")
    return 4 * (count_bisymmetric(n) + count_rot90(n))


def family_generators(n: int) -> List[PermMatrix]:
    """
    Half of the bisymmetric and 90°-symmetric permutations: one of each {P, JP} pair.

    Candidates are taken by increasing standard rank, so the member with
    the smaller rank is the one kept.
    """
    candidates = sorted(set(gen_bisymmetric(n)) | set(gen_rot90(n)), key=lambda p: p.rank())
    j = PermMatrix.reverse(n)
    kept: List[PermMatrix] = []
    seen = set()
    for p in candidates:
        if p in seen:
            continue
        kept.append(p)
        seen.add(p)
        seen.add(j @ p)
    return kept


@dataclass(eq=False)
class Family:
    seed: Square
    members: List[Square]
    generators_used: List[PermMatrix]
    origins: Dict[Tuple, Tuple[PermMatrix, str]] = field(default_factory=dict)
    unique: bool = True  # the ρ(n) cardinality guarantee applies

    def __len__(self):
        return len(self.members)

    def __contains__(self, s: Square):
        return s.key() in self.origins

    def origin(self, s: Square) -> Optional[Tuple[PermMatrix, str]]:
        """(generator, dihedral map) that first produced s"""
        return self.origins.get(s.key())

    def keys(self) -> set:
        return set(self.origins)


def family(s: Square) -> Family:
    """
    Build the family of transformations of a magic square.

    Args:
        s: magic square; repeated entries are allowed but withdraw the
           cardinality guarantee

    Returns:
        Family whose members are sorted by row-major entry sequence
    """
    s.require_magic()
    n = s.n
    generators = family_generators(n)
    unique = not s.has_repeats
    if not unique:
        logger.warning(f"Square of order {n} has repeated entries; family size guarantee withdrawn")

    origins: Dict[Tuple, Tuple[PermMatrix, str]] = {}
    squares: Dict[Tuple, Square] = {}
    for p in generators:
        base = p.conjugate_array(s.m.array)
        for name, arr in zip(DIHEDRAL_MAPS, dihedral_arrays(base)):
            member = Square(IntMatrix._wrap(arr))
            key = member.key()
            if key not in origins:
                origins[key] = (p, name)
                squares[key] = member

    members = sorted(squares.values())
    for member in members:
        if not member.magic:
            raise InvariantViolation(f"Family member {member!r} is not magic")
    if unique and len(members) != rho(n):
        raise InvariantViolation(f"Family of order {n} has {len(members)} members, expected {rho(n)}")
    logger.debug(f"Family of order {n}: {len(generators)} generators, {len(members)} members")
    return Family(seed=s, members=members, generators_used=generators, origins=origins, unique=unique)


# Order-5 border swaps, as displayed: outer columns/rows, then the two
# adjacent pairs at each border.
GARDNER_BORDER_SWAP = "(5 2 3 4 1)"
GARDNER_ADJACENT_SWAP = "(2 1 3 5 4)"
GARDNER_PRODUCT_DISPLAY = "(2 5 3 1 4)"
GARDNER_CLAIMED_RANK = 45
GARDNER_PROSE_RANK = 105


def siamese_square(n: int) -> Square:
    """Natural odd-order magic square by the up-and-right staircase"""
    if n % 2 == 0 or n < 3:
        raise UnsupportedOrderError(f"The staircase method needs an odd order of at least 3, got {n}")
    arr = np.zeros((n, n), dtype=object)
    i, j = 0, n // 2
    for k in range(1, n * n + 1):
        arr[i, j] = k
        ni, nj = (i - 1) % n, (j + 1) % n
        if arr[ni, nj]:
            ni, nj = (i + 1) % n, j
        i, j = ni, nj
    return Square(IntMatrix(arr))


def _swap_rows_cols(arr: np.ndarray, swaps: List[Tuple[int, int]]) -> np.ndarray:
    out = np.array(arr, dtype=object)
    for a, b in swaps:
        out[:, [a, b]] = out[:, [b, a]]
    for a, b in swaps:
        out[[a, b], :] = out[[b, a], :]
    return out


@dataclass
class GardnerReport:
    border_swap: PermMatrix
    adjacent_swap: PermMatrix
    border_rank: int
    adjacent_rank: int
    both_bisymmetric: bool
    border_swap_matches: bool
    adjacent_swap_matches: bool
    product: PermMatrix             # border_swap · adjacent_swap
    product_rank: int
    product_rot90: bool
    reverse_product: PermMatrix     # adjacent_swap · border_swap
    reverse_product_rank: int
    reverse_product_rot90: bool
    display_matches: str            # which product the printed display equals
    composite_matches: bool
    discrepancies: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.both_bisymmetric and self.border_swap_matches and self.adjacent_swap_matches
                and self.product_rot90 and self.reverse_product_rot90 and self.composite_matches)


def gardner_check(square: Optional[Square] = None) -> GardnerReport:
    """Reconcile the two order-5 border transformations with permutation conjugation"""
    a = square or siamese_square(5)
    if a.n != 5:
        raise UnsupportedOrderError(f"Border-swap check is defined at order 5, got {a.n}")
    arr = a.m.array
    b = parse_one_line(GARDNER_BORDER_SWAP)
    c = parse_one_line(GARDNER_ADJACENT_SWAP)

    border_ok = np.array_equal(b.conjugate_array(arr), _swap_rows_cols(arr, [(0, 4)]))
    adjacent_ok = np.array_equal(c.conjugate_array(arr), _swap_rows_cols(arr, [(0, 1), (3, 4)]))

    product = b @ c
    reverse = c @ b
    # Applying one transform after the other is M·A·Mᵀ with M = B·C
    composite = b.conjugate_array(c.conjugate_array(arr))
    m = product.matrix().array
    composite_ok = np.array_equal(composite, m @ arr @ m.T)

    display = parse_one_line(GARDNER_PRODUCT_DISPLAY)
    if display == product:
        display_matches = "product"
    elif display == reverse:
        display_matches = "reverse_product"
    else:
        display_matches = "neither"

    discrepancies = []
    if b.rank() != GARDNER_PROSE_RANK:
        discrepancies.append(
            f"Border swap {b} has standard rank {b.rank()}, the text names it P{GARDNER_PROSE_RANK}")
    if product.rank() != GARDNER_CLAIMED_RANK:
        discrepancies.append(
            f"Product {product} in the written order has rank {product.rank()}; "
            f"rank {GARDNER_CLAIMED_RANK} belongs to {reverse if reverse.rank() == GARDNER_CLAIMED_RANK else display}")
    for d in discrepancies:
        logger.warning(d)

    return GardnerReport(
        border_swap=b,
        adjacent_swap=c,
        border_rank=b.rank(),
        adjacent_rank=c.rank(),
        both_bisymmetric=classify_symmetry(b).bisymmetric and classify_symmetry(c).bisymmetric,
        border_swap_matches=border_ok,
        adjacent_swap_matches=adjacent_ok,
        product=product,
        product_rank=product.rank(),
        product_rot90=classify_symmetry(product).rot90,
        reverse_product=reverse,
        reverse_product_rank=reverse.rank(),
        reverse_product_rot90=classify_symmetry(reverse).rot90,
        display_matches=display_matches,
        composite_matches=composite_ok,
        discrepancies=discrepancies,
    )
