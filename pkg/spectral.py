"""
Eigenvalues and spectral identities of magic squares.

Numeric eigenvalues come from numpy.linalg on a float copy and are always
validated against the exact characteristic polynomial. Every structural
identity (P·Z·P = −Z, negation symmetry, the A/Z relation, equality of
characteristic polynomials) is checked in exact integer arithmetic on n·A
and n·Z.
"""
import logging
from dataclasses import dataclass, field
from math import sqrt
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

import config
from errors import NotAWitnessError, OrderMismatchError
from linalg import IntMatrix, char_poly_exact, det_exact, poly_divmod_linear, poly_eval, poly_scale, rank_exact, zero_root_multiplicity
from magic import Square, is_semimagic
from perms import PermMatrix, classify_symmetry
from transforms import family

logger = logging.getLogger(__name__)

DENSE_ORDER_LIMIT = 16


def format_eigenvalue(z: complex, digits: int = 4) -> str:
    """a, bi or a±bi with the given number of decimals"""
    re, im = round(z.real, digits), round(z.imag, digits)
    re = 0.0 if re == 0 else re
    if im == 0:
        return f"{re:.{digits}f}"
    sign = '+' if im > 0 else '-'
    if re == 0:
        return f"{'-' if im < 0 else ''}{abs(im):.{digits}f}i"
    return f"{re:.{digits}f}{sign}{abs(im):.{digits}f}i"


def _sorted_values(values) -> List[complex]:
    return sorted((complex(v) for v in values), key=lambda z: (-round(z.real, 9), -round(z.imag, 9)))


def spectrum_matches(computed: Sequence[complex], expected: Sequence[complex], rtol: float) -> bool:
    """
    Multiset comparison with greedy nearest matching.

    Each tolerance is relative to the largest expected magnitude, so
    printed zeros and small values are judged on the same scale.
    """
    if len(computed) != len(expected):
        return False
    scale = max((abs(e) for e in expected), default=1.0) or 1.0
    remaining = [complex(c) for c in computed]
    for e in sorted(expected, key=abs, reverse=True):
        k = min(range(len(remaining)), key=lambda i: abs(remaining[i] - e))
        if abs(remaining[k] - e) > rtol * scale:
            return False
        remaining.pop(k)
    return True


@dataclass
class PairingReport:
    witness: PermMatrix
    structural_ok: bool                     # P·Z·P = −Z exactly
    exact_symmetric: bool                   # char(nZ)(−λ) = ±char(nZ)(λ)
    eigenvalues: List[complex]              # of Z
    pairs: List[Tuple[int, int]] = field(default_factory=list)
    unmatched: List[int] = field(default_factory=list)
    transport: List[Tuple[complex, float]] = field(default_factory=list)
    max_residual: float = 0.0
    tol: float = 0.0

    @property
    def ok(self) -> bool:
        return self.structural_ok and self.exact_symmetric and not self.unmatched and self.max_residual <= self.tol

    def to_dict(self) -> dict:
        return {
            'witness': self.witness.one_line(),
            'structural_ok': self.structural_ok,
            'exact_symmetric': self.exact_symmetric,
            'pairs': [[i, j] for i, j in self.pairs],
            'unmatched': self.unmatched,
            'transport': [[[lam.real, lam.imag], res] for lam, res in self.transport],
            'max_residual': self.max_residual,
        }


@dataclass
class SpectrumReport:
    order: int
    mu: int
    eigenvalues: List[complex]
    char_poly: List[int]
    det: int
    rank: int
    magic_eigenpair_ok: bool
    zero_multiplicity: int
    validated: bool
    residuals: List[float] = field(default_factory=list)
    pairing: Optional[PairingReport] = None

    def to_dict(self) -> dict:
        return {
            'mu': self.mu,
            'eigenvalues': [[z.real, z.imag] for z in self.eigenvalues],
            'char_poly': [int(c) for c in self.char_poly],
            'det': int(self.det),
            'rank': self.rank,
            'magic_eigenpair_ok': self.magic_eigenpair_ok,
            'validated': self.validated,
            'pairing': self.pairing.to_dict() if self.pairing else None,
        }


def check_magic_eigenpair(s: Square) -> bool:
    """A·e = μe and eᵀ·A = μeᵀ, exactly; holds for every semi-magic square"""
    ok, mu = is_semimagic(s.m)
    if not ok:
        return False
    arr = s.m.array
    n = s.n
    e = np.ones(n, dtype=int).astype(object)
    return all(x == mu for x in (arr @ e).tolist()) and all(x == mu for x in (e @ arr).tolist())


def _validated_eigenvalues(arr: np.ndarray, coeffs: List[int], tol: float) -> Tuple[List[complex], bool, List[float], int]:
    """
    Numeric eigenvalues checked against exact coefficients.

    The m smallest values are snapped to 0 where m is the exact multiplicity
    of the zero root; the rest must be roots of the deflated polynomial.
    """
    values = [complex(v) for v in np.linalg.eigvals(arr)]
    m = zero_root_multiplicity(coeffs)
    order = sorted(range(len(values)), key=lambda i: abs(values[i]))
    for i in order[:m]:
        values[i] = 0j
    deflated = list(coeffs[:len(coeffs) - m]) if m else list(coeffs)
    residuals = []
    ok = True
    for i in order[m:]:
        lam = values[i]
        res = abs(poly_eval(deflated, lam)) / max(poly_scale(deflated, lam), 1e-300)
        residuals.append(res)
        if res > tol:
            ok = False
            logger.warning(f"Eigenvalue {format_eigenvalue(lam)} fails validation: residual {res:.3e}")
    return values, ok, residuals, m


def eigen_spectrum(s: Square, tol: float = config.EIGEN_TOL, witness: Optional[PermMatrix] = None) -> SpectrumReport:
    """
    Eigenvalues with exact determinant, rank and characteristic polynomial.

    Args:
        s: magic square
        tol: relative residual allowed for each eigenvalue
        witness: type A witness; attaches a pairing report when given

    Returns:
        SpectrumReport with eigenvalues sorted by descending real part
    """
    mu = s.require_magic()
    if s.n > DENSE_ORDER_LIMIT:
        logger.warning(f"Order {s.n} exceeds the dense eigensolver regime ({DENSE_ORDER_LIMIT})")
    coeffs = char_poly_exact(s.m)
    det = det_exact(s.m)
    rank = rank_exact(s.m)
    try:
        values, ok, residuals, m = _validated_eigenvalues(s.m.to_float(), coeffs, tol)
    except np.linalg.LinAlgError as e:
        logger.error(f"Eigensolver failed for order {s.n}: {e}")
        values, ok, residuals, m = [], False, [], zero_root_multiplicity(coeffs)

    if values and min(abs(v - mu) for v in values) > sqrt(tol) * max(1.0, abs(mu)):
        logger.warning(f"Magic number {mu} not found among eigenvalues")
        ok = False

    pairing = check_pairing(s, witness, tol) if witness is not None else None
    return SpectrumReport(
        order=s.n, mu=mu, eigenvalues=_sorted_values(values), char_poly=coeffs, det=det, rank=rank,
        magic_eigenpair_ok=check_magic_eigenpair(s), zero_multiplicity=m, validated=ok,
        residuals=residuals, pairing=pairing,
    )


def _scaled_z(s: Square) -> np.ndarray:
    """n·Z = n·A − μE as an integer object array"""
    mu = s.require_magic()
    return s.m.array * s.n - mu


def _normalize(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    k = int(np.argmax(np.abs(v)))
    return v * (abs(v[k]) / v[k])


def check_pairing(s: Square, p: PermMatrix, tol: float = config.EIGEN_TOL) -> PairingReport:
    """
    Check the ±λ pairing of the spectrum of Z for a type A witness P.

    Raises:
        NotAWitnessError: P·Z·P ≠ −Z
    """
    if p.n != s.n:
        raise OrderMismatchError(f"Order mismatch: square {s.n} vs permutation {p.n}")
    nz = _scaled_z(s)
    if not np.all(p.conjugate_array(nz) == -nz):
        raise NotAWitnessError(f"{p} is not a type A witness for this square")

    coeffs = char_poly_exact(IntMatrix._wrap(nz))
    exact_symmetric = all(c == 0 for c in coeffs[1::2])

    z = nz.astype(float) / s.n
    z_norm = float(np.linalg.norm(z))
    a_norm = float(np.linalg.norm(s.m.to_float()))
    match_tol = sqrt(tol) * max(1.0, z_norm)

    if z_norm == 0.0:
        values = [0j] * s.n
        return PairingReport(p, True, exact_symmetric, values, tol=tol)

    lams, vecs = np.linalg.eig(z)
    values = [complex(v) for v in lams]

    pairs, unmatched = [], []
    free = set(range(len(values)))
    for i in sorted(range(len(values)), key=lambda k: -abs(values[k])):
        if i not in free:
            continue
        free.discard(i)
        if abs(values[i]) <= match_tol:
            continue
        if not free:
            unmatched.append(i)
            continue
        j = min(free, key=lambda k: abs(values[k] + values[i]))
        if abs(values[j] + values[i]) <= match_tol:
            free.discard(j)
            pairs.append((i, j))
        else:
            unmatched.append(i)
    if unmatched:
        logger.warning(f"Unpaired eigenvalues of Z: {[format_eigenvalue(values[i]) for i in unmatched]}")

    transport = []
    for k, lam in enumerate(values):
        if abs(lam) <= tol * a_norm:
            continue
        x = vecs[:, k]
        y = x[p.index]  # (P·x)_i = x_{σ(i)}
        res = float(np.linalg.norm(z @ y + lam * y) / (z_norm * np.linalg.norm(x)))
        transport.append((lam, res))
    max_residual = max((r for _, r in transport), default=0.0)
    return PairingReport(p, True, exact_symmetric, values, pairs, unmatched, transport, max_residual, tol)


def check_z_spectrum_relation(s: Square) -> bool:
    """char(nA)/(λ − nμ) = char(nZ)/λ, by exact synthetic division"""
    mu = s.require_magic()
    n = s.n
    na = IntMatrix._wrap(s.m.array * n)
    nz = IntMatrix._wrap(_scaled_z(s))
    quotient_a, rem_a = poly_divmod_linear(char_poly_exact(na), n * mu)
    coeffs_z = char_poly_exact(nz)
    if rem_a != 0 or coeffs_z[-1] != 0:
        return False
    return quotient_a == coeffs_z[:-1]


# Dihedral maps that keep the spectrum of P·A·P for a bisymmetric P; a
# quarter-turn P exchanges the two classes.
_SIMILAR_MAPS = frozenset(("A", "JAJ", "AT", "JATJ"))


@dataclass
class FamilySpectraReport:
    members: int
    class_sizes: Tuple[int, int]
    class_polynomials: Tuple[List[Tuple[int, ...]], List[Tuple[int, ...]]]

    @property
    def distinct_polynomials(self) -> int:
        return len(set(self.class_polynomials[0]) | set(self.class_polynomials[1]))

    @property
    def ok(self) -> bool:
        return all(len(polys) <= 1 for polys in self.class_polynomials)


def spectrum_class(p: PermMatrix, image: str) -> int:
    """1 when the member P·A·P image has the spectrum of A, otherwise 2"""
    similar = image in _SIMILAR_MAPS
    if classify_symmetry(p).rot90:
        similar = not similar
    return 1 if similar else 2


def family_spectra_check(s: Square) -> FamilySpectraReport:
    """Split the family into its two spectrum classes and compare exact polynomials"""
    fam = family(s)
    classes: Dict[int, set] = {1: set(), 2: set()}
    sizes = {1: 0, 2: 0}
    for member in fam.members:
        p, image = fam.origin(member)
        k = spectrum_class(p, image)
        sizes[k] += 1
        classes[k].add(tuple(char_poly_exact(member.m)))
    report = FamilySpectraReport(
        members=len(fam.members),
        class_sizes=(sizes[1], sizes[2]),
        class_polynomials=(sorted(classes[1]), sorted(classes[2])),
    )
    if not report.ok:
        logger.warning(f"Family spectra split into {report.distinct_polynomials} polynomials with a class mismatch")
    return report


def eigenvectors_for(s: Square, values: Sequence[complex], side: str = 'right') -> List[np.ndarray]:
    """
    Unit eigenvectors for the eigenvalues nearest to the requested ones.

    side='left' gives eigenvectors of Aᵀ (row vectors y with yᵀA = λyᵀ).
    For λ ≠ μ they are orthogonal to e, so they are also eigenvectors of
    Zᵀ and a type A witness P carries the one for λ to the one for −λ.
    Each vector is scaled so that its largest-magnitude component is real
    and positive.
    """
    if side not in ('left', 'right'):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    m = s.m.to_float()
    lams, vecs = np.linalg.eig(m.T if side == 'left' else m)
    out = []
    for target in values:
        k = int(np.argmin(np.abs(lams - target)))
        out.append(_normalize(vecs[:, k]))
    return out


def type_b_row_reduction(s: Square, p: PermMatrix, side: str = 'left') -> IntMatrix:
    """
    Add row i into row P(i) for each pair i < P(i) (columns for 'right').

    For a type B witness the replaced rows all equal (2μ/n)·eᵀ, which
    leaves at most n/2 + 1 independent rows.
    """
    if side not in ('left', 'right'):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    if p.n != s.n:
        raise OrderMismatchError(f"Order mismatch: square {s.n} vs permutation {p.n}")
    mu = s.require_magic()
    arr = np.array(s.m.array, dtype=object)
    work = arr if side == 'left' else arr.T.copy()
    target = s.pair_sum
    for i, j in p.pairs():
        work[j - 1, :] = work[i - 1, :] + work[j - 1, :]
        if not all(x == target for x in work[j - 1, :].tolist()):
            raise NotAWitnessError(f"({p}, {side}) is not a type B witness for this square (μ={mu})")
    return IntMatrix(work if side == 'left' else work.T)
