"""
Classification of magic squares by the permutation equations they satisfy.

A square A with magic number μ is paired against the constant 2μ/n:
  conj   A + P·A·P = (2μ/n)E      (type A, P an MCPM)
  left   A + P·A   = (2μ/n)E      (type B)
  right  A + A·P   = (2μ/n)E      (type B)
  xi     A + L·A·P₆ = (2μ/n)E     (order 4, type D, P₆ = P₃·P₂·P₃)
  xii    A + K·A·P₂ = (2μ/n)E     (order 4, type D)
  d      A + P·A·Q  = (2μ/n)E     (order > 4, P an MCPM, Q bisymmetric, Q ≠ I)
All checks are exact.
"""
import logging
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from errors import InvariantViolation, NotMagicError, UnsupportedOrderError
from linalg import RatMatrix
from magic import Square, is_pandiagonal, is_regular, is_semipandiagonal
from perms import PermMatrix, gen_bisymmetric, gen_mcpm, parse_one_line, perm_from_rank
from transforms import DIHEDRAL_MAPS, dihedral_arrays

logger = logging.getLogger(__name__)

K = parse_one_line("(3 4 1 2)")
L = parse_one_line("(2 1 4 3)")
J4 = parse_one_line("(4 3 2 1)")
P2 = parse_one_line("(1 2 4 3)")
P3 = parse_one_line("(1 3 2 4)")
# conjugating the xii equation by P₃ turns K into L and P₂ into P₆
P6 = P3 @ P2 @ P3

RELATIONS = ("conj", "left", "right", "xi", "xii", "d")
GROUP_C_LABEL = "VII-X"
DUDENEY_LABELS = ("I", "II", "III", "IV", "V", "VI'", "VI''", GROUP_C_LABEL, "XI", "XII")
TRIGG_GROUPS = ("A", "B", "C", "D", "none")

_CONJ_LABELS = ((K, "I"), (L, "II"), (J4, "III"))
_SIDE_LABELS = ((L, "IV"), (K, "V"), (J4, "VI"))

# Order-4 transformation sets, by standard rank
TRANSFORM_SETS = {
    'A1': (1, 8, 17, 24),
    'A2': (2, 7, 18, 23),
    'A3': (6, 10, 15, 19),
    'A4': (3, 11, 14, 22),
}
# {P, JP} pairs of the bisymmetric and quarter-turn permutations
JP_PAIRS = {
    'C1': (1, 24),
    'C2': (3, 22),
    'C3': (8, 17),
    'C4': (11, 14),
}
# label -> {transformation set -> label of P·A·P}; absent sets never give a magic square.
# VI'' squares stay in VI'' under A1 and A4 and leave the magic squares under A2 and A3.
EXPECTED_EDGES = {
    "I": {'A1': "I", 'A3': "I", 'A4': "II", 'A2': "III"},
    "II": {'A1': "II", 'A2': "II", 'A4': "I", 'A3': "III"},
    "III": {'A1': "III", 'A4': "III", 'A2': "I", 'A3': "II"},
    "IV": {'A1': "IV", 'A2': "IV", 'A4': "V", 'A3': "VI'"},
    "V": {'A1': "V", 'A3': "V", 'A4': "IV", 'A2': "VI'"},
    "VI'": {'A1': "VI'", 'A4': "VI'", 'A3': "IV", 'A2': "V"},
    "VI''": {'A1': "VI''", 'A4': "VI''"},
    "XI": {'A1': "XI", 'A4': "XII"},
    "XII": {'A1': "XII", 'A4': "XI"},
}


@dataclass(frozen=True)
class Witness:
    perm: PermMatrix
    relation: str
    image: str = "A"                      # dihedral image the equation holds on
    partner: Optional[PermMatrix] = None  # right-hand factor of xi/xii/d

    def to_dict(self) -> dict:
        out = {'perm': self.perm.one_line(), 'relation': self.relation, 'image': self.image}
        if self.partner is not None:
            out['partner'] = self.partner.one_line()
        return out


@dataclass
class DudeneyDiagram:
    order: int
    pair_sum: Fraction
    pairs: List[Tuple[int, int, int, int]]  # 1-based (r1, c1, r2, c2)
    unmatched: List[Tuple[int, int]]
    complete: bool

    def to_list(self) -> List[List[int]]:
        return [list(p) for p in self.pairs]


@dataclass
class Classification:
    order: int
    mu: int
    trigg_group: str
    dudeney_label: Optional[str] = None
    witnesses: List[Witness] = field(default_factory=list)
    flags: Dict[str, Optional[bool]] = field(default_factory=dict)
    diagram: Optional[DudeneyDiagram] = None

    def to_dict(self) -> dict:
        out = {
            'order': self.order,
            'mu': self.mu,
            'flags': self.flags,
            'trigg_group': self.trigg_group,
            'dudeney_label': self.dudeney_label,
            'witnesses': [w.to_dict() for w in self.witnesses],
        }
        if self.diagram is not None:
            out['diagram'] = self.diagram.to_list()
            out['diagram_complete'] = self.diagram.complete
        return out


def _target(s: Square):
    t = s.pair_sum
    return int(t) if t.denominator == 1 else t


def _is_constant(total: np.ndarray, target) -> bool:
    return bool(np.all(total == target))


def z_matrix(s: Square) -> RatMatrix:
    """Z = A − (μ/n)E; every line sum and both diagonal traces of Z vanish"""
    mu = s.require_magic()
    return RatMatrix(s.m.array - Fraction(mu, s.n))


def _conj_on(arr: np.ndarray, target, mcpms: Iterable[PermMatrix]) -> List[PermMatrix]:
    return [p for p in mcpms if _is_constant(arr + p.conjugate_array(arr), target)]


def _sides_on(arr: np.ndarray, target, mcpms: Iterable[PermMatrix]) -> List[Tuple[PermMatrix, str]]:
    found = []
    for p in mcpms:
        if _is_constant(arr + p.apply_left(arr), target):
            found.append((p, 'left'))
        if _is_constant(arr + p.apply_right(arr), target):
            found.append((p, 'right'))
    return found


def type_a_witnesses(s: Square) -> List[PermMatrix]:
    """All MCPMs P with A + P·A·P = (2μ/n)E"""
    s.require_magic()
    if s.n % 2 == 1:
        logger.debug(f"No type A theory at odd order {s.n}; returning no witnesses")
        return []
    return _conj_on(s.m.array, _target(s), gen_mcpm(s.n))


def type_b_witnesses(s: Square) -> List[Tuple[PermMatrix, str]]:
    """All (MCPM, side) with A + P·A or A + A·P equal to (2μ/n)E"""
    s.require_magic()
    if s.n % 2 == 1:
        return []
    return _sides_on(s.m.array, _target(s), gen_mcpm(s.n))


def singly_even_sentinel(s: Square, witnesses: List[PermMatrix]):
    """Natural squares of order 2 (mod 4) can never be type A"""
    if witnesses and s.n % 4 == 2 and s.natural:
        logger.error(f"Natural order-{s.n} square carries type A witnesses {[str(p) for p in witnesses]}")
        raise InvariantViolation(f"Natural singly-even square of order {s.n} is type A")


def _dudeney_d_witnesses(images, target) -> List[Witness]:
    found = []
    for name, arr in images:
        if _is_constant(arr + P6.apply_right(L.apply_left(arr)), target):
            found.append(Witness(L, 'xi', name, P6))
        if _is_constant(arr + P2.apply_right(K.apply_left(arr)), target):
            found.append(Witness(K, 'xii', name, P2))
    return found


def _general_d_witnesses(images, target, n: int, first_only: bool = True) -> List[Witness]:
    mcpms = gen_mcpm(n)
    qs = [q for q in gen_bisymmetric(n) if q != PermMatrix.identity(n)]
    found = []
    for name, arr in images:
        for p in mcpms:
            pa = p.apply_left(arr)
            for q in qs:
                if _is_constant(arr + q.apply_right(pa), target):
                    found.append(Witness(p, 'd', name, q))
                    if first_only:
                        return found
    return found


def _images(s: Square):
    return list(zip(DIHEDRAL_MAPS, dihedral_arrays(s.m.array)))


def dudeney_type(s: Square) -> Classification:
    """
    Dudeney label of an order-4 magic square.

    Conjugation witnesses K, L, J give I, II, III. Otherwise one-sided
    witnesses L, K, J give IV, V, VI, with VI split by the
    semipandiagonal property. Otherwise xi/xii on any dihedral image give
    XI/XII. Everything else is reported as the group VII-X.
    """
    if s.n != 4:
        raise UnsupportedOrderError(f"Dudeney types are defined at order 4, got {s.n}")
    mu = s.require_magic()
    target = _target(s)
    arr = s.m.array

    conj = _conj_on(arr, target, gen_mcpm(4))
    if conj:
        witnesses = [Witness(p, 'conj') for p in conj]
        label = next(name for p, name in _CONJ_LABELS if p in conj)
        return Classification(4, mu, "A", label, witnesses)

    sides = _sides_on(arr, target, gen_mcpm(4))
    if sides:
        witnesses = [Witness(p, side) for p, side in sides]
        perms = [p for p, _ in sides]
        label = next(name for p, name in _SIDE_LABELS if p in perms)
        if label == "VI":
            label = "VI'" if is_semipandiagonal(s) else "VI''"
        return Classification(4, mu, "B", label, witnesses)

    d = _dudeney_d_witnesses(_images(s), target)
    if d:
        label = "XI" if any(w.relation == 'xi' for w in d) else "XII"
        return Classification(4, mu, "D", label, d)

    return Classification(4, mu, "C", GROUP_C_LABEL, [])


def _group_and_witnesses(s: Square) -> Tuple[str, Optional[str], List[Witness]]:
    n = s.n
    if n == 4:
        c = dudeney_type(s)
        return c.trigg_group, c.dudeney_label, c.witnesses
    target = _target(s)
    images = _images(s)
    mcpms = gen_mcpm(n)
    conj = [Witness(p, 'conj', name) for name, arr in images for p in _conj_on(arr, target, mcpms)]
    if conj:
        return "A", None, conj
    sides = [Witness(p, side) for p, side in _sides_on(s.m.array, target, mcpms)]
    if sides:
        return "B", None, sides
    d = _general_d_witnesses(images, target, n)
    if d:
        return "D", None, d
    return "C", None, []


def trigg_group(s: Square) -> str:
    """
    Trigg group A, B, C or D of an even-order magic square.

    Beyond order 4, group D means some dihedral image satisfies
    A + P·A·Q = (2μ/n)E with P an MCPM and Q a bisymmetric permutation
    other than I.
    """
    s.require_magic()
    if s.n % 2 == 1:
        raise UnsupportedOrderError(f"Trigg groups are defined for even orders, got {s.n}")
    return _group_and_witnesses(s)[0]


def dudeney_diagram(s: Square) -> DudeneyDiagram:
    """
    Pair cells whose entries add to 2μ/n, matching Z-values v and −v.

    The diagram is complete when every value has exactly one partner; at
    odd order a single unmatched cell with Z = 0 is allowed.
    """
    mu = s.require_magic()
    n = s.n
    scaled = (s.m.array * n - mu).tolist()  # n·Z stays integral
    cells: Dict[int, List[Tuple[int, int]]] = defaultdict(list)
    for i in range(n):
        for j in range(n):
            cells[scaled[i][j]].append((i + 1, j + 1))

    pairs = []
    unmatched = []
    ambiguous = False
    for v in sorted(cells):
        if v < 0:
            if -v not in cells:
                unmatched.extend(cells[v])
            continue
        if v == 0:
            zeros = cells[0]
            if len(zeros) > 2:
                ambiguous = True
            for a, b in zip(zeros[0::2], zeros[1::2]):
                pairs.append((*a, *b))
            if len(zeros) % 2:
                unmatched.append(zeros[-1])
            continue
        pos, neg = cells[v], cells.get(-v, [])
        if len(pos) != 1 or len(neg) != 1:
            ambiguous = True
        for a, b in zip(pos, neg):
            pairs.append((*min(a, b), *max(a, b)))
        longer = pos if len(pos) > len(neg) else neg
        unmatched.extend(longer[min(len(pos), len(neg)):])

    pairs.sort()
    unmatched.sort()
    allowed = n % 2 == 1 and len(unmatched) == 1 and scaled[unmatched[0][0] - 1][unmatched[0][1] - 1] == 0
    complete = not ambiguous and (not unmatched or allowed)
    if not complete:
        logger.warning(f"Partial Dudeney diagram: {len(pairs)} pairs, {len(unmatched)} unmatched cells")
    return DudeneyDiagram(n, Fraction(2 * mu, n), pairs, unmatched, complete)


def diagram_to_dot(d: DudeneyDiagram) -> str:
    """DOT graph with one node per cell on an n×n grid and one edge per pair"""
    label = str(d.pair_sum)
    lines = [
        'graph dudeney {',
        f'  graph [label="2mu/n = {label}", pair_sum="{label}"];',
        '  node [shape=circle, fixedsize=true, width=0.3];',
    ]
    for i in range(1, d.order + 1):
        for j in range(1, d.order + 1):
            lines.append(f'  c_{i}_{j} [pos="{j},{d.order - i}!"];')
    for r1, c1, r2, c2 in d.pairs:
        lines.append(f'  c_{r1}_{c1} -- c_{r2}_{c2};')
    lines.append('}')
    return '\n'.join(lines) + '\n'


def classify(s: Square, with_diagram: bool = True) -> Classification:
    """
    Full classification report: flags, Trigg group, Dudeney label and witnesses.

    Args:
        s: magic square of any order
        with_diagram: attach the Dudeney diagram

    Returns:
        Classification; trigg_group is "none" at odd order
    """
    mu = s.require_magic()
    n = s.n
    flags = {
        'semi_magic': s.semi_magic,
        'magic': s.magic,
        'natural': s.natural,
        'pandiagonal': is_pandiagonal(s),
        'semipandiagonal': is_semipandiagonal(s),
        'regular': is_regular(s),
    }
    if n % 2 == 1:
        group, label, witnesses = "none", None, []
    else:
        group, label, witnesses = _group_and_witnesses(s)
        singly_even_sentinel(s, [w.perm for w in witnesses if w.relation == 'conj'])
    diagram = dudeney_diagram(s) if with_diagram else None
    return Classification(n, mu, group, label, witnesses, flags, diagram)


@dataclass
class GraphReport:
    squares_checked: int = 0
    conjugations_checked: int = 0
    failures: List[str] = field(default_factory=list)
    transitions: Dict[Tuple[str, str], Counter] = field(default_factory=lambda: defaultdict(Counter))

    @property
    def ok(self) -> bool:
        return not self.failures


def _set_of(rank: int) -> Optional[str]:
    return next((name for name, ranks in TRANSFORM_SETS.items() if rank in ranks), None)


def transformation_graph_check(squares: List[Square], labels: Optional[Dict[tuple, str]] = None,
                               max_failures: int = 50) -> GraphReport:
    """
    Verify the order-4 transformation graph over a complete census.

    For every square and every one of the 24 permutations, P·A·P is magic
    exactly when the graph has an edge from the square's label under the
    set holding P, and it lands on the edge's target label. Group VII-X
    squares stay in their group and go magic exactly under the {P, JP}
    pairs. Magic results are recognised by census membership.
    """
    if labels is None:
        labels = {s.key(): dudeney_type(s).dudeney_label for s in squares}
    perms = [perm_from_rank(4, k) for k in range(1, 25)]
    pair_ranks = {r for ranks in JP_PAIRS.values() for r in ranks}
    report = GraphReport()

    def fail(msg):
        if len(report.failures) < max_failures:
            report.failures.append(msg)

    for s in squares:
        if s.n != 4:
            raise UnsupportedOrderError(f"The transformation graph is defined at order 4, got {s.n}")
        label = labels[s.key()]
        report.squares_checked += 1
        arr = s.m.array
        for rank, p in enumerate(perms, start=1):
            report.conjugations_checked += 1
            key = tuple(p.conjugate_array(arr).ravel().tolist())
            result = labels.get(key)
            set_name = _set_of(rank)
            report.transitions[(label, set_name or 'other')][result or 'not magic'] += 1
            if label == GROUP_C_LABEL:
                expected_magic = rank in pair_ranks
                if (result is not None) != expected_magic:
                    fail(f"{label} square {s.key()} under P{rank}: magic={result is not None}, expected {expected_magic}")
                elif result is not None and result != GROUP_C_LABEL:
                    fail(f"{label} square {s.key()} under P{rank} left its group for {result}")
                continue
            expected = EXPECTED_EDGES.get(label, {}).get(set_name)
            if expected is None and result is not None:
                fail(f"{label} square {s.key()} under P{rank} gave magic {result}, no edge expected")
            elif expected is not None and result != expected:
                fail(f"{label} square {s.key()} under P{rank} ({set_name}) gave {result}, expected {expected}")

    if report.failures:
        logger.error(f"Transformation graph check: {len(report.failures)} failures recorded")
    else:
        logger.info(f"Transformation graph check passed: {report.conjugations_checked} conjugations")
    return report
