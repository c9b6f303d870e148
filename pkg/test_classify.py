import pytest

from conftest import load_matrices, load_square
from errors import InvariantViolation, NotMagicError, UnsupportedOrderError
from linalg import IntMatrix
from magic import Square
from perms import PermMatrix, parse_one_line
from classify import (GROUP_C_LABEL, J4, K, L, P2, P3, P6, Witness, classify, diagram_to_dot, dudeney_diagram,
                      dudeney_type, singly_even_sentinel, transformation_graph_check, trigg_group, type_a_witnesses,
                      type_b_witnesses, z_matrix)
from transforms import conjugate
from verify_suite import DUDENEY_COUNTS_ORDER_4

# rows 2 and 4 complement rows 1 and 3
TYPE_IV = [[15, 14, 1, 4], [2, 3, 16, 13], [12, 9, 6, 7], [5, 8, 11, 10]]
TYPE_XI = [[1, 12, 13, 8], [16, 9, 4, 5], [2, 7, 14, 11], [15, 6, 3, 10]]
TYPE_XII = [[1, 7, 14, 12], [9, 15, 4, 6], [16, 10, 5, 3], [8, 2, 11, 13]]
TYPE_VI_DOUBLE_PRIME = [[1, 3, 14, 16], [10, 13, 4, 7], [15, 6, 11, 2], [8, 12, 5, 9]]

# a natural square of order 6
NATURAL_6 = [
    [35, 1, 6, 26, 19, 24],
    [3, 32, 7, 21, 23, 25],
    [31, 9, 2, 22, 27, 20],
    [8, 28, 33, 17, 10, 15],
    [30, 5, 34, 12, 14, 16],
    [4, 36, 29, 13, 18, 11],
]


def test_durer_is_type_iii(durer):
    result = dudeney_type(durer)
    assert (result.trigg_group, result.dudeney_label) == ("A", "III")
    assert [w.perm for w in result.witnesses] == [J4]
    assert result.witnesses[0].relation == 'conj'


@pytest.mark.parametrize("fixture, label", [
    ('pandiagonal_4', "I"),
    ('pandiagonal_4_k_conjugate', "I"),
    ('durer_l_conjugate', "III"),
    ('durer_p3_conjugate', "III"),
    ('durer_quarter_turn_conjugate', "III"),
])
def test_type_a_labels(fixture, label):
    assert dudeney_type(load_square(fixture)).dudeney_label == label


def test_pandiagonal_witness_is_k():
    result = dudeney_type(load_square('pandiagonal_4'))
    assert K in [w.perm for w in result.witnesses]


def test_one_sided_square_is_type_iv():
    s = Square.from_rows(TYPE_IV)
    assert s.natural
    result = dudeney_type(s)
    assert (result.trigg_group, result.dudeney_label) == ("B", "IV")
    assert (L, 'left') in [(w.perm, w.relation) for w in result.witnesses]


def test_dudeney_type_needs_order_4():
    with pytest.raises(UnsupportedOrderError):
        dudeney_type(load_square('type_a_6'))


def test_type_a_witnesses(named_perms):
    assert named_perms['mcpm_6'] in type_a_witnesses(load_square('type_a_6'))
    assert named_perms['mcpm_8'] in type_a_witnesses(load_square('type_a_8'))
    assert named_perms['conjugation_source_6'] in type_a_witnesses(load_square('type_a_6_conjugation_source'))
    assert type_a_witnesses(load_square('siamese_5')) == []


def test_type_b_witnesses(named_perms):
    assert (named_perms['mcpm_6'], 'right') in type_b_witnesses(load_square('type_b_6_right'))
    assert (PermMatrix.reverse(8), 'left') in type_b_witnesses(load_square('type_b_8_left'))


def test_classify_order_8(named_perms):
    result = classify(load_square('type_a_8'))
    assert result.trigg_group == "A"
    assert result.dudeney_label is None
    assert any(w.perm == named_perms['mcpm_8'] and w.image == "A" for w in result.witnesses)
    assert result.flags["magic"]


def test_classify_report(durer):
    report = classify(durer).to_dict()
    assert report['order'] == 4 and report['mu'] == 34
    assert report['trigg_group'] == "A"
    assert report['dudeney_label'] == "III"
    assert report['witnesses'] == [{'perm': '(4 3 2 1)', 'relation': 'conj', 'image': 'A'}]
    assert report['flags']['regular'] is True
    assert report['diagram_complete'] is True
    assert 'diagram' not in classify(durer, with_diagram=False).to_dict()


def test_classify_odd_order():
    result = classify(load_square('siamese_5'))
    assert result.trigg_group == "none"
    assert result.witnesses == []
    assert result.flags['semipandiagonal'] is None
    with pytest.raises(UnsupportedOrderError):
        trigg_group(load_square('siamese_5'))


def test_classify_rejects_non_magic():
    with pytest.raises(NotMagicError):
        classify(Square.from_rows([[1, 2], [3, 4]]))


def test_natural_singly_even_square_is_never_type_a():
    s = Square.from_rows(NATURAL_6)
    assert s.natural
    assert type_a_witnesses(s) == []
    assert classify(s, with_diagram=False).trigg_group != "A"
    with pytest.raises(InvariantViolation):
        singly_even_sentinel(s, [PermMatrix.reverse(6)])
    singly_even_sentinel(load_square('type_a_6'), [PermMatrix.reverse(6)])


def test_z_matrix():
    z = z_matrix(load_square('type_a_8'))
    assert z == load_matrices('type_a_8_z')[0]
    assert all(sum(row) == 0 for row in z.rows())
    assert sum(z.array.diagonal().tolist()) == 0


def test_dudeney_diagram_of_durer(durer):
    d = dudeney_diagram(durer)
    assert d.complete
    assert d.pair_sum == 17
    assert len(d.pairs) == 8
    assert (1, 1, 4, 4) in d.pairs
    assert d.unmatched == []


def test_dudeney_diagram_at_odd_order():
    d = dudeney_diagram(load_square('siamese_5'))
    assert d.complete
    assert len(d.pairs) == 12
    assert d.unmatched == [(3, 3)]


def test_partial_dudeney_diagram():
    # every Z-value is zero, so the pairing is ambiguous
    d = dudeney_diagram(Square(IntMatrix([[1, 1], [1, 1]])))
    assert d.pairs == [(1, 1, 1, 2), (2, 1, 2, 2)]
    assert not d.complete


def test_diagram_to_dot(durer):
    dot = diagram_to_dot(dudeney_diagram(durer))
    assert dot.startswith('graph dudeney {')
    assert dot.count(' -- ') == 8
    assert 'c_1_1 -- c_4_4;' in dot
    assert 'pair_sum="17"' in dot


def test_census_type_counts(census4):
    assert sum(census4.by_type.values()) == 7040
    assert census4.by_type == DUDENEY_COUNTS_ORDER_4
    assert census4.by_group == {"A": 1152, "B": 3968, "C": 1792, "D": 128}


def test_census_determinants_vanish_for_types_i_to_vi(census4):
    zero_labels = {"I", "II", "III", "IV", "V", "VI'", "VI''"}
    for key, label in census4.labels.items():
        if label in zero_labels:
            assert census4.determinants[key] == 0
    assert sum(census4.determinant_histogram.values()) == 7040


def test_transformation_graph(census4):
    report = transformation_graph_check(census4.matrices, census4.labels)
    assert report.ok, report.failures[:5]
    assert report.squares_checked == 7040
    assert report.conjugations_checked == 7040 * 24
    assert dict(report.transitions[("VI''", 'A2')]) == {'not magic': 4 * 1664}
    assert dict(report.transitions[("VI''", 'A3')]) == {'not magic': 4 * 1664}
    assert dict(report.transitions[("XI", 'A4')]) == {"XII": 4 * 64}
    assert dict(report.transitions[(GROUP_C_LABEL, 'A4')]) == {GROUP_C_LABEL: 4 * 1792}


def test_type_xi_and_xii_examples():
    xi = dudeney_type(Square.from_rows(TYPE_XI))
    assert (xi.trigg_group, xi.dudeney_label) == ("D", "XI")
    assert Witness(L, 'xi', "A", P6) in xi.witnesses

    xii = dudeney_type(Square.from_rows(TYPE_XII))
    assert (xii.trigg_group, xii.dudeney_label) == ("D", "XII")
    assert Witness(K, 'xii', "A", P2) in xii.witnesses


def test_xi_relation_is_the_conjugated_xii_relation():
    assert P6 == P3 @ P2 @ P3 == parse_one_line("(1 4 3 2)")
    assert P3 @ K @ P3 == L
    xi = Square.from_rows(TYPE_XI)
    assert dudeney_type(conjugate(xi, P3).square).dudeney_label == "XII"


def test_type_vi_double_prime_leaves_the_magic_squares():
    s = Square.from_rows(TYPE_VI_DOUBLE_PRIME)
    assert dudeney_type(s).dudeney_label == "VI''"
    assert not conjugate(s, parse_one_line("(1 2 4 3)")).square.magic
    assert not conjugate(s, parse_one_line("(1 4 3 2)")).square.magic
    assert dudeney_type(conjugate(s, P3).square).dudeney_label == "VI''"
