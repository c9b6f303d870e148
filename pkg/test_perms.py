from math import factorial

import pytest

from errors import MatrixFormatError, NotMCPMError, OrderMismatchError, UnsupportedOrderError
from linalg import IntMatrix
from perms import (PermMatrix, all_permutations, classify_symmetry, count_bisymmetric, count_mcpm, count_rot90,
                   gen_bisymmetric, gen_mcpm, gen_rot90, is_mcpm, mcpm_conjugator, parse_one_line, perm_from_rank,
                   perm_rank, shift_matrices)


def test_rank_round_trip_and_order():
    assert perm_from_rank(4, 1).sigma == (1, 2, 3, 4)
    assert perm_from_rank(4, 24).sigma == (4, 3, 2, 1)
    assert perm_from_rank(4, 11).sigma == (2, 4, 1, 3)
    for k in range(1, factorial(5) + 1):
        assert perm_rank(perm_from_rank(5, k)) == k
    with pytest.raises(ValueError):
        perm_from_rank(3, 7)


def test_named_order_4_ranks(named_perms):
    expected = {'k': 17, 'l': 8, 'j4': 24, 'p3': 3, 'p22': 22, 'quarter_turn_4': 11,
                'shift_p10': 10, 'shift_p19': 19}
    for name, rank in expected.items():
        assert named_perms[name].rank() == rank


def test_parse_and_format():
    p = parse_one_line("(2 3 1 4)")
    assert p.sigma == (2, 3, 1, 4)
    assert parse_one_line("2,3,1,4") == p
    assert str(p) == "(2 3 1 4)"
    with pytest.raises(MatrixFormatError):
        parse_one_line("(1 1 2)")
    with pytest.raises(MatrixFormatError):
        parse_one_line("()")


def test_matrix_convention():
    p = parse_one_line("(2 3 1)")
    m = p.matrix()
    assert m == IntMatrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]])
    assert m.entry(1, p(1)) == 1


def test_product_follows_matrix_multiplication():
    p = parse_one_line("(2 3 1 4)")
    q = parse_one_line("(1 2 4 3)")
    assert (p @ q).matrix() == p.matrix() @ q.matrix()
    assert p @ p.inverse() == PermMatrix.identity(4)
    with pytest.raises(OrderMismatchError):
        p @ PermMatrix.identity(3)


def test_apply_matches_matrix_products():
    p = parse_one_line("(3 1 4 2)")
    a = IntMatrix([[16, 3, 2, 13], [5, 10, 11, 8], [9, 6, 7, 12], [4, 15, 14, 1]])
    pm = p.matrix()
    assert IntMatrix(p.apply_left(a.array)) == pm @ a
    assert IntMatrix(p.apply_right(a.array)) == a @ pm
    assert IntMatrix(p.conjugate_array(a.array)) == pm @ a @ pm


def test_classify_symmetry_order_4():
    flags = classify_symmetry(parse_one_line("(2 4 1 3)"))
    assert flags.rot90 and not flags.symmetric
    k = classify_symmetry(parse_one_line("(3 4 1 2)"))
    assert k.bisymmetric and k.mcpm
    p2 = classify_symmetry(parse_one_line("(1 2 4 3)"))
    assert p2.symmetric and not p2.persymmetric and p2.singly_symmetric
    assert 'bisymmetric' in k.names()


@pytest.mark.parametrize("n", range(1, 9))
def test_catalogs_match_recurrences(n):
    bis = gen_bisymmetric(n)
    rot = gen_rot90(n)
    assert len(bis) == len(set(bis)) == count_bisymmetric(n)
    assert len(rot) == len(set(rot)) == count_rot90(n)
    assert all(classify_symmetry(p).bisymmetric for p in bis)
    assert all(classify_symmetry(p).rot90 for p in rot)


def test_bisymmetric_order_4_catalog(named_perms):
    assert {p.rank() for p in gen_bisymmetric(4)} == {1, 3, 8, 17, 22, 24}
    assert {p.rank() for p in gen_rot90(4)} == {11, 14}
    for name in ('p3', 'p8', 'p17', 'p22'):
        assert named_perms[name] in gen_bisymmetric(4)


@pytest.mark.parametrize("n", range(2, 7))
def test_mcpm_catalog_equals_brute_force(n):
    brute = {p for p in all_permutations(n) if is_mcpm(p)}
    assert brute == set(gen_mcpm(n))


def test_mcpm_counts():
    assert [count_mcpm(n) for n in (2, 3, 4, 6, 8)] == [1, 1, 3, 15, 105]
    assert len(gen_mcpm(8)) == 105
    assert is_mcpm(PermMatrix.reverse(6))
    assert not is_mcpm(PermMatrix.identity(4))
    with pytest.raises(UnsupportedOrderError):
        count_mcpm(1)


def test_shift_matrices():
    shifts = shift_matrices(4)
    assert [p.rank() for p in shifts] == [10, 17, 19]
    assert all(p.sigma[0] == k + 1 for k, p in enumerate(shifts, start=1))


def test_conjugator_on_the_order_6_example(named_perms):
    p = named_perms['conjugation_source_6']
    p2 = named_perms['conjugation_target_6']
    q = mcpm_conjugator(p, p2)
    assert q == named_perms['conjugator_6']
    assert q.is_involution()
    assert q @ p @ q == p2


def test_conjugator_is_identity_on_equal_inputs():
    p = parse_one_line("(2 1 4 3 6 5)")
    assert mcpm_conjugator(p, p) == PermMatrix.identity(6)


@pytest.mark.parametrize("n", [4, 6])
def test_conjugator_between_all_pairs(n):
    catalog = gen_mcpm(n)
    for p in catalog:
        for p2 in catalog:
            q = mcpm_conjugator(p, p2)
            assert classify_symmetry(q).symmetric
            assert q @ p @ q == p2


def test_conjugator_rejects_bad_input():
    with pytest.raises(NotMCPMError):
        mcpm_conjugator(PermMatrix.identity(4), PermMatrix.reverse(4))
    with pytest.raises(UnsupportedOrderError):
        mcpm_conjugator(PermMatrix.reverse(5), PermMatrix.reverse(5))
    with pytest.raises(OrderMismatchError):
        mcpm_conjugator(PermMatrix.reverse(4), PermMatrix.reverse(6))
