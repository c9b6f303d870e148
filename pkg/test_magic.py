from fractions import Fraction

import pytest

from conftest import load_square
from errors import NotMagicError
from linalg import IntMatrix, ones
from magic import (Square, is_magic, is_natural, is_natural_semimagic, is_pandiagonal, is_regular,
                   is_semimagic, is_semipandiagonal, natural_mu)


def test_durer_is_natural_and_regular(durer):
    assert is_magic(durer.m) == (True, 34)
    assert durer.natural
    assert durer.pair_sum == 17
    assert is_regular(durer)
    assert not is_pandiagonal(durer)


def test_semimagic_but_not_magic():
    # a Latin square: every line sums to 6, the diagonal does not
    m = IntMatrix([[1, 2, 3], [2, 3, 1], [3, 1, 2]])
    assert is_semimagic(m) == (True, 6)
    assert is_magic(m) == (False, None)
    s = Square(m)
    assert s.semi_magic and not s.magic and s.mu is None
    with pytest.raises(NotMagicError):
        s.require_magic()


def test_natural_predicates():
    lo_shu = IntMatrix([[2, 7, 6], [9, 5, 1], [4, 3, 8]])
    assert is_natural(lo_shu)
    assert is_natural_semimagic(lo_shu)
    assert not is_natural(IntMatrix(ones(3).array * 5))
    assert [natural_mu(n) for n in (3, 4, 5, 8)] == [15, 34, 65, 260]


def test_constant_square_has_repeats():
    s = Square(IntMatrix(ones(4).array * 7))
    assert s.magic and s.mu == 28
    assert s.has_repeats
    assert not s.natural
    assert is_pandiagonal(s)


def test_pandiagonal_example():
    s = load_square('pandiagonal_4')
    assert is_pandiagonal(s)
    assert is_semipandiagonal(s)


def test_semipandiagonal_order_6():
    s = load_square('semipandiagonal_6')
    assert s.mu == 120
    assert is_semipandiagonal(s) is True


def test_semipandiagonal_is_undefined_at_odd_order():
    assert is_semipandiagonal(load_square('siamese_5')) is None


def test_pair_sum_may_be_fractional():
    s = Square(IntMatrix([[1, 0], [0, 1]]))
    assert not s.magic
    s = Square(IntMatrix([[1, 1, 1], [1, 1, 1], [1, 1, 1]]))
    assert s.pair_sum == Fraction(2)


def test_squares_compare_by_entries(durer):
    assert durer == Square.from_rows(durer.m.rows())
    assert len({durer, Square.from_rows(durer.m.rows())}) == 1
    assert sorted([durer, load_square('pandiagonal_4')])[0] == load_square('pandiagonal_4')
