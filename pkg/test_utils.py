from fractions import Fraction

import pytest

from errors import MatrixFormatError
from linalg import IntMatrix, RatMatrix
from utils import (MAX_FILE_SIZE, format_matrices, format_matrix, parse_matrix, parse_matrix_text, read_matrices,
                   read_named_perms, read_square, validate_matrix_file, validate_square)

TWO_MATRICES = """\
# first
2
1 2
3 4

# second
2
1/2 -3
0   +4
"""

DURER_TEXT = "4\n16 3 2 13\n5 10 11 8\n9 6 7 12\n4 15 14 1\n"


def test_parse_matrices_and_rationals():
    first, second = parse_matrix_text(TWO_MATRICES)
    assert isinstance(first, IntMatrix)
    assert first.rows() == ((1, 2), (3, 4))
    assert isinstance(second, RatMatrix)
    assert second.entry(1, 1) == Fraction(1, 2)
    assert second.entry(2, 2) == 4


def test_order_line_is_read(durer):
    assert parse_matrix(DURER_TEXT) == durer.m


def test_matrices_need_no_blank_line_between_them():
    first, second = parse_matrix_text("1\n5\n2\n1 0\n0 1\n")
    assert first.rows() == ((5,),)
    assert second.n == 2


def test_whole_number_fractions_are_integers():
    m = parse_matrix("2\n4/2 0\n0 1")
    assert isinstance(m, IntMatrix)
    assert m.entry(1, 1) == 2


@pytest.mark.parametrize("text, message", [
    ("1 2\n3 4", "order n"),
    ("0\n", "order n"),
    ("3\n1 2 3\n4 5 6\n", "needs 3 rows, found 2"),
    ("2\n1 2\n3", "Line 3: expected 2 entries"),
    ("2\n1 2\n3 4\n5 6\n", "Line 4"),
    ("2\n1 x\n3 4", "bad entry"),
    ("2\n1/0 1\n1 1", "zero denominator"),
    ("2\n1.5 2\n3 4", "bad entry"),
])
def test_parse_errors(text, message):
    with pytest.raises(MatrixFormatError, match=message):
        parse_matrix(text)


def test_parse_matrix_needs_one_matrix():
    with pytest.raises(MatrixFormatError):
        parse_matrix(TWO_MATRICES)
    with pytest.raises(MatrixFormatError):
        parse_matrix("# nothing here\n")


def test_format_matrix_round_trips(durer):
    text = format_matrix(durer)
    assert text.splitlines()[:2] == ["4", "16  3  2 13"]
    assert parse_matrix(text) == durer.m
    both = format_matrices([durer.m, durer.m])
    assert both.count('\n\n') == 1
    assert parse_matrix_text(both) == [durer.m, durer.m]


def test_read_square(tmp_path):
    path = tmp_path / "half.txt"
    path.write_text("2\n1/2 1\n1 1\n")
    with pytest.raises(MatrixFormatError, match="non-integer"):
        read_square(path)
    with pytest.raises(MatrixFormatError, match="File does not exist"):
        read_square(tmp_path / "missing.txt")
    with pytest.raises(MatrixFormatError, match="Not a regular file"):
        read_matrices(tmp_path)


def test_read_named_perms(tmp_path):
    path = tmp_path / "perms.txt"
    path.write_text("# comment\nk: (3 4 1 2)\nl: 2 1 4 3\n")
    perms = read_named_perms(path)
    assert perms['k'].sigma == (3, 4, 1, 2)
    assert perms['l'].rank() == 8
    path.write_text("(3 4 1 2)\n")
    with pytest.raises(MatrixFormatError, match="line 1"):
        read_named_perms(path)


def test_validate_matrix_file(tmp_path):
    path = tmp_path / "m.txt"
    assert validate_matrix_file(path) == (False, "File does not exist")
    path.write_text(TWO_MATRICES)
    assert validate_matrix_file(path) == (True, "File is valid")
    path.write_bytes(b"1" * (MAX_FILE_SIZE + 1))
    assert validate_matrix_file(path) == (False, "File too large (max 16MB)")


def test_validate_square(durer):
    assert validate_square(durer.m) == (True, "Valid magic square")
    ok, message = validate_square(IntMatrix([[1, 2], [3, 4]]))
    assert not ok and "not magic" in message
    assert validate_square(RatMatrix([[Fraction(1, 2), 0], [0, 1]])) == (False, "Entries must be integers")
