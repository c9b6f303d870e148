"""
Matrix text format.

Each matrix is a line holding its order n followed by n rows of n
whitespace-separated integers or p/q rationals. A file may hold several
matrices back to back; blank lines are ignored and '#' starts a comment.
The path '-' reads standard input.
"""
import logging
import os
import re
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterator, List, Sequence, Tuple, Union

from errors import MatrixFormatError, NotMagicError
from linalg import ExactMatrix, IntMatrix, RatMatrix
from magic import Square
from perms import PermMatrix, parse_one_line

logger = logging.getLogger(__name__)

MAX_FILE_SIZE = 16 * 1024 * 1024
_TOKEN = re.compile(r'^[+-]?\d+(/[+-]?\d+)?$')
_ORDER = re.compile(r'^\d+$')


def _parse_token(token: str, line_no: int):
    if not _TOKEN.match(token):
        raise MatrixFormatError(f"Line {line_no}: bad entry {token!r}")
    try:
        value = Fraction(token)
    except ZeroDivisionError as e:
        raise MatrixFormatError(f"Line {line_no}: zero denominator in {token!r}") from e
    return int(value) if value.denominator == 1 else value


def _content_lines(text: str) -> Iterator[Tuple[int, str]]:
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if line:
            yield line_no, line


def _read_order(line_no: int, line: str) -> int:
    tokens = line.split()
    if len(tokens) != 1 or not _ORDER.match(tokens[0]) or int(tokens[0]) < 1:
        raise MatrixFormatError(f"Line {line_no}: expected the order n on a line of its own, got {line!r}")
    return int(tokens[0])


def parse_matrix_text(text: str) -> List[ExactMatrix]:
    """All matrices in the text, IntMatrix where every entry is integral"""
    lines = list(_content_lines(text))
    out, pos = [], 0
    while pos < len(lines):
        header_no, header = lines[pos]
        n = _read_order(header_no, header)
        body = lines[pos + 1:pos + 1 + n]
        if len(body) < n:
            raise MatrixFormatError(f"Line {header_no}: order {n} needs {n} rows, found {len(body)}")
        rows = []
        for line_no, line in body:
            row = [_parse_token(t, line_no) for t in line.split()]
            if len(row) != n:
                raise MatrixFormatError(f"Line {line_no}: expected {n} entries, got {len(row)}")
            rows.append(row)
        if all(isinstance(x, int) for row in rows for x in row):
            out.append(IntMatrix(rows))
        else:
            out.append(RatMatrix(rows))
        pos += n + 1
    return out


def parse_matrix(text: str) -> ExactMatrix:
    matrices = parse_matrix_text(text)
    if len(matrices) != 1:
        raise MatrixFormatError(f"Expected exactly one matrix, found {len(matrices)}")
    return matrices[0]


def _read_text(path: Union[str, Path]) -> str:
    if str(path) == '-':
        return sys.stdin.read()
    is_valid, message = validate_matrix_file(path)
    if not is_valid:
        raise MatrixFormatError(f"Cannot read {path}: {message}")
    try:
        return Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise MatrixFormatError(f"Cannot read {path}: {e}") from e


def read_matrices(path: Union[str, Path]) -> List[ExactMatrix]:
    matrices = parse_matrix_text(_read_text(path))
    if not matrices:
        raise MatrixFormatError(f"No matrix found in {path}")
    return matrices


def read_square(path: Union[str, Path]) -> Square:
    """The single integer matrix in a file, as a Square"""
    matrices = read_matrices(path)
    if len(matrices) != 1:
        raise MatrixFormatError(f"Expected one matrix in {path}, found {len(matrices)}")
    m = matrices[0]
    if not isinstance(m, IntMatrix):
        raise MatrixFormatError(f"Matrix in {path} has non-integer entries")
    return Square(m)


def format_matrix(m: Union[ExactMatrix, Square]) -> str:
    """Order line, then right-aligned rows"""
    if isinstance(m, Square):
        m = m.m
    cells = [[str(x) for x in row] for row in m.rows()]
    width = max(len(c) for row in cells for c in row)
    rows = '\n'.join(' '.join(c.rjust(width) for c in row) for row in cells)
    return f"{m.n}\n{rows}\n"


def format_matrices(items: Sequence[Union[ExactMatrix, Square]]) -> str:
    return '\n'.join(format_matrix(m) for m in items)


def read_named_perms(path: Union[str, Path]) -> Dict[str, PermMatrix]:
    """Lines of the form 'name: (2 1 4 3)'"""
    out = {}
    for line_no, raw in enumerate(_read_text(path).splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if ':' not in line:
            raise MatrixFormatError(f"{path}, line {line_no}: expected 'name: permutation'")
        name, body = (part.strip() for part in line.split(':', 1))
        out[name] = parse_one_line(body)
    return out


def validate_matrix_file(path: Union[str, Path]):
    """Validate if the path is a readable file of acceptable size"""
    try:
        if not os.path.exists(path):
            return False, "File does not exist"
        if not os.path.isfile(path):
            return False, "Not a regular file"
        if os.path.getsize(path) > MAX_FILE_SIZE:
            return False, "File too large (max 16MB)"
        return True, "File is valid"
    except OSError as e:
        logger.error(f"Error validating matrix file: {e}")
        return False, f"Validation error: {str(e)}"


def validate_square(m: ExactMatrix):
    """Validate if the matrix can be handled as a magic square"""
    if not isinstance(m, IntMatrix):
        return False, "Entries must be integers"
    try:
        Square(m).require_magic()
    except NotMagicError as e:
        return False, str(e)
    return True, "Valid magic square"
