import numpy as np
import pytest

import config
from conftest import load_square
from errors import NotAWitnessError, OrderMismatchError
from linalg import rank_exact
from perms import PermMatrix, parse_one_line
from classify import J4, K, L
from spectral import (check_magic_eigenpair, check_pairing, check_z_spectrum_relation, eigen_spectrum,
                      eigenvectors_for, family_spectra_check, format_eigenvalue, spectrum_class, spectrum_matches,
                      type_b_row_reduction)
from verify_suite import (PRINTED_VECTOR_ATOL, TYPE_A_8_EIGENVALUE, TYPE_A_8_SPECTRUM, TYPE_A_8_X3, TYPE_A_8_X4,
                          TYPE_B_8_SPECTRUM)


def test_format_eigenvalue():
    assert format_eigenvalue(34 + 0j) == "34.0000"
    assert format_eigenvalue(-0.00001 + 0j) == "0.0000"
    assert format_eigenvalue(40.17j) == "40.1700i"
    assert format_eigenvalue(complex(2.0921, -43.6941)) == "2.0921-43.6941i"


def test_spectrum_matches():
    assert spectrum_matches([1, 2, 3], [3, 1, 2], 1e-9)
    assert spectrum_matches([100.0, 0.2], [100, 0], 5e-3)
    assert not spectrum_matches([1, 2], [1, 2, 3], 1e-9)
    assert not spectrum_matches([1j, -1j], [1, -1], 1e-3)


def test_durer_spectrum(durer):
    report = eigen_spectrum(durer)
    assert report.validated
    assert report.char_poly == [1, -34, -64, 2176, 0]
    assert (report.det, report.rank, report.zero_multiplicity) == (0, 3, 1)
    assert report.magic_eigenpair_ok
    assert spectrum_matches(report.eigenvalues, [34, 8, -8, 0], config.DURER_SPECTRUM_RTOL)
    assert report.eigenvalues[0] == pytest.approx(34)
    assert report.pairing is None


def test_durer_pairing(durer):
    report = eigen_spectrum(durer, witness=J4).pairing
    assert report.ok
    assert report.structural_ok and report.exact_symmetric
    assert len(report.pairs) == 1
    assert report.to_dict()['witness'] == "(4 3 2 1)"


def test_pairing_needs_a_witness(durer):
    with pytest.raises(NotAWitnessError):
        check_pairing(durer, K)
    with pytest.raises(OrderMismatchError):
        check_pairing(durer, PermMatrix.reverse(6))


def test_type_a_8_spectrum(named_perms):
    s = load_square('type_a_8')
    report = eigen_spectrum(s, witness=named_perms['mcpm_8'])
    assert report.validated
    assert report.det == 0
    assert spectrum_matches(report.eigenvalues, TYPE_A_8_SPECTRUM, config.DURER_SPECTRUM_RTOL)
    assert report.pairing.ok
    assert len(report.pairing.pairs) == 3


def test_type_a_8_eigenvectors(named_perms):
    s = load_square('type_a_8')
    p = named_perms['mcpm_8']
    x4, x3 = eigenvectors_for(s, [TYPE_A_8_EIGENVALUE, -TYPE_A_8_EIGENVALUE], side='left')
    np.testing.assert_allclose(x4.real, TYPE_A_8_X4, atol=PRINTED_VECTOR_ATOL)
    np.testing.assert_allclose(x3.real, TYPE_A_8_X3, atol=PRINTED_VECTOR_ATOL)
    assert np.linalg.norm(x3 - x4[p.index]) < config.EIGENVECTOR_RTOL

    a = s.m.to_float()
    lam = (x4 @ a)[0] / x4[0]
    assert lam.real == pytest.approx(TYPE_A_8_EIGENVALUE, abs=0.01)
    np.testing.assert_allclose(x4 @ a, lam * x4, atol=1e-8)


def test_right_eigenvectors_are_not_the_printed_ones():
    s = load_square('type_a_8')
    right, = eigenvectors_for(s, [TYPE_A_8_EIGENVALUE])
    assert not np.allclose(right.real, TYPE_A_8_X4, atol=PRINTED_VECTOR_ATOL)
    a = s.m.to_float()
    lam = (a @ right)[0] / right[0]
    np.testing.assert_allclose(a @ right, lam * right, atol=1e-8)


def test_eigenvector_side_is_checked(durer):
    with pytest.raises(ValueError, match="side"):
        eigenvectors_for(durer, [34], side='up')


def test_type_b_8_spectrum():
    s = load_square('type_b_8_left')
    report = eigen_spectrum(s)
    assert report.validated
    assert report.rank == 5
    assert report.zero_multiplicity == 3
    assert spectrum_matches(report.eigenvalues, TYPE_B_8_SPECTRUM, config.TYPE_B_SPECTRUM_RTOL)


def test_type_b_row_reduction(named_perms):
    s = load_square('type_b_8_left')
    reduced = type_b_row_reduction(s, PermMatrix.reverse(8), 'left')
    assert reduced == load_square('type_b_8_reduced').m
    assert rank_exact(reduced) == rank_exact(s.m) == 5

    s6 = load_square('type_b_6_right')
    reduced6 = type_b_row_reduction(s6, named_perms['mcpm_6'], 'right')
    assert rank_exact(reduced6) == rank_exact(s6.m) == 4


def test_row_reduction_rejects_non_witness(durer):
    with pytest.raises(NotAWitnessError):
        type_b_row_reduction(durer, L)
    with pytest.raises(ValueError):
        type_b_row_reduction(durer, L, side='up')


def test_z_spectrum_relation(durer):
    assert check_z_spectrum_relation(durer)
    assert check_z_spectrum_relation(load_square('type_a_8'))
    assert check_z_spectrum_relation(load_square('siamese_5'))


def test_magic_eigenpair(durer):
    assert check_magic_eigenpair(durer)
    assert check_magic_eigenpair(load_square('type_b_6_right'))


def test_spectrum_class():
    assert spectrum_class(PermMatrix.identity(4), "A") == 1
    assert spectrum_class(PermMatrix.identity(4), "JA") == 2
    assert spectrum_class(parse_one_line("(2 4 1 3)"), "A") == 2
    assert spectrum_class(parse_one_line("(2 4 1 3)"), "AJ") == 1


def test_family_spectra_of_durer(durer):
    report = family_spectra_check(durer)
    assert report.members == 32
    assert report.class_sizes == (16, 16)
    assert report.ok
    assert report.distinct_polynomials == 2
