#!/usr/bin/env python3
"""
Fixture verification suite.

Reproduces the worked examples, counts and identities that the library
is built around, one named check at a time. Run it directly or through
`magiclab.py verify`.
"""
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

import config
from census import (Census, census_classify, census_determinants, census_labels, enumerate_natural,
                    orbit_reduce)
from classify import (GROUP_C_LABEL, K, dudeney_diagram, dudeney_type, transformation_graph_check,
                      type_a_witnesses, type_b_witnesses, z_matrix)
from construct import Lcg64, random_type_a, random_type_b
from errors import FixtureError, MagicLabError, MatrixFormatError
from linalg import det_exact, rank_exact
from magic import Square, is_pandiagonal, is_semipandiagonal
from perms import (PermMatrix, all_permutations, classify_symmetry, count_bisymmetric, count_mcpm,
                   count_rot90, gen_bisymmetric, gen_mcpm, gen_rot90, is_mcpm, mcpm_conjugator)
from performance import PerformanceMonitor
from spectral import (check_pairing, eigen_spectrum, eigenvectors_for, family_spectra_check,
                      spectrum_matches, type_b_row_reduction)
from transforms import conjugate, dihedral_orbit, family, family_generators, gardner_check, rho, siamese_square
from utils import read_matrices, read_named_perms, read_square

logger = logging.getLogger(__name__)

RHO_TABLE = {3: 8, 4: 32, 5: 32, 6: 80, 7: 80, 8: 352, 9: 352, 10: 1248}
MCPM_COUNTS = {2: 1, 3: 1, 4: 3, 6: 15, 8: 105}
BRUTE_FORCE_MAX_ORDER = 6
# Dudeney types of the 7040 order-4 natural squares (each orientation counted)
DUDENEY_COUNTS_ORDER_4 = {
    "I": 384, "II": 384, "III": 384,
    "IV": 768, "V": 768, "VI'": 768, "VI''": 1664,
    "VII-X": 1792, "XI": 64, "XII": 64,
}

TYPE_A_8_SPECTRUM = (260, 0, 61.80, -61.80, 40.17j, -40.17j, 11.39j, -11.39j)
TYPE_B_8_SPECTRUM = (260, 0, 0, 0, -53.8553, 49.6710, 2.0921 + 43.6941j, 2.0921 - 43.6941j)
TYPE_A_8_EIGENVALUE = 61.80
# left eigenvectors (of Aᵀ), printed to three decimals
TYPE_A_8_X4 = (0.230, 0.717, -0.355, -0.342, 0.237, -0.020, -0.344, -0.123)
TYPE_A_8_X3 = (0.717, 0.230, -0.123, -0.020, -0.344, -0.342, 0.237, -0.355)
PRINTED_VECTOR_ATOL = 1e-3
# border swap, adjacent swap, their product in the written order and in reverse
BORDER_SWAP_RANKS = (106, 26, 76, 45)

ZERO_DET_LABELS = ("I", "II", "III", "IV", "V", "VI'", "VI''")
PROPERTY_SEED = 20110829
PROPERTY_ORDERS = (4, 6, 8)

CHECKS = (
    ('census_order_3', 'order-3 census: 8 matrices in 1 orbit'),
    ('census_order_4', 'order-4 census: 7040 matrices in 880 orbits'),
    ('census_types', 'order-4 Dudeney type histogram'),
    ('rho_table', 'family sizes 4(B(n) + R(n)) for n = 3..10'),
    ('mcpm_counts', 'MCPM counts and brute-force catalogs'),
    ('durer', "Durer's square: identities, images, conjugates, family"),
    ('pandiagonal', 'pandiagonal and semipandiagonal examples'),
    ('type_a_6', 'order-6 type A example'),
    ('type_a_8', 'order-8 type A example: witness, Z, spectrum, eigenvectors'),
    ('type_b_6', 'order-6 type B example: witness and rank'),
    ('type_b_8', 'order-8 type B example: witness, rank, spectrum, row reduction'),
    ('determinants', 'zero determinants of order-4 types I to VI'),
    ('transformation_graph', 'order-4 transformation graph over the census'),
    ('conjugator', 'MCPM conjugator on the order-6 example'),
    ('properties', 'identities on constructed type A and type B squares'),
    ('gardner', 'order-5 border swaps and their product'),
    ('diagrams', 'Dudeney diagrams of the order-4 and order-8 examples'),
)


def check_names() -> List[str]:
    return [name for name, _ in CHECKS]


class FixtureVerifier:
    def __init__(self, fixtures_dir=None, workers: Optional[int] = None):
        self.fixtures_dir = Path(fixtures_dir or config.FIXTURES_DIR)
        self.workers = workers
        self.errors: List[str] = []
        self.warnings: List[str] = []
        self.results: Dict[str, bool] = {}
        self.monitor = PerformanceMonitor()
        self._current: Optional[str] = None
        self._census: Dict[int, Census] = {}
        self._perms: Optional[Dict[str, PermMatrix]] = None

    def add_error(self, message, check=None):
        """Add an error message"""
        check = check or self._current
        error = f"ERROR: {message}"
        if check:
            error += f" (in {check})"
        self.errors.append(error)
        logger.error(error)

    def add_warning(self, message, check=None):
        """Add a warning message"""
        check = check or self._current
        warning = f"WARNING: {message}"
        if check:
            warning += f" (in {check})"
        self.warnings.append(warning)

    def require(self, condition: bool, message: str) -> bool:
        if not condition:
            self.add_error(message)
        return bool(condition)

    # fixtures

    def _path(self, name: str) -> Path:
        path = self.fixtures_dir / f"{name}.txt"
        if not path.exists():
            raise FixtureError(f"Missing fixture {path}")
        return path

    def square(self, name: str) -> Square:
        try:
            return read_square(self._path(name))
        except MatrixFormatError as e:
            raise FixtureError(f"Malformed fixture {name}: {e}") from e

    def matrices(self, name: str):
        try:
            return read_matrices(self._path(name))
        except MatrixFormatError as e:
            raise FixtureError(f"Malformed fixture {name}: {e}") from e

    def perm(self, name: str) -> PermMatrix:
        if self._perms is None:
            try:
                self._perms = read_named_perms(self._path('permutations'))
            except MatrixFormatError as e:
                raise FixtureError(f"Malformed permutation fixture: {e}") from e
        if name not in self._perms:
            raise FixtureError(f"Permutation {name!r} missing from the permutation fixture")
        return self._perms[name]

    def census(self, order: int) -> Census:
        if order not in self._census:
            self._census[order] = enumerate_natural(order, self.workers, self.monitor)
        return self._census[order]

    # checks

    def check_census_order_3(self):
        c = self.census(3)
        self.require(len(c) == 8, f"Order-3 census has {len(c)} matrices, expected 8")
        self.require(c.orbit_count == 1, f"Order-3 census has {c.orbit_count} orbits, expected 1")
        self.require(len(orbit_reduce(c)) == 1, "Order-3 orbit reduction does not give one representative")
        self.require(all(s.natural for s in c.matrices), "Order-3 census holds a non-natural matrix")

    def check_census_order_4(self):
        c = self.census(4)
        self.require(len(c) == 7040, f"Order-4 census has {len(c)} matrices, expected 7040")
        self.require(c.orbit_count == 880, f"Order-4 census has {c.orbit_count} orbits, expected 880")
        reps = orbit_reduce(c)
        self.require(len(reps) == 880, f"Order-4 orbit reduction gives {len(reps)} representatives")
        self.require(len(c) == 220 * rho(4), "Order-4 census is not a union of 220 families")

    def check_census_types(self):
        c = self.census(4)
        with self.monitor.stage('classify_4'):
            by_type = census_classify(c, self.workers)
        for label, expected in DUDENEY_COUNTS_ORDER_4.items():
            count = by_type.get(label, 0)
            self.require(count == expected, f"Type {label}: {count} matrices, expected {expected}")
        self.require(sum(by_type.values()) == len(c), "Type counts do not add up to the census size")
        print(f"  types: {by_type}")

    def check_rho_table(self):
        for n, expected in RHO_TABLE.items():
            self.require(rho(n) == expected, f"rho({n}) = {rho(n)}, expected {expected}")
            bis, rot = gen_bisymmetric(n), gen_rot90(n)
            self.require(len(bis) == count_bisymmetric(n), f"{len(bis)} bisymmetric matrices at order {n}, "
                                                           f"recurrence gives {count_bisymmetric(n)}")
            self.require(len(rot) == count_rot90(n), f"{len(rot)} quarter-turn matrices at order {n}, "
                                                     f"recurrence gives {count_rot90(n)}")
            self.require(len(set(bis)) == len(bis) and len(set(rot)) == len(rot),
                         f"Duplicate generated permutations at order {n}")
            self.require(all(classify_symmetry(p).bisymmetric for p in bis),
                         f"Non-bisymmetric matrix in the order-{n} catalog")
            self.require(all(classify_symmetry(p).rot90 for p in rot),
                         f"Non-quarter-turn matrix in the order-{n} catalog")
            self.require(8 * len(family_generators(n)) == expected,
                         f"Order {n}: {len(family_generators(n))} generators do not give {expected} members")

    def check_mcpm_counts(self):
        for n, expected in MCPM_COUNTS.items():
            catalog = gen_mcpm(n)
            self.require(count_mcpm(n) == expected, f"C({n}) = {count_mcpm(n)}, expected {expected}")
            self.require(len(catalog) == expected, f"{len(catalog)} MCPMs generated at order {n}, expected {expected}")
            self.require(all(is_mcpm(p) for p in catalog), f"Generated order-{n} catalog holds a non-MCPM")
        for n in range(2, BRUTE_FORCE_MAX_ORDER + 1):
            brute = {p for p in all_permutations(n) if is_mcpm(p)}
            self.require(brute == set(gen_mcpm(n)), f"Order-{n} MCPM catalog differs from brute force")

    def check_durer(self):
        a = self.square('durer')
        mu = a.require_magic()
        self.require(mu == 34, f"Durer's square has mu = {mu}, expected 34")
        arr = a.m.array
        self.require(bool(np.all(arr + PermMatrix.reverse(4).conjugate_array(arr) == 17)), "A + JAJ is not 17E")
        self.require(det_exact(a.m) == 0, f"det(A) = {det_exact(a.m)}, expected 0")
        self.require(dudeney_type(a).dudeney_label == "III", "Durer's square is not type III")

        images = self.matrices('durer_images')
        orbit = dihedral_orbit(a)
        self.require(len(images) == 8 and all(s.m == m for s, m in zip(orbit, images)),
                     "Dihedral images differ from the displayed eight")
        for perm_name, fixture in (('p3', 'durer_p3_conjugate'), ('l', 'durer_l_conjugate'),
                                   ('quarter_turn_4', 'durer_quarter_turn_conjugate')):
            result = conjugate(a, self.perm(perm_name))
            self.require(result.guaranteed and result.square.magic, f"Conjugate by {perm_name} is not guaranteed magic")
            self.require(result.square == self.square(fixture), f"Conjugate by {perm_name} differs from {fixture}")

        fam = family(a)
        self.require(len(fam) == 32 and fam.unique, f"Family has {len(fam)} members, expected 32")
        self.require(all(s.natural for s in fam.members), "Family holds a non-natural square")
        spectra = family_spectra_check(a)
        self.require(spectra.ok and spectra.class_sizes == (16, 16) and spectra.distinct_polynomials == 2,
                     f"Family spectra: classes {spectra.class_sizes}, {spectra.distinct_polynomials} polynomials")

    def check_pandiagonal(self):
        s = self.square('pandiagonal_4')
        self.require(is_pandiagonal(s), "Order-4 pandiagonal example is not pandiagonal")
        self.require(K in type_a_witnesses(s), "K is not a type A witness of the pandiagonal example")
        self.require(dudeney_type(s).dudeney_label == "I", "Pandiagonal example is not type I")
        image = conjugate(s, self.perm('k')).square
        self.require(image == self.square('pandiagonal_4_k_conjugate'), "K A K differs from the displayed square")
        self.require(image.magic, "K A K is not magic")

        half = self.square('semipandiagonal_6')
        self.require(half.mu == 120, f"Semipandiagonal example has mu = {half.mu}, expected 120")
        self.require(is_semipandiagonal(half) is True, "Order-6 example is not semipandiagonal")

    def check_type_a_6(self):
        s = self.square('type_a_6')
        p = self.perm('mcpm_6')
        self.require(s.mu == 120, f"Order-6 type A example has mu = {s.mu}, expected 120")
        self.require(p in type_a_witnesses(s), f"{p} is not a type A witness")
        self.require(det_exact(s.m) == 0, "Order-6 type A example is not singular")
        fam = family(s)
        self.require(len(fam) == rho(6) == 80, f"Order-6 family has {len(fam)} members, expected 80")

    def check_type_a_8(self):
        s = self.square('type_a_8')
        p = self.perm('mcpm_8')
        self.require(s.mu == 260, f"Order-8 type A example has mu = {s.mu}, expected 260")
        self.require(p in type_a_witnesses(s), f"{p} is not a type A witness")
        z = self.matrices('type_a_8_z')[0]
        self.require(z_matrix(s) == z, "Z differs from the displayed half-integer matrix")

        report = eigen_spectrum(s, witness=p)
        self.require(report.validated, "Eigenvalues failed validation against the characteristic polynomial")
        self.require(spectrum_matches(report.eigenvalues, TYPE_A_8_SPECTRUM, config.DURER_SPECTRUM_RTOL),
                     f"Spectrum {report.eigenvalues} differs from the printed one")
        self.require(report.pairing is not None and report.pairing.ok, "Z spectrum is not paired by the witness")

        x4, x3 = eigenvectors_for(s, [TYPE_A_8_EIGENVALUE, -TYPE_A_8_EIGENVALUE], side='left')
        self.require(np.allclose(x4.real, TYPE_A_8_X4, atol=PRINTED_VECTOR_ATOL), f"x4 = {np.round(x4.real, 3)}")
        self.require(np.allclose(x3.real, TYPE_A_8_X3, atol=PRINTED_VECTOR_ATOL), f"x3 = {np.round(x3.real, 3)}")
        residual = float(np.linalg.norm(x3 - x4[p.index]))
        self.require(residual < config.EIGENVECTOR_RTOL, f"x3 differs from P x4 by {residual:.3e}")

    def check_type_b_6(self):
        s = self.square('type_b_6_right')
        p = self.perm('mcpm_6')
        self.require(s.mu == 120, f"Order-6 type B example has mu = {s.mu}, expected 120")
        self.require((p, 'right') in type_b_witnesses(s), f"({p}, right) is not a type B witness")
        r = rank_exact(s.m)
        self.require(r == 4, f"Order-6 type B example has rank {r}, expected 4")

    def check_type_b_8(self):
        s = self.square('type_b_8_left')
        j = PermMatrix.reverse(8)
        self.require((j, 'left') in type_b_witnesses(s), "(J, left) is not a type B witness")
        r = rank_exact(s.m)
        self.require(r == 5, f"Order-8 type B example has rank {r}, expected 5")
        report = eigen_spectrum(s)
        self.require(report.validated, "Eigenvalues failed validation against the characteristic polynomial")
        self.require(spectrum_matches(report.eigenvalues, TYPE_B_8_SPECTRUM, config.TYPE_B_SPECTRUM_RTOL),
                     f"Spectrum {report.eigenvalues} differs from the printed one")
        reduced = type_b_row_reduction(s, j, 'left')
        self.require(reduced == self.square('type_b_8_reduced').m, "Row reduction differs from the displayed matrix")

    def check_determinants(self):
        c = self.census(4)
        labels = census_labels(c, self.workers)
        with self.monitor.stage('determinants_4'):
            histogram = census_determinants(c, self.workers)
        bad = [k for k, label in labels.items() if label in ZERO_DET_LABELS and c.determinants[k] != 0]
        self.require(not bad, f"{len(bad)} matrices of types I to VI have a nonzero determinant")
        nonzero_c = sum(1 for k, label in labels.items() if label == GROUP_C_LABEL and c.determinants[k] != 0)
        print(f"  distinct determinants: {len(histogram)}; group {GROUP_C_LABEL} nonsingular: {nonzero_c}")

    def check_transformation_graph(self):
        c = self.census(4)
        labels = census_labels(c, self.workers)
        with self.monitor.stage('graph_4'):
            report = transformation_graph_check(c.matrices, labels)
        for failure in report.failures:
            self.add_error(failure)
        self.require(report.conjugations_checked == 24 * len(c), "Not every conjugation was checked")

    def check_conjugator(self):
        p, p2, printed = self.perm('conjugation_source_6'), self.perm('conjugation_target_6'), self.perm('conjugator_6')
        q = mcpm_conjugator(p, p2)
        self.require(q.is_involution() and q @ p @ q == p2, f"Conjugator {q} does not carry {p} to {p2}")
        self.require(q == printed, f"Conjugator {q} differs from the displayed {printed}")
        self.require(printed @ p @ printed == p2, f"Displayed conjugator {printed} does not carry {p} to {p2}")

        a = self.square('type_a_6_conjugation_source')
        self.require(p in type_a_witnesses(a), f"{p} is not a type A witness of the source square")
        image = conjugate(a, printed).square
        self.require(image == self.square('type_a_6_conjugation_image'), "Q A Q differs from the displayed square")
        arr = image.m.array
        self.require(bool(np.all(arr + p2.conjugate_array(arr) == a.pair_sum)),
                     f"Q A Q does not satisfy the type A relation for {p2}")
        if not image.magic:
            self.add_warning(f"Q A Q is only semi-magic: {printed} is not bisymmetric")

    def check_properties(self):
        rng = Lcg64(PROPERTY_SEED)
        cases = config.VERIFY_PROPERTY_CASES
        for k in range(cases):
            n = PROPERTY_ORDERS[k % len(PROPERTY_ORDERS)]
            p = rng.choice(gen_mcpm(n))
            mu = n * rng.randint(1, 40)
            a = random_type_a(n, p, mu, rng.next())
            pairing = check_pairing(a, p)
            if not self.require(pairing.exact_symmetric, f"Z spectrum of a type A square for {p} is not symmetric"):
                return
            if not self.require(det_exact(a.m) == 0, f"Constructed type A square for {p} is nonsingular"):
                return
            q = rng.choice(gen_bisymmetric(n))
            moved = conjugate(a, q).square.m.array
            qpq = q @ p @ q
            if not self.require(bool(np.all(moved + qpq.conjugate_array(moved) == a.pair_sum)),
                                f"Conjugation by {q} does not carry the witness {p} to {qpq}"):
                return

            side = ('left', 'right')[rng.randint(0, 1)]
            b = random_type_b(n, p, side, mu, rng.next())
            if not self.require((p, side) in type_b_witnesses(b), f"({p}, {side}) lost by construction"):
                return
            if not self.require(rank_exact(b.m) <= n // 2 + 1 and det_exact(b.m) == 0,
                                f"Type B square for ({p}, {side}) has rank {rank_exact(b.m)}"):
                return
        print(f"  {cases} constructed squares")

    def check_gardner(self):
        s = self.square('siamese_5')
        self.require(s == siamese_square(5), "Order-5 fixture differs from the staircase square")
        report = gardner_check(s)
        self.require(report.both_bisymmetric, "Border swaps are not both bisymmetric")
        self.require(report.border_swap_matches and report.adjacent_swap_matches,
                     "Border swaps do not act as the described row and column exchanges")
        self.require(report.product_rot90 and report.reverse_product_rot90, "Border-swap product is not quarter-turn")
        self.require(report.composite_matches, "Composite transform differs from conjugation by the product")
        self.require(report.display_matches == "reverse_product", f"Displayed product matches {report.display_matches}")
        ranks = (report.border_rank, report.adjacent_rank, report.product_rank, report.reverse_product_rank)
        self.require(ranks == BORDER_SWAP_RANKS, f"Border-swap ranks {ranks}, expected {BORDER_SWAP_RANKS}")
        print(f"  ranks: border {report.border_rank}, adjacent {report.adjacent_rank}, "
              f"product {report.product_rank}, reverse {report.reverse_product_rank}")
        for d in report.discrepancies:
            self.add_warning(d)

    def check_diagrams(self):
        s = self.square('type_a_8')
        p = self.perm('mcpm_8')
        d = dudeney_diagram(s)
        self.require(d.complete and len(d.pairs) == 32, f"Order-8 diagram has {len(d.pairs)} pairs")
        arr = s.m.array
        self.require(all(arr[r1 - 1, c1 - 1] + arr[r2 - 1, c2 - 1] == 65 for r1, c1, r2, c2 in d.pairs),
                     "Order-8 diagram pairs do not add to 65")
        expected = set()
        for i in range(1, 9):
            for j in range(1, 9):
                a, b = (i, j), (p(i), p(j))
                expected.add((*min(a, b), *max(a, b)))
        self.require(set(d.pairs) == expected, "Order-8 diagram is not the matching of the witness")

        durer = dudeney_diagram(self.square('durer'))
        self.require(durer.complete and len(durer.pairs) == 8 and durer.pair_sum == 17,
                     f"Durer diagram has {len(durer.pairs)} pairs with sum {durer.pair_sum}")

    def run_checks(self, only: Optional[Sequence[str]] = None) -> bool:
        """Run the named checks (all when None) and print the results"""
        names = list(only) if only else check_names()
        unknown = [n for n in names if n not in check_names()]
        if unknown:
            raise ValueError(f"Unknown checks: {', '.join(unknown)}")
        descriptions = dict(CHECKS)

        print("Starting fixture verification...")
        print("=" * 60)
        for name in names:
            print(f"Checking {descriptions[name]}...")
            self._current = name
            before = len(self.errors)
            try:
                getattr(self, f"check_{name}")()
            except MagicLabError as e:
                self.add_error(str(e))
            except (ValueError, ArithmeticError, np.linalg.LinAlgError) as e:
                self.add_error(f"{type(e).__name__}: {e}")
            passed = len(self.errors) == before
            self.results[name] = passed
            print(f"  {'PASS' if passed else 'FAIL'} {name}")
        self._current = None

        print("\n" + "=" * 60)
        print("VERIFICATION RESULTS")
        print("=" * 60)

        if self.errors:
            print(f"\nERRORS ({len(self.errors)}):")
            for error in self.errors:
                print(f"  {error}")

        if self.warnings:
            print(f"\nWARNINGS ({len(self.warnings)}):")
            for warning in self.warnings:
                print(f"  {warning}")

        passed = sum(self.results.values())
        print(f"\n{passed}/{len(names)} checks passed")
        self.monitor.log_summary()
        return not self.errors


def main():
    """Main function"""
    logging.basicConfig(format=config.LOG_FORMAT, level=getattr(logging, config.LOG_LEVEL, logging.INFO))
    verifier = FixtureVerifier()
    success = verifier.run_checks()

    if success:
        print("\nFixture verification completed successfully!")
        return 0
    else:
        print("\nFixture verification found failing checks")
        return 1


if __name__ == '__main__':
    sys.exit(main())
