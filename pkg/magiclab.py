#!/usr/bin/env python3
"""
Command line front end.

    magiclab.py classify FILE [--json] [--no-diagram]
    magiclab.py enumerate --order N [--out FILE] [--orbits] [--i-know-this-is-huge]
    magiclab.py family FILE [--json | --count-only]
    magiclab.py perms --order N [--kind all|bisymmetric|rot90|mcpm]
    magiclab.py spectrum FILE [--json] [--witness PERM] [--tol TOL]
    magiclab.py make --type a|b --order N --mcpm RANK|PERM --mu MU --seed SEED [--side left|right]
    magiclab.py diagram FILE
    magiclab.py verify [--list] [--only NAME ...] [--fixtures DIR]

FILE is a matrix text file, or '-' for standard input. Results go to
stdout and logs to stderr. Exit codes: 0 success, 1 domain error or
failed verification, 2 usage error.
"""
import argparse
import json
import logging
import sys
from typing import List, Optional

import config
from census import count_natural, enumerate_natural, write_census_csv
from classify import classify, diagram_to_dot, dudeney_diagram, type_a_witnesses
from construct import random_type_a, random_type_b
from errors import MagicLabError, NotMagicError, UnsupportedOrderError
from magic import Square
from perms import PermMatrix, all_permutations, classify_symmetry, gen_bisymmetric, gen_mcpm, gen_rot90, parse_one_line, perm_from_rank
from performance import PerformanceMonitor
from spectral import eigen_spectrum, format_eigenvalue
from transforms import family
from utils import format_matrices, format_matrix, read_matrices, read_square, validate_square
from verify_suite import CHECKS, FixtureVerifier, check_names

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

PERM_CATALOG_MAX_ORDER = 8


def _squares(path) -> List[Square]:
    out = []
    for m in read_matrices(path):
        is_valid, message = validate_square(m)
        if not is_valid:
            raise NotMagicError(message)
        out.append(Square(m))
    return out


def _parse_perm(text: str, n: int) -> PermMatrix:
    """A standard rank or a one-line permutation of order n"""
    text = text.strip()
    p = perm_from_rank(n, int(text)) if text.isdigit() else parse_one_line(text)
    if p.n != n:
        raise UnsupportedOrderError(f"Permutation {p} has order {p.n}, expected {n}")
    return p


def _print_classification(c):
    print(f"order: {c.order}")
    print(f"mu: {c.mu}")
    print("flags: " + ' '.join(k for k, v in c.flags.items() if v) if c.flags else "flags:")
    print(f"trigg group: {c.trigg_group}")
    if c.dudeney_label is not None:
        print(f"dudeney label: {c.dudeney_label}")
    for w in c.witnesses:
        partner = f" with {w.partner}" if w.partner is not None else ""
        print(f"witness: {w.perm} {w.relation} on {w.image}{partner}")
    if c.diagram is not None:
        state = "complete" if c.diagram.complete else "partial"
        print(f"diagram: {len(c.diagram.pairs)} pairs adding to {c.diagram.pair_sum} ({state})")


def cmd_classify(args) -> int:
    results = [classify(s, with_diagram=not args.no_diagram) for s in _squares(args.file)]
    if args.json:
        payload = [r.to_dict() for r in results]
        print(json.dumps(payload[0] if len(payload) == 1 else payload, indent=2))
        return EXIT_OK
    for k, r in enumerate(results):
        if k:
            print()
        _print_classification(r)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.order in config.STREAMING_ORDERS:
        if not args.i_know_this_is_huge:
            print(f"Order {args.order} has billions of squares; pass --i-know-this-is-huge to count them",
                  file=sys.stderr)
            return EXIT_USAGE
        print(count_natural(args.order, args.workers))
        return EXIT_OK

    monitor = PerformanceMonitor()
    census = enumerate_natural(args.order, args.workers, monitor)
    with monitor.stage('write_csv'):
        if args.out:
            with open(args.out, 'w', encoding='utf-8', newline='') as f:
                write_census_csv(census, f, orbits_only=args.orbits)
            logger.info(f"Census written to {args.out}")
        else:
            write_census_csv(census, sys.stdout, orbits_only=args.orbits)
    monitor.log_summary()
    return EXIT_OK


def cmd_family(args) -> int:
    fam = family(read_square(args.file))
    if args.count_only:
        print(len(fam))
    elif args.json:
        print(json.dumps([[list(row) for row in s.m.rows()] for s in fam.members]))
    else:
        sys.stdout.write(format_matrices(fam.members))
    return EXIT_OK


def cmd_perms(args) -> int:
    n = args.order
    if args.kind == 'all':
        if n > PERM_CATALOG_MAX_ORDER:
            raise UnsupportedOrderError(f"Full catalog is limited to order {PERM_CATALOG_MAX_ORDER}, got {n}")
        catalog = list(all_permutations(n))
    else:
        catalog = {'bisymmetric': gen_bisymmetric, 'rot90': gen_rot90, 'mcpm': gen_mcpm}[args.kind](n)
        catalog = sorted(catalog, key=lambda p: p.rank())
    print("rank,one_line,flags")
    for p in catalog:
        print(f"{p.rank()},{p.one_line()},{'|'.join(classify_symmetry(p).names())}")
    return EXIT_OK


def cmd_spectrum(args) -> int:
    s = read_square(args.file)
    s.require_magic()
    witness = None
    if args.witness:
        witness = _parse_perm(args.witness, s.n)
    elif s.n % 2 == 0:
        found = type_a_witnesses(s)
        witness = found[0] if found else None
    report = eigen_spectrum(s, tol=args.tol, witness=witness)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
        return EXIT_OK

    print(f"mu: {report.mu}")
    print("eigenvalues: " + ', '.join(format_eigenvalue(z) for z in report.eigenvalues))
    print(f"char poly: {' '.join(str(c) for c in report.char_poly)}")
    print(f"det: {report.det}")
    print(f"rank: {report.rank}")
    print(f"validated: {report.validated}")
    if report.pairing is not None:
        pairing = report.pairing
        print(f"pairing witness: {pairing.witness} ({'ok' if pairing.ok else 'FAILED'})")
        for i, j in pairing.pairs:
            print(f"  {format_eigenvalue(pairing.eigenvalues[i])}  <->  {format_eigenvalue(pairing.eigenvalues[j])}")
        print(f"  max transport residual: {pairing.max_residual:.3e}")
    return EXIT_OK


def cmd_make(args) -> int:
    p = _parse_perm(args.mcpm, args.order)
    if args.type == 'a':
        s = random_type_a(args.order, p, args.mu, args.seed, args.bound)
    else:
        s = random_type_b(args.order, p, args.side, args.mu, args.seed, args.bound)
    sys.stdout.write(format_matrix(s))
    return EXIT_OK


def cmd_diagram(args) -> int:
    sys.stdout.write(diagram_to_dot(dudeney_diagram(read_square(args.file))))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.list:
        for name, description in CHECKS:
            print(f"{name}\t{description}")
        return EXIT_OK
    unknown = [n for n in args.only or [] if n not in check_names()]
    if unknown:
        print(f"Unknown checks: {', '.join(unknown)}", file=sys.stderr)
        return EXIT_USAGE
    verifier = FixtureVerifier(args.fixtures, workers=args.workers)
    return EXIT_OK if verifier.run_checks(args.only) else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='magiclab', description='Exact magic-square analysis')
    parser.add_argument('--log-level', default=config.LOG_LEVEL,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'], help='stderr log level')
    sub = parser.add_subparsers(dest='command', required=True)

    p = sub.add_parser('classify', help='flags, Trigg group, Dudeney label and witnesses')
    p.add_argument('file')
    p.add_argument('--json', action='store_true')
    p.add_argument('--no-diagram', action='store_true')
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser('enumerate', help='census of natural magic squares as CSV')
    p.add_argument('--order', type=int, required=True, choices=config.CENSUS_ORDERS + config.STREAMING_ORDERS)
    p.add_argument('--out')
    p.add_argument('--orbits', action='store_true', help='one representative per dihedral orbit')
    p.add_argument('--i-know-this-is-huge', action='store_true', help='allow the order-5 streaming count')
    p.add_argument('--workers', type=int)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser('family', help='family of transformations of a square')
    p.add_argument('file')
    group = p.add_mutually_exclusive_group()
    group.add_argument('--json', action='store_true')
    group.add_argument('--count-only', action='store_true')
    p.set_defaults(func=cmd_family)

    p = sub.add_parser('perms', help='permutation catalog as CSV')
    p.add_argument('--order', type=int, required=True)
    p.add_argument('--kind', default='all', choices=['all', 'bisymmetric', 'rot90', 'mcpm'])
    p.set_defaults(func=cmd_perms)

    p = sub.add_parser('spectrum', help='eigenvalues, determinant, rank and pairing')
    p.add_argument('file')
    p.add_argument('--json', action='store_true')
    p.add_argument('--witness', help='type A witness as a rank or one-line permutation')
    p.add_argument('--tol', type=float, default=config.EIGEN_TOL)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser('make', help='random square with a type A or type B witness')
    p.add_argument('--type', required=True, choices=['a', 'b'])
    p.add_argument('--order', type=int, required=True)
    p.add_argument('--mcpm', required=True, help='standard rank or one-line permutation')
    p.add_argument('--side', default='left', choices=['left', 'right'])
    p.add_argument('--mu', type=int, required=True)
    p.add_argument('--seed', type=int, required=True)
    p.add_argument('--bound', type=int, default=config.COEFF_BOUND)
    p.set_defaults(func=cmd_make)

    p = sub.add_parser('diagram', help='Dudeney diagram as DOT')
    p.add_argument('file')
    p.set_defaults(func=cmd_diagram)

    p = sub.add_parser('verify', help='run the fixture verification suite')
    p.add_argument('--list', action='store_true')
    p.add_argument('--only', nargs='+', metavar='NAME')
    p.add_argument('--fixtures', help='alternate fixture directory')
    p.add_argument('--workers', type=int)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    logging.basicConfig(
        format=config.LOG_FORMAT,
        level=getattr(logging, args.log_level, logging.INFO),
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except MagicLabError as e:
        logger.error(f"{args.command} failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())
