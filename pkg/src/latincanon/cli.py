"""Canonical forms and random sampling for Latin squares, Steiner triple systems and 1-factorisations.

Exit codes: 0 for success or "same class", 1 for "different class", 2 for
usage and input errors.  Every file argument may be ``-`` for stdin.
"""

from __future__ import annotations

import argparse
import sys

from . import canonical, cycles, latin_core, onefact, oracle, sampler, steiner

EXIT_SAME = 0
EXIT_DIFFERENT = 1
EXIT_ERROR = 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None


def _load(path: str, parser):
    text = _read(path)
    try:
        return parser(text)
    except (ValueError, latin_core.LatinError) as e:
        raise InputError(f"{path}: {e}") from None


def _square(path: str) -> latin_core.LatinSquare:
    return _load(path, latin_core.parse)


def _perm_line(p: latin_core.PartialPermutation) -> str:
    return " ".join(str(x) for x in p.image)


def cmd_canon(args) -> int:
    L = _square(args.file)
    res = canonical.canonical_labelling(L)
    sys.stdout.write(latin_core.serialize(res.form))
    if args.labelling:
        lab = res.labelling
        for name, p in (("alpha", lab.alpha), ("beta", lab.beta), ("gamma", lab.gamma)):
            print(f"{name}: {_perm_line(p)}")
    return 0


def cmd_isotopic(args) -> int:
    A, B = _square(args.a), _square(args.b)
    if A.n != B.n:
        return EXIT_DIFFERENT
    return EXIT_SAME if canonical.same_isotopism_class(A, B) else EXIT_DIFFERENT


def cmd_species(args) -> int:
    L = _square(args.file)
    sys.stdout.write(latin_core.serialize(canonical.species_canonical(L)))
    return 0


def _sts_square(path: str) -> latin_core.LatinSquare:
    return steiner.sts_to_quasigroup(_load(path, steiner.parse_blocks))


def cmd_sts_canon(args) -> int:
    S = _sts_square(args.file)
    if args.lifted:
        form = steiner.canonical_sts_lifted(S)
    else:
        form = steiner.canonical_sts(S).form
    sys.stdout.write(steiner.serialize_blocks(steiner.quasigroup_to_sts(form)))
    return 0


def cmd_sts_isomorphic(args) -> int:
    A = _load(args.a, steiner.parse_blocks)
    B = _load(args.b, steiner.parse_blocks)
    return EXIT_SAME if steiner.sts_isomorphic(A, B) else EXIT_DIFFERENT


def cmd_of_canon(args) -> int:
    F = _load(args.file, onefact.parse_factors)
    if args.root is not None:
        if not 1 <= args.root <= F.v:
            raise InputError(f"root {args.root} is not a vertex of K_{F.v}")
        sys.stdout.write(latin_core.serialize(onefact.rooted_1f_canonical(F, args.root)))
        return 0
    form = onefact.canonical_1f(onefact.of_to_unipotent(F)).form
    sys.stdout.write(onefact.serialize_factors(onefact.unipotent_to_of(form)))
    return 0


def cmd_of_isomorphic(args) -> int:
    A = _load(args.a, onefact.parse_factors)
    B = _load(args.b, onefact.parse_factors)
    if A.v != B.v:
        return EXIT_DIFFERENT
    return EXIT_SAME if onefact.same_class_1f(A, B) else EXIT_DIFFERENT


def cmd_sample(args) -> int:
    chain = sampler.JMChain(args.order, args.seed, burn_in=args.burn_in, spacing=args.spacing)
    for k in range(args.count):
        if k and not args.compact:
            print()
        L = chain.sample()
        sys.stdout.write(latin_core.compact(L) + "\n" if args.compact else latin_core.serialize(L))
    return 0


def cmd_stats(args) -> int:
    st = sampler.h_statistics(args.order, args.samples, args.seed, chains=args.chains,
                              jobs=args.jobs, burn_in=args.burn_in, spacing=args.spacing)
    if args.keyvalue:
        print(st.keyvalues())
    else:
        print(st.header())
        print(st.row())
    return 0


def cmd_cycles(args) -> int:
    L = _square(args.file)
    if L.n < 2:
        raise InputError(f"{args.file}: need order >= 2")
    table = cycles.cycle_length_table(L)
    for (i, j), gam in table.gammas.items():
        print(f"{i} {j}: {' '.join(map(str, gam))}")
    print(f"max: {' '.join(map(str, table.max_gamma))}")
    print(f"hamiltonian: {cycles.hamiltonian_count(L)}")
    return 0


def cmd_subsquares(args) -> int:
    L = _square(args.file)
    if L.n < 2:
        raise InputError(f"{args.file}: need order >= 2")
    rep = oracle.enumerate_subsquares(L)
    for S in rep.subsquares:
        print(f"order {S.order}: rows {sorted(S.rows)} cols {sorted(S.cols)} symbols {sorted(S.symbols)}")
    print(f"largest_proper: {rep.largest_proper}")
    return 0


def cmd_probe(args) -> int:
    rep = oracle.longest_cycle_vs_subsquare(args.order, args.samples, args.seed,
                                            chains=args.chains, jobs=args.jobs)
    print(rep.text())
    return 0


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latincanon", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True, metavar="VERB")

    s = sub.add_parser("canon", help="canonical form up to isotopism")
    s.add_argument("file")
    s.add_argument("--labelling", action="store_true", help="also print alpha, beta, gamma")
    s.set_defaults(func=cmd_canon)

    s = sub.add_parser("isotopic", help="exit 0 if the squares are isotopic, 1 if not")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_isotopic)

    s = sub.add_parser("species", help="least canonical form over the six conjugates")
    s.add_argument("file")
    s.set_defaults(func=cmd_species)

    s = sub.add_parser("sts-canon", help="canonical Steiner triple system")
    s.add_argument("file")
    s.add_argument("--lifted", action="store_true", help="use the symbol labelling of the isotopism form")
    s.set_defaults(func=cmd_sts_canon)

    s = sub.add_parser("sts-isomorphic", help="exit 0 if the systems are isomorphic, 1 if not")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_sts_isomorphic)

    s = sub.add_parser("of-canon", help="canonical 1-factorisation")
    s.add_argument("file")
    s.add_argument("--root", type=int, help="canonical form of the factorisation rooted at this vertex")
    s.set_defaults(func=cmd_of_canon)

    s = sub.add_parser("of-isomorphic", help="exit 0 if the factorisations are isomorphic, 1 if not")
    s.add_argument("a")
    s.add_argument("b")
    s.set_defaults(func=cmd_of_isomorphic)

    def chain_opts(s, samples_flag: bool):
        s.add_argument("--order", type=_positive, required=True)
        s.add_argument("--seed", type=int, required=True)
        if samples_flag:
            s.add_argument("--samples", type=_positive, required=True)

    s = sub.add_parser("sample", help="random squares from the Jacobson-Matthews chain")
    chain_opts(s, False)
    s.add_argument("--count", type=_positive, default=1)
    s.add_argument("--burn-in", type=int)
    s.add_argument("--spacing", type=int)
    s.add_argument("--compact", action="store_true")
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("stats", help="statistics of the Hamiltonian row cycle count H")
    chain_opts(s, True)
    s.add_argument("--chains", type=_positive, default=1, help="independent chains (changes the samples)")
    s.add_argument("--jobs", type=_positive, default=1, help="chains run at once (never changes output)")
    s.add_argument("--burn-in", type=int)
    s.add_argument("--spacing", type=int)
    s.add_argument("--keyvalue", action="store_true", help="key=value lines instead of a table")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("cycles", help="row cycle structure of every row pair")
    s.add_argument("file")
    s.set_defaults(func=cmd_cycles)

    s = sub.add_parser("subsquares", help="proper subsquares from 2x2 seed closures")
    s.add_argument("file")
    s.set_defaults(func=cmd_subsquares)

    s = sub.add_parser("probe", help="longest row cycle against largest proper subsquare")
    chain_opts(s, True)
    s.add_argument("--chains", type=_positive, default=1)
    s.add_argument("--jobs", type=_positive, default=1)
    s.set_defaults(func=cmd_probe)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else 0
    try:
        return args.func(args)
    except InputError as e:
        print(f"latincanon: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, latin_core.LatinError) as e:
        print(f"latincanon: error: {e}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
