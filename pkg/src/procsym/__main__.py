#!/usr/bin/env python

import argparse
from argparse import BooleanOptionalAction
import logging
import sys
import time
from pathlib import Path
from typing import Any, TextIO

from .core.automata import build_nfa_pair, build_pa_pair
from .core.algebra import parse_rational
from .core.config_schema import apply_config_file, validate_config
from .core.constants import (
    DEFAULT_CONFIG_PATH,
    DEFAULT_FRONTIER_CAP,
    DEFAULT_REPORT_FORMAT,
    DEFAULT_SEED,
    DEFAULT_SYMBOLIC_MAX_K,
    DEFAULT_TRIALS,
    EXIT_CODE_NOT_SYMMETRIC,
    EXIT_CODE_SYMMETRIC,
    EXIT_CODE_USAGE,
    REPORT_FORMATS,
)
from .core.exceptions import ProcsymError, StateExplosionError, ValidationError
from .core.fixtures import (
    gen_random_transducer,
    gen_round_robin,
    gen_symmetric_pair_fixtures,
    reduce_nfa_to_transducer,
    reduce_pa_to_transducer,
)
from .core.logging_config import LEVELS, LOG_FORMATS, configure_logging
from .core.model import (
    GeneratorSet,
    identity,
    Transducer,
    parse_generators,
    parse_permutation,
    sk_generators,
)
from .core.model_format import dump_nfa, dump_pa, load_model, load_nfa, load_pa, serialize_model
from .core.report import ReportWriter, read_records, verdict_from_record
from .core.symmetry import (
    CHECK_KINDS,
    Outcome,
    SymmetryVerdict,
    check,
    check_full_sk,
    check_group,
    default_parikh_mode,
    falsify_linf,
    falsify_linf_group,
    replay,
)


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-c', '--config', type=str, default=DEFAULT_CONFIG_PATH,
                        help=f'The path to the config file. Default is {DEFAULT_CONFIG_PATH}')
    common.add_argument('-v', '--verbose', default=False, action='store_true',
                        help='Be verbose while running.')
    common.add_argument('--log-level', type=str, choices=list(LEVELS), default='WARNING',
                        help='Logging level (default: WARNING). Overridden by --verbose.')
    common.add_argument('--log-format', type=str, choices=list(LOG_FORMATS), default='text',
                        help='Logging format: text or json (default: text).')
    common.add_argument('--report-format', type=str, choices=list(REPORT_FORMATS),
                        default=DEFAULT_REPORT_FORMAT,
                        help='Report format on stdout: jsonl or text (default: jsonl).')
    common.add_argument('-o', '--output', type=str,
                        help='Write the report (or generated model) to this file instead of stdout.')
    common.add_argument('--seed', type=int, default=DEFAULT_SEED,
                        help=f'Seed for randomized checks and generators. Default is {DEFAULT_SEED}')
    common.add_argument('--trials', type=int, default=DEFAULT_TRIALS,
                        help=f'Random points per randomized Parikh check. Default is {DEFAULT_TRIALS}')
    common.add_argument('--symbolic-max-k', dest='symbolic_max_k', type=int,
                        default=DEFAULT_SYMBOLIC_MAX_K,
                        help='Largest k for which Parikh-distribution checks default to symbolic mode.')
    common.add_argument('--frontier-cap', dest='frontier_cap', type=int, default=DEFAULT_FRONTIER_CAP,
                        help='Abort forward expansion beyond this many (state, output) entries.')
    common.add_argument('--verify', action=BooleanOptionalAction, default=True,
                        help='Replay every counterexample by forward simulation before reporting.')
    common.add_argument('--timing', default=False, action='store_true',
                        help='Append a wall-time record to the report.')
    return common


def _permutation_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument('--perm', action='append', metavar='CYCLES',
                       help='Permutation in cycle notation, e.g. "(1 2 3)". Repeat to give several generators.')
    group.add_argument('--group', metavar='CYCLES,...',
                       help='Generator set, e.g. "(1 2),(1 2 3)".')
    group.add_argument('--full-sk', dest='full_sk', action='store_true',
                       help='All permutations of the k processes.')


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog='procsym',
        description='Symmetry checking for probabilistic I/O transducers',
        epilog='Common options (logging, report, seed) go after the subcommand.')
    sub = parser.add_subparsers(dest='command', required=True)

    p_check = sub.add_parser('check', parents=[common], help='Decide a symmetry notion.')
    p_check.add_argument('kind', choices=[str(k) for k in CHECK_KINDS])
    p_check.add_argument('--model', required=True, help='Transducer model file.')
    _permutation_options(p_check)
    p_check.add_argument('--mode', choices=['symbolic', 'randomized'],
                         help='Parikh-distribution engine mode (default depends on k).')

    p_falsify = sub.add_parser('falsify', parents=[common],
                               help='Bounded search for approximate-symmetry violations.')
    p_falsify.add_argument('--model', required=True)
    _permutation_options(p_falsify)
    p_falsify.add_argument('--epsilon', required=True, metavar='P/Q')
    p_falsify.add_argument('--max-len', dest='max_len', type=int, required=True)

    p_gen = sub.add_parser('gen', help='Generate fixture models.')
    gen_sub = p_gen.add_subparsers(dest='generator', required=True)
    g_rr = gen_sub.add_parser('round-robin', parents=[common])
    g_rr.add_argument('--k', type=int, required=True)
    g_rr.add_argument('--init', default='uniform', metavar='uniform|det:J')
    g_rand = gen_sub.add_parser('random', parents=[common])
    g_rand.add_argument('--states', type=int, required=True)
    g_rand.add_argument('--k', type=int, required=True)
    g_rand.add_argument('--denominator-bound', dest='denominator_bound', type=int, default=4)
    g_pa = gen_sub.add_parser('reduce-pa', parents=[common])
    g_pa.add_argument('file')
    g_pa.add_argument('--lambda', dest='lam', required=True, metavar='P/Q')
    g_nfa = gen_sub.add_parser('reduce-nfa', parents=[common])
    g_nfa.add_argument('file')
    g_fix = gen_sub.add_parser('hierarchy-fixtures', parents=[common])
    g_fix.add_argument('--out-dir', dest='out_dir', required=True)

    p_verify = sub.add_parser('verify', parents=[common],
                              help='Replay every counterexample of a saved report.')
    p_verify.add_argument('--model', required=True)
    p_verify.add_argument('--report', required=True)

    p_dump = sub.add_parser('dump', parents=[common], help='Print the automaton pair of a check.')
    p_dump.add_argument('--model', required=True)
    p_dump.add_argument('--perm', required=True, metavar='CYCLES')
    p_dump.add_argument('--kind', choices=['exact', 'qualitative'], default='exact')

    return parser.parse_args(argv)


def _rational(text: str, name: str):
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"{name}: {exc}") from None


def _generators(args: argparse.Namespace, t: Transducer) -> GeneratorSet | None:
    if args.full_sk:
        return None
    if args.group:
        return parse_generators(args.group, t.k)
    return GeneratorSet(tuple(parse_permutation(p, t.k) for p in args.perm))


def _replay_all(t: Transducer, verdict: SymmetryVerdict) -> None:
    for sub in verdict.sub_verdicts:
        replay(t, sub)
    replay(t, verdict)


def _exit_code(verdict: SymmetryVerdict) -> int:
    return EXIT_CODE_NOT_SYMMETRIC if verdict.result is Outcome.NOT_SYMMETRIC else EXIT_CODE_SYMMETRIC


def cmd_check(args: argparse.Namespace, out: TextIO) -> int:
    t = load_model(args.model)
    mode = None
    if args.kind == 'parikh-dist':
        mode = args.mode or default_parikh_mode(t.k, args.symbolic_max_k)
    options: dict[str, Any] = {'mode': mode, 'seed': args.seed, 'trials': args.trials}
    start = time.perf_counter()
    gens = _generators(args, t)
    if gens is None:
        verdict = check_full_sk(t, args.kind, **options)
    elif len(gens) == 1 and args.perm:
        verdict = check(t, gens.perms[0], args.kind, **options)
    else:
        verdict = check_group(t, gens, args.kind, **options)
    if args.verify:
        _replay_all(t, verdict)
    writer = ReportWriter(out, args.report_format, timing=args.timing)
    header: dict[str, Any] = {'model': args.model, 'k': t.k, 'kind': args.kind}
    if mode is not None:
        header['mode'] = mode
        if mode == 'randomized':
            header.update(seed=args.seed, trials=args.trials)
    writer.header('check', **header)
    writer.verdict(verdict, t.k)
    writer.timing(time.perf_counter() - start)
    return _exit_code(verdict)


def cmd_falsify(args: argparse.Namespace, out: TextIO) -> int:
    epsilon = _rational(args.epsilon, 'epsilon')
    t = load_model(args.model)
    start = time.perf_counter()
    gens = _generators(args, t)
    if gens is None:
        gens = sk_generators(t.k) if t.k >= 2 else GeneratorSet((identity(t.k),))
    if len(gens) == 1 and args.perm:
        verdict = falsify_linf(t, gens.perms[0], epsilon, args.max_len, args.frontier_cap)
    else:
        verdict = falsify_linf_group(t, gens, epsilon, args.max_len, args.frontier_cap)
    if args.verify:
        replay(t, verdict)
    writer = ReportWriter(out, args.report_format, timing=args.timing)
    writer.header('falsify', model=args.model, k=t.k, epsilon=epsilon, max_len=args.max_len)
    writer.verdict(verdict, t.k)
    writer.timing(time.perf_counter() - start)
    return _exit_code(verdict)


def _write_model(t: Transducer, comment: str, args: argparse.Namespace, out: TextIO) -> None:
    text = serialize_model(t, comment)
    if args.output:
        Path(args.output).write_text(text, encoding='utf-8')
    else:
        out.write(text)


def cmd_gen(args: argparse.Namespace, out: TextIO) -> int:
    if args.generator == 'round-robin':
        init: str | int = args.init
        if isinstance(init, str) and init.startswith('det:'):
            index = init[4:]
            if not index.isdigit():
                raise ValidationError(f"bad --init {args.init!r}; expected uniform or det:J")
            init = int(index)
        t = gen_round_robin(args.k, init)
        _write_model(t, f"round-robin arbiter, k={args.k}, init={args.init}", args, out)
    elif args.generator == 'random':
        t = gen_random_transducer(args.seed, args.states, args.k, args.denominator_bound)
        _write_model(
            t,
            f"random transducer, seed={args.seed}, states={args.states}, k={args.k}, "
            f"denominator bound={args.denominator_bound}",
            args,
            out,
        )
    elif args.generator == 'reduce-pa':
        lam = _rational(args.lam, 'lambda')
        t, pi, eps = reduce_pa_to_transducer(load_pa(args.file), lam)
        _write_model(
            t,
            f"reduction of {Path(args.file).name}: ({eps}, {pi})-symmetric iff no word is accepted "
            f"with probability above {lam}",
            args,
            out,
        )
    elif args.generator == 'reduce-nfa':
        t, pi = reduce_nfa_to_transducer(load_nfa(args.file))
        _write_model(
            t,
            f"reduction of {Path(args.file).name}: {pi}-qualitatively symmetric iff the NFA is universal",
            args,
            out,
        )
    else:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for fixture in gen_symmetric_pair_fixtures():
            (out_dir / f"{fixture.name}.sym").write_text(
                serialize_model(fixture.transducer, fixture.description), encoding='utf-8')
            (out_dir / f"{fixture.name}.manifest.json").write_text(
                fixture.manifest_json(), encoding='utf-8')
            logging.info("wrote fixture %s to %s", fixture.name, out_dir)
    return EXIT_CODE_SYMMETRIC


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    t = load_model(args.model)
    replayed = 0
    for number, rec in enumerate(read_records(args.report), start=1):
        if not isinstance(rec, dict):
            raise ValidationError(f"{args.report}: record {number} is not a JSON object")
        if rec.get('record') not in ('verdict', 'subverdict'):
            continue
        try:
            verdict = verdict_from_record(rec, t.k)
        except ProcsymError:
            raise
        except (KeyError, ValueError, TypeError, AttributeError, ZeroDivisionError) as e:
            raise ValidationError(f"{args.report}: malformed {rec['record']} record {number}: {e!r}") from None
        replay(t, verdict)
        if verdict.result is Outcome.NOT_SYMMETRIC:
            replayed += 1
    writer = ReportWriter(out, args.report_format)
    writer.publish({'record': 'verify', 'report': args.report, 'replayed': replayed, 'ok': True})
    return EXIT_CODE_SYMMETRIC


def cmd_dump(args: argparse.Namespace, out: TextIO) -> int:
    t = load_model(args.model)
    pi = parse_permutation(args.perm, t.k)
    if args.kind == 'exact':
        a, b = build_pa_pair(t, pi)
        out.write("# A\n" + dump_pa(a, t.k) + "# B\n" + dump_pa(b, t.k))
    else:
        na, nb = build_nfa_pair(t, pi)
        out.write("# A\n" + dump_nfa(na, t.k) + "# B\n" + dump_nfa(nb, t.k))
    return EXIT_CODE_SYMMETRIC


COMMANDS = {
    'check': cmd_check,
    'falsify': cmd_falsify,
    'gen': cmd_gen,
    'verify': cmd_verify,
    'dump': cmd_dump,
}


def run(args: argparse.Namespace, out: TextIO) -> int:
    handler = COMMANDS[args.command]
    # generated models go to --output themselves; reports may too
    if args.output and args.command in ('check', 'falsify', 'verify', 'dump'):
        with open(args.output, 'w', encoding='utf-8') as fh:
            return handler(args, fh)
    return handler(args, out)


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    try:
        apply_config_file(args, args.config)
        validate_config(args)
    except ProcsymError as exc:
        configure_logging(args.log_level, args.log_format, args.verbose)
        print(f"procsym: error: {exc}", file=sys.stderr)
        return EXIT_CODE_USAGE
    configure_logging(args.log_level, args.log_format, args.verbose)

    try:
        return run(args, sys.stdout)
    except StateExplosionError as exc:
        logging.debug("state explosion", exc_info=True)
        print(f"procsym: aborted: {exc}; raise --frontier-cap or shorten --max-len", file=sys.stderr)
        return EXIT_CODE_USAGE
    except ProcsymError as exc:
        logging.debug("command failed", exc_info=True)
        print(f"procsym: error: {exc}", file=sys.stderr)
        return EXIT_CODE_USAGE
    except OSError as exc:
        print(f"procsym: error: {exc}", file=sys.stderr)
        return EXIT_CODE_USAGE


if __name__ == "__main__":
    sys.exit(main())
