#!/usr/bin/env python3

"""
bicrates command line.

Data goes to stdout (or --out); logs go to stderr. Exit codes: 0 success,
2 invalid input, 3 a verification finding (the report is still written).
"""

import argparse
import sys
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence

import pydantic
from pydantic import BaseModel, ConfigDict, Field

from bicrates.config import (
    DEFAULT_BUDGET, DEFAULT_GRID, DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_TOL, PRECISION, UNIT,
    create_example_env_file,
)
from bicrates.errors import BicratesError, ValidationError
from bicrates.logging_config import get_logger, init_logging, log_run_context

init_logging()

logger = get_logger('cli')

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_FINDING = 3

UNITS_LINE = f"# units: {UNIT}; precision: {PRECISION} decimals"


class RunConfig(BaseModel):
    """Validated flags of one invocation."""

    model_config = ConfigDict(extra='ignore')

    command: str
    action: Optional[str] = None
    channel: Optional[Path] = None
    input: List[Path] = Field(default_factory=list)
    input_b: Optional[Path] = None
    P1: Optional[float] = Field(None, gt=0, allow_inf_nan=False)
    P2: Optional[float] = Field(None, gt=0, allow_inf_nan=False)
    a: Optional[float] = Field(None, ge=0, allow_inf_nan=False)
    b: Optional[float] = Field(None, ge=0, allow_inf_nan=False)
    alpha: float = Field(1.0, ge=0, le=1)
    beta: float = Field(1.0, ge=0, le=1)
    lam: float = Field(0.5, ge=0, le=1)
    grid: int = Field(DEFAULT_GRID, ge=2)
    seed: int = DEFAULT_SEED
    samples: int = Field(DEFAULT_SAMPLES, ge=1)
    budget: int = Field(DEFAULT_BUDGET, ge=1)
    instances: int = Field(10, ge=1)
    tol: float = Field(DEFAULT_TOL, ge=0)
    out: Optional[Path] = None


def _fmt(value) -> str:
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return f"{value:.{PRECISION}f}"
    return str(value)


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    lines = [UNITS_LINE, ','.join(header)]
    lines.extend(','.join(_fmt(v) for v in row) for row in rows)
    return '\n'.join(lines) + '\n'


def report_text(fields: Dict[str, object], witness: Optional[Dict[str, object]] = None) -> str:
    lines = [UNITS_LINE]
    lines.extend(f"{key}={_fmt(value)}" for key, value in fields.items())
    if witness:
        lines.append('# witness')
        lines.extend(f"{key}={_fmt(value)}" for key, value in witness.items())
    return '\n'.join(lines) + '\n'


def _emit(text: str, out: Optional[Path]):
    if out is None:
        sys.stdout.write(text)
        return
    Path(out).write_text(text)
    logger.info(f"wrote {out}")


def _gauss_params(cfg: RunConfig):
    from bicrates.gaussian.bounds import GbicParams

    missing = [name for name in ('P1', 'P2', 'a', 'b') if getattr(cfg, name) is None]
    if missing:
        raise ValidationError(f"missing flags: {', '.join('--' + m for m in missing)}")
    return GbicParams(P1=cfg.P1, P2=cfg.P2, a=cfg.a, b=cfg.b)


def _load_pair(cfg: RunConfig, path: Optional[Path] = None):
    from bicrates.dmbic.channel import load_channel, load_input

    if cfg.channel is None:
        raise ValidationError("--channel is required")
    ch = load_channel(cfg.channel)
    path = path or (cfg.input[0] if cfg.input else None)
    if path is None:
        return ch, None
    inp = load_input(path)
    inp.check_against(ch)
    return ch, inp


def cmd_derive(cfg: RunConfig) -> int:
    from bicrates.dmbic.channel import FactoredInput
    from bicrates.dmbic.derive import derive_theorem1

    ch, inp = _load_pair(cfg)
    if not isinstance(inp, FactoredInput):
        raise ValidationError("derive needs a factored input file")
    result = derive_theorem1(ch, inp, cfg.samples, cfg.seed, cfg.tol)
    witness = None
    check = result.replacement_check if result.skipped else result.comparison
    if check is not None and check.witness is not None:
        witness = dict(check.witness.as_dict(), ONLY_IN=check.witness_in)
    text = report_text(result.report(), witness)
    if result.skipped:
        text += '# replacement law region\n' + result.replacement_region.to_text()
        text += '# relaxed region\n' + result.relaxed_region.to_text()
    else:
        text += result.projection.to_text()
    _emit(text, cfg.out)
    return EXIT_OK if result.ok else EXIT_FINDING


def cmd_dm(cfg: RunConfig, args) -> int:
    if cfg.action == 'region':
        from bicrates.dmbic.regions import eval_dm_region

        ch, inp = _load_pair(cfg)
        _emit(eval_dm_region(args.kind, ch, inp).to_text(), cfg.out)
        return EXIT_OK

    if cfg.action == 'dexp':
        from bicrates.dmbic.dexp import dexp_points

        ch, inp = _load_pair(cfg)
        points = dexp_points(args.kind, ch, inp)
        _emit(csv_text(('point', 'R1', 'R2', 'R3'), ((k,) + p.values for k, p in points.items())), cfg.out)
        return EXIT_OK

    if cfg.action == 'check':
        from bicrates.dmbic.conditions import check_condition

        ch, _ = _load_pair(cfg)
        verdict = check_condition(args.cond, ch, cfg.budget, cfg.seed, cfg.tol)
        _emit(report_text(verdict.report(), verdict.witness), cfg.out)
        return EXIT_OK if verdict.ok else EXIT_FINDING

    if cfg.action == 'equiv':
        from bicrates.dmbic.channel import load_input
        from bicrates.dmbic.verify import verify_equivalence

        ch, _ = _load_pair(cfg)
        inputs = [load_input(path) for path in cfg.input]
        for inp in inputs:
            inp.check_against(ch)
        report = verify_equivalence(args.i, ch, inputs, cfg.tol)
        fields = {'I': args.i, 'POINTS': len(report.checks), 'FAILURES': len(report.failures), 'OK': report.ok}
        witness = None
        if report.failures:
            first = report.failures[0]
            witness = dict(first.point.as_dict(), INPUT=first.input_index, POINT=first.label)
        _emit(report_text(fields, witness), cfg.out)
        return EXIT_OK if report.ok else EXIT_FINDING

    if cfg.action == 'timeshare':
        from bicrates.dmbic.channel import load_input
        from bicrates.dmbic.verify import verify_timesharing_closure

        ch, inp_a = _load_pair(cfg)
        if cfg.input_b is None:
            raise ValidationError("timeshare needs --input and --input-b")
        inp_b = load_input(cfg.input_b)
        inp_b.check_against(ch)
        report = verify_timesharing_closure(args.i, ch, inp_a, inp_b, cfg.lam, cfg.tol)
        fields = {'I': args.i, 'LAMBDA': cfg.lam, 'CHECKED': report.checked,
                  'OUTSIDE': len(report.outside), 'OK': report.ok}
        witness = report.outside[0].as_dict() if report.outside else None
        _emit(report_text(fields, witness), cfg.out)
        return EXIT_OK if report.ok else EXIT_FINDING
    raise ValidationError(f"unknown dm action {cfg.action!r}")


def _write_figure(n: int, cfg: RunConfig):
    from bicrates.gaussian.curves import SLICE_HEADER, SWEEP_HEADER, figure_data

    out_dir = Path(cfg.out or '.')
    out_dir.mkdir(parents=True, exist_ok=True)
    data = figure_data(n, cfg.grid)
    written = []
    if isinstance(data, list):
        path = out_dir / f"fig{n}_sumrate.csv"
        path.write_text(csv_text(SWEEP_HEADER, data))
        written.append(path)
    else:
        for beta, curves in data.items():
            path = out_dir / f"fig{n}_beta{beta:g}.csv"
            path.write_text(csv_text(SLICE_HEADER, curves.rows()))
            written.append(path)
    for path in written:
        print(path)
    return EXIT_OK


def cmd_gauss(cfg: RunConfig, args) -> int:
    from bicrates.gaussian import bounds, curves

    if cfg.action == 'figure':
        return _write_figure(args.number, cfg)

    p = _gauss_params(cfg)
    if cfg.action == 'slice':
        result = curves.boundary_slice(p, cfg.beta, cfg.grid, args.outer)
        _emit(csv_text(curves.SLICE_HEADER, result.rows()), cfg.out)
        return EXIT_OK

    if cfg.action == 'sum':
        rs = bounds.sum_rate(p, cfg.grid)
        fields = {'REGIME': bounds.regime_classify(p).value, 'SUM_RATE': rs.value, 'BRANCH': rs.branch}
        fields.update({key.upper(): value for key, value in rs.components.items()})
        _emit(report_text(fields), cfg.out)
        return EXIT_OK

    if cfg.action == 'gap':
        report = curves.gap_report(p, cfg.grid)
        _emit(report_text(report.report(), {k.upper(): v for k, v in report.worst.items()}), cfg.out)
        return EXIT_OK if report.certified else EXIT_FINDING

    if cfg.action == 'capacity':
        result = bounds.capacity_special(args.kind, p, cfg.alpha, cfg.beta, strict=not args.no_strict)
        if isinstance(result, bounds.RatePoint):
            _emit(csv_text(('R1', 'R2', 'R3'), [result.values]), cfg.out)
        else:
            _emit(result.to_text(), cfg.out)
        return EXIT_OK
    raise ValidationError(f"unknown gauss action {cfg.action!r}")


def cmd_verify(cfg: RunConfig) -> int:
    from bicrates.dmbic.dexp import DEXP_REGION, dexp_formula
    from bicrates.dmbic.regions import eval_dm_region
    from bicrates.oracle import InstanceSpec, brute_vertices, random_instance
    from bicrates.polyhedra import enumerate_vertices, pareto_filter

    fields: Dict[str, object] = {'INSTANCES': cfg.instances}
    witness = None
    ok = True
    for kind, region in DEXP_REGION.items():
        condition = 'cognizant' if kind in ('L3', 'L4') else 'oblivious'
        mismatches = 0
        for k in range(cfg.instances):
            spec = InstanceSpec(seed=cfg.seed + k, condition=condition)
            ch, inp = random_instance(spec)
            system = eval_dm_region(region, ch, inp)
            brute = brute_vertices(system)
            exact = enumerate_vertices(system)
            formula = dexp_formula(kind, ch, inp)
            expected = pareto_filter(brute)
            agree = _same_points(brute, exact, cfg.tol) and _same_points(formula, expected, cfg.tol)
            if not agree:
                mismatches += 1
                if witness is None:
                    witness = {'FORMULA': kind, 'SEED': spec.seed}
        fields[f"{kind}_MISMATCHES"] = mismatches
        ok = ok and mismatches == 0
    fields['OK'] = ok
    _emit(report_text(fields, witness), cfg.out)
    return EXIT_OK if ok else EXIT_FINDING


def _same_points(left, right, tol: float) -> bool:
    if len(left) != len(right):
        return False
    return all(any(p.close_to(q, max(tol, 1e-9)) for q in right) for p in left)


def cmd_config(cfg: RunConfig) -> int:
    path = create_example_env_file(cfg.out or '.env')
    print(path)
    return EXIT_OK


def _add_gauss_flags(parser):
    parser.add_argument('--P1', type=float, help='Broadcast transmitter power')
    parser.add_argument('--P2', type=float, help='Interferer power')
    parser.add_argument('--a', type=float, help='Broadcast gain at receiver 2')
    parser.add_argument('--b', type=float, help='Interference gain at receiver 2')
    parser.add_argument('--grid', type=int, default=DEFAULT_GRID, help='Points per split-parameter grid')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='bicrates',
                                     description='bicrates - rate regions of the broadcast interference channel')
    subparsers = parser.add_subparsers(dest='command', help='Command to execute')

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--out', type=Path, help='Output file (directory for figure, .env path for config)')
    common.add_argument('--seed', type=int, default=DEFAULT_SEED, help='Random seed')
    common.add_argument('--tol', type=float, default=DEFAULT_TOL, help='Numerical tolerance in bits')

    dm_files = argparse.ArgumentParser(add_help=False)
    dm_files.add_argument('--channel', type=Path, help='Channel spec file (JSON)')
    dm_files.add_argument('--input', type=Path, action='append', default=[], help='Input law file (JSON)')

    derive_parser = subparsers.add_parser('derive', parents=[common, dm_files],
                                          help='Eliminate split rates and compare with the LEM1 region')
    derive_parser.add_argument('--samples', type=int, default=DEFAULT_SAMPLES, help='Monte-Carlo samples')

    dm_parser = subparsers.add_parser('dm', help='Discrete memoryless channel tools')
    dm_sub = dm_parser.add_subparsers(dest='action', help='DM action')
    region = dm_sub.add_parser('region', parents=[common, dm_files], help='Evaluate a rate region')
    region.add_argument('--kind', required=True,
                        choices=['THM1', 'LEM1', 'RHAT', 'R1', 'R2', 'R1P', 'R2P', 'CAP_STRONG', 'CAP_VSTRONG'])
    dexp = dm_sub.add_parser('dexp', parents=[common, dm_files], help='Closed-form dominant extreme points')
    dexp.add_argument('--kind', required=True, choices=['L3', 'L4', 'L5', 'L6'])
    check = dm_sub.add_parser('check', parents=[common, dm_files], help='Search for a condition violation')
    check.add_argument('--cond', required=True, choices=['oblivious', 'cognizant', 'strong', 'very_strong'])
    check.add_argument('--budget', type=int, default=DEFAULT_BUDGET, help='Number of search starts')
    equiv = dm_sub.add_parser('equiv', parents=[common, dm_files], help='Superposition region equivalence')
    equiv.add_argument('--i', type=int, required=True, choices=[1, 2])
    timeshare = dm_sub.add_parser('timeshare', parents=[common, dm_files], help='Time-sharing closure')
    timeshare.add_argument('--i', type=int, required=True, choices=[1, 2])
    timeshare.add_argument('--input-b', dest='input_b', type=Path, help='Second input law file')
    timeshare.add_argument('--lam', type=float, default=0.5, help='Weight of the second input law')

    gauss_parser = subparsers.add_parser('gauss', help='Gaussian channel bounds')
    gauss_sub = gauss_parser.add_subparsers(dest='action', help='Gaussian action')
    slice_parser = gauss_sub.add_parser('slice', parents=[common], help='Inner/outer curves at R3 = C(beta P2)')
    _add_gauss_flags(slice_parser)
    slice_parser.add_argument('--beta', type=float, default=1.0, help='Interference rate fraction')
    slice_parser.add_argument('--outer', choices=['O1', 'O1_LOOSE', 'O2', 'O4'], help='Override the outer bound')
    sum_parser = gauss_sub.add_parser('sum', parents=[common], help='Largest achievable sum rate')
    _add_gauss_flags(sum_parser)
    gap_parser = gauss_sub.add_parser('gap', parents=[common], help='Half-bit gap certificates')
    _add_gauss_flags(gap_parser)
    capacity = gauss_sub.add_parser('capacity', parents=[common], help='Closed-form capacity results')
    _add_gauss_flags(capacity)
    capacity.add_argument('--kind', required=True, choices=['A_VSTRONG', 'C_VSTRONG', 'T9_INNERFACE', 'T9_LOWBETA'])
    capacity.add_argument('--alpha', type=float, default=1.0, help='Broadcast power split')
    capacity.add_argument('--beta', type=float, default=1.0, help='Interference rate fraction')
    capacity.add_argument('--no-strict', dest='no_strict', action='store_true',
                          help='Evaluate even when the precondition fails')
    figure = gauss_sub.add_parser('figure', parents=[common], help='Write the CSV data of a figure')
    figure.add_argument('number', type=int, choices=[3, 4, 5])
    figure.add_argument('--grid', type=int, default=DEFAULT_GRID, help='Points per split-parameter grid')

    verify_parser = subparsers.add_parser('verify', help='Cross-check against the brute-force oracles')
    verify_sub = verify_parser.add_subparsers(dest='action', help='Verification')
    oracle = verify_sub.add_parser('oracle', parents=[common], help='DExP formulas against vertex enumeration')
    oracle.add_argument('--instances', type=int, default=10, help='Random instances per formula')

    config_parser = subparsers.add_parser('config', help='Configuration helpers')
    config_sub = config_parser.add_subparsers(dest='action', help='Config action')
    config_sub.add_parser('init', parents=[common], help='Write an example .env file')
    return parser


def main(argv=None):
    """
    Main entry point for the bicrates CLI.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None or (args.command != 'derive' and getattr(args, 'action', None) is None):
        parser.print_help()
        return EXIT_INVALID

    try:
        cfg = RunConfig.model_validate(vars(args))
    except pydantic.ValidationError as e:
        logger.error(f"invalid flags: {e}")
        return EXIT_INVALID

    handlers = {
        'derive': lambda: cmd_derive(cfg),
        'dm': lambda: cmd_dm(cfg, args),
        'gauss': lambda: cmd_gauss(cfg, args),
        'verify': lambda: cmd_verify(cfg),
        'config': lambda: cmd_config(cfg),
    }
    with log_run_context(command=args.command, action=cfg.action, seed=cfg.seed):
        logger.info(f"running {args.command} {cfg.action or ''}".strip())
        try:
            return handlers[args.command]()
        except (BicratesError, pydantic.ValidationError, OSError) as e:
            logger.error(f"{args.command}: {e}")
            return EXIT_INVALID


if __name__ == '__main__':
    sys.exit(main())
