"""Command-line front end: run one experiment, sweep a grid, or build oracles."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, MissingStatisticsError, OracleMissingError, ParameterDomainError
from .families import FAMILY_KINDS, FamilySpec
from .harness import (
    EXPERIMENT_KINDS,
    ORACLE_SEED,
    ExperimentConfig,
    build_oracles,
    default_oracle_dir,
    regime_map,
    report_payload,
    run_experiment,
    sweep,
    write_report,
)

__all__ = ["main"]


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; route through ConfigError
    # instead so usage errors share exit code 1 with config-file problems
    def error(self, message):
        raise ConfigError(message)


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise ConfigError(f"expected comma-separated integers, got {text!r}")


def _add_common(sub: argparse.ArgumentParser, grid: bool = False) -> None:
    sub.add_argument("--family", choices=FAMILY_KINDS, help="sampling family kind")
    if grid:
        sub.add_argument("--alpha", type=_float_list, help="comma-separated tail indices")
        sub.add_argument("--p", type=_float_list, help="comma-separated norm orders in (0, 2]")
    else:
        sub.add_argument("--alpha", type=float, help="tail index of the family")
        sub.add_argument("--p", type=float, help="norm order in (0, 2]")
    sub.add_argument("--n", type=_int_list, help="comma-separated increasing sample sizes")
    sub.add_argument("--reps", type=int, help="Monte Carlo replications per n")
    sub.add_argument("--seed", type=int, help="64-bit master seed")
    sub.add_argument("--experiment", choices=EXPERIMENT_KINDS, help="experiment kind")
    sub.add_argument("--t-grid", type=_float_list, help="comma-separated times in (0, 1]")
    sub.add_argument("--epsilon", type=float, help="exceedance threshold")
    sub.add_argument("--delta-grid", type=_float_list, help="comma-separated mesh widths in (0, 1]")
    sub.add_argument("--workers", type=int, help="parallel worker count")
    sub.add_argument("--out", help="output path (run) or directory (sweep)")
    sub.add_argument("--format", choices=("csv", "json"), help="report file format")
    sub.add_argument("--config", help="JSON file whose values override flags")


def _build_parser() -> _Parser:
    parser = _Parser(prog="selfnorm",
                     description="Monte Carlo laboratory for self-normalized partial-sum processes")
    subs = parser.add_subparsers(dest="command", required=True)
    _add_common(subs.add_parser("run", help="run one experiment"))
    sw = subs.add_parser("sweep", help="run a cartesian (alpha, p) grid")
    _add_common(sw, grid=True)
    ob = subs.add_parser("oracle-build", help="simulate and persist Brownian functional tables")
    ob.add_argument("--out", help="oracle directory (default: SELFNORM_ORACLE_DIR or ~/.selfnorm/oracles)")
    ob.add_argument("--seed", type=int, default=ORACLE_SEED, help="build seed")
    return parser


# config-file keys: flag names with underscores, plus payload-style aliases
_CONFIG_ALIASES = {"n_grid": "n", "master_seed": "seed"}
_CONFIG_KEYS = ("family", "alpha", "p", "n", "reps", "seed", "experiment",
                "t_grid", "epsilon", "delta_grid", "workers", "out", "format")


def _apply_config_file(args: argparse.Namespace) -> None:
    if not getattr(args, "config", None):
        return
    try:
        with open(args.config, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {args.config}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {args.config} is not valid JSON: {exc}")
    if not isinstance(data, dict):
        raise ConfigError(f"config file {args.config} must hold a JSON object")
    for raw_key, value in data.items():
        key = _CONFIG_ALIASES.get(raw_key, raw_key)
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {raw_key!r}")
        if key == "family" and isinstance(value, dict):
            # payload-style nested family spec
            setattr(args, "family", value.get("kind"))
            if "alpha" in value:
                setattr(args, "alpha", value["alpha"])
            continue
        if key in ("n",):
            value = tuple(int(v) for v in value)
        elif key in ("t_grid", "delta_grid"):
            value = tuple(float(v) for v in value)
        setattr(args, key, value)


def _experiment_config(args: argparse.Namespace, experiment: str) -> ExperimentConfig:
    if args.family is None:
        raise ConfigError("--family is required (flag or config file)")
    if args.alpha is None:
        raise ConfigError("--alpha is required (flag or config file)")
    if args.p is None:
        raise ConfigError("--p is required (flag or config file)")
    if args.n is None:
        raise ConfigError("--n is required (flag or config file)")
    if args.reps is None:
        raise ConfigError("--reps is required (flag or config file)")
    if args.seed is None:
        raise ConfigError("--seed is required (flag or config file)")
    kwargs = {}
    if args.t_grid is not None:
        kwargs["t_grid"] = args.t_grid
    if args.epsilon is not None:
        kwargs["epsilon"] = args.epsilon
    if args.delta_grid is not None:
        kwargs["delta_grid"] = args.delta_grid
    if args.workers is not None:
        kwargs["workers"] = args.workers
    return ExperimentConfig(
        family=FamilySpec(kind=args.family, alpha=args.alpha),
        p=args.p, n_grid=args.n, reps=args.reps, master_seed=args.seed,
        experiment=experiment, **kwargs)


def _cmd_run(args: argparse.Namespace) -> int:
    if args.experiment is None:
        raise ConfigError("--experiment is required (flag or config file)")
    report = run_experiment(_experiment_config(args, args.experiment))
    fmt = args.format or "json"
    if args.out:
        write_report(report, fmt, args.out)
        print(f"{report.run_id} {report.config.experiment} "
              f"regime={report.regime_decision} draws={report.draw_count} -> {args.out}")
    else:
        sys.stdout.write(json.dumps(report_payload(report), sort_keys=True,
                                    separators=(",", ":")) + "\n")
    return 0


def _write_sweep_reports(reports, out, fmt: str) -> None:
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    for report in reports:
        write_report(report, fmt, out_dir / f"{report.run_id}.{fmt}")


def _print_matrix(alphas, ps, matrix) -> None:
    # widest label plus a 2-space gutter so adjacent cells never touch
    width = 2 + max(*(len(v) for v in matrix.values()),
                    *(len(f"p={p:g}") for p in ps))
    head = "alpha \\ p".ljust(10) + "".join(f"p={p:g}".rjust(width) for p in ps)
    print(head)
    for a in alphas:
        cells = "".join(matrix[(a, p)].rjust(width) for p in ps)
        print(f"{a:<10g}{cells}")


def _cmd_sweep(args: argparse.Namespace) -> int:
    if args.alpha_list is None or args.p_list is None:
        raise ConfigError("sweep needs --alpha and --p as comma-separated lists")
    base = _experiment_config(args, args.experiment or "degenerate_scan")
    fmt = args.format or "json"
    if args.experiment is not None:
        reports = sweep(base, args.alpha_list, args.p_list)
        for report in reports:
            fam = report.config.family
            print(f"alpha={fam.alpha:g} p={report.config.p:g} run_id={report.run_id} "
                  f"regime={report.regime_decision}")
    else:
        reports, matrix = regime_map(base, args.alpha_list, args.p_list)
        _print_matrix([float(a) for a in args.alpha_list], [float(p) for p in args.p_list], matrix)
    if args.out:
        _write_sweep_reports(reports, args.out, fmt)
        print(f"wrote {len(reports)} report(s) to {args.out}")
    return 0


def _cmd_oracle_build(args: argparse.Namespace) -> int:
    out = args.out if args.out else default_oracle_dir()
    for path in build_oracles(out_dir=out, seed=args.seed):
        print(f"built {path}")
    return 0


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        if args.command != "oracle-build":
            _apply_config_file(args)
        if args.command == "sweep":
            # alpha/p carry grid lists here; the base config takes the first cell
            def as_list(v):
                if v is None:
                    return None
                return (float(v),) if isinstance(v, (int, float)) else tuple(float(x) for x in v)
            args.alpha_list, args.p_list = as_list(args.alpha), as_list(args.p)
            args.alpha = args.alpha_list[0] if args.alpha_list else None
            args.p = args.p_list[0] if args.p_list else None
            return _cmd_sweep(args)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_oracle_build(args)
    except (ConfigError, ParameterDomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OracleMissingError, MissingStatisticsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
