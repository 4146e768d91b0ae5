"""Command-line entry point.

Subcommands: constants, sample, simulate, grid, analyze, regress-alpha.
Each reads a flat key=value config (where applicable) plus ``--set``
flag overrides, and emits CSV to stdout or ``--out``. Exit codes:
0 success, 1 config error, 2 I/O error, 3 analysis precondition failure.
The LEVYBOUND_WORKERS environment variable bounds the grid worker pool.
"""

import argparse
import sys

import numpy as np

from . import analysis as an
from .bounds import (
    BoundInputs,
    bound_estimate,
    brownian_bound,
    discrete_bound,
    integral_estimate,
    stable_bound,
)
from .constants import bound_constants, comparison_rate, phase_regime
from .data import SyntheticSpec, parse_config, read_records
from .errors import (
    AnalysisPreconditionError,
    DataFormatError,
    InvalidParameterError,
)
from .grid import GridSpec, IdxSource, execute_grid, load_grid_datasets, _model_for
from .models import param_count
from .rng import RngStream
from .sde import TrainConfig, run_training
from .stable import StableParams, sample_isotropic_stable, sample_skewed_stable

# Standard experiment profile: gamma 1e-2, eta 1e-3, trailing window of
# 2000 iterations with the top 15% trimmed, 10 alphas linear in [1.6, 2].
DEFAULTS = {
    "gamma": "0.01",
    "eta": "0.001",
    "sigma2": "0",
    "steps": "3000",
    "batch_size": "full",
    "eval_interval": "10",
    "seed": "0",
    "width": "0",
    "init_scale": "1.0",
    "window": "2000",
    "trim": "0.15",
    "R": "1.0",
    "s": "0.5",
    "zeta": "0.05",
    "Lambda": "0.0",
    "alphas": ",".join(format(a, ".17g") for a in np.linspace(1.6, 2.0, 10)),
    "data": "synthetic",
    "n_per_class": "250",
    "input_dim": "20",
    "classes": "2",
    "separation": "2.0",
    "noise_std": "1.0",
    "data_seed": "0",
    "subsample": "1.0",
    "subsample_seed": "0",
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _cfg_from(args) -> dict[str, str]:
    cfg = dict(DEFAULTS)
    if getattr(args, "config", None):
        try:
            cfg.update(parse_config(args.config))
        except DataFormatError as exc:
            raise InvalidParameterError(str(exc)) from None
    for item in getattr(args, "set", None) or []:
        if "=" not in item:
            raise InvalidParameterError(f"--set needs key=value, got {item!r}")
        key, value = item.split("=", 1)
        cfg[key.strip()] = value.strip()
    return cfg


def _float(cfg, key) -> float:
    try:
        return float(cfg[key])
    except KeyError:
        raise InvalidParameterError(f"missing config key {key!r}") from None
    except ValueError:
        raise InvalidParameterError(f"config key {key!r} is not a number: {cfg[key]!r}") from None


def _int(cfg, key) -> int:
    try:
        return int(cfg[key])
    except KeyError:
        raise InvalidParameterError(f"missing config key {key!r}") from None
    except ValueError:
        raise InvalidParameterError(f"config key {key!r} is not an integer: {cfg[key]!r}") from None


def _float_list(cfg, key) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in cfg[key].split(","))
    except KeyError:
        raise InvalidParameterError(f"missing config key {key!r}") from None
    except ValueError:
        raise InvalidParameterError(f"config key {key!r} is not a number list") from None


def _int_list(cfg, key) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in cfg[key].split(","))
    except KeyError:
        raise InvalidParameterError(f"missing config key {key!r}") from None
    except ValueError:
        raise InvalidParameterError(f"config key {key!r} is not an integer list") from None


def _train_config(cfg, alpha: float, sigma1: float, seed: int) -> TrainConfig:
    batch = cfg["batch_size"].strip().lower()
    if batch in ("full", ""):
        batch_size = None
    else:
        try:
            batch_size = int(batch)
        except ValueError:
            raise InvalidParameterError(
                f"batch_size must be an integer or 'full', got {batch!r}"
            ) from None
    return TrainConfig(
        gamma=_float(cfg, "gamma"),
        eta=_float(cfg, "eta"),
        alpha=alpha,
        sigma1=sigma1,
        sigma2=_float(cfg, "sigma2"),
        steps=_int(cfg, "steps"),
        batch_size=batch_size,
        eval_interval=_int(cfg, "eval_interval"),
        seed=seed,
    )


def _data_source(cfg):
    kind = cfg["data"].strip().lower()
    if kind == "synthetic":
        return SyntheticSpec(
            n_per_class=_int(cfg, "n_per_class"),
            input_dim=_int(cfg, "input_dim"),
            classes=_int(cfg, "classes"),
            separation=_float(cfg, "separation"),
            noise_std=_float(cfg, "noise_std"),
            seed=_int(cfg, "data_seed"),
        )
    if kind == "idx":
        for key in ("train_images", "train_labels", "test_images", "test_labels"):
            if key not in cfg:
                raise InvalidParameterError(f"idx data source needs config key {key!r}")
        return IdxSource(
            train_images=cfg["train_images"],
            train_labels=cfg["train_labels"],
            test_images=cfg["test_images"],
            test_labels=cfg["test_labels"],
            subsample_fraction=_float(cfg, "subsample"),
            subsample_seed=_int(cfg, "subsample_seed"),
        )
    raise InvalidParameterError(f"data must be 'synthetic' or 'idx', got {cfg['data']!r}")


def _grid_spec(cfg, out_override=None) -> GridSpec:
    out = out_override or cfg.get("out")
    if not out:
        raise InvalidParameterError("grid needs an output path (config key 'out' or --out)")
    return GridSpec(
        alphas=_float_list(cfg, "alphas"),
        sigma1s=_float_list(cfg, "sigma1s"),
        widths=_int_list(cfg, "widths") if "widths" in cfg else (0,),
        seeds=_int_list(cfg, "seeds") if "seeds" in cfg else (0,),
        train=_train_config(cfg, alpha=2.0, sigma1=0.0, seed=0),
        data=_data_source(cfg),
        out=out,
        init_scale=_float(cfg, "init_scale"),
        window=_int(cfg, "window"),
        trim=_float(cfg, "trim"),
        radius=_float(cfg, "R"),
    )


def _emit(args, lines) -> None:
    text = "\n".join(lines) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


CONSTANTS_HEADER = (
    "alpha,d,radius,sigma1,k,k_bar,p,c,sphere_area,log_c,log_sphere_area,"
    "regime,regime_refined,prior_constant,xi_ours,xi_prior"
)


def _cmd_constants(args) -> int:
    bc = bound_constants(args.alpha, args.d, args.radius)
    coarse, refined = phase_regime(args.sigma1, args.d, args.radius)
    prior, xi_ours, xi_prior = comparison_rate(args.alpha, args.d)
    row = ",".join(
        [
            _fmt(args.alpha),
            str(args.d),
            _fmt(args.radius),
            _fmt(args.sigma1),
            _fmt(bc.k),
            _fmt(bc.k_bar),
            _fmt(bc.p),
            _fmt(bc.c),
            _fmt(bc.sphere),
            _fmt(bc.log_c),
            _fmt(bc.log_sphere),
            coarse,
            refined,
            _fmt(prior),
            _fmt(xi_ours),
            _fmt(xi_prior),
        ]
    )
    _emit(args, [CONSTANTS_HEADER, row])
    return 0


def _cmd_sample(args) -> int:
    rng = RngStream(args.seed, args.stream)
    lines = []
    if args.dim is not None:
        draws = sample_isotropic_stable(args.alpha, args.dim, rng, size=args.count)
        for row in draws:
            lines.append(" ".join(_fmt(v) for v in row))
    else:
        params = StableParams(args.alpha, args.beta, args.scale, args.loc)
        draws = sample_skewed_stable(params, rng, size=args.count)
        lines.extend(_fmt(v) for v in draws)
    _emit(args, lines)
    return 0


SIMULATE_HEADER = (
    "alpha,sigma1,d,width,n,seed,gap,i_hat,g_hat,"
    "stable_bound,discrete_bound,brownian_bound,diverged"
)


def _cmd_simulate(args) -> int:
    cfg = _cfg_from(args)
    alpha = _float(cfg, "alpha")
    sigma1 = _float(cfg, "sigma1")
    seed = _int(cfg, "seed")
    width = _int(cfg, "width")
    tc = _train_config(cfg, alpha, sigma1, seed)

    grid = GridSpec(
        alphas=(alpha,), sigma1s=(sigma1,), widths=(width,), seeds=(seed,),
        train=tc, data=_data_source(cfg), out="unused",
        init_scale=_float(cfg, "init_scale"), window=_int(cfg, "window"),
        trim=_float(cfg, "trim"), radius=_float(cfg, "R"),
    )
    train, test = load_grid_datasets(grid)
    spec = _model_for(width, train)
    d = param_count(spec)
    trace = run_training(spec, train, test, tc, grid.init_scale, rng=RngStream(seed))

    prefix = [_fmt(alpha), _fmt(sigma1), str(d), str(width), str(train.n), str(seed)]
    if trace.diverged:
        row = prefix + [""] * 6 + ["true"]
        _emit(args, [SIMULATE_HEADER, ",".join(row)])
        return 0

    gap = an.robust_gap(trace, grid.window, grid.trim)
    i_hat = integral_estimate(trace)
    inputs = BoundInputs(
        alpha=alpha, d=d, n=train.n, sigma1=sigma1, sigma2=tc.sigma2,
        gamma=tc.gamma, eta=tc.eta, radius=grid.radius,
        s=_float(cfg, "s"), zeta=_float(cfg, "zeta"), lam=_float(cfg, "Lambda"),
    )
    inputs.validate()
    g_hat = thm = disc = brown = ""
    if sigma1 > 0.0:
        g_hat = _fmt(bound_estimate(i_hat, inputs))
        thm = _fmt(stable_bound(i_hat, inputs))
        if 0.0 < tc.gamma * tc.eta < 1.0:
            disc = _fmt(discrete_bound(trace, inputs))
    if tc.sigma2 > 0.0:
        brown = _fmt(brownian_bound(i_hat, inputs))
    row = prefix + [_fmt(gap), _fmt(i_hat), g_hat, thm, disc, brown, "false"]
    _emit(args, [SIMULATE_HEADER, ",".join(row)])
    return 0


def _cmd_grid(args) -> int:
    cfg = _cfg_from(args)
    grid = _grid_spec(cfg, out_override=args.out)
    print(f"cells: {grid.cell_count}", file=sys.stderr)
    records = execute_grid(grid)
    print(f"wrote {len(records)} records to {grid.out}", file=sys.stderr)
    return 0


REPORT_HEADER = (
    "group_key,group,n_seeds,tau_seed_mean,tau_seed_std,tau_mean_gap,"
    "pearson_mean_gap,regime,regime_refined,r_hat,intercept,alpha_hat,radius_estimate"
)


def _cmd_analyze(args) -> int:
    records = read_records(args.records)
    report = an.build_report(records, args.group_key, radius=args.radius)
    if report.regression_note:
        print(f"alpha regression unavailable: {report.regression_note}", file=sys.stderr)
    if report.radius_note:
        print(f"radius estimate unavailable: {report.radius_note}", file=sys.stderr)

    opt = lambda v: "" if v is None else _fmt(v)
    lines = [REPORT_HEADER]
    for s, (coarse, refined) in zip(report.groups, report.regimes):
        lines.append(
            ",".join(
                [
                    report.group_key,
                    _fmt(s.group),
                    str(s.n_seeds),
                    _fmt(s.tau_seed_mean),
                    _fmt(s.tau_seed_std),
                    _fmt(s.tau_mean_gap),
                    _fmt(s.pearson_mean_gap),
                    coarse,
                    refined,
                    opt(report.r_hat),
                    opt(report.intercept),
                    opt(report.alpha_hat),
                    opt(report.radius_estimate),
                ]
            )
        )
    _emit(args, lines)

    if args.long_out:
        live = [r for r in records if not r.diverged]
        long_lines = ["group,alpha,mean_gap,std_gap"]
        for s in report.groups:
            rows = [r for r in live if getattr(r, args.group_key) == s.group]
            for a in sorted({r.alpha for r in rows}):
                gaps = [r.gap for r in rows if r.alpha == a]
                long_lines.append(
                    ",".join(
                        [_fmt(s.group), _fmt(a), _fmt(float(np.mean(gaps))), _fmt(float(np.std(gaps)))]
                    )
                )
        with open(args.long_out, "w") as f:
            f.write("\n".join(long_lines) + "\n")
    return 0


def _cmd_regress_alpha(args) -> int:
    records = read_records(args.records)
    r_hat, intercept, alpha_hat = an.alpha_regression(records)
    _emit(args, ["r_hat,intercept,alpha_hat", ",".join([_fmt(r_hat), _fmt(intercept), _fmt(alpha_hat)])])
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="levybound", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="evaluate the bound constants at one (alpha, d, R)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--radius", "--R", type=float, default=1.0)
    p.add_argument("--sigma1", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_constants)

    p = sub.add_parser("sample", help="emit stable draws, one sample per line")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream", type=int, default=0)
    p.add_argument("--dim", type=int, help="isotropic vector dimension; omit for the scalar law")
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--loc", type=float, default=0.0)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("simulate", help="run one training cell and print its estimators")
    p.add_argument("--config")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("grid", help="run an experiment grid, resumable")
    p.add_argument("--config")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--out", help="records CSV path (overrides config key 'out')")
    p.set_defaults(func=_cmd_grid)

    p = sub.add_parser("analyze", help="correlation scan over a records CSV")
    p.add_argument("--records", required=True)
    p.add_argument("--group-key", choices=("d", "sigma1"), default="d")
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--out")
    p.add_argument("--long-out", help="plot-ready long-format CSV path")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("regress-alpha", help="tail-index regression from a records CSV")
    p.add_argument("--records", required=True)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_regress_alpha)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvalidParameterError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except (OSError, DataFormatError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    except AnalysisPreconditionError as exc:
        print(f"analysis error: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:  # pragma: no cover
    sys.exit(main())
