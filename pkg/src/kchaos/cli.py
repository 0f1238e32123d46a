"""Command-line front end.

Subcommands: ``ising-sweep``, ``banded-sweep``, ``bound-sweep``,
``scaling-check`` and ``single-run``.  Exit codes: 0 on success, 1 for
usage/config problems, 2 for numerical failures (degeneracy, orthogonality
loss, norm drift).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .errors import ConfigError, NumericalError
from .hamiltonians import (
    build_banded_random,
    build_goe,
    build_ising_full,
    eigendecompose,
    parity_basis,
    project_to_sector,
)
from .io import (
    build_sweep_config,
    config_summary,
    read_config_pairs,
    render_line_chart,
    render_svg,
    write_csv,
    write_table,
)
from .krylov import complexity_values, default_time_grid, lanczos_full_orth, saturation
from .measures import DispersionConfig, eta, r_ratio_mean, sigma_moving
from .perturbation import overlap_scaling_check, run_bound_sweep
from .states import (
    GaussianProfile,
    UniformComplement,
    state_all_up,
    state_random,
    state_uniform_eigenbasis,
)
from .sweeps import postprocess_normalize, run_banded_sweep, run_ising_sweep


class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors surface as ConfigError (exit 1)."""

    def error(self, message):
        raise ConfigError(f"{self.prog}: {message}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="kchaos", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="flat key=value config file")
    common.add_argument("--seed", type=int, help="master seed")
    common.add_argument("--out", type=Path, default=Path("."), help="output directory")

    sweep_common = _Parser(add_help=False, parents=[common])
    sweep_common.add_argument("--threads", type=int, help="worker threads over grid points")
    sweep_common.add_argument("--families", help="comma list of state families")
    sweep_common.add_argument("--random-count", type=int)
    sweep_common.add_argument("--eigen-count", type=int)
    sweep_common.add_argument("--w-frac", type=float, help="dispersion window fraction")
    sweep_common.add_argument("--n0-frac", type=float, help="dispersion start fraction")
    sweep_common.add_argument("--allow-degenerate", action="store_true", default=None)

    p = sub.add_parser("ising-sweep", parents=[sweep_common], help="spin-chain h_z sweep")
    p.add_argument("--n-spins", type=int)
    p.add_argument("--n-eta", type=int)
    p.add_argument("--hz-min", type=float)
    p.add_argument("--hz-max", type=float)
    p.add_argument("--hz-points", type=int)
    p.set_defaults(func=_cmd_ising_sweep)

    p = sub.add_parser("banded-sweep", parents=[sweep_common], help="banded-model k sweep")
    p.add_argument("--dim", type=int)
    p.add_argument("--bandwidth-frac", type=float)
    p.add_argument("--k-min", type=float)
    p.add_argument("--k-max", type=float)
    p.add_argument("--k-points", type=int)
    p.add_argument("--realizations", type=int)
    p.set_defaults(func=_cmd_banded_sweep)

    p = sub.add_parser(
        "bound-sweep", parents=[common], help="saturation of perturbed eigenstates vs the bound"
    )
    p.add_argument("--model", choices=("ising", "banded"), required=True)
    p.add_argument("--n-spins", type=int, default=9)
    p.add_argument("--sector", choices=("even", "odd"), default="even")
    p.add_argument("--hz", type=float, default=4.0)
    p.add_argument("--dim", type=int, default=256)
    p.add_argument("--bandwidth-frac", type=float, default=0.2)
    p.add_argument("--k", type=float, default=0.125)
    p.add_argument("--j", type=int, default=10, help="anchored eigenstate index")
    p.add_argument("--profile", choices=("gaussian", "uniform"), default="uniform")
    p.add_argument("--center", type=float, default=61.0, help="gaussian profile center")
    p.add_argument("--sigma", type=float, default=10.0, help="gaussian profile width")
    p.add_argument("--deltas", help="explicit comma-separated delta grid")
    p.add_argument("--delta-min", type=float, default=0.01)
    p.add_argument("--delta-max", type=float, default=0.5)
    p.add_argument("--delta-points", type=int, default=12)
    p.add_argument("--allow-degenerate", action="store_true")
    p.set_defaults(func=_cmd_bound_sweep)

    p = sub.add_parser(
        "scaling-check", parents=[common], help="delta^2 scaling of Krylov overlaps (GOE)"
    )
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--j", type=int, help="anchored eigenstate index (default dim//2)")
    p.add_argument("--profile", choices=("gaussian", "uniform"), default="uniform")
    p.add_argument("--center", type=float)
    p.add_argument("--sigma", type=float, default=10.0)
    p.add_argument("--delta-min", type=float, default=0.005)
    p.add_argument("--delta-max", type=float, default=0.05)
    p.add_argument("--delta-points", type=int, default=6)
    p.set_defaults(func=_cmd_scaling_check)

    p = sub.add_parser(
        "single-run", parents=[common], help="one (model, state) complexity curve"
    )
    p.add_argument("--model", choices=("ising", "banded", "goe"), required=True)
    p.add_argument("--n-spins", type=int, default=10)
    p.add_argument("--sector", choices=("even", "odd"), default="even")
    p.add_argument("--hz", type=float, default=1.02)
    p.add_argument("--dim", type=int, default=256)
    p.add_argument("--bandwidth-frac", type=float, default=0.2)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--state", choices=("all_up", "uniform", "random"), default=None)
    p.add_argument("--state-seed", type=int, default=1)
    p.add_argument("--t-points", type=int, default=400)
    p.add_argument("--w-frac", type=float, default=0.025)
    p.add_argument("--n0-frac", type=float, default=0.1)
    p.add_argument("--allow-degenerate", action="store_true")
    p.set_defaults(func=_cmd_single_run)

    return parser


def _merge_pairs(args, model: str, mapping: dict[str, str]) -> dict[str, str]:
    """Config-file pairs overlaid with any CLI flags that were given."""
    pairs = read_config_pairs(args.config) if args.config else {}
    pairs["model"] = model
    for attr, key in mapping.items():
        value = getattr(args, attr, None)
        if value is not None:
            pairs[key] = str(value).lower() if isinstance(value, bool) else str(value)
    return pairs


_SWEEP_FLAG_MAP = {
    "seed": "seed",
    "threads": "threads",
    "families": "families",
    "random_count": "random_count",
    "eigen_count": "eigen_count",
    "w_frac": "w_frac",
    "n0_frac": "n0_frac",
    "allow_degenerate": "allow_degenerate",
}


def _run_sweep(args, model: str, extra_map: dict[str, str], runner, stem: str) -> None:
    pairs = _merge_pairs(args, model, {**_SWEEP_FLAG_MAP, **extra_map})
    cfg = build_sweep_config(pairs)
    records = runner(cfg)
    if len(records) >= 2:
        records = postprocess_normalize(records)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / f"{stem}.csv"
    write_csv(records, csv_path, family_labels=[f.label for f in cfg.families])
    (out / f"{stem}.meta.txt").write_text(config_summary(cfg), newline="\n")
    if records:
        labels = [f.label for f in cfg.families]
        render_svg(
            records,
            ["eta"] + [f"{lab}_cbar_norm" for lab in labels],
            out / f"{stem}_saturation.svg",
            title="complexity saturation vs chaos parameter",
        )
        render_svg(
            records,
            ["eta"] + [f"{lab}_inv_sigma_b_norm" for lab in labels],
            out / f"{stem}_dispersion.svg",
            title="normalized inverse dispersion of b vs chaos parameter",
        )
    print(f"{stem}: {len(records)} grid points -> {csv_path}")


def _cmd_ising_sweep(args) -> None:
    extra = {
        "n_spins": "n_spins",
        "n_eta": "n_eta",
        "hz_min": "param_min",
        "hz_max": "param_max",
        "hz_points": "param_points",
    }
    _run_sweep(args, "ising", extra, run_ising_sweep, "ising_sweep")


def _cmd_banded_sweep(args) -> None:
    extra = {
        "dim": "dim",
        "bandwidth_frac": "bandwidth_frac",
        "k_min": "param_min",
        "k_max": "param_max",
        "k_points": "param_points",
        "realizations": "realizations",
    }
    _run_sweep(args, "banded", extra, run_banded_sweep, "banded_sweep")


def _profile_from_args(args):
    if args.profile == "gaussian":
        if args.center is None:
            raise ConfigError("--profile gaussian requires --center")
        return GaussianProfile(center=args.center, sigma=args.sigma)
    return UniformComplement()


def _bound_model(args):
    if args.model == "ising":
        ham = project_to_sector(
            build_ising_full(args.n_spins, args.hz), parity_basis(args.n_spins, args.sector)
        )
        tag = f"ising N={args.n_spins} {args.sector} hz={args.hz:g}"
    else:
        bandwidth = max(1, min(args.dim - 1, round(args.bandwidth_frac * args.dim)))
        ham = build_banded_random(args.dim, bandwidth, args.k, args.seed or 0)
        tag = f"banded D={args.dim} b={bandwidth} k={args.k:g}"
    return ham, tag


def _cmd_bound_sweep(args) -> None:
    ham, tag = _bound_model(args)
    if args.deltas:
        deltas = np.array([float(tok) for tok in args.deltas.split(",") if tok.strip()])
    else:
        deltas = np.geomspace(args.delta_min, args.delta_max, args.delta_points)
    sweep = run_bound_sweep(
        ham,
        args.j,
        _profile_from_args(args),
        deltas,
        allow_degenerate=args.allow_degenerate,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    table = np.column_stack([sweep.deltas, sweep.c_bar, sweep.bound])
    write_table(out / "bound_sweep.csv", ["delta", "c_bar", "bound"], table)
    render_line_chart(
        sweep.deltas,
        [("c_bar", sweep.c_bar), ("bound", sweep.bound)],
        out / "bound_sweep.svg",
        title=f"saturation vs bound ({tag})",
        x_label="delta",
    )
    print(f"bound-sweep [{tag}] j={args.j}: bound holds up to delta = {sweep.delta_ok_up_to:g}")


def _cmd_scaling_check(args) -> None:
    ham = build_goe(args.dim, args.seed or 0)
    j = args.j if args.j is not None else args.dim // 2
    if args.profile == "gaussian" and args.center is None:
        raise ConfigError("--profile gaussian requires --center")
    profile = (
        GaussianProfile(center=args.center, sigma=args.sigma)
        if args.profile == "gaussian"
        else UniformComplement()
    )
    deltas = np.geomspace(args.delta_min, args.delta_max, args.delta_points)
    report = overlap_scaling_check(ham, j, profile, deltas)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    table = np.column_stack([report.n_values, report.slopes, report.f_intercepts])
    write_table(out / "scaling_check.csv", ["n", "slope", "f_n"], table)
    print(
        f"scaling-check GOE D={args.dim} j={j}: median slope = {report.median_slope:.4f}, "
        f"sum f_n = {report.f_sum:.4f}"
    )


def _cmd_single_run(args) -> None:
    seed = args.seed or 0
    if args.model == "ising":
        basis = parity_basis(args.n_spins, args.sector)
        ham = project_to_sector(build_ising_full(args.n_spins, args.hz), basis)
        tag = f"ising N={args.n_spins} {args.sector} hz={args.hz:g}"
    elif args.model == "banded":
        bandwidth = max(1, min(args.dim - 1, round(args.bandwidth_frac * args.dim)))
        ham = build_banded_random(args.dim, bandwidth, args.k, seed)
        tag = f"banded D={args.dim} b={bandwidth} k={args.k:g}"
    else:
        ham = build_goe(args.dim, seed)
        tag = f"goe D={args.dim}"
    spec = eigendecompose(ham)
    state_kind = args.state or ("all_up" if args.model == "ising" else "uniform")
    if state_kind == "all_up":
        if args.model != "ising":
            raise ConfigError("--state all_up requires --model ising")
        psi = state_all_up(parity_basis(args.n_spins, args.sector))
    elif state_kind == "uniform":
        psi = state_uniform_eigenbasis(spec)
    else:
        psi = state_random(ham.dim, args.state_seed)
    lan = lanczos_full_orth(ham, psi, spec=spec, allow_degenerate=args.allow_degenerate)
    rep = saturation(spec, lan, psi, allow_degenerate=args.allow_degenerate)
    times = default_time_grid(spec.spectral_range, ham.dim, n_points=args.t_points)
    curve = complexity_values(spec, lan, psi, times)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_table(out / "single_run.csv", ["t", "c_k"], np.column_stack([curve.times, curve.values]))
    render_line_chart(
        curve.times[1:],
        [("c_k", curve.values[1:])],
        out / "single_run.svg",
        title=f"complexity growth ({tag}, {state_kind})",
        x_label="t",
        log_x=True,
    )
    disp = DispersionConfig(w_frac=args.w_frac, n0_frac=args.n0_frac)
    eta_val = eta(r_ratio_mean(spec.eigenvalues))
    print(f"single-run [{tag}] state={state_kind}")
    print(f"  K = {lan.krylov_dim} / D = {ham.dim}   eta = {eta_val:.4f}")
    print(f"  c_bar = {rep.c_bar:.6g}   c_bar_norm = {rep.c_bar_normalized:.6g}")
    try:
        print(
            f"  sigma(a) = {sigma_moving(lan.a, disp):.6g}   "
            f"sigma(b) = {sigma_moving(lan.b, disp):.6g}"
        )
    except ValueError:
        pass  # sequence too short for the dispersion window


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
