"""Command-line frontend: deterministic runs, CSV + JSON sidecar emission.

Every subcommand writes a CSV (header row + values at 9 significant digits)
and a JSON sidecar <output>.json holding the resolved configuration, library
versions, the column schema, any analytic-bound metadata, and a timestamp
(the timestamp never enters the CSV, so reruns are byte-identical).

A flat KEY=VALUE config file can seed any subcommand's flags via --config;
explicit command-line flags override config values.  Exit codes: 0 success,
2 configuration errors, 3 numerical failures.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import datetime
import json
import os
import sys

import numpy as np

from . import __version__, circuits, cloner, josephson
from . import disorder as disorder_mod
from .hilbert import DimensionError

FIGURE_FOR_SUBCOMMAND = {
    "theta-sweep": "fig2",
    "m-sweep": "fig3",
    "disorder": "fig4",
    "classical-noise": "fig6",
    "redfield-compare": "fig7",
    "josephson": "fig12",
}


class ConfigError(Exception):
    """Invalid configuration (bad file, unknown key, bad value)."""


def _fmt(value) -> str:
    if isinstance(value, (float, np.floating)):
        return f"{float(value):.9g}"
    return str(value)


def _floats(text: str) -> list[float]:
    """Parse '0,0.1,0.2' or 'start:stop:count' into a float list."""
    try:
        if ":" in text:
            lo, hi, count = text.split(":")
            return [float(x) for x in np.linspace(float(lo), float(hi), int(count))]
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"cannot parse grid {text!r}: {exc}") from exc


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"cannot parse int list {text!r}: {exc}") from exc


def load_config(path: str) -> dict[str, str]:
    """Flat KEY=VALUE file; '#' starts a comment; blank lines ignored."""
    if not os.path.exists(path):
        raise ConfigError(f"config file {path!r} not found")
    out: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected KEY=VALUE, got {raw!r}")
            key, value = line.split("=", 1)
            out[key.strip()] = value.strip()
    return out


def write_output(path: str, columns: list[str], rows: list[list],
                 config: dict, metadata: dict) -> None:
    """CSV body plus the JSON sidecar (config, versions, schema, metadata)."""
    import scipy

    body = ",".join(columns) + "\n"
    for row in rows:
        if len(row) != len(columns):
            raise RuntimeError("row width does not match schema")
        body += ",".join(_fmt(v) for v in row) + "\n"
    with open(path, "w", newline="") as fh:
        fh.write(body)
    sidecar = {
        "schema": columns,
        "config": config,
        "versions": {
            "spinclone": __version__,
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "metadata": metadata,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    with open(path + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=2, default=str)
        fh.write("\n")


def _resolved_config(args: argparse.Namespace) -> dict:
    skip = {"func", "config"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def _maybe_render(args: argparse.Namespace) -> None:
    if not getattr(args, "render", False):
        return
    figure = FIGURE_FOR_SUBCOMMAND.get(args.subcommand)
    if figure is None:
        return
    from spinclone_plots.render import FigureJob, render

    stem = args.output[:-4] if args.output.endswith(".csv") else args.output
    render(FigureJob(figure, (args.output,), stem))


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("SPINCLONE_WORKERS", "1")))
    except ValueError:
        return 1


def _pmap(fn, items):
    n = _workers()
    if n == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with concurrent.futures.ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------------------
# subcommand handlers


def _model_lam(model: str) -> float:
    if model == "xy":
        return 0.0
    if model == "heisenberg":
        return 1.0
    raise ConfigError(f"unknown model {model!r}")


def cmd_pcc(args) -> tuple[list[str], list[list], dict]:
    lam = _model_lam(args.model)
    if args.topology == "star":
        task = cloner.CloneTask.make("star", lam, args.theta, args.phi, M=args.M)
        M = args.M
    elif args.topology == "tree":
        task = cloner.CloneTask.make("tree", lam, args.theta, args.phi,
                                     k=args.k, j=args.j)
        M = args.k ** (args.j + 1)
    else:
        raise ConfigError(f"unsupported topology {args.topology!r}")
    t_grid = cloner.default_t_grid(horizon=args.t_horizon)
    b_grid = cloner.default_b_grid()
    if lam == 1.0:
        b_grid = np.concatenate([[0.0], b_grid])
    report = cloner.optimize(task, B_grid=b_grid, t_grid=t_grid)
    bound = cloner.optimal_pcc_bound(1, M)
    columns = ["topology", "M", "model", "theta", "phi", "F", "B_over_J",
               "t_over_J", "F_pcc_bound"]
    rows = [[args.topology, M, args.model, args.theta, args.phi,
             report.mean_fidelity, report.B_star, report.t_star, bound]]
    return columns, rows, {"bound": "optimal 1->M phase-covariant cloning"}


def cmd_nm(args) -> tuple[list[str], list[list], dict]:
    task = cloner.CloneTask.make("bipartite", 0.0, args.theta, args.phi,
                                 N=args.N, M=args.M)
    report = cloner.optimize(task, threshold_delta=args.delta)
    bound = cloner.optimal_pcc_bound(args.N, args.M)
    columns = ["N", "M", "F_abs", "B_over_J", "t_over_J", "t_c", "delta",
               "F_pcc_bound"]
    t_c = report.t_threshold if report.t_threshold is not None else np.nan
    rows = [[args.N, args.M, report.mean_fidelity, report.B_star,
             report.t_star, t_c, args.delta, bound]]
    return columns, rows, {
        "scan": "B geomspace [0.01, 10] x t [0, 5e3] step 0.05",
        "t_c": "earliest time with F >= F_abs - delta at the optimal field",
    }


def cmd_theta_sweep(args) -> tuple[list[str], list[list], dict]:
    thetas = np.linspace(0.0, np.pi, args.points)
    rows = []
    for theta in thetas:
        row = [theta]
        for model in ("xy", "heisenberg"):
            lam = _model_lam(model)
            task = cloner.CloneTask.make("star", lam, float(theta), M=args.M)
            B, t = (cloner.xy_optimum(args.M) if model == "xy"
                    else cloner.heisenberg_optimum(args.M))
            engine = cloner._ScanEngine(task)
            row.append(engine.mean_fidelity(B, t))
        rows.append(row)
    columns = ["theta", "F_xy", "F_heisenberg"]
    return columns, rows, {
        "working_point": "each model at its equatorial optimum (B*, t*)"
    }


def cmd_m_sweep(args) -> tuple[list[str], list[list], dict]:
    rows = []
    t_grid = cloner.default_t_grid(horizon=args.t_horizon)
    for M in range(args.M_min, args.M_max + 1):
        xy_task = cloner.CloneTask.make("star", 0.0, np.pi / 2.0, M=M)
        xy = cloner.optimize(xy_task, t_grid=t_grid)
        h_task = cloner.CloneTask.make("star", 1.0, np.pi / 2.0, M=M)
        h_b_grid = np.concatenate([[0.0], cloner.default_b_grid()])
        heis = cloner.optimize(h_task, B_grid=h_b_grid, t_grid=t_grid)
        rows.append([M, xy.mean_fidelity, heis.mean_fidelity,
                     cloner.optimal_pcc_bound(1, M), xy.B_star, xy.t_star,
                     heis.t_star])
    columns = ["M", "F_xy", "F_heisenberg", "F_pcc", "B_xy", "t_xy",
               "t_heisenberg"]
    return columns, rows, {
        "F_pcc": "optimal 1->M phase-covariant bound (odd/even closed forms)"
    }


def cmd_disorder(args) -> tuple[list[str], list[list], dict]:
    task = cloner.CloneTask.make("star", 0.0, np.pi / 2.0, M=args.M)
    B, t = cloner.xy_optimum(args.M)
    rows = []
    for eps in _floats(args.epsilon):
        for mu in _floats(args.mu):
            spec = disorder_mod.DisorderSpec(eps, mu, args.n, args.seed)
            result = disorder_mod.disorder_ensemble(task, spec, B, t)
            rows.append([args.M, eps, mu, args.n, result.mean_fidelity,
                         result.std_error, args.seed])
    columns = ["M", "epsilon", "mu", "n", "mean_F", "stderr", "seed"]
    return columns, rows, {"working_point": {"B_over_J": B, "t_over_J": t}}


def cmd_classical_noise(args) -> tuple[list[str], list[list], dict]:
    task = cloner.CloneTask.make("star", 0.0, np.pi / 2.0, M=args.M)
    B, t = cloner.xy_optimum(args.M)
    targets = ["J", "B"] if args.target == "both" else [args.target]
    rows = []
    for delta in _floats(args.delta):
        for target in targets:
            spec = disorder_mod.ClassicalNoiseSpec(target, delta, args.n,
                                                   args.seed)
            result = disorder_mod.classical_noise_average(task, spec, B, t)
            rows.append([args.M, target, delta, args.n, result.mean_fidelity,
                         result.std_error, args.seed])
    columns = ["M", "target", "delta", "n", "mean_F", "stderr", "seed"]
    return columns, rows, {"working_point": {"B_over_J": B, "t_over_J": t}}


def _redfield_point(job):
    M, alpha, beta, cutoff, tol = job
    from . import redfield as redfield_mod

    bath = redfield_mod.BathSpec(alpha, beta, cutoff)
    f_net, f_gate = circuits.compare(M, bath, tol=tol)
    return [alpha, beta, cutoff, M, f_net, f_gate]


def cmd_redfield_compare(args) -> tuple[list[str], list[list], dict]:
    jobs = [(M, alpha, args.beta, args.cutoff, args.tol)
            for M in _ints(args.M) for alpha in _floats(args.alpha)]
    rows = _pmap(_redfield_point, jobs)
    columns = ["alpha", "beta", "cutoff", "M", "F_network", "F_gates"]
    crossovers = {}
    for M in _ints(args.M):
        sub = [r for r in rows if r[3] == M]
        sub.sort(key=lambda r: r[0])
        flips = [r[0] for i, r in enumerate(sub)
                 if i > 0 and sub[i - 1][4] < sub[i - 1][5] and r[4] >= r[5]]
        crossovers[str(M)] = flips[0] if flips else None
    return columns, rows, {"alpha_star": crossovers}


def cmd_universal(args) -> tuple[list[str], list[list], dict]:
    ts = list(np.arange(0.0, args.t_max + 0.5 * args.t_step, args.t_step))
    t_opt = 2.0 * np.pi / 3.0
    if not any(abs(t - t_opt) < 1e-12 for t in ts):
        ts.append(t_opt)
    ts.sort()
    rows = [[t, cloner.universal_clone_fidelity(t, args.g)] for t in ts]
    columns = ["t_over_J", "F"]
    return columns, rows, {
        "note": "fidelity is independent of the coupling scale g and of the "
                "input state; maximum 13/18 at Jt = 2*pi/3",
    }


def cmd_qudit(args) -> tuple[list[str], list[list], dict]:
    modes = ["effective", "full"] if args.mode == "both" else [args.mode]
    B = np.sqrt(args.M) / 2.0 if args.B is None else args.B
    t = np.pi / np.sqrt(args.M) if args.t is None else args.t
    rows = []
    for mode in modes:
        F = cloner.qudit_clone_fidelity(args.d, args.M, B, t, mode=mode)
        rows.append([args.d, args.M, mode, F,
                     cloner.qudit_closed_form(args.d, args.M), B, t])
    columns = ["d", "M", "mode", "F", "F_closed_form", "B_over_J", "t_over_J"]
    return columns, rows, {"encoding": "one-hot, d qubits per logical qudit"}


def cmd_tetrahedron(args) -> tuple[list[str], list[list], dict]:
    best_f, best_x, all_f = cloner.tetrahedron_maximize(args.starts, args.seed)
    bound = cloner.closed_form_fidelity("xy", 3, np.pi / 2.0)
    columns = ["F_best", "F_star_3", "j01", "j02", "j03", "j12", "j13",
               "j23", "b0", "b1", "b2", "b3", "lambda", "t"]
    rows = [[best_f, bound] + [float(x) for x in best_x]]
    return columns, rows, {"n_starts": args.starts,
                           "start_results": [round(f, 12) for f in all_f]}


def cmd_josephson(args) -> tuple[list[str], list[list], dict]:
    scan = josephson.josephson_fidelity_scan(_floats(args.ratios))
    columns = ["ratio", "F_max", "t_star", "B_star"]
    rows = [list(row) for row in zip(scan.ratios, scan.fidelities,
                                     scan.t_stars, scan.b_stars)]
    return columns, rows, {"ratio": "E_K / J_K"}


DATA_HANDLERS = {
    "pcc": cmd_pcc,
    "nm": cmd_nm,
    "theta-sweep": cmd_theta_sweep,
    "m-sweep": cmd_m_sweep,
    "disorder": cmd_disorder,
    "classical-noise": cmd_classical_noise,
    "redfield-compare": cmd_redfield_compare,
    "universal": cmd_universal,
    "qudit": cmd_qudit,
    "tetrahedron": cmd_tetrahedron,
    "josephson": cmd_josephson,
}


def run_data_subcommand(args) -> int:
    handler = DATA_HANDLERS[args.subcommand]
    columns, rows, metadata = handler(args)
    write_output(args.output, columns, rows, _resolved_config(args), metadata)
    _maybe_render(args)
    return 0


def run_render(args) -> int:
    from spinclone_plots.render import FigureJob, render

    render(FigureJob(args.figure, tuple(args.csv), args.out))
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(
        prog="spinclone",
        description="Spin-network quantum cloning laboratory",
    )
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    subs: dict[str, argparse.ArgumentParser] = {}

    def sub(name, **kwargs):
        p = subparsers.add_parser(name, **kwargs)
        subs[name] = p
        p.add_argument("--config", help="flat KEY=VALUE config file")
        if name != "render":
            p.add_argument("--output", required=True, help="CSV output path")
            p.add_argument("--render", action="store_true",
                           help="also render the matching figure next to the CSV")
        return p

    p = sub("pcc", help="1->M star/tree optimization")
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--model", choices=["xy", "heisenberg"], default="xy")
    p.add_argument("--theta", type=float, default=np.pi / 2.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--topology", choices=["star", "tree"], default="star")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--j", type=int, default=1)
    p.add_argument("--t-horizon", type=float, default=50.0)

    p = sub("nm", help="N->M maximization with threshold time")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--theta", type=float, default=np.pi / 2.0)
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--delta", type=float, default=1e-2)

    p = sub("theta-sweep", help="fidelity vs input polar angle")
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--points", type=int, default=100)

    p = sub("m-sweep", help="optimal fidelity vs clone count")
    p.add_argument("--M-min", type=int, default=2)
    p.add_argument("--M-max", type=int, default=10)
    p.add_argument("--t-horizon", type=float, default=50.0)

    p = sub("disorder", help="static coupling-disorder ensemble")
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--epsilon", default="0.1")
    p.add_argument("--mu", default="0")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--seed", type=int, required=True)

    p = sub("classical-noise", help="quenched Gaussian parameter noise")
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--target", choices=["J", "B", "both"], default="both")
    p.add_argument("--delta", default="0:2:9")
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--seed", type=int, required=True)

    p = sub("redfield-compare", help="network vs gate circuit under baths")
    p.add_argument("--M", default="2,3")
    p.add_argument("--alpha", default="0.0001,0.0003,0.001,0.002,0.003,0.005,0.01")
    p.add_argument("--beta", type=float, default=10.0)
    p.add_argument("--cutoff", type=float, default=1e4)
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub("universal", help="3-spin universal cloner curve")
    p.add_argument("--t-max", type=float, default=2.0 * np.pi)
    p.add_argument("--t-step", type=float, default=0.01)
    p.add_argument("--g", type=float, default=1.0)

    p = sub("qudit", help="one-hot encoded qudit cloning")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--M", type=int, default=2)
    p.add_argument("--mode", choices=["effective", "full", "both"],
                   default="effective")
    p.add_argument("--B", type=float, default=None)
    p.add_argument("--t", type=float, default=None)

    p = sub("tetrahedron", help="general 4-spin family maximization")
    p.add_argument("--starts", type=int, default=24)
    p.add_argument("--seed", type=int, required=True)

    p = sub("josephson", help="charge-qubit ratio scan")
    p.add_argument("--ratios", default="0,0.05,0.1,0.2,0.3")

    p = sub("render", help="regenerate a figure from CSV output")
    p.add_argument("--figure", required=True,
                   choices=["fig2", "fig3", "fig4", "fig6", "fig7", "fig8",
                            "fig12"])
    p.add_argument("--csv", nargs="+", required=True)
    p.add_argument("--out", required=True, help="output image stem")

    return parser, subs


def _inject_config(argv: list[str], subs: dict) -> list[str]:
    """Expand --config FILE into leading flags so CLI flags still override."""
    if "--config" not in argv:
        return argv
    if not argv or argv[0] not in subs:
        return argv
    idx = argv.index("--config")
    if idx + 1 >= len(argv):
        raise ConfigError("--config needs a file path")
    cfg = load_config(argv[idx + 1])
    valid = {a.dest for a in subs[argv[0]]._actions}
    flags: list[str] = []
    for key, value in cfg.items():
        if key not in valid:
            raise ConfigError(
                f"unknown config key {key!r} for subcommand {argv[0]!r}")
        flag = "--" + key.replace("_", "-")
        if value.lower() in ("true", "false"):
            if value.lower() == "true":
                flags.append(flag)
        else:
            flags.extend([flag, value])
    return [argv[0]] + flags + argv[1:]


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    try:
        argv = _inject_config(argv, subs)
        args = parser.parse_args(argv)
        if args.subcommand == "render":
            return run_render(args)
        return run_data_subcommand(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (DimensionError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
