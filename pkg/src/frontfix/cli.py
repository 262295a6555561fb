"""Command-line front end.

Four subcommands: solve (single grid), refine (tolerance-driven ladder),
extrapolate (repeated Richardson tableau over a J ladder) and validate
(cross-check against the binomial oracle). Configuration comes from flags,
from a JSON file via --config, or both (flags win). All CSV/JSON artifacts
are deterministic: 12 significant digits, '.' decimal separator, newline
line endings, and a leading comment line carrying the resolved config.

Exit codes: 0 success, 2 configuration or stability error, 3 scheme blow-up,
4 tolerance unreachable, 5 oracle validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import BlowUpError, ParameterError, StabilityError, ToleranceUnreachableError
from .grid import GridSpec, ModelParams, build_grid, check_stability
from .oracle import LatticeSpec, crr_american_put
from .refine import RefinementConfig, adaptive_solve
from .richardson import OrderSchedule, extrapolate
from .solver import SolveOptions, price_at, solve, step_coefficients

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BLOWUP = 3
EXIT_TOLERANCE = 4
EXIT_VALIDATION = 5

_DEFAULTS = {
    "r": 0.1,
    "sigma": 0.2,
    "strike": 1.0,
    "maturity": 1.0,
    "xinf": 1.0,
    "J": 80,
    "mu": 20.0,
    "epsilon": 0.005,
    "max_levels": 8,
    "estimator": "first_richardson",
    "out": ".",
    "snapshots": (),
}


def _fmt(v: float) -> str:
    return f"{float(v):.12g}"


def _load_config_file(path: str) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParameterError(f"cannot read config file {path}: {exc}") from exc
    flat = {}
    model = raw.get("model", {})
    for key in ("r", "sigma", "strike", "maturity"):
        if key in model:
            flat[key] = model[key]
    grid = raw.get("grid", {})
    for src, dst in (("xinf", "xinf"), ("J", "J"), ("mu", "mu")):
        if src in grid:
            flat[dst] = grid[src]
    refine = raw.get("refine", {})
    for key in ("epsilon", "max_levels", "estimator"):
        if key in refine:
            flat[key] = refine[key]
    output = raw.get("output", {})
    if "dir" in output:
        flat["out"] = output["dir"]
    if "snapshots" in output:
        flat["snapshots"] = tuple(output["snapshots"])
    return flat


def _resolve(args: argparse.Namespace) -> dict:
    """defaults < config file < explicit flags."""
    cfg = dict(_DEFAULTS)
    if getattr(args, "config", None):
        cfg.update(_load_config_file(args.config))
    for key in cfg:
        v = getattr(args, key, None)
        if v is not None:
            cfg[key] = v
    cfg["J"] = int(cfg["J"])
    cfg["max_levels"] = int(cfg["max_levels"])
    return cfg


def _model(cfg: dict) -> ModelParams:
    return ModelParams(r=float(cfg["r"]), sigma=float(cfg["sigma"]),
                       strike=float(cfg["strike"]), maturity=float(cfg["maturity"]))


def _gridspec(cfg: dict) -> GridSpec:
    return GridSpec(x_inf=float(cfg["xinf"]), J=cfg["J"], mu=float(cfg["mu"]))


def _config_header(cfg: dict, command: str) -> str:
    # the output directory does not affect the computation; leaving it out
    # keeps artifacts byte-identical across runs into different directories
    resolved = {k: (list(v) if isinstance(v, tuple) else v)
                for k, v in sorted(cfg.items()) if k != "out"}
    return f"# frontfix {command} config: {json.dumps(resolved, sort_keys=True)}\n"


def _write_csv(path: Path, header_comment: str, columns: list, rows) -> None:
    lines = [header_comment, ",".join(columns) + "\n"]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row) + "\n")
    path.write_text("".join(lines), newline="")


def _write_solution_files(outdir: Path, cfg: dict, model, grid, solution, command: str) -> None:
    header = _config_header(cfg, command)
    _write_csv(outdir / "sf.csv", header, ["t_n", "sf_n"],
               zip(grid.t_nodes, solution.s_f))
    _write_csv(outdir / "pfinal.csv", header, ["x_j", "p_j"],
               zip(grid.x_nodes, solution.final.p))
    if solution.history is not None:
        rows = (
            (grid.t_nodes[n], grid.x_nodes[j], solution.history[n, j])
            for n in range(grid.N + 1)
            for j in range(grid.J + 1)
        )
        _write_csv(outdir / "surface.csv", header, ["t_n", "x_j", "p_jn"], rows)

    coeffs = step_coefficients(model, grid)
    stab = check_stability(model, grid)
    meta = {
        "config": json.loads(header.split("config: ", 1)[1]),
        "grid": {"J": grid.J, "N": grid.N, "dx": grid.dx, "dt": grid.dt,
                 "x_inf": grid.spec.x_inf, "mu": grid.spec.mu},
        "coefficients": {"a": coeffs.a, "b": coeffs.b, "c": coeffs.c,
                         "a1": coeffs.a1, "b1": coeffs.b1},
        "stability": {"dx_bound_ok": stab.dx_bound_ok, "dt_bound_ok": stab.dt_bound_ok,
                      "dx_limit": stab.dx_limit if stab.dx_limit != float("inf") else None,
                      "dt_limit": stab.dt_limit,
                      "coefficients_nonneg": stab.coefficients_nonneg},
        "final_sf": float(solution.s_f[-1]),
    }
    (outdir / "meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n",
                                      newline="")


def _describe_blowup(exc: BlowUpError) -> str:
    row = np.asarray(exc.p_row)
    signs = np.sign(row[np.abs(row) > 0])
    flips = int(np.sum(signs[1:] != signs[:-1])) if signs.size > 1 else 0
    return (
        f"blow-up at step n={exc.step}: {exc.reason}; s_f={exc.s_f!r}, "
        f"sup|p|={np.max(np.abs(row)):.6g}, sign changes across the row: {flips}"
    )


def cmd_solve(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    model = _model(cfg)
    grid = build_grid(model, _gridspec(cfg))
    opts = SolveOptions(force=bool(args.force),
                        keep_history=bool(args.full_history),
                        snapshot_times=tuple(cfg["snapshots"]))
    try:
        solution = solve(model, grid, opts)
    except StabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BlowUpError as exc:
        print(f"error: {_describe_blowup(exc)}", file=sys.stderr)
        return EXIT_BLOWUP
    outdir = Path(cfg["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    _write_solution_files(outdir, cfg, model, grid, solution, "solve")
    print(f"solved J={grid.J} N={grid.N}: final S_f = {solution.s_f[-1]:.6f}")
    return EXIT_OK


def cmd_refine(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    model = _model(cfg)
    config = RefinementConfig(model=model, base=_gridspec(cfg),
                              epsilon=float(cfg["epsilon"]),
                              max_levels=cfg["max_levels"],
                              estimator=cfg["estimator"])
    outdir = Path(cfg["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    header = _config_header(cfg, "refine")

    def emit(report):
        (outdir / "report.json").write_text(
            json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", newline="")
        for rec in report.levels:
            if rec.err_p_series is None:
                continue
            _write_csv(outdir / f"errors_level{rec.level}.csv", header,
                       ["t_n", "err_p_supnorm", "err_sf"],
                       zip(rec.t_series, rec.err_p_series, rec.err_sf_series))

    try:
        solution, report = adaptive_solve(config)
    except StabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BlowUpError as exc:
        print(f"error: {_describe_blowup(exc)}", file=sys.stderr)
        return EXIT_BLOWUP
    except ToleranceUnreachableError as exc:
        emit(exc.report)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    emit(report)
    _write_solution_files(outdir, cfg, model, solution.grid, solution, "refine")
    rec = report.levels[report.accepted_level]
    print(f"accepted level {report.accepted_level}: J={rec.J} N={rec.N} "
          f"(max err p={rec.max_err_p:.3e}, sf={rec.max_err_sf:.3e})")
    return EXIT_OK


def cmd_extrapolate(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    try:
        j_values = [int(tok) for tok in args.J_list.split(",") if tok.strip()]
    except ValueError:
        print(f"error: cannot parse J list {args.J_list!r}", file=sys.stderr)
        return EXIT_CONFIG
    if not j_values:
        print("error: empty J list", file=sys.stderr)
        return EXIT_CONFIG
    for prev, cur in zip(j_values, j_values[1:]):
        if cur != 2 * prev:
            print(f"error: J list must double exactly at every step "
                  f"({prev} -> {cur})", file=sys.stderr)
            return EXIT_CONFIG

    model = _model(cfg)
    finals = []
    try:
        for J in j_values:
            grid = build_grid(model, GridSpec(x_inf=float(cfg["xinf"]), J=J,
                                              mu=float(cfg["mu"])))
            finals.append(float(solve(model, grid).s_f[-1]))
    except StabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BlowUpError as exc:
        print(f"error: {_describe_blowup(exc)}", file=sys.stderr)
        return EXIT_BLOWUP

    tableau = extrapolate(finals, OrderSchedule(p0=1.0, step=1.0, q=4.0))
    labels = [str(J) for J in j_values]
    outdir = Path(cfg["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    header = _config_header(cfg, "extrapolate")
    (outdir / "tableau.csv").write_text(header + tableau.to_csv(labels=labels),
                                        newline="")
    text = tableau.to_text(labels=labels)
    (outdir / "tableau.txt").write_text(text, newline="")
    print(text, end="")
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    cfg = _resolve(args)
    model = _model(cfg)
    grid = build_grid(model, _gridspec(cfg))
    try:
        solution = solve(model, grid)
    except StabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BlowUpError as exc:
        print(f"error: {_describe_blowup(exc)}", file=sys.stderr)
        return EXIT_BLOWUP

    lattice = LatticeSpec(steps=int(args.steps))
    threshold = 2e-3 * model.strike
    moneyness = (0.8, 0.9, 1.0, 1.1, 1.25)
    all_ok = True
    print(f"{'S':>10}{'fd':>14}{'crr':>14}{'abs diff':>14}  verdict")
    for m in moneyness:
        S = m * model.strike
        fd = price_at(solution, S, model.maturity).P
        crr = crr_american_put(model, S, lattice)
        diff = abs(fd - crr)
        ok = diff <= threshold
        all_ok = all_ok and ok
        print(f"{S:>10.4f}{fd:>14.6f}{crr:>14.6f}{diff:>14.2e}  "
              f"{'pass' if ok else 'FAIL'}")
    return EXIT_OK if all_ok else EXIT_VALIDATION


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--r", type=float, help="interest rate")
    parser.add_argument("--sigma", type=float, help="volatility")
    parser.add_argument("--strike", type=float, help="strike price")
    parser.add_argument("--maturity", type=float, help="maturity in years")
    parser.add_argument("--xinf", type=float, help="truncation point in x")
    parser.add_argument("--J", type=int, help="number of space intervals")
    parser.add_argument("--mu", type=float, help="grid-ratio dt/dx^2")
    parser.add_argument("--out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frontfix",
        description="American put pricing by a front-fixing explicit scheme "
                    "with Richardson-extrapolation error control.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve on one grid and write csv/json artifacts")
    _add_common(p)
    p.add_argument("--force", action="store_true",
                   help="run even if the stability check fails")
    p.add_argument("--full-history", action="store_true",
                   help="write the full (t, x) surface")
    p.add_argument("--snapshots", type=lambda s: tuple(float(t) for t in s.split(",")),
                   help="comma-separated times whose slices are retained")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("refine", help="refine until the error estimate meets --epsilon")
    _add_common(p)
    p.add_argument("--epsilon", type=float, help="error tolerance")
    p.add_argument("--max-levels", dest="max_levels", type=int,
                   help="maximum number of ladder levels")
    p.add_argument("--estimator", choices=("first_richardson", "safe"),
                   help="error estimator to test against epsilon")
    p.set_defaults(func=cmd_refine)

    p = sub.add_parser("extrapolate",
                       help="solve a doubling J ladder and print the extrapolation tableau")
    _add_common(p)
    p.add_argument("--J-list", dest="J_list", required=True,
                   help="comma-separated, exactly doubling J values")
    p.set_defaults(func=cmd_extrapolate)

    p = sub.add_parser("validate", help="cross-check prices against a CRR binomial lattice")
    _add_common(p)
    p.add_argument("--steps", type=int, default=10_000,
                   help="binomial lattice steps (default 10000)")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
