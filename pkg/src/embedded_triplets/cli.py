"""Experiment runner: ``embedded-triplets <command> --config cfg.json --out DIR``.

Commands and their outputs (CSV with a header row, UTF-8, LF endings, plus a
``summary.json``):

``triplet-check``
    ``residual_vs_cond.csv``: target_cond, cond, dual_residual,
    h_isometry_defect, a_isometry_defect, inverse_defect,
    theta_unitarity_defect, theta_h0_defect, domain_equality_defect
``polydisc``
    ``spectra.csv``: operator, value; ``hs_partial_sums.csv``: degree, partial_sum
``weighted``
    ``spectra.csv``: operator, value
``dirichlet-solve``
    ``solution.csv``: node_index, x, v
``dirichlet-convergence``
    ``convergence.csv``: n, h, max_error, observed_order

Exit status: 0 on success, 2 when the configuration fails validation, 3 on a
numerical failure (no solution, singular factor).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import dirichlet, polydisc, triplet, weighted
from .errors import NumericalFailure, PreconditionError

log = logging.getLogger(__name__)

COMMANDS = ("triplet-check", "polydisc", "weighted", "dirichlet-solve", "dirichlet-convergence")

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


class ConfigError(PreconditionError):
    pass


def _num(x):
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if math.isnan(x) or math.isinf(x):
            return repr(x)
        return x
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    return _num(obj)


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def write_json(path: Path, data: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(_jsonable(data), fh, indent=2, sort_keys=True)
        fh.write("\n")


def _require(params: dict, key: str, kind, default=None):
    if key not in params:
        if default is None:
            raise ConfigError(f"missing parameter {key!r}")
        return default
    value = params[key]
    try:
        return kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"parameter {key!r} has invalid value {value!r}") from None


# -- commands ------------------------------------------------------------------------


def run_triplet_check(params: dict, out: Path, seed: int, tol: float) -> dict:
    dim = _require(params, "dim", int, 8)
    cond = _require(params, "cond", float, 1e3)
    samples = _require(params, "samples", int, 16)
    sweep = params.get("cond_sweep", [1e0, 1e2, 1e4, 1e6, 1e8])
    if not 1 <= dim <= 2000:
        raise ConfigError(f"dim must be in [1, 2000], got {dim}")
    if cond < 1:
        raise ConfigError(f"cond must be >= 1, got {cond}")
    rng = np.random.default_rng(seed)
    tr = triplet.from_factor(triplet.random_factor(dim, cond, rng))
    rep = triplet.verify(tr, tol=tol, samples=samples, seed=seed)
    rows = triplet.condition_sweep(dim, [float(c) for c in sweep], seed, samples=min(samples, 8))
    cols = [
        "target_cond", "cond", "dual_residual", "h_isometry_defect", "a_isometry_defect",
        "inverse_defect", "theta_unitarity_defect", "theta_h0_defect", "domain_equality_defect",
    ]
    write_csv(out / "residual_vs_cond.csv", cols, ([r[c] for c in cols] for r in rows))
    return {"report": rep.to_dict(), "sweep": rows}


def run_polydisc(params: dict, out: Path, seed: int, tol: float) -> dict:
    alpha = params.get("alpha")
    if alpha is None:
        raise ConfigError("missing parameter 'alpha'")
    alpha = [float(a) for a in np.atleast_1d(alpha)]
    max_deg = _require(params, "max_deg", int)
    if max_deg < 0 or (max_deg + 1) ** len(alpha) > 4096:
        raise ConfigError("max_deg must be >= 0 with at most 4096 coefficients")
    sp = polydisc.PolydiscSpace(tuple(alpha), max_deg)
    tr, rep = polydisc.polydisc_triplet(sp)
    vrep = triplet.verify(tr, tol=tol, seed=seed)
    rows = [("H", v) for v in rep.spectrum_h] + [("A", v) for v in rep.spectrum_a]
    write_csv(out / "spectra.csv", ["operator", "value"], rows)
    hs = polydisc.hs_diagnostic(sp)
    write_csv(out / "hs_partial_sums.csv", ["degree", "partial_sum"], enumerate(hs))
    return {"alpha": alpha, "max_deg": max_deg, "spectra": rep.__dict__, "report": vrep.to_dict()}


def run_weighted(params: dict, out: Path, seed: int, tol: float) -> dict:
    if "csv" in params:
        ws = weighted.read_weights_csv(params["csv"])
    else:
        omega = params.get("omega")
        if omega is None:
            raise ConfigError("weighted needs 'csv' or 'omega'")
        mu = params.get("mu", [1.0] * len(omega))
        ws = weighted.WeightedSpace(np.array(mu, float), np.array(omega, float))
    tr, rep = weighted.weighted_triplet(ws)
    vrep = triplet.verify(tr, tol=tol, seed=seed)
    rows = [("H", v) for v in rep.spectrum_h] + [("A", v) for v in rep.spectrum_a]
    write_csv(out / "spectra.csv", ["operator", "value"], rows)
    return {"n": ws.n, "spectra": rep.__dict__, "report": vrep.to_dict()}


def _dirichlet_data(params: dict):
    if "csv" in params:
        fld, g = dirichlet.read_field_csv(params["csv"])
        if g is None:
            raise ConfigError("field CSV has no g column")
        return fld.grid, fld, g
    n = _require(params, "n", int)
    grid = dirichlet.Grid1D(n)
    sampling = params.get("sampling", "midpoint")
    b = _require(params, "b", str, "const:1")
    fld = dirichlet.field_from_preset(grid, b, params.get("c", "same"), sampling=sampling)
    if "solution" in params:
        g = dirichlet.manufactured_load(grid, b, params["solution"], sampling)
    else:
        g = dirichlet.sample(grid, dirichlet.preset(_require(params, "g", str)), sampling)
    return grid, fld, g


def run_dirichlet_solve(params: dict, out: Path, seed: int, tol: float) -> dict:
    grid, fld, g = _dirichlet_data(params)
    prob = dirichlet.DirichletProblem(grid, fld)
    sol = prob.solve(g)
    write_csv(
        out / "solution.csv",
        ["node_index", "x", "v"],
        ((i + 1, x, v) for i, (x, v) in enumerate(zip(grid.nodes, sol.v))),
    )
    cond = dirichlet.check_conditions(fld)
    return {
        "n": grid.n,
        "residual": sol.residual,
        "plus_norm_of_v": sol.plus_norm_of_v,
        "functional_norm": prob.functional_norm(g),
        "kernel_dim": sol.kernel_dim,
        "conditions": {**cond.__dict__, "c4": cond.c4},
    }


def run_dirichlet_convergence(params: dict, out: Path, seed: int, tol: float) -> dict:
    b = _require(params, "b", str, "const:1")
    solution = _require(params, "solution", str, "sine")
    sampling = _require(params, "sampling", str, "midpoint")
    levels = params.get("levels", [8, 16, 32, 64, 128, 256])
    study = dirichlet.convergence_study(b, solution, levels, sampling)
    cols = ["n", "h", "max_error", "observed_order"]
    write_csv(out / "convergence.csv", cols, ([r[c] for c in cols] for r in study.rows()))
    return {
        "b": b,
        "solution": solution,
        "sampling": sampling,
        "fitted_order": study.fitted_order,
        "monotone": study.monotone,
    }


RUNNERS = {
    "triplet-check": run_triplet_check,
    "polydisc": run_polydisc,
    "weighted": run_weighted,
    "dirichlet-solve": run_dirichlet_solve,
    "dirichlet-convergence": run_dirichlet_convergence,
}


def load_config(path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def run(config: dict, out: Path) -> int:
    """Run one experiment described by ``config``; return the exit status."""
    command = config.get("command")
    params = config.get("params", {})
    try:
        if command not in RUNNERS:
            raise ConfigError(f"unknown command {command!r}; choose from {', '.join(COMMANDS)}")
        seed = config.get("seed")
        if seed is None:
            raise ConfigError("a seed is mandatory")
        seed = int(seed)
        if not 0 <= seed < 2**64:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {seed}")
        tol = float(config.get("tol", 1e-8))
        if not tol > 0:
            raise ConfigError(f"tol must be positive, got {tol}")
        out.mkdir(parents=True, exist_ok=True)
        summary = RUNNERS[command](params, out, seed, tol)
    except NumericalFailure as exc:
        log.error("numerical failure: %s", exc)
        return EXIT_NUMERICAL
    except (PreconditionError, ValueError, TypeError, KeyError) as exc:
        log.error("invalid configuration: %s", exc)
        return EXIT_INVALID
    write_json(out / "summary.json", {"command": command, "seed": seed, "tol": tol, "params": params, **summary})
    return EXIT_OK


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="embedded-triplets",
        description="Run one experiment and write its CSV tables and summary.json.",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS, help="experiment to run; must match the config command if both are given")
    parser.add_argument("--config", type=Path, help="JSON config: {command, seed, tol, params}")
    parser.add_argument("--out", type=Path, default=Path("out"), help="output directory (default: out)")
    parser.add_argument("--seed", type=int, help="unsigned 64-bit seed; overrides the config")
    parser.add_argument("--tol", type=float, help="verification tolerance; overrides the config (default 1e-8)")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")

    try:
        config = load_config(args.config) if args.config else {}
    except ConfigError as exc:
        log.error("%s", exc)
        return EXIT_INVALID
    if args.command:
        if config.get("command", args.command) != args.command:
            log.error("command %s conflicts with config command %s", args.command, config["command"])
            return EXIT_INVALID
        config["command"] = args.command
    if args.seed is not None:
        config["seed"] = args.seed
    if args.tol is not None:
        config["tol"] = args.tol
    return run(config, args.out)


if __name__ == "__main__":
    sys.exit(main())
