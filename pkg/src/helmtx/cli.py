"""Command-line front end: solve | solve-fast | eig | benchmark |
mie-reference | convergence.

Configuration is a flat JSON file with kebab-case keys; command-line
flags override file values.  Tabular results go to CSV (with the
effective configuration embedded in '#' header lines), structured
results to JSON.  Exit codes: 0 ok, 2 configuration error, 3 numerical
failure, 4 assertion failure in --assert mode.
"""

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import direct, fast, mie
from .eigensolver import SsmConfig, solve_eigen
from .geometry import GeometryError, curve_from_descriptor, discretize
from .quadrature import QuadratureError, assemble_four, dump_operator
from .systems import IncidentField, ProblemParams, SystemError, assemble_bundle, \
    build_mixed, build_ordinary

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ASSERT = 4


class ConfigError(ValueError):
    pass


DEFAULTS = {
    "curve": {"type": "circle", "radius": 1.0},
    "eps0": 1.0,
    "eps1": 2.0,
    "omega": 1.0,
    "beta": None,                 # [re, im] or None for i/k0
    "formulation": "mixed",
    "solver": "dense",
    "n": 400,
    "n-sweep": None,              # list of N values
    "quadrature-order": 1,
    "leaf-size": 128,
    "initial-skeletons": 40,
    "skeleton-growth": 1.15,
    "ssm-center": [0.43, -1.28],
    "ssm-side": 0.1,
    "ssm-points-per-side": 48,
    "ssm-moments": 4,
    "ssm-block-size": 4,
    "out": None,
    "seed": 0,
    "threads": 2,
    "dump-operators": None,
    "assert": False,
}


def _parse_complex(value, what):
    if value is None:
        return None
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        parts = value.split(",")
        if len(parts) == 1:
            return complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    raise ConfigError(f"{what} must be a real number or 're,im', got {value!r}")


def load_config(path, overrides):
    cfg = dict(DEFAULTS)
    if path is not None:
        try:
            with open(path) as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}")
        unknown = set(data) - set(DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        cfg.update(data)
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    validate_config(cfg)
    return cfg


def validate_config(cfg):
    if cfg["eps0"] <= 0 or cfg["eps1"] <= 0:
        raise ConfigError("eps0 and eps1 must be positive")
    omega = _parse_complex(cfg["omega"], "omega")
    if omega == 0:
        raise ConfigError("omega must be nonzero")
    beta = _parse_complex(cfg["beta"], "beta")
    if beta is not None and beta.imag == 0.0:
        raise ConfigError("beta must have nonzero imaginary part")
    if cfg["formulation"] not in ("mixed", "ordinary"):
        raise ConfigError(f"formulation must be mixed|ordinary, got {cfg['formulation']!r}")
    if cfg["solver"] not in ("dense", "fast"):
        raise ConfigError(f"solver must be dense|fast, got {cfg['solver']!r}")
    n = int(cfg["n"])
    if n < 4 or n % 2:
        raise ConfigError(f"n must be even and >= 4, got {n}")
    if cfg["quadrature-order"] not in (1, 31):
        raise ConfigError("quadrature-order must be 1 or 31")
    try:
        curve_from_descriptor(cfg["curve"])
    except GeometryError as exc:
        raise ConfigError(str(exc))


def make_params(cfg):
    return ProblemParams(eps0=float(cfg["eps0"]), eps1=float(cfg["eps1"]),
                         omega=_parse_complex(cfg["omega"], "omega"),
                         beta=_parse_complex(cfg["beta"], "beta"))


def effective_config(cfg):
    out = dict(cfg)
    out.pop("out", None)  # the destination is not part of the run definition
    out["schema-version"] = SCHEMA_VERSION
    return out


def _config_header(cfg):
    return "# config " + json.dumps(effective_config(cfg), sort_keys=True, default=repr)


def _write_csv(path, cfg, header, rows):
    lines = [_config_header(cfg), ",".join(header)]
    for row in rows:
        lines.append(",".join(str(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _write_json(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=True, default=repr) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _grid_and_mie(cfg, params, n):
    curve = curve_from_descriptor(cfg["curve"])
    grid = discretize(curve, n)
    mie_sol = None
    if cfg["curve"].get("type") == "circle" and complex(params.omega).imag == 0:
        mie_sol = mie.mie_solve(cfg["curve"].get("radius", 1.0), params)
    return grid, mie_sol


def _maybe_dump_operators(cfg, params, grid):
    dump_dir = cfg.get("dump-operators")
    if not dump_dir:
        return
    dump_dir = Path(dump_dir)
    dump_dir.mkdir(parents=True, exist_ok=True)
    manifest = {"schema-version": SCHEMA_VERSION, "n": grid.n,
                "dtype": "complex128 little-endian row-major", "files": {}}
    for tag, k in (("k0", params.k0), ("k1", params.k1)):
        mats = assemble_four(k, grid, order=int(cfg["quadrature-order"]))
        for kind, mat in mats.items():
            name = f"{kind}_{tag}.bin"
            dump_operator(mat, dump_dir / name)
            manifest["files"][name] = {"kind": kind, "wavenumber": [k.real, k.imag]}
    _write_json(dump_dir / "manifest.json", manifest)


def _solve_once(cfg, params, grid):
    inc = IncidentField(kind="plane", direction=(1.0, 0.0))
    order = int(cfg["quadrature-order"])
    if cfg["solver"] == "fast":
        fcfg = fast.FastConfig(leaf_size=int(cfg["leaf-size"]),
                               skeleton_count=int(cfg["initial-skeletons"]),
                               growth=float(cfg["skeleton-growth"]),
                               formulation=cfg["formulation"])
        res = fast.solve_fast(grid, params, inc, fcfg)
        return res.u, res.q, res.stats
    ops = assemble_bundle(params, grid, order=order)
    if cfg["formulation"] == "mixed":
        system = build_mixed(params, grid, ops, incident=inc)
        counter = direct.FlopCounter()
        fct = direct.factor_mixed(system, counter=counter)
        u, q, _ = direct.solve_mixed(fct, system.b3)
        return u, q, {"flops_counted_units": counter.units}
    system = build_ordinary(params, grid, ops, incident=inc)
    counter = direct.FlopCounter()
    u, q = direct.solve_ordinary_dense(system, counter=counter)
    return u, q, {"flops_counted_units": counter.units}


def cmd_solve(cfg):
    params = make_params(cfg)
    n = int(cfg["n"])
    grid, mie_sol = _grid_and_mie(cfg, params, n)
    _maybe_dump_operators(cfg, params, grid)
    u, q, stats = _solve_once(cfg, params, grid)
    rows = []
    for i in range(grid.n):
        rows.append([grid.t[i], u[i].real, u[i].imag, q[i].real, q[i].imag])
    header = ["t", "re_u", "im_u", "re_q", "im_q"]
    _write_csv(cfg["out"], cfg, header, rows)
    if cfg["solver"] == "fast" and cfg["out"]:
        _write_json(str(cfg["out"]) + ".stats.json",
                    {"config": effective_config(cfg), "stats": stats})
    if mie_sol is not None:
        ua, qa = mie.mie_trace(mie_sol, grid)
        err = mie.relative_trace_error(u, q, ua, qa)
        print(f"relative error vs analytic circle solution: {err:.3e}", file=sys.stderr)
    return EXIT_OK


def cmd_solve_fast(cfg):
    cfg = dict(cfg)
    cfg["solver"] = "fast"
    return cmd_solve(cfg)


def cmd_convergence(cfg):
    params_proto = make_params(cfg)
    sweep = cfg.get("n-sweep") or [200, 400, 800, 1600, 3200]
    sweep = [int(v) for v in sweep]
    if complex(params_proto.omega).imag != 0:
        raise ConfigError("convergence study requires real omega")
    rows = []
    errs = []
    for n in sweep:
        grid, mie_sol = _grid_and_mie(cfg, params_proto, n)
        if mie_sol is None:
            raise ConfigError("convergence study requires a circle curve")
        u, q, _ = _solve_once(cfg, params_proto, grid)
        ua, qa = mie.mie_trace(mie_sol, grid)
        err = mie.relative_trace_error(u, q, ua, qa)
        errs.append(err)
        rows.append([cfg["formulation"], n, params_proto.omega, cfg["eps1"], err])
    slope = float(np.polyfit(np.log(sweep), np.log(errs), 1)[0]) if len(sweep) > 1 else 0.0
    rows.append(["fitted-slope", "", "", "", slope])
    _write_csv(cfg["out"], cfg, ["formulation", "N", "omega", "eps1", "rel_error"], rows)
    if cfg.get("assert") and len(sweep) > 1 and abs(slope + 1.0) > 0.35:
        print(f"convergence slope {slope:.3f} outside -1.0 +/- 0.35", file=sys.stderr)
        return EXIT_ASSERT
    return EXIT_OK


def cmd_benchmark(cfg):
    params = make_params(cfg)
    sweep = cfg.get("n-sweep") or [256, 512, 1024]
    sweep = [int(v) for v in sweep]
    rows = []
    for n in sweep:
        grid, mie_sol = _grid_and_mie(cfg, params, n)
        results = {}
        for formulation in ("mixed", "ordinary"):
            sub = dict(cfg)
            sub["formulation"] = formulation
            t0 = time.perf_counter()
            u, q, stats = _solve_once(sub, params, grid)
            wall = time.perf_counter() - t0
            err = np.nan
            if mie_sol is not None:
                ua, qa = mie.mie_trace(mie_sol, grid)
                err = mie.relative_trace_error(u, q, ua, qa)
            theory = direct.mixed_theory_units(n) if formulation == "mixed" \
                else direct.ordinary_theory_units(n)
            results[formulation] = (stats.get("flops_counted_units", np.nan), wall)
            rows.append([formulation, n, params.omega, cfg["eps1"],
                         stats.get("flops_counted_units", np.nan), theory, wall, err])
        flop_ratio = results["ordinary"][0] / results["mixed"][0]
        wall_ratio = results["ordinary"][1] / results["mixed"][1]
        rows.append(["ratio-ordinary-over-mixed", n, params.omega, cfg["eps1"],
                     flop_ratio, 8.0 / 7.0, wall_ratio, ""])
    header = ["formulation", "N", "omega", "eps1", "flops_counted",
              "flops_theoretical", "wall_seconds", "rel_error_vs_mie"]
    _write_csv(cfg["out"], cfg, header, rows)
    return EXIT_OK


def cmd_mie_reference(cfg):
    params = make_params(cfg)
    if cfg["curve"].get("type") != "circle":
        raise ConfigError("mie-reference requires a circle curve")
    n = int(cfg["n"])
    grid, mie_sol = _grid_and_mie(cfg, params, n)
    ua, qa = mie.mie_trace(mie_sol, grid)
    rows = [[grid.t[i], ua[i].real, ua[i].imag, qa[i].real, qa[i].imag]
            for i in range(grid.n)]
    _write_csv(cfg["out"], cfg, ["t", "re_u", "im_u", "re_q", "im_q"], rows)
    coeff_rows = [[int(mie_sol.orders[i]), mie_sol.a[i].real, mie_sol.a[i].imag,
                   mie_sol.b[i].real, mie_sol.b[i].imag]
                  for i in range(len(mie_sol.orders))]
    coeff_path = None if cfg["out"] is None else str(cfg["out"]) + ".coeffs.csv"
    _write_csv(coeff_path, cfg, ["n", "re_a", "im_a", "re_b", "im_b"], coeff_rows)
    return EXIT_OK


def cmd_eig(cfg):
    params = make_params(cfg)
    curve = curve_from_descriptor(cfg["curve"])
    grid = discretize(curve, int(cfg["n"]))
    scfg = SsmConfig(center=_parse_complex(cfg["ssm-center"], "ssm-center"),
                     side=float(cfg["ssm-side"]),
                     points_per_side=int(cfg["ssm-points-per-side"]),
                     moments=int(cfg["ssm-moments"]),
                     block_size=int(cfg["ssm-block-size"]),
                     seed=int(cfg["seed"]), threads=int(cfg["threads"]))
    result = solve_eigen(cfg["formulation"], params, grid, scfg,
                         order=int(cfg["quadrature-order"]))
    payload = {
        "eigenvalues": [{"re": lam.real, "im": lam.imag, "residual": float(r)}
                        for lam, r in zip(result.eigenvalues, result.residuals)],
        "filtered-rank": result.filtered_rank,
        "config": effective_config(cfg),
    }
    _write_json(cfg["out"], payload)
    return EXIT_OK


COMMANDS = {
    "solve": cmd_solve,
    "solve-fast": cmd_solve_fast,
    "convergence": cmd_convergence,
    "benchmark": cmd_benchmark,
    "mie-reference": cmd_mie_reference,
    "eig": cmd_eig,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="helmtx", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=str, default=None)
        p.add_argument("--formulation", choices=["mixed", "ordinary"], default=None)
        p.add_argument("--solver", choices=["dense", "fast"], default=None)
        p.add_argument("--n", type=int, default=None)
        p.add_argument("--n-sweep", type=str, default=None,
                       help="comma-separated N values")
        p.add_argument("--omega", type=str, default=None, help="re or re,im")
        p.add_argument("--eps1", type=float, default=None)
        p.add_argument("--beta", type=str, default=None, help="re,im")
        p.add_argument("--quadrature-order", type=int, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--dump-operators", type=str, default=None)
        p.add_argument("--ssm-center", type=str, default=None)
        p.add_argument("--leaf-size", type=int, default=None)
        p.add_argument("--initial-skeletons", type=int, default=None)
        p.add_argument("--assert", dest="assert_", action="store_true", default=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    overrides = {
        "formulation": args.formulation,
        "solver": args.solver,
        "n": args.n,
        "omega": args.omega,
        "eps1": args.eps1,
        "beta": args.beta,
        "quadrature-order": args.quadrature_order,
        "out": args.out,
        "seed": args.seed,
        "threads": args.threads,
        "dump-operators": args.dump_operators,
        "ssm-center": args.ssm_center,
        "leaf-size": args.leaf_size,
        "initial-skeletons": args.initial_skeletons,
        "assert": args.assert_,
    }
    if args.n_sweep is not None:
        overrides["n-sweep"] = [int(v) for v in args.n_sweep.split(",")]
    try:
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SystemError, GeometryError, QuadratureError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (direct.ResonanceError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
