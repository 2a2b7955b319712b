"""Command-line interface: config handling, sweeps, CSV/JSON serialization.

Every subcommand reads one RunConfig (JSON file merged with flag
overrides), writes its data files plus a summary.json into the output
directory, and returns through a fixed exit-code contract:

    0  success
    2  configuration error (bad JSON, bad field, empty grid, usage)
    3  numerical failure (non-convergence, contour through an EP, ...)
    4  I/O failure

Data files are CSV with a comment header carrying the tool version and
a hash of the resolved config; rows are sorted by their coordinate
columns and formatted with 17 significant digits, so rerunning the same
config (with any worker count) reproduces the bytes exactly.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .catspace import cardano_eigenvalues, cubic_invariants, reduced_liouvillian
from .dynamics import (
    DEFAULT_DELTA_GRID,
    DEFAULT_TIME_GRID,
    INITIAL_STATES,
    _full_steady,
    fidelity_map,
)
from .exceptional import lep2_trace, lep3_closed_form, lep3_numeric
from .fock import cat_state, coherent_state, number_operator, parity_operator, wigner
from .liouville import kerr_cat_liouvillian, spectrum, vectorize
from .model import ModelParams, params_from_experiment
from .winding import Contour, winding_number, winding_trajectory

__all__ = ["RunConfig", "ConfigError", "main"]

TWO_PI = 2.0 * np.pi

COMMANDS = (
    "spectrum",
    "ep-map",
    "lep3",
    "winding",
    "fidelity",
    "wigner",
    "steady-state",
)

EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4


class ConfigError(ValueError):
    """Invalid configuration input; maps to exit code 2."""


@dataclass
class RunConfig:
    """One resolved run: experiment knobs in cyclic MHz plus plumbing.

    kappa is a plain 1/us rate unless kappa_angular is set, in which
    case it is read as a cyclic MHz value like the other frequencies.
    Grids are {"start", "stop", "num"} or {"values": [...]} mappings;
    None selects each command's documented default.
    """

    K_MHz: float = 6.7
    P_MHz: float = 15.5
    kappa: float = 1.0 / 15.5
    eps_MHz: float = 0.0
    delta_MHz: float = 0.0
    kappa_angular: bool = False
    dim: int = 40
    workers: int = 1
    out_dir: str = "."
    numeric: bool = False
    initial: tuple[str, ...] = INITIAL_STATES
    state: str = "catplus"
    full_spectrum: bool = False
    n_seeds: int = 49
    eps_grid_MHz: dict | None = None
    delta_grid_MHz: dict | None = None
    t_grid_us: dict | None = None
    x_grid: dict | None = None
    p_grid: dict | None = None
    contour: dict | None = None
    lep3_seed_MHz: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.K_MHz <= 0 or self.P_MHz <= 0:
            raise ConfigError(f"K_MHz and P_MHz must be positive, got {self.K_MHz}, {self.P_MHz}")
        if self.kappa < 0:
            raise ConfigError(f"kappa must be >= 0, got {self.kappa}")
        if self.dim < 2:
            raise ConfigError(f"dim must be >= 2, got {self.dim}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")
        if isinstance(self.initial, str):
            self.initial = (self.initial,)
        else:
            self.initial = tuple(self.initial)
        for name in self.initial:
            if name not in INITIAL_STATES:
                raise ConfigError(f"initial must be among {INITIAL_STATES}, got {name!r}")
        if self.state not in ("catplus", "catminus", "coherent", "steady"):
            raise ConfigError(f"unknown wigner state {self.state!r}")
        if self.n_seeds < 2:
            raise ConfigError(f"n_seeds must be >= 2, got {self.n_seeds}")
        if self.lep3_seed_MHz is not None:
            seed = tuple(float(v) for v in self.lep3_seed_MHz)
            if len(seed) != 2:
                raise ConfigError(f"lep3_seed_MHz needs 2 entries, got {self.lep3_seed_MHz}")
            self.lep3_seed_MHz = seed

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError(f"config root must be an object, got {type(data).__name__}")
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["initial"] = list(self.initial)
        if self.lep3_seed_MHz is not None:
            out["lep3_seed_MHz"] = list(self.lep3_seed_MHz)
        return out

    @property
    def params(self) -> ModelParams:
        return params_from_experiment(
            self.K_MHz,
            self.P_MHz,
            self.kappa,
            eps_MHz=self.eps_MHz,
            delta_MHz=self.delta_MHz,
            kappa_angular=self.kappa_angular,
        )

    def config_hash(self) -> str:
        # workers and out_dir are execution plumbing: runs that differ
        # only in them must produce byte-identical data files
        payload = {
            k: v for k, v in self.to_dict().items() if k not in ("workers", "out_dir")
        }
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc


def _grid(spec: dict | None, start: float, stop: float, num: int) -> np.ndarray:
    """Materialize a {"start","stop","num"} or {"values": [...]} grid."""
    if spec is None:
        return np.linspace(start, stop, num)
    if not isinstance(spec, dict):
        raise ConfigError(f"grid spec must be an object, got {spec!r}")
    if "values" in spec:
        vals = np.asarray(spec["values"], dtype=float).reshape(-1)
        if vals.size == 0:
            raise ConfigError("grid values list is empty; give at least one point")
        if not np.all(np.isfinite(vals)):
            raise ConfigError("grid values must be finite")
        return vals
    try:
        n = int(spec["num"])
        lo, hi = float(spec["start"]), float(spec["stop"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"grid spec needs start/stop/num or values: {spec!r}") from exc
    if n < 1:
        raise ConfigError(f"grid num must be >= 1, got {n} (empty grid)")
    if not (np.isfinite(lo) and np.isfinite(hi)):
        raise ConfigError("grid bounds must be finite")
    return np.linspace(lo, hi, n)


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".17g")


def _write_csv(path: Path, columns: list[str], rows: list[tuple], cfg_hash: str) -> None:
    lines = [f"# kerrcat {__version__} config={cfg_hash}", ",".join(columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    path.write_text("\n".join(lines) + "\n")


def _check(value: float, threshold: float, ok: bool) -> dict:
    return {"value": value, "threshold": threshold, "pass": bool(ok)}


def _match_numeric(closed: np.ndarray, numeric: np.ndarray) -> np.ndarray:
    """Order numeric eigenvalues by nearest closed-form partner."""
    out = np.empty(closed.size, dtype=complex)
    pool = list(numeric)
    for i, e in enumerate(closed):
        j = int(np.argmin([abs(e - z) for z in pool]))
        out[i] = pool.pop(j)
    return out


def cmd_spectrum(cfg: RunConfig, out: Path) -> dict:
    eps_grid = TWO_PI * _grid(cfg.eps_grid_MHz, -0.003, 0.003, 41)
    delta_grid = TWO_PI * _grid(cfg.delta_grid_MHz, -0.35, 0.35, 41)
    base = cfg.params
    rows = []
    max_dev = 0.0
    for eps in eps_grid:
        for delta in delta_grid:
            p = base.replace(drive=float(eps), delta=float(delta))
            inv = cubic_invariants(p)
            s = cardano_eigenvalues(p)
            row = [
                float(eps),
                float(delta),
                s.E2.real,
                s.E2.imag,
                s.E3.real,
                s.E3.imag,
                s.E4.real,
                s.E4.imag,
                inv.q,
                inv.m,
            ]
            if cfg.numeric:
                w = np.linalg.eigvals(reduced_liouvillian(p))
                w = np.delete(w, np.argmin(np.abs(w)))
                closed = np.array([s.E2, s.E3, s.E4], dtype=complex)
                num = _match_numeric(closed, w)
                max_dev = max(max_dev, float(np.abs(closed - num).max()))
                row.extend(
                    [num[0].real, num[0].imag, num[1].real, num[1].imag, num[2].real, num[2].imag]
                )
            rows.append(tuple(row))
    rows.sort(key=lambda r: (r[0], r[1]))
    columns = [
        "eps",
        "delta",
        "re_E2",
        "im_E2",
        "re_E3",
        "im_E3",
        "re_E4",
        "im_E4",
        "q",
        "m",
    ]
    if cfg.numeric:
        columns += ["re_E2_num", "im_E2_num", "re_E3_num", "im_E3_num", "re_E4_num", "im_E4_num"]
    _write_csv(out / "spectrum.csv", columns, rows, cfg.config_hash())
    summary = {"rows": len(rows), "files": ["spectrum.csv"], "checks": {}}
    if cfg.numeric:
        summary["checks"]["closed_vs_numeric"] = _check(max_dev, 1e-9, max_dev < 1e-9)
    return summary


def cmd_ep_map(cfg: RunConfig, out: Path) -> dict:
    params = cfg.params
    alpha, kappa = params.alpha, params.kappa
    curves = lep2_trace(alpha, kappa, n_seeds=cfg.n_seeds)
    points = [pt for curve in curves for pt in curve]
    lep3 = lep3_closed_form(alpha, kappa)
    rows = [
        (pt.eps, pt.delta, pt.order, pt.disc_residual, pt.q, pt.m, pt.coalescence)
        for pt in points + lep3
    ]
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    columns = ["eps", "delta", "order", "disc_residual", "q", "m", "coalescence"]
    _write_csv(out / "ep_map.csv", columns, rows, cfg.config_hash())
    min_coal = min((pt.coalescence for pt in points), default=float("nan"))
    return {
        "rows": len(rows),
        "files": ["ep_map.csv"],
        "lep2_curves": len(curves),
        "lep2_points": len(points),
        "lep3_points": [{"eps": pt.eps, "delta": pt.delta} for pt in lep3],
        "checks": {
            "four_lep3_images": _check(len(lep3), 4, len(lep3) == 4),
            "min_lep2_coalescence": _check(min_coal, 1.0 - 1e-3, min_coal > 1.0 - 1e-3),
        },
    }


def cmd_lep3(cfg: RunConfig, out: Path) -> dict:
    params = cfg.params
    alpha, kappa = params.alpha, params.kappa
    closed = lep3_closed_form(alpha, kappa)
    ref = closed[0]
    if cfg.lep3_seed_MHz is not None:
        seed = (TWO_PI * cfg.lep3_seed_MHz[0], TWO_PI * cfg.lep3_seed_MHz[1])
    else:
        seed = (1.02 * ref.eps, 0.98 * ref.delta)
    numeric = lep3_numeric(alpha, kappa, seed)
    rows = [
        (pt.eps, pt.delta, pt.order, pt.disc_residual, pt.q, pt.m, pt.coalescence)
        for pt in closed + [numeric]
    ]
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    columns = ["eps", "delta", "order", "disc_residual", "q", "m", "coalescence"]
    _write_csv(out / "lep3.csv", columns, rows, cfg.config_hash())
    scale = max(abs(ref.eps), abs(ref.delta))
    dist = max(abs(numeric.eps - abs(ref.eps)), abs(numeric.delta - abs(ref.delta)))
    rel = dist / scale
    return {
        "rows": len(rows),
        "files": ["lep3.csv"],
        "closed_form": {"eps": abs(ref.eps), "delta": abs(ref.delta)},
        "numeric": {"eps": numeric.eps, "delta": numeric.delta},
        "checks": {"closed_vs_numeric_rel": _check(rel, 1e-8, rel < 1e-8)},
    }


def cmd_winding(cfg: RunConfig, out: Path) -> dict:
    params = cfg.params
    alpha, kappa = params.alpha, params.kappa
    spec = cfg.contour or {}
    if not isinstance(spec, dict):
        raise ConfigError(f"contour must be an object, got {spec!r}")
    unknown = set(spec) - {"center_eps_MHz", "center_delta_MHz", "radius_MHz", "samples"}
    if unknown:
        raise ConfigError(f"unknown contour fields: {sorted(unknown)}")
    ref = lep3_closed_form(alpha, kappa)[0]
    center = (
        TWO_PI * float(spec["center_eps_MHz"]) if "center_eps_MHz" in spec else ref.eps,
        TWO_PI * float(spec["center_delta_MHz"]) if "center_delta_MHz" in spec else ref.delta,
    )
    radius = TWO_PI * float(spec["radius_MHz"]) if "radius_MHz" in spec else 0.3 * abs(ref.eps)
    samples = int(spec.get("samples", 720))
    try:
        contour = Contour(kind="circle", center=center, radius=radius, samples=samples)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    result = winding_number(contour, alpha, kappa, fast=not cfg.numeric)
    rows = winding_trajectory(contour, alpha, kappa, fast=not cfg.numeric)
    cfg_hash = cfg.config_hash()
    _write_csv(out / "winding_trajectory.csv", ["phi", "r1_norm", "r2_norm"], rows, cfg_hash)
    payload = {
        "version": __version__,
        "config_hash": cfg_hash,
        "center": [center[0], center[1]],
        "radius": radius,
        "samples": result.samples,
        "raw": result.raw,
        "W": result.winding,
    }
    (out / "winding.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    quant = abs(result.raw - result.winding)
    return {
        "rows": len(rows),
        "files": ["winding_trajectory.csv", "winding.json"],
        "W": result.winding,
        "raw": result.raw,
        "min_norm": result.min_norm,
        "checks": {"quantization": _check(quant, 1e-3, quant < 1e-3)},
    }


def cmd_fidelity(cfg: RunConfig, out: Path) -> dict:
    delta_grid = (
        DEFAULT_DELTA_GRID if cfg.delta_grid_MHz is None else TWO_PI * _grid(cfg.delta_grid_MHz, 0, 0, 1)
    )
    t_grid = DEFAULT_TIME_GRID if cfg.t_grid_us is None else _grid(cfg.t_grid_us, 0, 0, 1)
    records = fidelity_map(
        cfg.initial,
        cfg.params,
        delta_grid,
        t_grid,
        dim=cfg.dim,
        workers=cfg.workers,
    )
    cfg_hash = cfg.config_hash()
    files = []
    summary: dict = {"files": files, "checks": {}, "initial": list(cfg.initial)}
    columns = ["delta_MHz", "t_us", "fidelity", "leakage"]
    t_final = float(np.asarray(t_grid, dtype=float).max())
    for name in cfg.initial:
        rows = [
            (r.coord("delta") / TWO_PI, r.coord("t"), r.value("fidelity"), r.value("leakage"))
            for r in records
            if r.label == name
        ]
        rows.sort(key=lambda r: (r[0], r[1]))
        fname = f"fidelity_{name}.csv"
        _write_csv(out / fname, columns, rows, cfg_hash)
        files.append(fname)
        fvals = np.array([r[2] for r in rows])
        finals = np.array([r[2] for r in rows if r[1] == t_final])
        min_f = float(fvals.min())
        min_final = float(finals.min())
        summary[name] = {
            "min_fidelity": min_f,
            "min_final_fidelity": min_final,
            "max_leakage": float(max(r[3] for r in rows)),
        }
        summary["checks"][f"{name}_min_fidelity"] = _check(min_f, 0.93, min_f > 0.93)
        summary["checks"][f"{name}_final_fidelity"] = _check(min_final, 0.99, min_final > 0.99)
    summary["rows"] = len(records)
    return summary


def _wigner_subject(cfg: RunConfig) -> np.ndarray:
    params = cfg.params
    alpha, dim = params.alpha, cfg.dim
    if cfg.state == "catplus":
        return cat_state(alpha, "even", dim)
    if cfg.state == "catminus":
        return cat_state(alpha, "odd", dim)
    if cfg.state == "coherent":
        return coherent_state(alpha, dim)
    L = kerr_cat_liouvillian(params, dim)
    rho = _full_steady(L, dim)
    if rho is None:
        raise RuntimeError("steady-state solve failed; Liouvillian null space not found")
    return rho


def cmd_wigner(cfg: RunConfig, out: Path) -> dict:
    x_grid = _grid(cfg.x_grid, -4.0, 4.0, 81)
    p_grid = _grid(cfg.p_grid, -4.0, 4.0, 81)
    state = _wigner_subject(cfg)
    w = wigner(state, x_grid, p_grid)
    rows = [
        (float(x), float(p), float(w[i, j]))
        for i, x in enumerate(x_grid)
        for j, p in enumerate(p_grid)
    ]
    rows.sort(key=lambda r: (r[0], r[1]))
    _write_csv(out / "wigner.csv", ["x", "p", "w"], rows, cfg.config_hash())
    checks: dict = {}
    if x_grid.size > 1 and p_grid.size > 1 and np.ptp(x_grid) > 0:
        mass = float(np.trapezoid(np.trapezoid(w, p_grid, axis=1), x_grid))
        rho = state if state.ndim == 2 else np.outer(state, state.conj())
        dev = abs(mass - float(np.trace(rho).real))
        checks["normalization"] = _check(dev, 1e-3, dev < 1e-3)
    return {
        "rows": len(rows),
        "files": ["wigner.csv"],
        "state": cfg.state,
        "checks": checks,
    }


def cmd_steady_state(cfg: RunConfig, out: Path) -> dict:
    params = cfg.params
    if params.kappa == 0.0:
        raise RuntimeError("kappa = 0 has no unique steady state")
    dim = cfg.dim
    L = kerr_cat_liouvillian(params, dim)
    rho = _full_steady(L, dim)
    if rho is None:
        raise RuntimeError("steady-state solve failed; Liouvillian null space not found")
    resid = float(np.linalg.norm(L @ vectorize(rho)))
    cfg_hash = cfg.config_hash()
    rows = [(n, float(rho[n, n].real)) for n in range(dim)]
    _write_csv(out / "steady_populations.csv", ["n", "population"], rows, cfg_hash)
    files = ["steady_populations.csv"]
    checks = {
        "residual": _check(resid, 1e-8, resid < 1e-8),
    }
    summary = {
        "files": files,
        "photon_number": float(np.trace(number_operator(dim) @ rho).real),
        "parity": float(np.trace(parity_operator(dim) @ rho).real),
        "purity": float(np.trace(rho @ rho).real),
        "checks": checks,
    }
    if cfg.full_spectrum:
        eigs = np.sort_complex(spectrum(L).eigenvalues)
        spec_rows = [(k, z.real, z.imag) for k, z in enumerate(eigs)]
        _write_csv(out / "spectrum_full.csv", ["index", "re_E", "im_E"], spec_rows, cfg_hash)
        files.append("spectrum_full.csv")
        max_re = float(eigs.real.max())
        checks["spectrum_stable"] = _check(max_re, 1e-8, max_re < 1e-8)
    return summary


_DISPATCH = {
    "spectrum": cmd_spectrum,
    "ep-map": cmd_ep_map,
    "lep3": cmd_lep3,
    "winding": cmd_winding,
    "fidelity": cmd_fidelity,
    "wigner": cmd_wigner,
    "steady-state": cmd_steady_state,
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kerrcat",
        description="Exceptional-point structure and dynamics of a Kerr-cat qubit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, help=f"run the {name} sweep")
        p.add_argument("--config", default=None, help="JSON config file")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--workers", type=int, default=None, help="parallel workers")
        p.add_argument("--dim", type=int, default=None, help="Fock truncation")
        p.add_argument(
            "--kappa-angular",
            action="store_true",
            default=None,
            help="read kappa as cyclic MHz instead of 1/us",
        )
        if name == "spectrum":
            p.add_argument(
                "--numeric",
                action="store_true",
                default=None,
                help="add numeric-eigensolver columns and cross-check",
            )
        if name == "winding":
            p.add_argument(
                "--numeric",
                action="store_true",
                default=None,
                help="use the eigenvalue-product resultant path",
            )
        if name == "wigner":
            p.add_argument(
                "--state",
                choices=("catplus", "catminus", "coherent", "steady"),
                default=None,
            )
        if name == "fidelity":
            p.add_argument(
                "--initial",
                action="append",
                choices=INITIAL_STATES,
                default=None,
                help="initial state (repeatable)",
            )
        if name == "steady-state":
            p.add_argument(
                "--full-spectrum",
                action="store_true",
                default=None,
                help="also dump the full Liouvillian spectrum",
            )
    return parser


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    data = load_config(args.config)
    overrides = {
        "out_dir": args.out,
        "workers": args.workers,
        "dim": args.dim,
        "kappa_angular": getattr(args, "kappa_angular", None),
        "numeric": getattr(args, "numeric", None),
        "state": getattr(args, "state", None),
        "initial": getattr(args, "initial", None),
        "full_spectrum": getattr(args, "full_spectrum", None),
    }
    for key, val in overrides.items():
        if val is not None:
            data[key] = val
    return RunConfig.from_dict(data)


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
    except ConfigError as exc:
        print(f"kerrcat: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        out = Path(cfg.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        started = time.time()
        summary = _DISPATCH[args.command](cfg, out)
        elapsed = time.time() - started
        summary.update(
            command=args.command,
            version=__version__,
            config=cfg.to_dict(),
            config_hash=cfg.config_hash(),
            elapsed_s=elapsed,
        )
        summary["ok"] = all(c["pass"] for c in summary.get("checks", {}).values())
        (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    except ConfigError as exc:
        print(f"kerrcat: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"kerrcat: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (RuntimeError, ValueError, OverflowError, np.linalg.LinAlgError) as exc:
        print(f"kerrcat: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC

    status = "ok" if summary["ok"] else "checks-failed"
    print(f"kerrcat {args.command}: {status} ({elapsed:.2f}s) -> {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
