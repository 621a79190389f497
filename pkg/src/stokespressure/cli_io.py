"""Command-line interface and artifact persistence.

Subcommands:

    solve    solve one wave at a requested steepness
    sweep    walk a steepness range and tabulate the family
    verify   run every certification check against a stored solution
    fields   export the sampled flow fields (CSV or JSON)
    limit    push the continuation to the steepest resolvable wave

Exit codes: 0 success, 1 verification failed, 2 invalid input or
configuration, 3 solver failure (diagnostics are still written).

All artifacts are JSON or CSV written atomically (temp file + rename) with
deterministic content: dictionary keys are sorted and floats use repr, the
shortest digit string that round-trips exactly (17 significant digits at
most), so identical runs produce byte-identical files. Every run also writes
a manifest (tool version, configuration snapshot, input hashes, outputs,
wall-clock timestamps); the manifest is written last, and its timestamps are
the one intentionally non-reproducible artifact.

Output directory resolution: --out flag, else the STOKESPRESSURE_OUT
environment variable, else the working directory.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from . import __version__
from .spectral_solver import (
    ContinuationFamily,
    NonConvergence,
    SolverError,
    continue_family,
    estimate_limit,
    initial_guess,
    midpoint_residual,
    newton_solve,
)
from .hodograph_fields import FieldSample, physical_grid
from .verifier import VerificationReport, crest_angle, verify_all
from .wave_model import ConformalSolution, InvalidConfig, WaveConfig, steepness

__all__ = [
    "CliInputError",
    "FIELDS_CSV_HEADER",
    "OUTPUT_DIR_ENV",
    "load_config",
    "save_solution",
    "load_solution",
    "save_report",
    "load_report",
    "write_fields_csv",
    "write_manifest",
    "main",
    "entrypoint",
]

OUTPUT_DIR_ENV = "STOKESPRESSURE_OUT"
FIELDS_CSV_HEADER = "q,p,x,y,u,v,P,f,Px,Py,excluded"
_SOLUTION_FORMAT = "stokespressure.solution/1"
_REPORT_FORMAT = "stokespressure.report/1"

_CONFIG_KEYS = {f.name for f in dataclasses.fields(WaveConfig)}


class CliInputError(ValueError):
    """Unusable file, config key, or argument value (exit code 2)."""


def _atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def load_config(path: str | Path | None, overrides: dict | None = None) -> WaveConfig:
    """Build a WaveConfig from an optional JSON file plus flag overrides.

    The file must hold a flat object whose keys are WaveConfig field names;
    anything else is rejected. Overrides win over file values.
    """
    values: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CliInputError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise CliInputError(f"config {path} must hold a JSON object")
        unknown = set(raw) - _CONFIG_KEYS
        if unknown:
            raise CliInputError(
                f"unknown config keys in {path}: {', '.join(sorted(unknown))}")
        values.update(raw)
    for key, val in (overrides or {}).items():
        if val is not None:
            values[key] = val
    try:
        return WaveConfig(**values)
    except (InvalidConfig, TypeError) as exc:
        raise CliInputError(f"invalid configuration: {exc}") from exc


def save_solution(sol: ConformalSolution, path: str | Path,
                  diagnostics: dict | None = None) -> None:
    """Write a solution as deterministic JSON (atomic)."""
    doc = {
        "format": _SOLUTION_FORMAT,
        "c": sol.c,
        "E": sol.E,
        "gravity": sol.gravity,
        "surface_pressure": sol.surface_pressure,
        "mode_count": sol.mode_count,
        "coefficients": [float(a) for a in sol.coeffs],
    }
    if diagnostics:
        doc["diagnostics"] = diagnostics
    _atomic_write_text(Path(path), _dump_json(doc))


def load_solution(path: str | Path) -> ConformalSolution:
    """Read a solution written by `save_solution`; bit-exact round trip.

    Truncated, malformed, or inconsistent files raise CliInputError.
    """
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliInputError(f"cannot read solution {path}: {exc}") from exc
    try:
        if doc["format"] != _SOLUTION_FORMAT:
            raise CliInputError(
                f"{path}: unrecognized format tag {doc.get('format')!r}")
        coeffs = np.asarray(doc["coefficients"], dtype=float)
        if coeffs.size != int(doc["mode_count"]):
            raise CliInputError(
                f"{path}: coefficient count {coeffs.size} does not match "
                f"mode_count {doc['mode_count']}")
        return ConformalSolution(
            c=float(doc["c"]), E=float(doc["E"]), coeffs=coeffs,
            gravity=float(doc["gravity"]),
            surface_pressure=float(doc["surface_pressure"]))
    except CliInputError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise CliInputError(f"{path}: malformed solution file: {exc}") from exc


def save_report(report: VerificationReport, path: str | Path) -> None:
    doc = {"format": _REPORT_FORMAT}
    doc.update(report.to_dict())
    _atomic_write_text(Path(path), _dump_json(doc))


def load_report(path: str | Path) -> VerificationReport:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise CliInputError(f"cannot read report {path}: {exc}") from exc
    try:
        return VerificationReport.from_dict(doc)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliInputError(f"{path}: malformed report file: {exc}") from exc


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_fields_csv(samples: list[FieldSample], path: str | Path) -> None:
    """Export samples with the fixed header; floats carry 17 significant digits."""
    lines = [FIELDS_CSV_HEADER]
    for s in samples:
        lines.append(",".join([
            _fmt(s.q), _fmt(s.p), _fmt(s.x), _fmt(s.y), _fmt(s.u), _fmt(s.v),
            _fmt(s.P), _fmt(s.f), _fmt(s.P_x), _fmt(s.P_y),
            "1" if s.excluded else "0"]))
    _atomic_write_text(Path(path), "\n".join(lines) + "\n")


def _sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    h.update(Path(path).read_bytes())
    return h.hexdigest()


def write_manifest(outdir: Path, command: str, cfg: WaveConfig,
                   inputs: list[str | Path], outputs: list[str | Path],
                   started: float, extra: dict | None = None) -> Path:
    """Write the run manifest; call last so it can hash every output."""
    doc = {
        "format": "stokespressure.manifest/1",
        "tool_version": __version__,
        "command": command,
        "config": dataclasses.asdict(cfg),
        "timestamps": {"started": started, "finished": time.time()},
        "input_hashes": {str(p): _sha256(p) for p in inputs},
        "outputs": {str(Path(p).name): _sha256(p) for p in outputs},
    }
    if extra:
        doc["run"] = extra
    path = outdir / "manifest.json"
    _atomic_write_text(path, _dump_json(doc))
    return path


def _out_dir(args) -> Path:
    out = args.out or os.environ.get(OUTPUT_DIR_ENV) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _parse_grid(text: str) -> tuple[int, int]:
    try:
        nq, np_ = text.lower().split("x")
        return int(nq), int(np_)
    except (ValueError, AttributeError) as exc:
        raise CliInputError(
            f"--grid expects NQxNP (e.g. 256x128), got {text!r}") from exc


def _overrides_from(args) -> dict:
    over = {
        "gravity": getattr(args, "gravity", None),
        "mode_count": getattr(args, "modes", None),
        "newton_tol": getattr(args, "tol", None),
        "grid_depth": getattr(args, "depth", None),
    }
    grid = getattr(args, "grid", None)
    if grid is not None:
        over["grid_nq"], over["grid_np"] = _parse_grid(grid)
    return over


def _solve_to(s_target: float, cfg: WaveConfig, max_modes: int) -> tuple[ConformalSolution, dict]:
    if s_target < 0.0:
        raise CliInputError("steepness must be nonnegative")
    diag: dict = {}
    if s_target <= 0.02:
        sol = newton_solve(initial_guess(s_target, cfg), s_target, cfg,
                           diagnostics=diag)
        return sol, diag
    fam = continue_family(min(0.02, s_target), s_target, cfg,
                          max_modes=max_modes)
    last = fam.members[-1]
    if fam.stop_reason != "reached_stop" or \
            abs(last.steepness - s_target) > 1e-10:
        raise NonConvergence(
            f"continuation stalled at s = {last.steepness:.6f} "
            f"({fam.stop_reason}) before reaching {s_target}")
    return last.solution, {"iterations": last.newton_iters,
                           "residual_norm": last.residual_norm,
                           "tail_ratio": last.tail_ratio}


def _cmd_solve(args) -> int:
    started = time.time()
    cfg = load_config(args.config, _overrides_from(args))
    outdir = _out_dir(args)
    inputs = [args.config] if args.config else []
    try:
        sol, diag = _solve_to(args.steepness, cfg, args.max_modes)
    except SolverError as exc:
        failure = outdir / "solve_failure.json"
        _atomic_write_text(failure, _dump_json({
            "error": type(exc).__name__,
            "message": str(exc),
            "steepness": args.steepness,
            "mode_count": cfg.mode_count,
        }))
        write_manifest(outdir, "solve", cfg, inputs, [failure], started)
        print(f"solve: FAILED ({type(exc).__name__}: {exc})", file=sys.stderr)
        return 3
    path = outdir / "solution.json"
    save_solution(sol, path, diagnostics=diag)
    write_manifest(outdir, "solve", cfg, inputs, [path], started,
                   extra={"steepness": steepness(sol)})
    print(f"solve: s = {steepness(sol):.6f}  c = {sol.c:.12g}  "
          f"E = {sol.E:.12g}  N = {sol.mode_count}  -> {path}")
    return 0


def _cmd_sweep(args) -> int:
    started = time.time()
    cfg = load_config(args.config, _overrides_from(args))
    outdir = _out_dir(args)
    inputs = [args.config] if args.config else []
    try:
        fam = continue_family(args.s_start, args.s_stop, cfg,
                              initial_step=args.s_step,
                              max_modes=args.max_modes)
    except SolverError as exc:
        print(f"sweep: FAILED ({type(exc).__name__}: {exc})", file=sys.stderr)
        return 3
    outputs = []
    rows = ["s,c,E,K,N,newton_iters,residual_norm,tail_ratio,"
            "midpoint_residual,crest_angle_deg"]
    for m in fam.members:
        spath = outdir / f"solution_s{m.steepness:.6f}.json"
        save_solution(m.solution, spath)
        outputs.append(spath)
        rows.append(",".join([
            _fmt(m.steepness), _fmt(m.solution.c), _fmt(m.solution.E),
            _fmt(m.crest_indicator), str(m.solution.mode_count),
            str(m.newton_iters), _fmt(m.residual_norm), _fmt(m.tail_ratio),
            _fmt(midpoint_residual(m.solution)),
            _fmt(crest_angle(m.solution))]))
    summary = outdir / "summary.csv"
    _atomic_write_text(summary, "\n".join(rows) + "\n")
    outputs.append(summary)
    write_manifest(outdir, "sweep", cfg, inputs, outputs, started,
                   extra={"stop_reason": fam.stop_reason,
                          "members": len(fam.members)})
    print(f"sweep: {len(fam.members)} members to s = "
          f"{fam.members[-1].steepness:.6f} ({fam.stop_reason}) -> {summary}")
    return 0


def _cmd_verify(args) -> int:
    started = time.time()
    cfg = load_config(args.config, _overrides_from(args))
    outdir = _out_dir(args)
    sol = load_solution(args.solution)
    report = verify_all(sol, cfg)
    path = outdir / "report.json"
    save_report(report, path)
    write_manifest(outdir, "verify", cfg, [args.solution], [path], started,
                   extra={"passed": report.passed})
    for ch in report.checks:
        print(f"[{'pass' if ch.passed else 'FAIL'}] {ch.name}: "
              f"margin {ch.worst_margin:.3e} (tol {ch.tolerance_used:.1e}, "
              f"{ch.samples_checked} samples, {ch.samples_excluded} excluded)")
    print(f"verify: {'PASSED' if report.passed else 'FAILED'} "
          f"{sum(ch.passed for ch in report.checks)}/{len(report.checks)} "
          f"checks -> {path}")
    return 0 if report.passed else 1


def _cmd_fields(args) -> int:
    started = time.time()
    cfg = load_config(args.config, _overrides_from(args))
    outdir = _out_dir(args)
    sol = load_solution(args.solution)
    samples = physical_grid(sol, cfg)
    if args.format == "csv":
        path = outdir / "fields.csv"
        write_fields_csv(samples, path)
    else:
        path = outdir / "fields.json"
        _atomic_write_text(path, _dump_json(
            [dataclasses.asdict(s) for s in samples]))
    write_manifest(outdir, "fields", cfg, [args.solution], [path], started,
                   extra={"samples": len(samples)})
    print(f"fields: {len(samples)} samples -> {path}")
    return 0


def _cmd_limit(args) -> int:
    started = time.time()
    cfg = load_config(args.config, _overrides_from(args))
    outdir = _out_dir(args)
    est = estimate_limit(cfg, max_modes=args.max_modes,
                         time_budget=args.time_budget)
    path = outdir / "limit.json"
    _atomic_write_text(path, _dump_json({
        "s_max": est.s_max,
        "K_at_max": est.K_at_max,
        "N_used": est.N_used,
        "stop_reason": est.stop_reason,
        "crest_angle_deg": crest_angle(est.family.last.solution),
    }))
    inputs = [args.config] if args.config else []
    write_manifest(outdir, "limit", cfg, inputs, [path], started)
    print(f"limit: s_max = {est.s_max:.6f}  K = {est.K_at_max:.4f}  "
          f"N = {est.N_used} ({est.stop_reason}) -> {path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="stokespressure",
        description="Solve and certify periodic deep-water traveling waves.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, solution=False):
        p.add_argument("--config", help="JSON file of configuration values")
        p.add_argument("--out", help=f"output directory (default: "
                                     f"${OUTPUT_DIR_ENV} or the working directory)")
        p.add_argument("--modes", type=int, help="override mode_count")
        p.add_argument("--gravity", type=float, help="override gravity")
        p.add_argument("--tol", type=float, help="override newton_tol")
        p.add_argument("--grid", help="override field grid as NQxNP")
        p.add_argument("--depth", type=float, help="override grid floor p_min")
        if solution:
            p.add_argument("--solution", required=True,
                           help="path to a stored solution JSON")

    p = sub.add_parser("solve", help="solve one wave at a target steepness")
    common(p)
    p.add_argument("--steepness", type=float, required=True,
                   help="target crest-to-trough height over wavelength")
    p.add_argument("--max-modes", type=int, default=2048)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("sweep", help="walk a steepness range")
    common(p)
    p.add_argument("--s-start", type=float, required=True)
    p.add_argument("--s-stop", type=float, required=True)
    p.add_argument("--s-step", type=float, default=0.01)
    p.add_argument("--max-modes", type=int, default=2048)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("verify", help="certify a stored solution")
    common(p, solution=True)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("fields", help="export sampled flow fields")
    common(p, solution=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=_cmd_fields)

    p = sub.add_parser("limit", help="estimate the steepest resolvable wave")
    common(p)
    p.add_argument("--max-modes", type=int, default=2048)
    p.add_argument("--time-budget", type=float, default=None,
                   help="soft wall-clock cap in seconds")
    p.set_defaults(func=_cmd_limit)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = _build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except CliInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvalidConfig as exc:
        print(f"error: invalid configuration: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"error: solver failure: {exc}", file=sys.stderr)
        return 3


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
