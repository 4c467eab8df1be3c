"""verify, sm-check, recover and scan: report assembly and file output."""
from __future__ import annotations

import csv
import hashlib
import io
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from ..fieldtheory import Form
from ..mathkit.poly import SpacetimePoly
from ..microlocal import CausalDomain, numeric_residual, random_inputs, residual_at
from ..recovery import MeasurementOracle, RecoverySettings, default_grid, recover_field, seeded_spinor
from .checks import CheckResult, _clean, check_rng, recovery_model, run_checks, select, sm_checks, verify_checks
from .config import ConfigError, RunConfig, parse_sequence, parse_terms

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def dump_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def config_digest(cfg: RunConfig) -> str:
    """Hash of the effective configuration; the worker count does not change results and is left out."""
    tree = {k: dict(v) for k, v in cfg.tree.items()}
    tree["run"].pop("jobs", None)
    return hashlib.sha256(json.dumps(tree, sort_keys=True, default=str).encode()).hexdigest()[:16]


def write_text(out: Path, name: str, text: str) -> Path:
    try:
        out.mkdir(parents=True, exist_ok=True)
        path = out / name
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot write {out / name}: {exc.strerror or exc}") from None
    return path


def build_report(command: str, cfg: RunConfig, results: list[CheckResult], extra: dict | None = None) -> dict:
    failed = [r.name for r in results if not r.passed]
    rep = {
        "command": command,
        "seed": cfg.seed,
        "config_digest": config_digest(cfg),
        "checks": [r.to_dict() for r in sorted(results, key=lambda r: r.name)],
        "summary": {"total": len(results), "passed": len(results) - len(failed), "failed": len(failed),
                    "failed_checks": failed, "status": "pass" if not failed else "fail"},
    }
    if extra:
        rep.update(extra)
    return rep


def _fmt(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    return f"{x:.3g}" if isinstance(x, float) else str(x)


def print_summary(results: list[CheckResult], stream=None) -> None:
    stream = stream or sys.stdout
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<36} residual={_fmt(r.residual):<10} "
              f"tol={_fmt(r.tolerance):<12} {r.seconds:6.2f}s", file=stream)
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} checks passed", file=stream)


def _finish(command: str, cfg: RunConfig, out: Path, results: list[CheckResult], extra=None) -> int:
    write_text(out, "report.json", dump_json(build_report(command, cfg, results, extra)))
    print_summary(results)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_verify(cfg: RunConfig, out: Path) -> int:
    results = run_checks(cfg, verify_checks(cfg), jobs=cfg.jobs)
    return _finish("verify", cfg, out, results)


def cmd_smcheck(cfg: RunConfig, out: Path) -> int:
    results = run_checks(cfg, sm_checks(cfg), jobs=cfg.jobs)
    return _finish("sm-check", cfg, out, results)


# recovery
def background(cfg: RunConfig):
    """(model, oracle, connection) from the [background] section."""
    bg = cfg.tree["background"]
    model = recovery_model(cfg)
    d = model.d
    if bg["psi"] == "seeded":
        psi = seeded_spinor(model, check_rng(cfg.seed, "background.psi"), degree=int(bg["psi_degree"]))
    elif bg["psi"] == "vacuum":
        psi = SpacetimePoly.zero((4, d))
    else:
        psi = parse_terms(bg["psi"], (4, d), "[background].psi")
        if not model.layout.in_sector(psi.coefs, "+"):
            raise ConfigError("[background].psi has entries outside the + sector")
    if bg["A"] == "zero":
        A = None
    else:
        Ap = parse_terms(bg["A"], (4, model.n), "[background].A")
        if np.any(Ap.coefs.imag != 0):
            raise ConfigError("[background].A must be real")
        A = Form(Ap, 1)
    source = np.asarray(bg["source"], float)
    if source.shape != (model.n,):
        raise ConfigError(f"[background].source must have {model.n} entries")
    oracle = MeasurementOracle(model, psi, A, source, int(cfg.run("nodes")), int(cfg.run("steps")))
    try:
        oracle.b
    except ValueError as exc:
        raise ConfigError(f"[background].source: {exc}") from None
    return model, oracle, A


def settings(cfg: RunConfig, seq=None) -> RecoverySettings:
    g = cfg.tree["geometry"]
    seq = parse_sequence(g["s_sequence"], "s_sequence") if seq is None else seq
    try:
        return RecoverySettings(tuple(float(s) for s in seq), None, g["r_mode"], int(g["r_order"]),
                                float(g["r_step"]), float(g["delta"]), float(g["rho"]), float(g["eps0"]))
    except ValueError as exc:
        raise ConfigError(f"[geometry]: {exc}") from None


def grid(cfg: RunConfig, prefix: str = "") -> np.ndarray:
    g = cfg.tree["geometry"]
    t0, t1, nt = g[f"{prefix}grid_t"]
    x0, x1, nx = g[f"{prefix}grid_x"]
    return default_grid(nt, nx, (t0, t1), (x0, x1)).reshape(-1, 4)


def cmd_recover(cfg: RunConfig, out: Path) -> int:
    _, oracle, A = background(cfg)
    st = settings(cfg)
    pts = grid(cfg)
    try:
        dom = CausalDomain(st.eps0)
    except ValueError as exc:
        raise ConfigError(f"[geometry].eps0: {exc}") from None
    rep = recover_field(pts, oracle, A, st, dom, jobs=cfg.jobs)
    for u in rep.unreachable:
        print(f"warning: unreachable point {u['point']}: {u['reason']}", file=sys.stderr)
    tol = cfg.tol("recovery")
    results = [CheckResult("recovery.max_relative_error", rep.max_relative_error <= tol, rep.max_relative_error, tol,
                           {"points": len(pts), "unreachable": len(rep.unreachable), "flagged": len(rep.flagged)})]
    refine = parse_sequence(cfg.geometry("refinement"), "refinement")
    study = []
    if refine:
        fine = recover_field(pts, oracle, A, replace(st, s_sequence=tuple(float(s) for s in refine)), dom,
                             jobs=cfg.jobs)
        study = [{"s_sequence": list(st.s_sequence), "max_relative_error": rep.max_relative_error},
                 {"s_sequence": [float(s) for s in refine], "max_relative_error": fine.max_relative_error}]
        improves = fine.max_relative_error <= rep.max_relative_error
        results.append(CheckResult("recovery.refinement", improves, fine.max_relative_error,
                                   rep.max_relative_error, {"study": study}))
    results = [r for r in results if r.name in select([r.name for r in results], cfg.run("checks"))]
    payload = {"recovery": rep.to_dict(), "refinement": study, "seed": cfg.seed, "config_digest": config_digest(cfg)}
    write_text(out, "recovery.json", dump_json(payload))
    return _finish("recover", cfg, out, results)


# scan
SCAN_COLUMNS = ("s", "jet_residual", "numeric_residual", "dual_mode_gap", "ratio", "recovery_error")


def scan_rows(cfg: RunConfig) -> list[dict]:
    seq = parse_sequence(cfg.geometry("scan_s"), "scan_s")
    if not seq:
        return []
    b, I1, dI2, dI3 = random_inputs(check_rng(cfg.seed, "scan.certificate"))
    rows, prev = [], None
    for s in seq:
        E = residual_at(b, I1, dI2, dI3, s, int(cfg.geometry("r_order")))[0]
        En = numeric_residual(b, I1, dI2, dI3, s)
        nrm = float(np.linalg.norm(E))
        rows.append({"s": str(s), "jet_residual": nrm, "numeric_residual": float(np.linalg.norm(En)),
                     "dual_mode_gap": float(np.linalg.norm(En - E)),
                     "ratio": nrm / prev if prev else None, "recovery_error": None})
        prev = nrm
    if len(seq) >= 3:
        _, oracle, A = background(cfg)
        pts = grid(cfg, "scan_")
        for k in range(2, len(seq)):
            rep = recover_field(pts, oracle, A, settings(cfg, seq[k - 2:k + 1]), jobs=cfg.jobs)
            rows[k]["recovery_error"] = rep.max_relative_error
    return rows


def scan_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SCAN_COLUMNS)
    for r in rows:
        w.writerow(["" if r[c] is None else (r[c] if isinstance(r[c], str) else repr(float(r[c])))
                    for c in SCAN_COLUMNS])
    return buf.getvalue()


def cmd_scan(cfg: RunConfig, out: Path) -> int:
    rows = scan_rows(cfg)
    write_text(out, "scan.csv", scan_csv(rows))
    lo, hi = cfg.tol("ratio_low"), cfg.tol("ratio_high")
    ratios = [r["ratio"] for r in rows if r["ratio"] is not None]
    gaps = [r["dual_mode_gap"] for r in rows]
    results = []
    if ratios:
        bad = [q for q in ratios if not lo <= q <= hi]
        results.append(CheckResult("scan.ratios", not bad, max(ratios, key=lambda q: abs(q - (lo + hi) / 2)),
                                   [lo, hi], {"ratios": ratios}))
    if gaps:
        tol = cfg.tol("dual_mode")
        results.append(CheckResult("scan.dual_mode", max(gaps) <= tol, max(gaps), tol, {"gaps": gaps}))
    results = [r for r in results if r.name in select([r.name for r in results], cfg.run("checks"))]
    return _finish("scan", cfg, out, results)


COMMANDS = {"verify": cmd_verify, "sm-check": cmd_smcheck, "recover": cmd_recover, "scan": cmd_scan}

__all__ = ["COMMANDS", "cmd_verify", "cmd_smcheck", "cmd_recover", "cmd_scan", "build_report", "dump_json",
           "scan_rows", "scan_csv", "SCAN_COLUMNS", "background", "EXIT_OK", "EXIT_FAIL", "EXIT_CONFIG"]
