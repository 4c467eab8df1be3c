"""Acceptance criteria, one pass/fail line each (see the 'acceptance criteria' section of the pytest summary)."""
import json
import time
from dataclasses import replace

import pytest

from smspin.cli import main
from smspin.cli.checks import SM_CHECKS, run_checks, sm_checks, verify_checks
from smspin.cli.commands import background, grid, settings
from smspin.cli.config import parse_sequence
from smspin.microlocal import CausalDomain
from smspin.recovery import recover_field

# criterion -> (title, check patterns, registry, runtime budget in seconds)
SUITES = {
    1: ("clifford", "clifford.anticommutator,clifford.gamma5,clifford.square,clifford.dirac_form", "verify", 1.0),
    2: ("geometry", "geometry", "verify", 1.0),
    3: ("lichnerowicz", "fieldtheory.lichnerowicz,fieldtheory.lichnerowicz_control", "verify", 10.0),
    4: ("noether", "fieldtheory.noether,fieldtheory.action_oracle", "verify", 30.0),
    5: ("linearization", "fieldtheory.linearization", "verify", 30.0),
    6: ("transport", "microlocal.transport_*", "verify", 10.0),
    7: ("certificate", "microlocal.certificate.*", "verify", 60.0),
    8: ("standard-model", ",".join(SM_CHECKS), "sm", 5.0),
}


def _line(k: int, title: str, ok: bool, body: str) -> str:
    return f"[{k:02d}] {'PASS' if ok else 'FAIL'}  {title:<15} {body}"


def _fmt(x):
    return "-" if x is None else (f"{x:.3g}" if isinstance(x, float) else str(x))


@pytest.mark.parametrize("k", sorted(SUITES))
def test_criterion_suite(k, cfg, report_line):
    title, pattern, reg, budget = SUITES[k]
    registry = verify_checks(cfg) if reg == "verify" else sm_checks(cfg)
    t0 = time.perf_counter()
    results = run_checks(cfg, registry, pattern)
    wall = time.perf_counter() - t0
    ok = bool(results) and all(r.passed for r in results) and wall < budget
    parts = [f"{r.name.split('.', 1)[1]}={_fmt(r.residual)}" + ("" if r.passed else "!") for r in results]
    report_line(_line(k, title, ok, f"{wall:.1f}s/{budget:g}s  " + " ".join(parts)))
    assert results
    assert [r.name for r in results if not r.passed] == []
    assert wall < budget


def _recover(cfg, A_terms):
    tree = json.loads(json.dumps(cfg.tree))
    tree["background"]["A"] = A_terms
    c = replace(cfg, tree=tree)
    _, oracle, A = background(c)
    st = settings(c)
    pts = grid(c)
    dom = CausalDomain(st.eps0)
    base = recover_field(pts, oracle, A, st, dom)
    fine = recover_field(pts, oracle, A, replace(st, s_sequence=tuple(
        float(s) for s in parse_sequence(c.geometry("refinement"), "refinement"))), dom)
    return len(pts), base, fine


def test_criterion_recovery(cfg, report_line):
    tol = cfg.tol("recovery")
    # the packaged background carries a constant connection on the abelian (central) factor
    cases = {"A=0": "zero", "A=central": cfg.tree["background"]["A"]}
    t0 = time.perf_counter()
    rows, ok = [], True
    for label, A in cases.items():
        n, base, fine = _recover(cfg, A)
        good = (n == 25 and not base.unreachable and base.max_relative_error <= tol
                and fine.max_relative_error <= base.max_relative_error)
        ok &= good
        rows.append(f"{label}: {base.max_relative_error:.2g}->{fine.max_relative_error:.2g}")
    wall = time.perf_counter() - t0
    ok &= wall < 120
    report_line(_line(9, "recovery", ok, f"{wall:.1f}s/120s  " + "  ".join(rows) + f"  tol={tol:g}"))
    assert ok


# a lighter configuration keeps the repeated runs short; every suite still runs
DETERMINISM_TOML = """
[geometry]
grid_t = [-0.1, 0.1, 2]
grid_x = [0.15, 0.35, 2]
refinement = []
[run]
certificate_inputs = 1
linearization_configs = 1
lichnerowicz_pairs = 3
noether_triples = 3
"""


def test_criterion_determinism(tmp_path, report_line):
    conf = tmp_path / "det.toml"
    conf.write_text(DETERMINISM_TOML)
    blobs = {}
    for cmd, files in (("verify", ("report.json",)), ("recover", ("report.json", "recovery.json"))):
        for run in range(2):
            out = tmp_path / f"{cmd}{run}"
            code = main([cmd, "--config", str(conf), "--out", str(out), "--seed", "7"])
            assert code == 0
            blobs[cmd, run] = b"".join((out / f).read_bytes() for f in files)
    same = {cmd: blobs[cmd, 0] == blobs[cmd, 1] for cmd in ("verify", "recover")}
    ok = all(same.values())
    report_line(_line(10, "determinism", ok, "  ".join(f"{c}: {'identical' if v else 'DIFFERENT'}"
                                                      for c, v in same.items())))
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
