"""The verification suites behind ``smspin verify`` and ``smspin sm-check``.

Each check is a plain function ``(cfg, rng) -> CheckResult``; the runner
derives one generator per check from the run seed and the check name, so a
check draws the same samples whether it runs alone, in a filtered run or in a
worker process.
"""
from __future__ import annotations

import fnmatch
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .. import clifford as cl
from ..fieldtheory import (ActionOracle, CHANNELS, FieldTriple, Form, abelian_model, compatibility_residual,
                           dirac_operator, el_residual, epsilon_extraction, lichnerowicz_residual, linearized_sources,
                           random_linearized_fields, relative_residual, source_scale, toy_electroweak_model)
from ..liealg import (DEFAULT_GENERATION, NEUTRINO_SINGLET, Multiplet, center, center_kernel_intersection,
                      is_hypercharged, parse_generation_table, standard_model_content)
from ..mathkit.poly import SpacetimePoly
from ..mathkit.scalars import GaussRat, exact_array
from ..microlocal import (LightRay, asymptotic_identity_certificate, build_geometry, central_initial_data, kappa,
                          parallel_transport, pythagorean, random_inputs, symbol_transport_closed_form,
                          transport_system)
from .config import RunConfig, parse_fraction


@dataclass
class CheckResult:
    name: str
    passed: bool
    residual: float | None
    tolerance: float | list | None
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def to_dict(self) -> dict:
        return {"name": self.name, "status": "pass" if self.passed else "fail", "residual": _clean(self.residual),
                "tolerance": _clean(self.tolerance), "details": _clean(self.details)}


def _clean(x):
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if np.isfinite(x) else str(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [_clean(x.real), _clean(x.imag)]
    return x


def check_rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode())])


# models from the configuration
def toy_model(cfg: RunConfig):
    y = cfg.tree["yukawa"]
    return toy_electroweak_model(g_Y=float(y["g_Y"]), coupling=complex(*y["coupling"]))


def recovery_model(cfg: RunConfig):
    bg = cfg.tree["background"]
    return abelian_model(parse_fraction(bg["y_l"], "y_l"), parse_fraction(bg["y_r"], "y_r"), Fraction(0),
                         int(bg["dl"]), int(bg["dr"]))


def generation_table(cfg: RunConfig) -> tuple:
    grp = cfg.tree["group"]
    if grp["preset"] == "custom":
        return parse_generation_table(grp["table"])
    return DEFAULT_GENERATION


# clifford
def _gammas(cfg: RunConfig) -> cl.GammaSet:
    pert = parse_fraction(cfg.run("gamma_perturbation"), "gamma_perturbation")
    lower = cl.gamma_set(True).lower.copy()
    if pert:
        lower[1, 0, 0] = lower[1, 0, 0] + GaussRat(pert)
    return cl.GammaSet(lower, True)


def check_anticommutator(cfg, rng):
    gs = _gammas(cfg)
    res = gs.anticommutator_residual()
    return CheckResult("", res == 0, res, 0.0, {"pairs": 16, "arithmetic": "exact"})


def check_gamma5(cfg, rng):
    gs = _gammas(cfg)
    g5 = gs.g5
    one = exact_array(np.eye(4, dtype=int))
    target = exact_array(np.diag([1, 1, -1, -1]))
    diffs = [g5 - target, g5 @ g5 - one] + [g5 @ gs.upper[a] + gs.upper[a] @ g5 for a in range(4)]
    res = max(float(np.max(np.abs(np.asarray(d, complex)))) for d in diffs)
    return CheckResult("", res == 0, res, 0.0, {"diag": [1, 1, -1, -1], "arithmetic": "exact"})


def _rational(rng, shape, lo=-5, hi=5, den=4):
    num = rng.integers(lo, hi + 1, shape)
    dens = rng.integers(1, den + 1, shape)
    out = np.empty(shape, dtype=object)
    for idx in np.ndindex(*shape):
        out[idx] = GaussRat(Fraction(int(num[idx]), int(dens[idx])))
    return out


def check_clifford_square(cfg, rng):
    n = int(cfg.run("samples"))
    bad = 0
    for _ in range(n):
        v = _rational(rng, (4,))
        psi = _rational(rng, (4, 2)) + GaussRat(0, 1) * _rational(rng, (4, 2))
        lhs = cl.clifford_mult(v, cl.clifford_mult(v, psi))
        rhs = psi * (-cl.minkowski_dot(v, v))
        bad += int(any(bool(x) for x in (lhs - rhs).flat))
    return CheckResult("", bad == 0, float(bad), 0.0, {"samples": n, "arithmetic": "exact", "failures": bad})


def _dirac_residuals(rng, n: int, J) -> dict:
    worst = {"skew_adjoint": 0.0, "conjugate_symmetric": 0.0, "sesquilinear": 0.0, "chiral_null": 0.0}

    def upd(key, a, b):
        worst[key] = max(worst[key], abs(a - b) / max(1.0, abs(a), abs(b)))

    for _ in range(n):
        d = int(rng.integers(1, 4))
        psi, phi = (rng.normal(size=(4, d)) + 1j * rng.normal(size=(4, d)) for _ in range(2))
        X = rng.normal(size=4)
        c = complex(*rng.normal(size=2))
        f = lambda a, b: cl.dirac_form(a, b, J)
        upd("skew_adjoint", f(cl.clifford_mult(X, psi), phi), -f(psi, cl.clifford_mult(X, phi)))
        upd("conjugate_symmetric", f(phi, psi), np.conj(f(psi, phi)))
        upd("sesquilinear", f(psi, c * phi), c * f(psi, phi))
        upd("sesquilinear", f(c * psi, phi), np.conj(c) * f(psi, phi))
        upd("chiral_null", f(cl.proj_L(psi), cl.proj_L(phi)), 0.0)
        upd("chiral_null", f(cl.proj_R(psi), cl.proj_R(phi)), 0.0)
    return worst


def check_dirac_form(cfg, rng):
    n = int(cfg.run("samples"))
    tol = cfg.tol("clifford")
    worst = _dirac_residuals(rng, n, cl.dirac_matrix())
    res = max(worst.values())
    return CheckResult("", res <= tol, res, tol, {"samples": n, "per_property": worst, "matrix": "Gamma_5 Gamma_0"})


def check_dirac_printed_control(cfg, rng):
    """Expected negative: -i Gamma_0 makes Clifford multiplication self-adjoint."""
    n = int(cfg.run("samples"))
    tol = cfg.tol("clifford")
    worst = _dirac_residuals(rng, n, cl.printed_dirac_matrix())
    res = worst["skew_adjoint"]
    return CheckResult("", res > tol, res, tol, {"expected_negative": True, "matrix": "-i Gamma_0",
                                                 "per_property": worst})


# geometry
def _pyth(rng, signed: bool) -> Fraction:
    m, n = sorted(int(x) for x in rng.choice(np.arange(1, 40), 2, replace=False))
    x = pythagorean(m, n)
    return -x if signed and rng.random() < 0.5 else x


def check_geometry_invariants(cfg, rng):
    n = int(cfg.run("geometry_pairs"))
    bad = []
    for _ in range(n):
        r, s = _pyth(rng, True), _pyth(rng, False)
        geo = build_geometry([0, 0, 0, 0], 1, r, s, check=False)
        if not geo.exact:
            raise AssertionError("pythagorean parameters should give exact geometry")
        failed = [k for k, ok in geo.invariant_residuals().items() if not ok]
        if failed:
            bad.append({"r": str(r), "s": str(s), "failed": failed})
    return CheckResult("", not bad, float(len(bad)), 0.0, {"pairs": n, "arithmetic": "exact", "violations": bad})


def check_kappa_instance(cfg, rng):
    k = kappa(Fraction(3, 5), Fraction(4, 5))
    target = (Fraction(-7, 2), Fraction(21, 8), Fraction(15, 8))
    ok = all(a == GaussRat(b) for a, b in zip(k, target))
    res = max(abs(complex(a) - float(b)) for a, b in zip(k, target))
    return CheckResult("", ok, res, 0.0, {"r": "3/5", "s": "4/5", "kappa": [str(complex(a).real) for a in k]})


# field theory
def _random_connection(model, rng, degree: int, scale: float = 0.5) -> Form:
    return Form(SpacetimePoly.random(rng, degree, (4, model.n), scale).map(lambda c: c.real + 0j), 1)


def _lichnerowicz_pairs(cfg, rng):
    m = toy_model(cfg)
    npts = int(cfg.run("lichnerowicz_points"))
    out = []
    for _ in range(int(cfg.run("lichnerowicz_pairs"))):
        dA, dphi = (int(x) for x in rng.integers(1, 4, 2))
        A = _random_connection(m, rng, dA)
        phi = SpacetimePoly.random(rng, dphi, (4, m.d), 0.5)
        pts = rng.uniform(-1, 1, (npts, 4))
        scale = float(np.max(np.abs(dirac_operator(m, A, dirac_operator(m, A, phi))(pts))))
        out.append((m, A, phi, pts, scale, (dA, dphi)))
    return out


def check_lichnerowicz(cfg, rng):
    tol = cfg.tol("lichnerowicz")
    rels = []
    for m, A, phi, pts, scale, _ in _lichnerowicz_pairs(cfg, rng):
        rels.append(relative_residual(lichnerowicz_residual(m, A, phi)(pts), scale))
    res = max(rels, default=0.0)
    return CheckResult("", res <= tol, res, tol, {"pairs": len(rels), "relative_residuals": rels})


def check_lichnerowicz_control(cfg, rng):
    """The identity without the curvature term must fail for at least one pair."""
    tol = cfg.tol("lichnerowicz_control")
    rels = []
    for m, A, phi, pts, scale, _ in _lichnerowicz_pairs(cfg, rng):
        rels.append(relative_residual(lichnerowicz_residual(m, A, phi, include_curvature=False)(pts), scale))
    res = max(rels, default=0.0)
    return CheckResult("", res > tol, res, tol, {"expected_negative": True, "relative_residuals": rels})


def check_noether(cfg, rng):
    m = toy_model(cfg)
    tol = cfg.tol("noether")
    npts = int(cfg.run("noether_points"))
    rels = []
    for _ in range(int(cfg.run("noether_triples"))):
        f = FieldTriple.random(m, rng, degree=2)
        pts = rng.uniform(-1, 1, (npts, 4))
        res = el_residual(m, f)
        C = compatibility_residual(m, f, res)
        rels.append(relative_residual(C(pts), source_scale(m, f, res, pts)))
    worst = max(rels, default=0.0)
    return CheckResult("", worst <= tol, worst, tol, {"triples": len(rels), "relative_residuals": rels})


def check_action_oracle(cfg, rng):
    """Equations against the discretized action; gauge variations of the action vanish."""
    m = toy_model(cfg)
    tol = cfg.tol("action_oracle")
    orc = ActionOracle(m, nodes=6)
    rows = []
    for _ in range(int(cfg.run("noether_triples"))):
        f = FieldTriple.random(m, rng, degree=2)
        res = el_residual(m, f)
        d = FieldTriple.random(m, rng, degree=1)
        var, pair = orc.variation(f, d), orc.residual_pairing(d, res)
        eta = SpacetimePoly.random(rng, 1, (m.n,)).map(lambda c: c.real + 0j)
        gd = orc.gauge_direction(f, eta)
        scale = max(1.0, abs(var))
        rows.append({"first_variation": abs(var - pair) / scale,
                     "gauge_variation": abs(orc.variation(f, gd)) / scale,
                     "gauge_pairing": abs(orc.residual_pairing(gd, res)) / scale})
    worst = max((max(r.values()) for r in rows), default=0.0)
    return CheckResult("", worst <= tol, worst, tol, {"triples": len(rows), "nodes": 6, "rows": rows})


LINEARIZATION_CASES = (((1, 1, 0), 2, (1, 2)), ((1, 0, 1), 2, (1, 3)), ((0, 1, 1), 2, (2, 3)), ((1, 1, 1), 3, None))


def _rel(a, b) -> float:
    a = (a.poly if isinstance(a, Form) else a)
    den = float(np.max(np.abs(b))) if np.size(b) else 0.0
    return float(np.max(np.abs(a - b))) / den if den > 0 else float(np.max(np.abs(a), initial=0.0))


def check_linearization(cfg, rng):
    m = toy_model(cfg)
    tol = cfg.tol("linearization")
    rows, control = [], None
    for k in range(int(cfg.run("linearization_configs"))):
        lf = random_linearized_fields(m, rng, degree=1 + k % 2)
        bg = FieldTriple.random(m, rng, degree=1)
        pts = rng.uniform(-1, 1, (20, 4))
        ex = epsilon_extraction(m, lf, pts, [c[0] for c in LINEARIZATION_CASES])
        for mono, level, index in LINEARIZATION_CASES:
            src = linearized_sources(m, level, bg, lf, index)
            for ch in CHANNELS:
                val = src[ch]
                val = (val.poly if isinstance(val, Form) else val)(pts)
                rows.append({"config": k, "level": level, "index": list(index or (1, 2, 3)), "channel": ch,
                             "relative": _rel(val, ex[mono][ch])})
        if control is None:
            printed = linearized_sources(m, 3, bg, lf, printed_factor=True)["YM"]
            control = _rel((printed.poly if isinstance(printed, Form) else printed)(pts), ex[(1, 1, 1)]["YM"])
    worst = max((r["relative"] for r in rows), default=0.0)
    return CheckResult("", worst <= tol, worst, tol, {"configs": int(cfg.run("linearization_configs")),
                                                      "rows": rows, "printed_ym_factor_control": control})


# transport
def _random_ray(rng, ell: float = 0.5) -> LightRay:
    n = rng.normal(size=3)
    n /= np.linalg.norm(n)
    y = rng.uniform(-0.3, 0.3, 4)
    return LightRay(tuple(y), (1.0, *n), ell, validate=False)


def _central_direction(model) -> np.ndarray:
    z = center(model.algebra)
    return np.asarray(z.elements[0], float)


def check_transport_closed_form(cfg, rng):
    m = toy_model(cfg)
    tol = cfg.tol("transport")
    b = _central_direction(m)
    rels = []
    for _ in range(2):
        ray = _random_ray(rng)
        f = FieldTriple.random(m, rng, degree=2)
        Ac = Form(SpacetimePoly.random(rng, 2, (4, m.n)).map(lambda c: np.outer(np.ones(4), b) * c.real + 0j), 1)
        bg = FieldTriple(f.psi, Ac, f.Phi)
        xi = np.asarray(ray.covector, float)
        omega = np.array([0.0, *np.cross(xi[1:], rng.normal(size=3))])
        cf = symbol_transport_closed_form(m, b, omega, ray, f.psi, Ac, nodes=int(cfg.run("nodes")),
                                          steps=int(cfg.run("steps")))
        S = transport_system(m, central_initial_data(m, b, omega), ray, bg, steps=int(cfg.run("steps")))
        rels.append(float(np.max(np.abs(cf - S.varsigma))) / max(1.0, float(np.max(np.abs(cf)))))
    worst = max(rels)
    return CheckResult("", worst <= tol, worst, tol, {"rays": len(rels), "relative": rels})


def check_transport_unitarity(cfg, rng):
    m = toy_model(cfg)
    tol = cfg.tol("unitarity")
    worst = 0.0
    for _ in range(3):
        ray = _random_ray(rng)
        A = _random_connection(m, rng, 2)
        for rep in ("V", "W", "ambient"):
            P = parallel_transport(m, A, ray, rep=rep, steps=int(cfg.run("steps")))
            worst = max(worst, float(np.max(np.abs(P.conj().T @ P - np.eye(P.shape[0])))))
    return CheckResult("", worst <= tol, worst, tol, {"rays": 3, "reps": ["V", "W", "ambient"]})


def check_transport_exponential(cfg, rng):
    m = toy_model(cfg)
    tol = cfg.tol("exponential")
    worst = 0.0
    for _ in range(3):
        ray = _random_ray(rng)
        A = Form(SpacetimePoly.constant(rng.normal(size=(4, m.n)) + 0j), 1)
        a = parallel_transport(m, A, ray, method="rk4", steps=int(cfg.run("steps")))
        e = parallel_transport(m, A, ray, method="exp")
        worst = max(worst, float(np.max(np.abs(a - e))))
    return CheckResult("", worst <= tol, worst, tol, {"rays": 3, "steps": int(cfg.run("steps"))})


def check_certificate(cfg, rng):
    lo, hi = cfg.tol("ratio_low"), cfg.tol("ratio_high")
    gap_tol = cfg.tol("dual_mode")
    seq = [parse_fraction(s, "s_sequence") for s in cfg.geometry("s_sequence")]
    b, I1, dI2, dI3 = random_inputs(rng)
    cert = asymptotic_identity_certificate(b, I1, dI2, dI3, seq, ratio_bounds=(lo, hi))
    gaps = [e.dual_mode_gap for e in cert.entries]
    gap = max(gaps, default=0.0)
    ok = cert.passed and gap <= gap_tol
    details = {"inputs": {"b": b, "I1": I1, "dI2": dI2, "dI3": dI3}, "s": [e.s for e in cert.entries],
               "residuals": [e.residual for e in cert.entries], "ratios": cert.ratios, "slope": cert.slope,
               "dual_mode_gaps": gaps, "dual_mode_tolerance": gap_tol, "blocks": cert.blocks,
               "metadata": cert.metadata}
    mid = (lo + hi) / 2
    worst = max((q for q in cert.ratios if q is not None), key=lambda q: abs(q - mid), default=None)
    return CheckResult("", ok, worst, [lo, hi], details)


# Standard-Model content
def _content(cfg, table=None):
    grp = cfg.tree["group"]
    return standard_model_content(generation_table(cfg) if table is None else table, int(grp["generations"]),
                                  int(grp["n_y"]))


def check_sm_center(cfg, rng):
    c = _content(cfg)
    dim = center(c.algebra).dim
    return CheckResult("", dim == 1, float(dim), None, {"center_dim": dim, "algebra_dim": c.algebra.dim})


def check_sm_higgs_generator(cfg, rng):
    c = _content(cfg)
    n_y = int(cfg.tree["group"]["n_y"])
    M = c.higgs.of(c.u1_generator)
    res = float(np.max(np.abs(M - 1j * n_y * np.eye(2))))
    det = complex(np.linalg.det(M))
    return CheckResult("", res == 0.0, res, 0.0, {"matrix_diag": np.diag(M), "det": det})


def check_sm_higgs_kernel(cfg, rng):
    """Ker rho_* of the Higgs representation is the su(3) summand."""
    c = _content(cfg)
    imgs = c.higgs.images.reshape(c.algebra.dim, -1).T
    M = np.vstack([imgs.real, imgs.imag])
    _, sv, vt = np.linalg.svd(M)
    rank = int(np.sum(sv > 1e-10 * max(sv.max(), 1.0)))
    kernel = vt[rank:]
    sl = c.algebra.factor_slice("su3")
    outside = np.delete(kernel, np.arange(c.algebra.dim)[sl], axis=1) if kernel.size else kernel
    leak = float(np.max(np.abs(outside), initial=0.0))
    ok = kernel.shape[0] == 8 and leak < 1e-10
    return CheckResult("", ok, leak, 1e-10, {"kernel_dim": kernel.shape[0]})


def check_sm_center_kernel(cfg, rng):
    c = _content(cfg)
    out = {rep: center_kernel_intersection(getattr(c, rep)) for rep in ("higgs", "fermions")}
    return CheckResult("", out["fermions"] == 0, float(out["fermions"]), None,
                       {"dim_ker_intersect_center": out})


def check_sm_fermion_dims(cfg, rng):
    c = _content(cfg)
    dims = tuple(int(x) for x in c.fermions.split)
    return CheckResult("", dims == (24, 21), None, None, {"dims": dims, "expected": [24, 21]})


def _hyper(rep) -> tuple[bool, dict]:
    h = is_hypercharged(rep)
    return bool(h), {"hypercharged": bool(h), "det": h.det}


def check_sm_fermion_hypercharged(cfg, rng):
    ok, det = _hyper(_content(cfg).fermions)
    return CheckResult("", ok, None, None, det)


def check_sm_higgs_hypercharged(cfg, rng):
    ok, det = _hyper(_content(cfg).higgs)
    return CheckResult("", ok, None, None, det)


def check_sm_neutrino_control(cfg, rng):
    """Expected negative: an inert right-handed neutrino spoils the hypercharged property."""
    table = tuple(generation_table(cfg)) + (NEUTRINO_SINGLET,)
    ok, det = _hyper(_content(cfg, table).fermions)
    return CheckResult("", not ok, None, None, {"expected_negative": True, **det})


def check_sm_zero_hypercharge(cfg, rng):
    """Expected negative: all hypercharges set to zero."""
    table = tuple(Multiplet(m.name, m.color, m.weak, Fraction(0), m.chirality) for m in generation_table(cfg))
    ok, det = _hyper(_content(cfg, table).fermions)
    return CheckResult("", not ok, None, None, {"expected_negative": True, **det})


Check = Callable[[RunConfig, np.random.Generator], CheckResult]

VERIFY_CHECKS: dict[str, Check] = {
    "clifford.anticommutator": check_anticommutator,
    "clifford.gamma5": check_gamma5,
    "clifford.square": check_clifford_square,
    "clifford.dirac_form": check_dirac_form,
    "clifford.dirac_printed_control": check_dirac_printed_control,
    "geometry.invariants": check_geometry_invariants,
    "geometry.kappa_instance": check_kappa_instance,
    "fieldtheory.lichnerowicz": check_lichnerowicz,
    "fieldtheory.lichnerowicz_control": check_lichnerowicz_control,
    "fieldtheory.noether": check_noether,
    "fieldtheory.action_oracle": check_action_oracle,
    "fieldtheory.linearization": check_linearization,
    "microlocal.transport_closed_form": check_transport_closed_form,
    "microlocal.transport_unitarity": check_transport_unitarity,
    "microlocal.transport_exponential": check_transport_exponential,
}

SM_CHECKS: dict[str, Check] = {
    "sm.center_dim": check_sm_center,
    "sm.higgs_generator": check_sm_higgs_generator,
    "sm.higgs_kernel": check_sm_higgs_kernel,
    "sm.higgs_hypercharged": check_sm_higgs_hypercharged,
    "sm.center_kernel": check_sm_center_kernel,
    "sm.fermion_dims": check_sm_fermion_dims,
    "sm.fermion_hypercharged": check_sm_fermion_hypercharged,
    "sm.neutrino_control": check_sm_neutrino_control,
    "sm.zero_hypercharge_control": check_sm_zero_hypercharge,
}


def verify_checks(cfg: RunConfig) -> dict[str, Check]:
    out = dict(VERIFY_CHECKS)
    for k in range(int(cfg.run("certificate_inputs"))):
        out[f"microlocal.certificate.{k}"] = check_certificate
    return out


def sm_checks(cfg: RunConfig) -> dict[str, Check]:
    out = dict(SM_CHECKS)
    if not cfg.tree["group"]["neutrino_control"]:
        del out["sm.neutrino_control"]
    return out


def select(names, pattern: str) -> list[str]:
    """Names matching any comma separated pattern; a pattern without wildcards matches as a prefix."""
    pats = [p.strip() for p in pattern.split(",") if p.strip()]
    out = []
    for n in names:
        for p in pats:
            if any(ch in p for ch in "*?[") and fnmatch.fnmatchcase(n, p):
                out.append(n)
                break
            if n == p or n.startswith(p.rstrip(".") + "."):
                out.append(n)
                break
    return sorted(out)


def run_one(args) -> CheckResult:
    name, fn, cfg = args
    t0 = time.perf_counter()
    try:
        res = fn(cfg, check_rng(cfg.seed, name))
    except Exception as exc:  # a crashing check is a failing check
        res = CheckResult(name, False, None, None, {"error": f"{type(exc).__name__}: {exc}"})
    res.name = name
    res.seconds = time.perf_counter() - t0
    return res


def run_checks(cfg: RunConfig, registry: dict[str, Check], pattern: str | None = None,
               jobs: int = 1) -> list[CheckResult]:
    names = select(registry, cfg.run("checks") if pattern is None else pattern)
    tasks = [(n, registry[n], cfg) for n in names]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(run_one, tasks))
    else:
        results = [run_one(t) for t in tasks]
    return sorted(results, key=lambda r: r.name)


__all__ = ["CheckResult", "VERIFY_CHECKS", "SM_CHECKS", "verify_checks", "sm_checks", "run_checks", "run_one",
           "select", "check_rng", "toy_model", "recovery_model", "generation_table"]
