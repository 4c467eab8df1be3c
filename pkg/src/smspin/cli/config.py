"""Run configuration: TOML files layered over the packaged defaults."""
from __future__ import annotations

import copy
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from ..mathkit.poly import SpacetimePoly

ENV_VAR = "SMSPIN_CONFIG"
SECTIONS = ("group", "yukawa", "background", "geometry", "tolerances", "run")


class ConfigError(ValueError):
    """Unreadable, malformed or inconsistent configuration (exit status 2)."""


def default_tree() -> dict:
    text = resources.files("smspin").joinpath("data/default.toml").read_text(encoding="utf-8")
    return tomllib.loads(text)


def _merge(base: dict, user: dict, where: str = "") -> dict:
    out = copy.deepcopy(base)
    for key, val in user.items():
        path = f"{where}.{key}" if where else key
        if key not in base:
            raise ConfigError(f"unknown configuration key [{path}]")
        if isinstance(base[key], dict):
            if not isinstance(val, dict):
                raise ConfigError(f"[{path}] must be a table")
            out[key] = _merge(base[key], val, path)
        else:
            out[key] = val
    return out


# the defaults leave a few keys unset; they are still legal in user files
OPTIONAL_KEYS = {"group": ("table",)}


def load_tree(path: str | os.PathLike | None = None) -> tuple[dict, str | None]:
    """Defaults merged with ``path`` (or $SMSPIN_CONFIG); returns (tree, source path)."""
    base = default_tree()
    for sec, keys in OPTIONAL_KEYS.items():
        for k in keys:
            base[sec].setdefault(k, None)
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    if path is None:
        return base, None
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    try:
        user = tomllib.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None
    return _merge(base, user), str(path)


def parse_fraction(x, what: str) -> Fraction:
    try:
        if isinstance(x, float):
            return Fraction(x)
        return Fraction(str(x))
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"{what}: cannot read {x!r} as a number") from None


def parse_sequence(xs, what: str, allow_empty: bool = True) -> tuple:
    if not isinstance(xs, list):
        raise ConfigError(f"{what} must be a list")
    seq = tuple(parse_fraction(x, what) for x in xs)
    if not seq and not allow_empty:
        raise ConfigError(f"{what} must not be empty")
    if any(not 0 < s < 1 for s in seq):
        raise ConfigError(f"{what}: entries must lie in (0, 1)")
    if any(a <= b for a, b in zip(seq, seq[1:])):
        raise ConfigError(f"{what} must be strictly decreasing")
    return seq


def _coef_array(raw, vshape: tuple, what: str) -> np.ndarray:
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError):
        raise ConfigError(f"{what}: coefficients must be numbers or [re, im] pairs") from None
    if arr.shape == tuple(vshape):
        return arr.astype(complex)
    if arr.shape == tuple(vshape) + (2,):
        return arr[..., 0] + 1j * arr[..., 1]
    raise ConfigError(f"{what}: coefficient shape {arr.shape} does not match {tuple(vshape)} (or with pairs)")


def parse_terms(terms, vshape: tuple, what: str) -> SpacetimePoly:
    """A term list [{exponent = [a, b, c, d], coef = ...}, ...] as a polynomial."""
    if not isinstance(terms, list):
        raise ConfigError(f"{what} must be a list of terms")
    out = []
    for i, term in enumerate(terms):
        if not isinstance(term, dict) or set(term) != {"exponent", "coef"}:
            raise ConfigError(f"{what}[{i}] needs exactly the keys 'exponent' and 'coef'")
        exp = term["exponent"]
        if (not isinstance(exp, list) or len(exp) != 4
                or any(not isinstance(e, int) or isinstance(e, bool) or e < 0 for e in exp)):
            raise ConfigError(f"{what}[{i}].exponent must be four non-negative integers")
        out.append((exp, _coef_array(term["coef"], vshape, f"{what}[{i}]")))
    return SpacetimePoly.from_terms(out, vshape)


def _positive(tree: dict, section: str, key: str, kind=float):
    val = tree[section][key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ConfigError(f"[{section}].{key} must be a number")
    if not val > 0:
        raise ConfigError(f"[{section}].{key} must be positive")
    if kind is int and int(val) != val:
        raise ConfigError(f"[{section}].{key} must be an integer")
    return kind(val)


def _grid(raw, what: str) -> tuple:
    if not isinstance(raw, list) or len(raw) != 3:
        raise ConfigError(f"{what} must be [start, stop, count]")
    lo, hi, n = raw
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ConfigError(f"{what}: count must be a non-negative integer")
    return float(lo), float(hi), n


@dataclass(frozen=True)
class RunConfig:
    tree: dict
    source: str | None = None

    # sections with light validation on access
    @property
    def seed(self) -> int:
        return int(self.tree["run"]["seed"])

    @property
    def jobs(self) -> int:
        return int(self.tree["run"]["jobs"])

    def tol(self, key: str) -> float:
        return float(self.tree["tolerances"][key])

    def run(self, key: str):
        return self.tree["run"][key]

    def geometry(self, key: str):
        return self.tree["geometry"][key]

    def with_overrides(self, **run) -> "RunConfig":
        tree = copy.deepcopy(self.tree)
        for k, v in run.items():
            if v is not None:
                tree["run"][k] = v
        return RunConfig(validate(tree), self.source)


def validate(tree: dict) -> dict:
    for sec in SECTIONS:
        if not isinstance(tree.get(sec), dict):
            raise ConfigError(f"missing section [{sec}]")
    for key in tree["tolerances"]:
        _positive(tree, "tolerances", key)
    if not tree["tolerances"]["ratio_low"] < tree["tolerances"]["ratio_high"]:
        raise ConfigError("[tolerances] ratio_low must be below ratio_high")
    for key in ("samples", "geometry_pairs", "lichnerowicz_pairs", "lichnerowicz_points", "noether_triples",
                "noether_points", "linearization_configs", "certificate_inputs", "nodes", "steps", "jobs"):
        _positive(tree, "run", key, int)
    seed = tree["run"]["seed"]
    if isinstance(seed, bool) or not isinstance(seed, int) or seed < 0:
        raise ConfigError("[run].seed must be a non-negative integer")
    if not isinstance(tree["run"]["checks"], str):
        raise ConfigError("[run].checks must be a string")
    pert = tree["run"]["gamma_perturbation"]
    if isinstance(pert, bool) or not isinstance(pert, (int, float, str)):
        raise ConfigError("[run].gamma_perturbation must be a number")
    parse_fraction(pert, "[run].gamma_perturbation")
    geo = tree["geometry"]
    for key in ("s_sequence", "refinement", "scan_s"):
        parse_sequence(geo[key], f"[geometry].{key}", allow_empty=key != "s_sequence")
    for key in ("eps0", "rho", "r_step", "delta"):
        _positive(tree, "geometry", key)
    _positive(tree, "geometry", "r_order", int)
    if geo["r_mode"] not in ("jet", "stencil"):
        raise ConfigError("[geometry].r_mode must be 'jet' or 'stencil'")
    for key in ("grid_t", "grid_x", "scan_grid_t", "scan_grid_x"):
        _grid(geo[key], f"[geometry].{key}")
    grp = tree["group"]
    if grp["preset"] not in ("standard-model", "custom"):
        raise ConfigError("[group].preset must be 'standard-model' or 'custom'")
    if grp["preset"] == "custom" and not grp.get("table"):
        raise ConfigError("[group] preset 'custom' needs a non-empty table")
    _positive(tree, "group", "generations", int)
    _positive(tree, "group", "n_y", int)
    yk = tree["yukawa"]
    if not isinstance(yk["coupling"], list) or len(yk["coupling"]) != 2:
        raise ConfigError("[yukawa].coupling must be [re, im]")
    bg = tree["background"]
    for key in ("y_l", "y_r"):
        parse_fraction(bg[key], f"[background].{key}")
    _positive(tree, "background", "dl", int)
    _positive(tree, "background", "dr", int)
    if not (bg["psi"] in ("seeded", "vacuum") or isinstance(bg["psi"], list)):
        raise ConfigError("[background].psi must be 'seeded', 'vacuum' or a term list")
    if not (bg["A"] == "zero" or isinstance(bg["A"], list)):
        raise ConfigError("[background].A must be 'zero' or a term list")
    # the recovery model is u(1): one algebra coordinate
    if isinstance(bg["A"], list):
        parse_terms(bg["A"], (4, 1), "[background].A")
    if isinstance(bg["psi"], list):
        parse_terms(bg["psi"], (4, int(bg["dl"]) + int(bg["dr"])), "[background].psi")
    return tree


def load_config(path: str | os.PathLike | None = None) -> RunConfig:
    tree, src = load_tree(path)
    return RunConfig(validate(tree), src)


__all__ = ["RunConfig", "ConfigError", "load_config", "load_tree", "default_tree", "parse_terms", "parse_sequence",
           "parse_fraction", "validate", "ENV_VAR"]
