"""Verification suites and machine-readable reports.

A suite config is a JSON object selecting identity grids, seeded fuzz runs,
and quadrature consistency families.  The runner produces one versioned
report dict ("schema": 1) whose `checks` list carries the full audit trail:
every check includes its achieved tail budget next to the tolerance, so a
near-threshold pass can be inspected rather than trusted.

Re-running a suite with the same config reproduces the same parameter
sequences and verdicts; only the timing fields move.
"""

from __future__ import annotations

import json
import time
from dataclasses import replace
from importlib import resources
from typing import Any

from . import __version__
from .errors import ConfigError
from .identities import (
    DEFAULT_ACCURACY,
    IDENTITIES,
    IdentityCheck,
    draw_params,
    run_grid,
)
from .quadrature import QUAD_CHECKS, run_quad_grid
from .rng import XorShift64Star
from .series import DEFAULT_CONFIG, EngineConfig

__all__ = [
    "SCHEMA_VERSION",
    "default_config",
    "load_config",
    "validate_config",
    "report_from_records",
    "run_suite",
    "render_table",
]

SCHEMA_VERSION = 1

_ENGINE_KEYS = ("start_cutoff", "max_cutoff", "block_size")


def default_config() -> dict:
    """The packaged default suite: the full numeric acceptance grid."""
    text = resources.files("mzv.data").joinpath("acceptance.json").read_text()
    return json.loads(text)


def load_config(path: str | None) -> dict:
    if path is None:
        return default_config()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def _check_accuracy(value: Any, where: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool), f"{where} must be a number")
    v = float(value)
    _require(0.0 < v <= 1.0, f"{where} must be in (0, 1], got {value!r}")
    return v


def validate_config(config: Any) -> dict:
    """Normalize and validate a suite config, raising ConfigError on any
    unknown key or out-of-range value (typos should fail loudly, not skew a
    verification run)."""
    _require(isinstance(config, dict), "config must be a JSON object")
    known_top = {"schema", "accuracy", "tolerance", "parallelism", "engine", "checks"}
    unknown = set(config) - known_top
    _require(not unknown, f"unknown config keys: {sorted(unknown)}")
    if "schema" in config:
        _require(config["schema"] == SCHEMA_VERSION, f"unsupported config schema {config['schema']!r}")

    out: dict = {"schema": SCHEMA_VERSION}
    out["accuracy"] = _check_accuracy(config.get("accuracy", DEFAULT_ACCURACY), "accuracy")
    tol = config.get("tolerance")
    out["tolerance"] = None if tol is None else _check_accuracy(tol, "tolerance")
    par = config.get("parallelism", 1)
    _require(isinstance(par, int) and not isinstance(par, bool) and par >= 1, "parallelism must be an integer >= 1")
    out["parallelism"] = par

    engine = config.get("engine", {})
    _require(isinstance(engine, dict), "engine must be an object")
    bad = set(engine) - set(_ENGINE_KEYS)
    _require(not bad, f"unknown engine keys: {sorted(bad)} (known: {list(_ENGINE_KEYS)})")
    for key, value in engine.items():
        _require(
            isinstance(value, int) and not isinstance(value, bool) and value > 0,
            f"engine.{key} must be a positive integer",
        )
    out["engine"] = dict(engine)

    checks = config.get("checks", [])
    _require(isinstance(checks, list), "checks must be a list")
    norm_checks = []
    for pos, entry in enumerate(checks):
        where = f"checks[{pos}]"
        _require(isinstance(entry, dict), f"{where} must be an object")
        unknown = set(entry) - {"identity", "quad", "grid", "fuzz", "accuracy", "tolerance"}
        _require(not unknown, f"{where}: unknown keys {sorted(unknown)}")
        has_id = "identity" in entry
        has_quad = "quad" in entry
        _require(has_id != has_quad, f"{where}: need exactly one of 'identity' or 'quad'")
        norm: dict = {}
        if has_id:
            name = entry["identity"]
            _require(name in IDENTITIES, f"{where}: unknown identity {name!r} (known: {sorted(IDENTITIES)})")
            norm["identity"] = name
        else:
            name = entry["quad"]
            _require(name in QUAD_CHECKS, f"{where}: unknown quad form {name!r} (known: {sorted(QUAD_CHECKS)})")
            norm["quad"] = name
            _require("fuzz" not in entry, f"{where}: quad entries take a grid, not fuzz")
        _require(not ("grid" in entry and "fuzz" in entry), f"{where}: 'grid' and 'fuzz' are exclusive")
        if "fuzz" in entry:
            fuzz = entry["fuzz"]
            _require(isinstance(fuzz, dict), f"{where}.fuzz must be an object")
            bad = set(fuzz) - {"seed", "count", "ranges"}
            _require(not bad, f"{where}.fuzz: unknown keys {sorted(bad)}")
            seed = fuzz.get("seed", 0)
            count = fuzz.get("count", 10)
            _require(isinstance(seed, int) and not isinstance(seed, bool), f"{where}.fuzz.seed must be an integer")
            _require(
                isinstance(count, int) and not isinstance(count, bool) and count >= 0,
                f"{where}.fuzz.count must be an integer >= 0",
            )
            ranges = fuzz.get("ranges", {})
            _require(isinstance(ranges, dict), f"{where}.fuzz.ranges must be an object")
            norm["fuzz"] = {"seed": seed, "count": count, "ranges": ranges}
        else:
            grid = entry.get("grid", {})
            _require(isinstance(grid, dict), f"{where}.grid must be an object")
            norm["grid"] = grid
        if "accuracy" in entry:
            norm["accuracy"] = _check_accuracy(entry["accuracy"], f"{where}.accuracy")
        if "tolerance" in entry:
            etol = entry["tolerance"]
            norm["tolerance"] = None if etol is None else _check_accuracy(etol, f"{where}.tolerance")
        norm_checks.append(norm)
    out["checks"] = norm_checks
    return out


def _engine_config(cfg: dict) -> EngineConfig:
    overrides = cfg.get("engine", {})
    return replace(DEFAULT_CONFIG, **overrides) if overrides else DEFAULT_CONFIG


def _run_entry(entry: dict, cfg: dict, engine: EngineConfig) -> list[IdentityCheck]:
    acc = entry.get("accuracy", cfg["accuracy"])
    tol = entry.get("tolerance", cfg["tolerance"])
    if "quad" in entry:
        return run_quad_grid(entry["quad"], entry["grid"], acc, tol, engine)
    name = entry["identity"]
    if "fuzz" in entry:
        fuzz = entry["fuzz"]
        rng = XorShift64Star(fuzz["seed"])
        info_check = IDENTITIES[name].check
        out = []
        for _ in range(fuzz["count"]):
            params = draw_params(name, rng, fuzz["ranges"])
            out.append(info_check(acc=acc, tolerance=tol, config=engine, **params))
        return out
    return run_grid(name, entry["grid"], acc, tol, engine, cfg["parallelism"])


def report_from_records(records: list[dict], config_echo: dict, started: float, seeds: list[int] | None = None) -> dict:
    """Assemble the versioned report envelope around finished check records."""
    diffs = [r["abs_diff"] for r in records]
    passed = sum(1 for r in records if r["pass"])
    report = {
        "schema": SCHEMA_VERSION,
        "tool": "mzv",
        "version": __version__,
        "config": config_echo,
        "checks": records,
        "summary": {
            "total": len(records),
            "passed": passed,
            "failed": len(records) - passed,
            "max_abs_diff": max(diffs) if diffs else 0.0,
            "runtime_seconds": round(time.time() - started, 3),
        },
    }
    if seeds:
        report["seeds"] = seeds
    return report


def run_suite(config: dict | None = None) -> dict:
    """Run a validated (or default) suite config; returns the report dict."""
    cfg = validate_config(config if config is not None else default_config())
    engine = _engine_config(cfg)
    started = time.time()
    records = []
    seeds = []
    for entry in cfg["checks"]:
        source = "fuzz" if "fuzz" in entry else "grid"
        if source == "fuzz":
            seeds.append(entry["fuzz"]["seed"])
        for check in _run_entry(entry, cfg, engine):
            record = check.as_dict()
            record["source"] = source
            records.append(record)
    return report_from_records(records, cfg, started, seeds)


def render_table(report: dict) -> str:
    """Human-readable view of a report (same record, different formatting)."""
    lines = []
    for rec in report["checks"]:
        params = ", ".join(f"{k}={v}" for k, v in rec["params"].items()) or "-"
        status = "pass" if rec["pass"] else "FAIL"
        lines.append(
            f"{status}  {rec['identity']:16s} {params:40s} "
            f"diff={rec['abs_diff']:.3e} tol={rec['tolerance']:.3e}"
        )
    s = report["summary"]
    lines.append(
        f"{s['passed']}/{s['total']} passed, max |diff| = {s['max_abs_diff']:.3e}, "
        f"{s['runtime_seconds']:.1f}s"
    )
    return "\n".join(lines)
