"""Scenario-driven command line: validate a JSON config, run it, report.

Reports are byte-deterministic: fixed key ordering, shortest round-trip
float repr in JSON, %.17g in CSV, and no timestamps -- wall-clock timing
goes to a sibling timing.json that is excluded from determinism claims.

Exit codes: 0 all checks pass, 1 computation error, 2 parse or schema
error, 3 at least one check failed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np
from jsonschema import Draft202012Validator

from . import __version__
from .acceptance import CRITERIA, Check, REGIME_EXPECTED, regime_fixture_metrics
from .core import Potential, natural_units, si_units
from .dynamics import IntegratorConfig, cpdq_diagnostics, energy_budget, integrate_hamilton
from .info import LN2, info_ledger, rate_bounds, regime_classify
from .quantum import (
    DispersionParams,
    Grid1D,
    appendix_a_consistency,
    bohm_adiabaticity_report,
    dispersion_checks,
    local_wkb_profile,
    solve_tise,
    variational_ground_state,
)
from .thermo import PistonConfig, adiabatic_scan, extended_quantities, heat_theorem_residual, piston_simulate

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_SCHEMA = 2
EXIT_CHECK = 3

_POTENTIAL_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["free", "linear", "harmonic", "infinite_well",
                          "soft_well"]},
        "f0": {"type": "number"},
        "m": {"type": "number", "exclusiveMinimum": 0},
        "omega": {"type": "number", "exclusiveMinimum": 0},
        "width": {"type": "number", "exclusiveMinimum": 0},
        "v0": {"type": "number", "exclusiveMinimum": 0},
        "a": {"type": "number", "exclusiveMinimum": 0},
    },
}

_GRID_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["x_min", "x_max", "n"],
    "properties": {
        "x_min": {"type": "number"},
        "x_max": {"type": "number"},
        "n": {"type": "integer", "minimum": 64},
    },
}

_PARAMS_SCHEMAS = {
    "trajectory": {
        "type": "object",
        "additionalProperties": False,
        "required": ["potential", "q0", "p0", "dt", "n_steps"],
        "properties": {
            "potential": _POTENTIAL_SCHEMA,
            "q0": {"type": "number"},
            "p0": {"type": "number"},
            "dt": {"type": "number", "exclusiveMinimum": 0},
            "n_steps": {"type": "integer", "minimum": 4},
            "energy_drift_tol": {"type": "number", "exclusiveMinimum": 0},
            "pzie_tol_bits": {"type": "number", "exclusiveMinimum": 0},
        },
    },
    "piston": {
        "type": "object",
        "additionalProperties": False,
        "properties": {
            "l0": {"type": "number", "exclusiveMinimum": 0},
            "v0": {"type": "number", "exclusiveMinimum": 0},
            "u": {"type": "number"},
            "m": {"type": "number", "exclusiveMinimum": 0},
            "mode": {"enum": ["constant_speed", "sudden_jump"]},
            "l_end": {"type": "number", "exclusiveMinimum": 0},
            "t_end": {"type": "number", "exclusiveMinimum": 0},
            "t_jump": {"type": "number", "exclusiveMinimum": 0},
            "scan": {
                "type": "object",
                "additionalProperties": False,
                "required": ["ratios"],
                "properties": {
                    "ratios": {"type": "array", "minItems": 2,
                               "items": {"type": "number",
                                         "exclusiveMinimum": 0,
                                         "exclusiveMaximum": 1}},
                    "expansion": {"type": "number", "exclusiveMinimum": 1},
                },
            },
        },
    },
    "tise": {
        "type": "object",
        "additionalProperties": False,
        "required": ["potential", "grid", "n_states"],
        "properties": {
            "potential": _POTENTIAL_SCHEMA,
            "grid": _GRID_SCHEMA,
            "n_states": {"type": "integer", "minimum": 1},
            "expected_energies": {"type": "array",
                                  "items": {"type": "number"}},
            "energy_rel_tol": {"type": "number", "exclusiveMinimum": 0},
        },
    },
    "variational": {
        "type": "object",
        "additionalProperties": False,
        "required": ["potential", "grid"],
        "properties": {
            "potential": _POTENTIAL_SCHEMA,
            "grid": _GRID_SCHEMA,
            "max_iters": {"type": "integer", "minimum": 1},
            "tol": {"type": "number", "exclusiveMinimum": 0},
        },
    },
    "wkb": {
        "type": "object",
        "additionalProperties": False,
        "required": ["potential", "energy", "grid"],
        "properties": {
            "potential": _POTENTIAL_SCHEMA,
            "energy": {"type": "number"},
            "grid": _GRID_SCHEMA,
            "kinetic_fraction": {"type": "number", "exclusiveMinimum": 0,
                                 "exclusiveMaximum": 1},
            "with_bohm_report": {"type": "boolean"},
        },
    },
    "dispersion": {
        "type": "object",
        "additionalProperties": False,
        "required": ["k", "m0"],
        "properties": {
            "k": {"type": "number"},
            "m0": {"type": "number", "minimum": 0},
            "c": {"type": "number", "exclusiveMinimum": 0},
            "f": {"type": "number", "exclusiveMinimum": 0},
        },
    },
    "bounds": {
        "type": "object",
        "additionalProperties": False,
        "required": ["energy", "theta"],
        "properties": {
            "energy": {"type": "number", "exclusiveMinimum": 0},
            "theta": {"type": "number", "exclusiveMinimum": 0},
        },
    },
    "regime": {
        "type": "object",
        "additionalProperties": False,
        "properties": {
            "fixture": {"enum": sorted(REGIME_EXPECTED)},
            "metrics": {
                "type": "object",
                "additionalProperties": False,
                "required": ["mean_abs_d_i", "max_step_d_i_q",
                             "max_step_d_i_p"],
                "properties": {
                    "mean_abs_d_i": {"type": "number", "minimum": 0},
                    "max_step_d_i_q": {"type": "number", "minimum": 0},
                    "max_step_d_i_p": {"type": "number", "minimum": 0},
                },
            },
            "thresholds": {"type": "array", "minItems": 2, "maxItems": 2,
                           "items": {"type": "number",
                                     "exclusiveMinimum": 0}},
        },
    },
    "suite": {
        "type": "object",
        "additionalProperties": False,
        "properties": {
            "filter": {"type": "string"},
        },
    },
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "cpdq-lab scenario",
    "type": "object",
    "additionalProperties": False,
    "required": ["kind", "params"],
    "properties": {
        "kind": {"enum": sorted(_PARAMS_SCHEMAS)},
        "units": {"enum": ["natural", "si"]},
        "constants": {
            "type": "object",
            "additionalProperties": False,
            "properties": {name: {"type": "number", "exclusiveMinimum": 0}
                           for name in ("f", "hbar", "k_boltz", "mass", "c",
                                        "f_ref", "p_floor")},
        },
        "params": {"type": "object"},
        "out_dir": {"type": "string"},
    },
}


class ScenarioError(ValueError):
    """Config failed validation; message names the offending key."""


@dataclass
class RunReport:
    scenario: dict
    checks: list
    artifacts: list
    elapsed_s: float

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def deterministic_dict(self) -> dict:
        return {
            "version": __version__,
            "scenario": self.scenario,
            "checks": [{"name": c.name, "value": float(c.value),
                        "tolerance": float(c.tolerance),
                        "comparator": c.comparator, "pass": c.passed}
                       for c in self.checks],
            "artifacts": sorted(self.artifacts),
        }


def _schema_error_message(err) -> str:
    if err.validator == "additionalProperties":
        known = set(err.schema.get("properties", {}))
        offending = sorted(set(err.instance) - known)
        where = "/".join(str(p) for p in err.absolute_path) or "top level"
        return f"unknown key(s) {offending} at {where}"
    where = "/".join(str(p) for p in err.absolute_path) or "top level"
    return f"{err.message} at {where}"


def validate_scenario(cfg: dict) -> None:
    errors = sorted(Draft202012Validator(SCHEMA).iter_errors(cfg),
                    key=lambda e: list(e.absolute_path))
    if errors:
        raise ScenarioError(_schema_error_message(errors[0]))
    kind = cfg["kind"]
    sub = Draft202012Validator(_PARAMS_SCHEMAS[kind])
    errors = sorted(sub.iter_errors(cfg["params"]),
                    key=lambda e: list(e.absolute_path))
    if errors:
        raise ScenarioError(f"params for kind {kind!r}: "
                            f"{_schema_error_message(errors[0])}")
    if kind == "regime":
        p = cfg["params"]
        if ("fixture" in p) == ("metrics" in p):
            raise ScenarioError("regime needs exactly one of fixture/metrics")
    if kind == "piston" and "scan" not in cfg["params"]:
        if "l0" not in cfg["params"] or "v0" not in cfg["params"]:
            raise ScenarioError("piston without scan needs l0 and v0")


def _constants(cfg: dict):
    base = si_units() if cfg.get("units") == "si" else natural_units()
    overrides = cfg.get("constants", {})
    return base.with_overrides(**overrides) if overrides else base


def _potential(spec: dict) -> Potential:
    kind = spec["kind"]
    if kind == "free":
        return Potential.free()
    if kind == "linear":
        return Potential.linear(spec.get("f0", 1.0))
    if kind == "harmonic":
        return Potential.harmonic(spec.get("m", 1.0), spec.get("omega", 1.0))
    if kind == "infinite_well":
        return Potential.infinite_well(spec.get("width", 1.0))
    return Potential.soft_well(spec.get("v0", 1.0), spec.get("a", 1.0))


def _grid(spec: dict) -> Grid1D:
    return Grid1D(spec["x_min"], spec["x_max"], spec["n"])


def write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    rows = zip(*columns)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join("%.17g" % float(x) for x in row) + "\n")


def _run_trajectory(params, consts, out: Path):
    pot = _potential(params["potential"])
    cfg = IntegratorConfig(dt=params["dt"], n_steps=params["n_steps"])
    rec = integrate_hamilton(pot, params["q0"], params["p0"], cfg, consts)
    drift, _ = cpdq_diagnostics(rec, consts)
    _, e_drift = energy_budget(rec)
    ledger = info_ledger(rec, consts)
    checks = [
        Check("cpdq_max_rel_drift", drift, 1e-12),
        Check("max_energy_drift", e_drift,
              params.get("energy_drift_tol", 1e-6)),
        Check("pzie_cumulative_bits", abs(ledger.total),
              params.get("pzie_tol_bits", 1e-6)),
    ]
    t = rec.traj
    series = out / "series.csv"
    write_csv(series, ["t", "q", "p", "delta_q", "f", "T", "V", "E"],
              [t.t, t.q, t.p, rec.delta_q_series, rec.f_series,
               rec.energy_t, rec.energy_v, rec.energy_e])
    return checks, [series.name]


def _run_piston(params, consts, out: Path):
    if "scan" in params:
        scan_spec = params["scan"]
        scan = adiabatic_scan(scan_spec["ratios"], consts,
                              l0=params.get("l0", 1.0),
                              v0=params.get("v0", 1.0),
                              m=params.get("m", 1.0),
                              expansion=scan_spec.get("expansion", 2.0))
        path = out / "scan.csv"
        write_csv(path, ["ratio", "delta_ln_pL", "delta_S_over_k"],
                  [scan.ratios, scan.delta_ln_pl, scan.delta_s_over_k])
        worst = float(np.min(np.diff(scan.delta_ln_pl)))
        return [Check("scan_monotonicity_min_step", -worst, 1e-12)], [path.name]

    cfg = PistonConfig(l0=params["l0"], v0=params["v0"],
                       u=params.get("u", 0.0), m=params.get("m", 1.0),
                       mode=params.get("mode", "constant_speed"),
                       l_end=params.get("l_end"), t_end=params.get("t_end"),
                       t_jump=params.get("t_jump"))
    rec = piston_simulate(cfg, consts)
    _, log_res = heat_theorem_residual(rec, consts)
    ledger = info_ledger(rec, consts)
    ds_over_k = rec.total_delta_s() / consts.k_boltz
    checks = [
        Check("log_form_residual", float(np.max(np.abs(log_res))), 1e-12),
        Check("ledger_matches_entropy",
              abs(ledger.total + ds_over_k / LN2), 1e-3),
    ]
    if cfg.mode == "sudden_jump":
        checks.append(Check("sudden_jump_dS_over_k",
                            abs(ds_over_k - math.log(cfg.l_end / cfg.l0)),
                            1e-9))
    events = out / "events.csv"
    write_csv(events, ["t", "speed", "L", "event", "f", "S"],
              [rec.t, rec.speed, rec.box_l, rec.event.astype(float),
               rec.f_values, rec.entropy])
    artifacts = [events.name]
    try:
        ts = extended_quantities(rec, consts)
        cycles = out / "cycles.csv"
        write_csv(cycles, ["dt", "dE", "dS", "dVol", "theta", "P",
                           "dL_ext", "f_dot", "s_dot_based"],
                  [ts.dt, ts.d_e, ts.d_s, ts.d_vol, ts.theta, ts.pressure,
                   ts.d_l_ext, ts.f_dot, ts.s_dot_based])
        artifacts.append(cycles.name)
    except ValueError:
        pass  # too few collisions for cycle series; event log still written
    return checks, artifacts


def _run_tise(params, consts, out: Path):
    pot = _potential(params["potential"])
    grid = _grid(params["grid"])
    sol = solve_tise(pot, grid, params["n_states"], consts)
    h = grid.h
    vals = np.stack([s.values.real for s in sol.states])
    overlaps = vals @ vals.T * h
    ortho = float(np.max(np.abs(overlaps - np.eye(len(sol.states)))))
    nodes_ok = 1.0
    for n, s in enumerate(sol.states):
        v = s.values.real
        sig = v[np.abs(v) > 1e-6 * np.abs(v).max()]
        if int(np.sum(np.diff(np.sign(sig)) != 0)) != n:
            nodes_ok = 0.0
    checks = [
        Check("orthonormality_defect", ortho, 1e-8),
        Check("node_counts_match", nodes_ok, 1.0, comparator="=="),
    ]
    expected = params.get("expected_energies")
    if expected:
        tol = params.get("energy_rel_tol", 1e-3)
        worst = max(abs(sol.energies[i] - e) / abs(e)
                    for i, e in enumerate(expected))
        checks.append(Check("expected_energy_rel_err", worst, tol))
    en = out / "energies.csv"
    write_csv(en, ["n", "E"],
              [np.arange(len(sol.energies), dtype=float), sol.energies])
    st = out / "states.csv"
    header = ["x"]
    cols = [grid.x]
    for n, s in enumerate(sol.states):
        header += [f"re_psi_{n}", f"im_psi_{n}", f"prob_{n}"]
        cols += [s.values.real, s.values.imag, s.prob]
    write_csv(st, header, cols)
    return checks, [en.name, st.name]


def _run_variational(params, consts, out: Path):
    pot = _potential(params["potential"])
    grid = _grid(params["grid"])
    res = variational_ground_state(pot, grid, consts,
                                   max_iters=params.get("max_iters", 5000),
                                   tol=params.get("tol", 1e-10))
    sol = solve_tise(pot, grid, 1, consts)
    rel = abs(res.energy - sol.energies[0]) / abs(sol.energies[0])
    checks = [
        Check("variational_vs_eigensolver_rel", rel, 1e-4),
        Check("iterations", float(res.iterations),
              float(params.get("max_iters", 5000))),
    ]
    path = out / "ground_state.csv"
    write_csv(path, ["x", "psi"], [grid.x, res.psi.values.real])
    return checks, [path.name]


def _run_wkb(params, consts, out: Path):
    pot = _potential(params["potential"])
    grid = _grid(params["grid"])
    energy = params["energy"]
    profile = local_wkb_profile(pot, energy, grid, consts)
    residual = appendix_a_consistency(pot, energy, grid, consts,
                                      params.get("kinetic_fraction", 0.1))
    checks = [Check("force_recovery_max_rel_residual", residual, 1e-3)]
    path = out / "profile.csv"
    write_csv(path, ["x", "k", "delta_x", "validity"],
              [grid.x, profile.k_of_x, profile.delta_x_of_x,
               profile.validity_metric])
    artifacts = [path.name]
    if params.get("with_bohm_report"):
        rep = bohm_adiabaticity_report(pot, energy, grid, consts)
        bpath = out / "bohm_report.json"
        bpath.write_text(json.dumps(rep, indent=2, sort_keys=True) + "\n")
        artifacts.append(bpath.name)
    return checks, artifacts


def _run_dispersion(params, consts, out: Path):
    p = DispersionParams(k=params["k"], m0=params["m0"],
                         c=params.get("c", consts.c),
                         f=params.get("f", consts.f))
    res = dispersion_checks(p, consts)
    checks = [
        Check("kg_plane_wave_residual", res.kg_residual, 1e-12),
        Check("nr_plane_wave_residual", res.nr_residual, 1e-12),
    ]
    path = out / "dispersion.json"
    path.write_text(json.dumps(
        {"omega_kg": res.omega_kg, "omega_nr": res.omega_nr,
         "k": p.k, "m0": p.m0, "c": p.c, "f": p.f},
        indent=2, sort_keys=True) + "\n")
    return checks, [path.name]


def _run_bounds(params, consts, out: Path):
    rb = rate_bounds(params["energy"], params["theta"], consts)
    checks = [
        Check("comparator_ordering",
              float(rb.bremermann < rb.bound_h < rb.bekenstein), 1.0,
              comparator="=="),
        Check("per_interval_cap_bits",
              abs(rb.per_interval_cap - 1.0 / (2.0 * LN2)), 0.0),
    ]
    if abs(consts.f - consts.hbar / 2.0) < 1e-300:
        checks.append(Check("bound_f_equals_bound_h",
                            abs(rb.bound_f / rb.bound_h - 1.0), 1e-12))
    path = out / "bounds.json"
    payload = asdict(rb)
    payload["constants"] = {"f": consts.f, "hbar": consts.hbar,
                            "h": consts.h, "k_boltz": consts.k_boltz,
                            "c": consts.c, "mass": consts.mass}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return checks, [path.name]


def _run_regime(params, consts, out: Path):
    thresholds = tuple(params.get("thresholds", (1e-6, 0.1)))
    if "fixture" in params:
        name = params["fixture"]
        metrics = regime_fixture_metrics(name, consts)
        report = regime_classify(*metrics, thresholds=thresholds)
        expected = REGIME_EXPECTED[name]
        checks = [Check(f"label_is_{expected.value}",
                        float(report.label is expected), 1.0,
                        comparator="==")]
    else:
        m = params["metrics"]
        report = regime_classify(m["mean_abs_d_i"], m["max_step_d_i_q"],
                                 m["max_step_d_i_p"], thresholds=thresholds)
        checks = []
    path = out / "regime.json"
    path.write_text(json.dumps(
        {"label": report.label.value,
         "mean_abs_d_i": report.mean_abs_d_i,
         "max_step_d_i_q": report.max_step_d_i_q,
         "max_step_d_i_p": report.max_step_d_i_p,
         "tol_zero": report.tol_zero, "tol_small": report.tol_small},
        indent=2, sort_keys=True) + "\n")
    return checks, [path.name]


_RUNNERS = {
    "trajectory": _run_trajectory,
    "piston": _run_piston,
    "tise": _run_tise,
    "variational": _run_variational,
    "wkb": _run_wkb,
    "dispersion": _run_dispersion,
    "bounds": _run_bounds,
    "regime": _run_regime,
}


def run_scenario(path: str | Path, out_dir: str | Path | None = None) -> tuple[RunReport | None, int]:
    """Execute one scenario file; returns (report, exit_code)."""
    path = Path(path)
    try:
        cfg = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot parse {path}: {exc}", file=sys.stderr)
        return None, EXIT_SCHEMA
    try:
        validate_scenario(cfg)
    except ScenarioError as exc:
        print(f"error: invalid scenario {path}: {exc}", file=sys.stderr)
        return None, EXIT_SCHEMA

    if out_dir is not None:
        out = Path(out_dir)
    elif "out_dir" in cfg:
        out = Path(cfg["out_dir"])
    else:
        out = path.parent / (path.stem + "_out")
    out.mkdir(parents=True, exist_ok=True)
    consts = _constants(cfg)
    started = time.perf_counter()
    try:
        if cfg["kind"] == "suite":
            code = acceptance_suite(cfg["params"].get("filter"), out)
            return None, code
        checks, artifacts = _RUNNERS[cfg["kind"]](cfg["params"], consts, out)
    except Exception as exc:
        print(f"error: computation failed: {exc}", file=sys.stderr)
        return None, EXIT_COMPUTE
    report = RunReport(scenario=cfg, checks=checks, artifacts=artifacts,
                       elapsed_s=time.perf_counter() - started)
    (out / "report.json").write_text(
        json.dumps(report.deterministic_dict(), indent=2, sort_keys=True)
        + "\n")
    (out / "timing.json").write_text(
        json.dumps({"elapsed_s": report.elapsed_s}) + "\n")
    for c in report.checks:
        status = "pass" if c.passed else "FAIL"
        print(f"{status:4s}  {c.name}  value={c.value:.6g}  "
              f"{c.comparator} {c.tolerance:.6g}")
    return report, EXIT_OK if report.all_passed else EXIT_CHECK


def acceptance_suite(filter_tag: str | None = None,
                     out_dir: str | Path | None = None,
                     tighten: str | None = None) -> int:
    """Run the acceptance criteria and print one row per check."""
    selected = [(name, func) for name, tags, func in CRITERIA
                if filter_tag is None or filter_tag in tags]
    if not selected:
        print(f"error: no criteria tagged {filter_tag!r}", file=sys.stderr)
        return EXIT_SCHEMA

    threads = max(1, int(os.environ.get("CPDQ_LAB_THREADS", "1")))
    started = time.perf_counter()
    try:
        if threads > 1:
            # criteria are pure compute on independent fixtures; output
            # values cannot depend on scheduling
            with ThreadPoolExecutor(max_workers=threads) as pool:
                futures = [(name, pool.submit(func)) for name, func in selected]
                results = [(name, fut.result()) for name, fut in futures]
        else:
            results = [(name, func()) for name, func in selected]
    except Exception as exc:
        print(f"error: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    if tighten is not None:
        for name, checks in results:
            if name != tighten:
                continue
            for i, c in enumerate(checks):
                if c.comparator == "<=" and c.value > 0.0:
                    checks[i] = Check(name=c.name, value=c.value,
                                      tolerance=0.0)
                    break
    elapsed = time.perf_counter() - started

    width = max(len(c.name) for _, checks in results for c in checks)
    failures = 0
    print(f"{'criterion/check':{width}s}  {'measured':>13s}  "
          f"{'tolerance':>13s}  status")
    for crit_name, checks in results:
        for c in checks:
            ok = c.passed
            failures += 0 if ok else 1
            print(f"{c.name:{width}s}  {c.value:13.6g}  "
                  f"{c.comparator}{c.tolerance:12.6g}  "
                  f"{'pass' if ok else 'FAIL'}")
    print(f"# {len(results)} criteria, {failures} failing checks, "
          f"{elapsed:.1f}s")

    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        payload = {
            "version": __version__,
            "criteria": [{
                "name": crit_name,
                "checks": [{"name": c.name, "value": float(c.value),
                            "tolerance": float(c.tolerance),
                            "comparator": c.comparator, "pass": c.passed}
                           for c in checks],
            } for crit_name, checks in results],
        }
        (out / "acceptance_report.json").write_text(
            json.dumps(payload, indent=2, sort_keys=True) + "\n")
        (out / "timing.json").write_text(
            json.dumps({"elapsed_s": elapsed}) + "\n")
    return EXIT_OK if failures == 0 else EXIT_CHECK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="cpdq-lab",
        description="scenario runner for the uncertainty-product mechanics lab")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one JSON scenario")
    p_run.add_argument("config", help="path to scenario JSON")
    p_run.add_argument("--out", default=None, help="output directory")

    p_suite = sub.add_parser("suite", help="run the acceptance suite")
    p_suite.add_argument("--filter", default=None,
                         help="only criteria carrying this tag")
    p_suite.add_argument("--out", default=None, help="output directory")
    p_suite.add_argument("--tighten", default=None, help=argparse.SUPPRESS)

    sub.add_parser("schema", help="print the scenario config schema")

    args = parser.parse_args(argv)
    if args.command == "run":
        _, code = run_scenario(args.config, args.out)
        return code
    if args.command == "suite":
        return acceptance_suite(args.filter, args.out, args.tighten)
    print(json.dumps(SCHEMA, indent=2, sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
