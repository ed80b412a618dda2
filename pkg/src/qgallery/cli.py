"""Command-line harness: design, simulate, sensitivity, sweep, scenes.

Exit codes: 0 success; 2 validation (bad flags, scene, model domain);
3 numerical (bracketing/convergence/regime); 4 I/O.

Environment: QGALLERY_OUTDIR overrides the output directory,
QGALLERY_THREADS the sweep worker count.
"""

from __future__ import annotations

import argparse
import math
import os
import pathlib
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import yaml

from . import __version__, csvio, pipeline, propagation, qr, sensitivity
from .constants import E_CHARGE, G_EARTH
from .design import (
    DesignError,
    DesignInput,
    design_mu,
    design_wgs,
)
from .particles import CatalogError, get_particle
from .qr import QRModelError
from .scenario import (
    Scenario,
    ScenarioError,
    builtin_scene_names,
    load_builtin_scene,
    load_scenario,
    parse_scenario,
)
from .sensitivity import SensitivityError, SensitivityProblem
from .solver import SolverError

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_IO = 4

_DEFAULT_MATERIALS = {"H": "silica_h", "Hbar": "silica_hbar"}


class CLIError(ValueError):
    """Flag-level validation failure."""


def _outdir(args) -> pathlib.Path:
    path = pathlib.Path(
        args.outdir or os.environ.get("QGALLERY_OUTDIR", ".")
    )
    path.mkdir(parents=True, exist_ok=True)
    return path


def _load_scene(ref: str) -> Scenario:
    if ref.endswith((".yaml", ".yml")) or "/" in ref or os.path.exists(ref):
        return load_scenario(ref)
    return load_builtin_scene(ref)


def _print_report(items: dict, stream=None) -> None:
    stream = stream or sys.stdout
    for key in sorted(items):
        value = items[key]
        if isinstance(value, float):
            stream.write(f"{key}={value:.6e}\n")
        else:
            stream.write(f"{key}={value}\n")


# -- design ------------------------------------------------------------------


def cmd_design(args) -> int:
    particle = get_particle(args.particle)
    if args.particle == "Mu":
        result = design_mu(
            v=args.velocity if args.velocity else 2.2e3,
            a=args.acceleration if args.acceleration else 1.0e6,
        )
        report = {
            "particle": args.particle,
            "length_m": result.length,
            "tau_wgs_s": result.tau_wgs,
            "beta": result.beta,
            "acceleration_m_s2": result.a,
            "radius_m": result.radius,
            "state_size_m": result.l,
            "gamma_material": result.gamma_material,
            "shift_ratio_g_over_a": result.shift_ratio,
            "dh_per_state_m": result.dh_per_state,
            "absorber_selection": result.absorber_selection,
        }
        _print_report(report)
        return EXIT_OK

    model = None
    e_lim = None
    if args.e_lim_ev is not None:
        e_lim = args.e_lim_ev * E_CHARGE
    else:
        material = args.material or _DEFAULT_MATERIALS.get(args.particle)
        if material:
            model = qr.load_builtin_table(material, particle.mass)
    inp = DesignInput(
        particle=particle,
        qr=model,
        beta=args.beta,
        gamma=args.gamma,
        length=args.length,
        velocity=args.velocity,
        radius=args.radius,
        e_lim=e_lim,
    )
    result = design_wgs(inp)
    report = {
        "particle": args.particle,
        "e_lim_ev": result.e_lim / E_CHARGE,
        "e_wgs_ev": result.e_wgs / E_CHARGE,
        "tau_s": result.tau,
        "acceleration_m_s2": result.a,
        "velocity_m_s": result.v,
        "radius_m": result.radius,
        "state_size_m": result.l,
        "dh_suggested_m": result.dh_suggested,
        "shift_ratio_g_over_a": result.shift_ratio,
        "t_obs_s": result.t_obs,
        "n_bounces_check": result.n_bounces_check,
    }
    _print_report(report)
    if args.out:
        csvio.write_report(args.out, report)
    return EXIT_OK


# -- simulate ----------------------------------------------------------------


def _write_variant(outdir: pathlib.Path, scn: Scenario, res) -> list:
    written = []
    if res.pattern is not None:
        path = outdir / f"{res.label}.csv"
        csvio.write_pattern(path, res.pattern, scn.scene_hash)
        written.append(path)
    if res.surface_current is not None:
        path = outdir / f"{res.label}-current.csv"
        csvio.write_pattern(path, res.surface_current, scn.scene_hash)
        written.append(path)
    return written


def _apply_scene_overrides(scn: Scenario, args) -> Scenario:
    if getattr(args, "orientation", None) is None:
        return scn
    raw = dict(scn.raw)
    raw["mirror"] = dict(raw.get("mirror", {}))
    raw["mirror"]["orientation"] = args.orientation
    return parse_scenario(
        yaml.safe_dump(raw, sort_keys=True), source_path=scn.source_path
    )


def cmd_simulate(args) -> int:
    scn = _apply_scene_overrides(_load_scene(args.scene), args)
    outdir = _outdir(args)
    written = []
    for res in pipeline.run_scenario(scn):
        written.extend(_write_variant(outdir, scn, res))
    for path in written:
        print(path)
    return EXIT_OK


# -- sensitivity -------------------------------------------------------------


def _pattern_generator(scn: Scenario, variant):
    """Detector pattern as a function of the bound-state acceleration.

    The solver grid is frozen at the nominal acceleration and every
    pattern is resampled onto the first call's detector axis, so the
    finite-difference derivative sees a smooth dependence on a rather
    than grid-rebuild jumps."""
    import dataclasses

    from .solver import grid_for

    grid = grid_for(
        scn.particle.mass,
        variant.acceleration,
        variant.n_states + 5,
        dh=variant.dh,
    )
    ref: dict = {}

    a_nominal = variant.acceleration

    def gen(a: float):
        var = dataclasses.replace(variant, acceleration=a)
        states, coeffs = pipeline.solve_variant(scn, var, grid=grid)
        # the free-fall acceleration during flight scales with the probed
        # acceleration (one and the same field in a g/G measurement)
        fall = scn.fall_acceleration * (a / a_nominal)
        pat = pipeline.detector_pattern(scn, var, states, coeffs, fall_acceleration=fall)
        if "axis" not in ref:
            ref["axis"] = pat.axis
            ref["v"] = pat.v
            return pat
        vals = np.vstack(
            [
                np.interp(ref["axis"], pat.axis, row, left=0.0, right=0.0)
                for row in pat.values
            ]
        )
        return propagation.InterferencePattern(
            axis=ref["axis"],
            v=ref["v"],
            values=vals,
            axis_name=pat.axis_name,
            metadata=pat.metadata,
        )

    return gen


def cmd_sensitivity(args) -> int:
    scn = _load_scene(args.scene)
    variants = scn.variants()
    variant = variants[0]
    a0 = variant.acceleration
    delta = args.delta_a if args.delta_a else args.delta_a_rel * a0
    problem = SensitivityProblem(
        generator=_pattern_generator(scn, variant),
        nominal_a=a0,
        n_events=args.n_events,
        delta_a=delta,
        nuisance_note="velocity spectrum and state populations held fixed",
    )
    report = {
        "scene": scn.name,
        "scene_hash": scn.scene_hash,
        "nominal_a_m_s2": a0,
        "delta_a_m_s2": delta,
        "n_events": args.n_events,
    }
    if args.e_field_v_m is not None:
        charge = (args.charge_e if args.charge_e is not None else 1.0) * E_CHARGE
        res = sensitivity.shift_experiment(
            problem,
            0.0,
            e_field=args.e_field_v_m,
            charge=charge,
            mass=scn.particle.mass,
        )
        fi = res.fisher
        sigma_q = (
            res.sigma_a * scn.particle.mass / args.e_field_v_m / E_CHARGE
        )
        report.update(
            {
                "mode": "charge",
                "e_field_v_m": args.e_field_v_m,
                "information_per_event": fi.information,
                "excluded_mass": fi.excluded_mass,
                "sigma_a_m_s2": res.sigma_a,
                "sigma_q_e": sigma_q,
                "caveat": fi.metadata["caveat"],
            }
        )
    elif args.a_extra is not None:
        res = sensitivity.shift_experiment(problem, args.a_extra)
        fi = res.fisher
        report.update(
            {
                "mode": "shift",
                "a_extra_m_s2": args.a_extra,
                "information_per_event": fi.information,
                "excluded_mass": fi.excluded_mass,
                "sigma_a_m_s2": res.sigma_a,
                "sigma_a_over_a_extra": res.sigma_a / abs(args.a_extra)
                if args.a_extra
                else float("inf"),
                "detectability_sigmas": res.detectability,
                "caveat": fi.metadata["caveat"],
            }
        )
    else:
        fi = sensitivity.fisher_information(problem)
        sigma = sensitivity.cramer_rao(fi.information, args.n_events)
        report.update(
            {
                "mode": "absolute",
                "information_per_event": fi.information,
                "excluded_mass": fi.excluded_mass,
                "sigma_a_m_s2": sigma,
                "sigma_a_over_a": sigma / a0,
                "caveat": fi.metadata["caveat"],
            }
        )
    _print_report(report)
    outdir = _outdir(args)
    csvio.write_report(outdir / f"{scn.name}-sensitivity.txt", report)

    # dP/da map alongside the report
    gen = problem.generator
    pat0 = gen(a0)
    pat_p = gen(a0 + delta)
    pat_m = gen(a0 - delta)
    dpda = (pat_p.values - pat_m.values) / (2.0 * delta)
    dpda_pattern = propagation.InterferencePattern(
        axis=pat0.axis,
        v=pat0.v,
        values=np.abs(dpda),
        axis_name=pat0.axis_name,
        metadata={"derivative": "abs(dF/da)", "delta_a_m_s2": delta},
    )
    csvio.write_pattern(
        outdir / f"{scn.name}-dpda.csv", dpda_pattern, scn.scene_hash
    )
    return EXIT_OK


# -- sweep -------------------------------------------------------------------

_SWEEPABLE = {
    "absorber.slit_height_m",
    "detector.position_resolution_m",
    "detector.time_resolution_s",
    "detector.distance_m",
    "mirror.length_m",
}


def _scene_with(scn: Scenario, param: str, value: float) -> Scenario:
    section, key = param.split(".", 1)
    raw = dict(scn.raw)
    raw[section] = dict(raw.get(section, {}))
    raw[section][key] = float(value)
    return parse_scenario(
        yaml.safe_dump(raw, sort_keys=True), source_path=scn.source_path
    )


def _parse_values(spec: str) -> list:
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise CLIError("range must be start:stop:count")
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        if count < 2:
            raise CLIError("range count must be >= 2")
        return list(np.linspace(start, stop, count))
    return [float(tok) for tok in spec.split(",") if tok]


def _sweep_point(scn: Scenario, param: str, value: float) -> dict:
    scene = _scene_with(scn, param, value)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        res = pipeline.run_variant(scene, scene.variants()[0])
    pat = res.pattern if res.pattern is not None else res.surface_current
    return {
        "value": value,
        "contrast": pipeline.fringe_contrast(pat),
        "total_flux": pat.integral(),
        "n_populated": sum(1 for s in res.states if s.populated),
    }


def cmd_sweep(args) -> int:
    scn = _load_scene(args.scene)
    if args.param not in _SWEEPABLE:
        raise CLIError(
            f"unsupported sweep parameter {args.param!r}; "
            f"choose from {sorted(_SWEEPABLE)}"
        )
    values = _parse_values(args.values)
    outdir = _outdir(args)
    out_path = outdir / f"{scn.name}-sweep.csv"

    done = set()
    if out_path.exists() and not args.fresh:
        with open(out_path) as fh:
            for line in fh:
                if line.startswith("#") or line.startswith("value"):
                    continue
                done.add(line.split(",")[0])
    todo = [v for v in values if f"{v:.12e}" not in done]

    threads = int(os.environ.get("QGALLERY_THREADS", "0")) or min(
        8, os.cpu_count() or 1
    )
    rows = []
    with ThreadPoolExecutor(max_workers=threads) as pool:
        for row in pool.map(lambda v: _sweep_point(scn, args.param, v), todo):
            rows.append(row)

    new_file = args.fresh or not out_path.exists()
    mode = "w" if new_file else "a"
    with open(out_path, mode, newline="\n") as fh:
        if new_file:
            fh.write(f"# scene_hash = {scn.scene_hash}\n")
            fh.write(f"# param = {args.param}\n")
            fh.write("value,contrast,total_flux,n_populated\n")
        for row in sorted(rows, key=lambda r: r["value"]):
            fh.write(
                f"{row['value']:.12e},{row['contrast']:.12e},"
                f"{row['total_flux']:.12e},{row['n_populated']}\n"
            )
    print(out_path)
    return EXIT_OK


def cmd_scenes(_args) -> int:
    for name in builtin_scene_names():
        scn = load_builtin_scene(name)
        print(f"{name}: particle={scn.particle_name} variants={len(scn.variants())}")
    return EXIT_OK


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgallery",
        description="Gravitational and whispering-gallery quantum state toolkit",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="close a WGS/GQS design chain")
    p.add_argument("--particle", required=True)
    p.add_argument("--beta", type=float, default=1.0, help="bounce budget")
    p.add_argument("--gamma", type=float, default=3.0, help="state budget 3+N")
    p.add_argument("--L", "--length", dest="length", type=float)
    p.add_argument("--v", "--velocity", dest="velocity", type=float)
    p.add_argument("--radius", type=float)
    p.add_argument("--acceleration", type=float, help="Mu chain target a")
    p.add_argument("--e-lim-ev", type=float, help="override E_lim [eV]")
    p.add_argument("--material", choices=["silica_h", "silica_hbar"])
    p.add_argument("--out", help="also write the report to this path")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate", help="run a scene to CSV patterns")
    p.add_argument("--scene", required=True, help="shipped scene name or path")
    p.add_argument("--outdir")
    p.add_argument("--orientation", choices=["up", "down"])
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sensitivity", help="Cramér-Rao bound for a scene")
    p.add_argument("--scene", required=True)
    p.add_argument("--n-events", type=int, required=True)
    p.add_argument("--delta-a", type=float, help="absolute FD step [m/s^2]")
    p.add_argument(
        "--delta-a-rel", type=float, default=1e-4, help="relative FD step"
    )
    p.add_argument("--a-extra", type=float, help="shift-mode extra acceleration")
    p.add_argument("--e-field-v-m", type=float, help="charge mode: field [V/m]")
    p.add_argument("--charge-e", type=float, help="charge mode: q in units of e")
    p.add_argument("--outdir")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("sweep", help="sweep one scene parameter")
    p.add_argument("--scene", required=True)
    p.add_argument("--param", required=True)
    p.add_argument(
        "--values", required=True, help="start:stop:count or comma list"
    )
    p.add_argument("--fresh", action="store_true", help="ignore the journal")
    p.add_argument("--outdir")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("scenes", help="list shipped scenes")
    p.set_defaults(func=cmd_scenes)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        ScenarioError,
        DesignError,
        QRModelError,
        CLIError,
        CatalogError,
        KeyError,
    ) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SolverError, SensitivityError, propagation.PropagationError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
