"""Command-line scenario runner.

    vacprop force SCENARIO.json      propulsive force table
    vacprop friction SCENARIO.json   friction derivative, terminal velocity, time constant
    vacprop cool SCENARIO.json       cooling trajectory and terminal velocity
    vacprop validate [FILTER]        cross-path checks
    vacprop presets                  material presets

Exit codes: 0 success, 1 failed validation, 2 bad input, 3 numerical nonconvergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import dynamics, forces, validation
from .errors import DomainError, NonConvergenceError, UnsupportedVariantError
from .geometry import CUBATURE, LARGE_U_FIT, SMALL_U_FIT, JanusBall, Needle, Plate, SphericalShell
from .materials import PRESETS, BlackbodySurface, Constant, Drude, Lorentz, ThermalPair, preset
from .specfun import thermal_moment_diff
from .units import DEFAULT_UNITS, REFERENCE_UNITS, UnitSystem

SCHEMA_VERSION = 1
THREADS_ENV = "VACPROP_THREADS"

FORCE_COLUMNS = ("T_env_K", "T_body_K", "size_cm", "mode", "fhat", "prefactor_eV2", "force_eV2",
                 "force_N", "error_eV2", "error_N")
FRICTION_COLUMNS = ("T_env_K", "T_body_K", "size_cm", "force_N", "fprime_eV2", "fprime_N_s_per_m",
                    "terminal_velocity_m_per_s", "time_constant_s", "mass_kg")
COOL_COLUMNS = ("time_s", "T_body_K", "force_eV2", "force_N", "velocity_m_per_s",
                "terminal_velocity_m_per_s", "equilibration_time_s", "t_c_s", "pairing")
TABLES = {"force": FORCE_COLUMNS, "friction": FRICTION_COLUMNS, "cool": COOL_COLUMNS}

EXIT_CHECK_FAILED, EXIT_BAD_INPUT, EXIT_NONCONVERGENCE = 1, 2, 3


class ScenarioError(Exception):
    def __init__(self, message: str, line: int | None = None, path: str = ""):
        super().__init__(message)
        self.line = line
        self.path = path

    def format(self, filename: str) -> str:
        where = f"{filename}:{self.line}" if self.line else filename
        key = f" {self.path}:" if self.path else ""
        return f"{where}:{key} {self}"


# ---------------------------------------------------------------- scenario parsing


def _key_line(text: str, keys: tuple[str, ...]) -> int | None:
    """Line of the innermost key along ``keys`` that can be found in the raw text."""
    pos, line = 0, None
    for k in keys:
        if not isinstance(k, str):
            continue
        m = re.compile(r'"%s"\s*:' % re.escape(k)).search(text, pos)
        if not m:
            break
        pos = m.end()
        line = text.count("\n", 0, m.start()) + 1
    return line


@dataclass
class Sweep:
    variable: str
    values: list


@dataclass
class Scenario:
    geometry: dict
    material_A: object
    material_B: object
    T_env_K: float
    T_body_K: float
    units: UnitSystem
    mode: str | None = None
    chi_A: float | None = None
    sweep: Sweep | None = None
    output_path: str | None = None
    output_format: str = "csv"
    cooling_model: str = "debye"
    n_points: int = 400
    extra: dict = field(default_factory=dict)


class _Reader:
    def __init__(self, text: str):
        self.text = text

    def fail(self, path: tuple, message: str):
        raise ScenarioError(message, _key_line(self.text, path), ".".join(map(str, path)))

    def get(self, obj: dict, path: tuple, kind, required=True, default=None):
        key = path[-1]
        if key not in obj:
            if required:
                self.fail(path[:-1] or path, f"missing required key {key!r}")
            return default
        val = obj[key]
        if kind is float:
            if isinstance(val, bool) or not isinstance(val, (int, float)) or not np.isfinite(val):
                self.fail(path, "must be a finite number")
            return float(val)
        if kind is int:
            if isinstance(val, bool) or not isinstance(val, int):
                self.fail(path, "must be an integer")
            return val
        if not isinstance(val, kind):
            self.fail(path, f"must be of type {kind.__name__}")
        return val

    def positive(self, obj, path, required=True, default=None):
        v = self.get(obj, path, float, required, default)
        if v is not None and not v > 0:
            self.fail(path, "must be positive")
        return v


GEOMETRY_FIELDS = {
    "needle": {"a_cm", "b_cm", "radius_cm"},
    "shell": {"radius_cm", "thickness_cm"},
    "janus": {"radius_cm"},
    "plate": {"area_cm2", "t_A_cm", "t_B_cm"},
}
MODES = (None, "closed_form", CUBATURE, LARGE_U_FIT, SMALL_U_FIT, "quadrature", forces.MONTE_CARLO)
SWEEP_VARIABLES = ("T_body", "size_a", "time")


def _parse_material(r: _Reader, obj, path, units):
    if isinstance(obj, str):
        if obj == "blackbody":
            return BlackbodySurface()
        if obj not in PRESETS:
            r.fail(path, f"unknown preset {obj!r}; known: {sorted(PRESETS) + ['blackbody']}")
        return preset(obj, units)
    if not isinstance(obj, dict):
        r.fail(path, "must be a preset name or an object")
    model = r.get(obj, path + ("model",), str)
    try:
        if model == "constant":
            return Constant(r.get(obj, path + ("chi",), float))
        if model == "drude":
            return Drude(r.positive(obj, path + ("omega_p_eV",)), r.positive(obj, path + ("nu_eV",)))
        if model == "lorentz":
            return Lorentz(r.positive(obj, path + ("omega_pt_eV",)), r.positive(obj, path + ("omega0_eV",)),
                           r.positive(obj, path + ("gamma_eV",)))
        if model == "blackbody":
            return BlackbodySurface()
    except DomainError as exc:
        r.fail(path, str(exc))
    r.fail(path + ("model",), f"unknown model {model!r}")


def parse_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"invalid JSON: {exc.msg}", exc.lineno) from None
    r = _Reader(text)
    if not isinstance(doc, dict):
        raise ScenarioError("top level must be an object", 1)
    version = r.get(doc, ("schema_version",), int)
    if version != SCHEMA_VERSION:
        r.fail(("schema_version",), f"unsupported schema version {version}; expected {SCHEMA_VERSION}")
    known = {"schema_version", "units", "geometry", "material_A", "material_B", "thermal", "mode", "chi_A",
             "sweep", "output", "cooling_model", "n_points", "description"}
    for k in doc:
        if k not in known:
            r.fail((k,), "unknown key")
    unit_name = r.get(doc, ("units",), str, False, "exact")
    if unit_name not in ("exact", "reference"):
        r.fail(("units",), "must be 'exact' or 'reference'")
    units = DEFAULT_UNITS if unit_name == "exact" else REFERENCE_UNITS

    geom = r.get(doc, ("geometry",), dict)
    gtype = r.get(geom, ("geometry", "type"), str)
    if gtype not in GEOMETRY_FIELDS:
        r.fail(("geometry", "type"), f"must be one of {sorted(GEOMETRY_FIELDS)}")
    for k in geom:
        if k != "type" and k not in GEOMETRY_FIELDS[gtype]:
            r.fail(("geometry", k), f"unknown field for a {gtype}")
    for k in sorted(GEOMETRY_FIELDS[gtype]):
        required = not (gtype == "needle" and k == "b_cm")
        r.positive(geom, ("geometry", k), required)

    mat_a = _parse_material(r, r.get(doc, ("material_A",), (str, dict)), ("material_A",), units)
    mat_b = _parse_material(r, r.get(doc, ("material_B",), (str, dict)), ("material_B",), units)
    thermal = r.get(doc, ("thermal",), dict)
    T_env = r.get(thermal, ("thermal", "T_env_K"), float)
    T_body = r.get(thermal, ("thermal", "T_body_K"), float)
    for key, val in (("T_env_K", T_env), ("T_body_K", T_body)):
        if val < 0:
            r.fail(("thermal", key), "must be non-negative")
    if T_env == 0 and T_body == 0:
        r.fail(("thermal",), "at least one temperature must be positive")

    mode = r.get(doc, ("mode",), str, False)
    if mode not in MODES:
        r.fail(("mode",), f"must be one of {[m for m in MODES if m]}")
    chi_A = r.get(doc, ("chi_A",), float, False)

    sweep = None
    if "sweep" in doc:
        sw = r.get(doc, ("sweep",), dict)
        var = r.get(sw, ("sweep", "variable"), str)
        if var not in SWEEP_VARIABLES:
            r.fail(("sweep", "variable"), f"must be one of {list(SWEEP_VARIABLES)}")
        if var == "size_a" and gtype == "plate":
            r.fail(("sweep", "variable"), "plates have no size_a")
        start = r.get(sw, ("sweep", "start"), float)
        stop = r.get(sw, ("sweep", "stop"), float)
        n = r.get(sw, ("sweep", "points"), int)
        spacing = r.get(sw, ("sweep", "spacing"), str, False, "linear")
        if n < 1:
            r.fail(("sweep", "points"), "must be at least 1")
        if not stop >= start:
            r.fail(("sweep", "stop"), "sweep range must be ordered (stop >= start)")
        if var != "T_body" and not start > 0:
            r.fail(("sweep", "start"), "must be positive")
        if var == "T_body" and start < 0:
            r.fail(("sweep", "start"), "must be non-negative")
        if spacing not in ("linear", "log"):
            r.fail(("sweep", "spacing"), "must be 'linear' or 'log'")
        if spacing == "log" and not start > 0:
            r.fail(("sweep", "start"), "log spacing needs a positive start")
        vals = np.geomspace(start, stop, n) if spacing == "log" else np.linspace(start, stop, n)
        sweep = Sweep(var, [float(v) for v in vals])

    out_path, out_fmt = None, "csv"
    if "output" in doc:
        out = r.get(doc, ("output",), dict)
        out_path = r.get(out, ("output", "path"), str, False)
        out_fmt = r.get(out, ("output", "format"), str, False, "csv")
        if out_fmt not in ("csv", "json"):
            r.fail(("output", "format"), "must be 'csv' or 'json'")
    cooling = r.get(doc, ("cooling_model",), str, False, "debye")
    if cooling not in ("debye", "weak"):
        r.fail(("cooling_model",), "must be 'debye' or 'weak'")
    n_points = r.get(doc, ("n_points",), int, False, 400)
    if n_points < 2:
        r.fail(("n_points",), "must be at least 2")
    return Scenario(dict(geom), mat_a, mat_b, T_env, T_body, units, mode, chi_A, sweep, out_path, out_fmt,
                    cooling, n_points)


# ---------------------------------------------------------------- computations


def _model(m):
    return m.model if hasattr(m, "model") else m


def _substance(m, what):
    if not hasattr(m, "model"):
        raise UnsupportedVariantError(f"{what} must be a material preset with a density")
    return m


def build_geometry(sc: Scenario, size_a: float | None = None):
    g, u = sc.geometry, sc.units
    t = g["type"]
    if t == "needle":
        # without b_cm the needle is symmetric and b follows a through size sweeps
        a = size_a if size_a is not None else g["a_cm"]
        b = g.get("b_cm", a)
        return Needle.from_cm(a, b, g["radius_cm"], u)
    if t == "shell":
        return SphericalShell.from_cm(size_a if size_a is not None else g["radius_cm"], g["thickness_cm"], u)
    if t == "janus":
        return JanusBall.from_cm(size_a if size_a is not None else g["radius_cm"], u)
    return Plate.from_cm(g["area_cm2"], g["t_A_cm"], g["t_B_cm"], u)


def _size_cm(sc: Scenario, geom) -> float:
    u = sc.units
    if isinstance(geom, Needle):
        return u.to_cm(geom.a)
    if isinstance(geom, Plate):
        return sc.geometry["area_cm2"]
    return u.to_cm(geom.radius_a)


def _chi_A(sc: Scenario):
    if sc.chi_A is not None:
        return sc.chi_A
    m = _model(sc.material_A)
    if isinstance(m, Constant):
        return m.chi
    if isinstance(m, Lorentz):
        return m.static_chi
    raise UnsupportedVariantError("this path needs a real chi_A (constant or Lorentz material, or 'chi_A')")


def compute_force(sc: Scenario, geom, thermal: ThermalPair, seed: int) -> forces.ForceResult:
    A, B = _model(sc.material_A), _model(sc.material_B)
    units, mode = sc.units, sc.mode
    if mode == forces.MONTE_CARLO:
        return forces.force_monte_carlo(geom, A, B, thermal, sc.n_points, seed, units)
    if mode == "quadrature":
        return forces.force_generic(geom, A, B, thermal, units=units)
    if isinstance(geom, Plate):
        return forces.force_plate(geom, B, thermal, units)
    if isinstance(geom, Needle):
        if mode not in (None, "closed_form"):
            raise UnsupportedVariantError(f"needle mode {mode!r} is not available")
        return forces.force_needle(geom, _chi_A(sc), B, thermal, units)
    if isinstance(geom, SphericalShell):
        return forces.force_shell(geom, _chi_A(sc), B, thermal, mode or LARGE_U_FIT, units)
    if isinstance(A, Lorentz) and mode in (None, SMALL_U_FIT) and sc.chi_A is None:
        return forces.force_janus_dispersive(geom, A, B, thermal, units)
    return forces.force_janus(geom, _chi_A(sc), B, thermal, mode or SMALL_U_FIT, units)


def _sweep_points(sc: Scenario):
    if sc.sweep is None:
        return [(sc.T_body_K, None)]
    if sc.sweep.variable == "T_body":
        return [(v, None) for v in sc.sweep.values]
    if sc.sweep.variable == "size_a":
        return [(sc.T_body_K, v) for v in sc.sweep.values]
    raise UnsupportedVariantError("a time sweep only applies to the cool command")


def _thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ScenarioError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    return max(1, n)


def _parallel_map(fn, items):
    n = _thread_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))  # map preserves input order


def run_force(sc: Scenario, seed: int = 0) -> list[dict]:
    u = sc.units

    def one(point):
        T_body_K, size = point
        geom = build_geometry(sc, size)
        res = compute_force(sc, geom, ThermalPair.from_kelvin(sc.T_env_K, T_body_K, u), seed)
        return {
            "T_env_K": sc.T_env_K, "T_body_K": T_body_K, "size_cm": _size_cm(sc, geom), "mode": res.mode,
            "fhat": res.fhat, "prefactor_eV2": res.prefactor, "force_eV2": res.force_natural,
            "force_N": res.force_newtons, "error_eV2": res.quadrature_error,
            "error_N": u.to_newtons(res.quadrature_error),
        }

    return _parallel_map(one, _sweep_points(sc))


def _metal_half(sc: Scenario, geom):
    """(polarizability spectrum, mass) of the metal (B) half, which carries the loss."""
    sub = _substance(sc.material_B, "material_B")
    u = sc.units
    drude = sub.model
    if isinstance(geom, Needle):
        return None, dynamics.rod_mass(sub, geom.cross_section_C, geom.b, u)
    if isinstance(geom, JanusBall):
        vol = 2 * np.pi * geom.radius_a**3 / 3
        return dynamics.PolarizabilitySpectrum.from_volume(drude, vol), dynamics.half_ball_mass(sub, geom.radius_a, u)
    if isinstance(geom, SphericalShell):
        vol = 2 * np.pi * geom.radius_a**2 * geom.thickness_t
        return (dynamics.PolarizabilitySpectrum.from_volume(drude, vol),
                dynamics.half_shell_mass(sub, geom.radius_a, geom.thickness_t, u))
    raise UnsupportedVariantError("friction is not available for plates")


def run_friction(sc: Scenario, seed: int = 0) -> list[dict]:
    u = sc.units

    def one(point):
        T_body_K, size = point
        geom = build_geometry(sc, size)
        thermal = ThermalPair.from_kelvin(sc.T_env_K, T_body_K, u)
        res = compute_force(sc, geom, thermal, seed)
        spec, mass = _metal_half(sc, geom)
        if spec is None:
            fprime = dynamics.needle_friction_derivative(geom.cross_section_C, geom.b, sc.material_B.model,
                                                         thermal.T_env)
        else:
            fprime = dynamics.einstein_hopf_derivative(spec, thermal.T_env)
        vT = dynamics.terminal_velocity_friction(res, fprime)
        t0 = dynamics.friction_time_constant(mass, fprime)
        return {
            "T_env_K": sc.T_env_K, "T_body_K": T_body_K, "size_cm": _size_cm(sc, geom),
            "force_N": res.force_newtons, "fprime_eV2": fprime,
            "fprime_N_s_per_m": u.to_newtons(fprime) / u.to_m_per_s(1.0),
            "terminal_velocity_m_per_s": u.to_m_per_s(vT), "time_constant_s": u.to_seconds(t0),
            "mass_kg": u.to_kg(mass),
        }

    return _parallel_map(one, _sweep_points(sc))


def run_cool(sc: Scenario, seed: int = 0) -> list[dict]:
    u = sc.units
    if sc.sweep is not None and sc.sweep.variable != "time":
        raise UnsupportedVariantError("the cool command only sweeps time")
    geom = build_geometry(sc)
    if not isinstance(geom, (JanusBall, SphericalShell)):
        raise UnsupportedVariantError("cooling trajectories are available for Janus balls and shells")
    sub = _substance(sc.material_B, "material_B")
    model = dynamics.cooling_model(sc.cooling_model, sub, u)
    _, mass = _metal_half(sc, geom)
    T_env = u.temperature(sc.T_env_K)
    T_start = u.temperature(sc.T_body_K)
    if isinstance(geom, JanusBall):
        pref = forces.janus_prefactor(geom, _chi_A(sc), sub.model)
        n = 7
    else:
        pref = forces.shell_prefactor(geom, _chi_A(sc), sub.model)
        n = 3
    kind = "janus" if n == 7 else "shell"
    pairing = f"{kind}/{sc.cooling_model}"

    def force_fn(T_body):
        return pref * np.asarray(thermal_moment_diff(n, sub.model.nu, T_env, T_body))

    tr = dynamics.terminal_velocity_cooling(force_fn, model, mass, T_env, T_start, pairing=pairing)
    times, temps, fvals, vel = tr.times, tr.T_body, tr.force, tr.velocity
    if sc.sweep is not None:
        req = np.array([u.from_seconds(s) for s in sc.sweep.values])
        temps = np.interp(req, times, temps)
        vel = np.interp(req, times, vel)
        fvals = np.asarray(force_fn(temps))
        times = req
    common = {"terminal_velocity_m_per_s": u.to_m_per_s(tr.terminal_velocity),
              "equilibration_time_s": u.to_seconds(tr.equilibration_time), "t_c_s": u.to_seconds(tr.t_c),
              "pairing": pairing}
    return [{"time_s": u.to_seconds(t), "T_body_K": u.to_kelvin(T), "force_eV2": float(F),
             "force_N": u.to_newtons(float(F)), "velocity_m_per_s": u.to_m_per_s(v), **common}
            for t, T, F, v in zip(times, temps, fvals, vel)]


# ---------------------------------------------------------------- output


def _fmt(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def render(rows: list[dict], columns: tuple, fmt: str) -> str:
    if fmt == "json":
        clean = [{c: (float(r[c]) if isinstance(r[c], (float, np.floating)) else r[c]) for c in columns} for r in rows]
        return json.dumps(clean, indent=1) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def read_table(text: str, table: str, fmt: str = "csv") -> list[dict]:
    """Parse an emitted table and check it against the fixed column list."""
    columns = TABLES[table]
    if fmt == "json":
        rows = json.loads(text)
        if not isinstance(rows, list) or any(tuple(r) != columns for r in rows):
            raise ValueError(f"not a {table} table")
        return rows
    reader = csv.reader(io.StringIO(text))
    header = tuple(next(reader))
    if header != columns:
        raise ValueError(f"unexpected columns {header}")
    out = []
    for row in reader:
        rec = {}
        for c, v in zip(columns, row):
            try:
                rec[c] = float(v)
            except ValueError:
                rec[c] = v
        out.append(rec)
    return out


# ---------------------------------------------------------------- entry point


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="vacprop", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("force", "friction", "cool"):
        s = sub.add_parser(name)
        s.add_argument("scenario")
        s.add_argument("--seed", type=int, default=0, help="seed for sampled (monte_carlo) paths")
        s.add_argument("--output", help="overrides output.path; '-' for stdout")
        s.add_argument("--format", choices=("csv", "json"), help="overrides output.format")
    v = sub.add_parser("validate")
    v.add_argument("filter", nargs="?")
    v.add_argument("--format", choices=("text", "json"), default="text")
    sub.add_parser("presets")
    return p


RUNNERS = {"force": run_force, "friction": run_friction, "cool": run_cool}


def _validate(args, out) -> int:
    try:
        results = validation.run_checks(args.filter)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.format == "json":
        out.write(json.dumps([asdict(r) for r in results], indent=1) + "\n")
    else:
        for r in results:
            out.write(f"{'PASS' if r.passed else 'FAIL'} {r.suite:9s} {r.name}  err={r.error:.3g} "
                      f"tol={r.tolerance:.3g} ({r.measure})\n")
    return 0 if all(r.passed for r in results) else EXIT_CHECK_FAILED


def _presets(out) -> int:
    u = DEFAULT_UNITS
    for name in sorted(PRESETS):
        s = preset(name, u)
        out.write(f"{name}: {s.model}, density {s.mass_density_g_cm3} g/cm^3\n")
    out.write("blackbody: surface layer with Im chi * thickness = 1/(4 omega)\n")
    return 0


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = _build_parser().parse_args(argv)
    if args.command == "validate":
        return _validate(args, out)
    if args.command == "presets":
        return _presets(out)
    try:
        with open(args.scenario, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read {args.scenario}: {exc.strerror}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        sc = parse_scenario(text)
        rows = RUNNERS[args.command](sc, args.seed)
    except ScenarioError as exc:
        print(f"error: {exc.format(args.scenario)}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (UnsupportedVariantError, DomainError) as exc:
        print(f"error: {args.scenario}: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except NonConvergenceError as exc:
        where = f" at {exc.where!r}" if exc.where is not None else ""
        print(f"error: numerical nonconvergence{where}: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    fmt = args.format or sc.output_format
    text_out = render(rows, TABLES[args.command], fmt)
    path = args.output if args.output is not None else sc.output_path
    if path in (None, "-"):
        out.write(text_out)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text_out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
