"""
Scenario runner.

A scenario is a JSON document naming a frame, the axis angles, a path and a
grid. ``run`` executes frame -> Hamiltonian -> propagation -> condition checks
-> gate comparison and writes ``report.json`` plus CSV traces; ``sweep``
repeats a template over parameter ranges and writes ``summary.csv``.

Usage::

    holonomic run --config pi8_orange_slice.json --out out/
    holonomic sweep --template phi_sweep.json --range "path.phi=pi/16:31*pi/16:31" --out out/
"""

import argparse
import ast
import copy
import itertools
import json
import logging
import math
import operator
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

from . import engine, frames, gates, spherepaths
from .numkit import gate_distance, matrix_from_json, matrix_to_json, unitarity_defect

__all__ = [
    "ConfigError",
    "Tolerances",
    "Scenario",
    "RunReport",
    "parse_angle",
    "parse_range",
    "load_scenario",
    "execute",
    "run",
    "sweep",
    "main",
]

log = logging.getLogger(__name__)

OUT_ENV = "HOLONOMIC_OUT"
FRAME_KINDS = ("one_qubit", "two_qubit", "custom")
ORANGE_SLICE_LENGTH = 2.0 * math.pi


class ConfigError(ValueError):
    """Scenario could not be resolved."""


_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul,
           ast.Div: operator.truediv, ast.Pow: operator.pow}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
        return float(node.value)
    if isinstance(node, ast.Name) and node.id == "pi":
        return math.pi
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        return _BINOPS[type(node.op)](_eval_node(node.left), _eval_node(node.right))
    raise ConfigError(f"unsupported expression element {ast.dump(node)}")


def parse_angle(value):
    """
    Numbers pass through; strings are arithmetic in ``pi``, e.g. ``"3*pi/8"``.
    """
    if isinstance(value, (int, float)):
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"expected a number or expression, got {value!r}")
    text = value.strip().replace("π", "pi")
    try:
        return _eval_node(ast.parse(text, mode="eval"))
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse {value!r}") from exc


def parse_range(spec):
    """
    Parse ``key=values`` where values is ``start:stop:num`` (inclusive
    linspace) or a comma list. An empty value list is allowed.

    Returns
    -------
    (str, list of float)
    """
    if "=" not in spec:
        raise ConfigError(f"range {spec!r} must look like key=values")
    key, _, rhs = spec.partition("=")
    key, rhs = key.strip(), rhs.strip()
    if not key:
        raise ConfigError(f"range {spec!r} has no key")
    if not rhs:
        return key, []
    if ":" in rhs:
        parts = rhs.split(":")
        if len(parts) != 3:
            raise ConfigError(f"range {spec!r}: use start:stop:num")
        start, stop = parse_angle(parts[0]), parse_angle(parts[1])
        num = int(parse_angle(parts[2]))
        if num < 0:
            raise ConfigError("range count must be non-negative")
        return key, [float(x) for x in np.linspace(start, stop, num)]
    return key, [parse_angle(x) for x in rhs.split(",") if x.strip()]


@dataclass(frozen=True)
class Tolerances:
    gate: float = 1e-6
    residual: float = 1e-8
    unitarity: float = 1e-10

    def __post_init__(self):
        for name in ("gate", "residual", "unitarity"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"tolerance {name} must be positive")


@dataclass
class Scenario:
    """Resolved run description."""

    frame_kind: str
    theta: float
    varphi: float
    path: object
    grid_steps: int = engine.DEFAULT_STEPS
    tolerances: Tolerances = field(default_factory=Tolerances)
    outputs: tuple = ("report", "pulses", "trace")
    target_angle: float = None
    target_matrix: np.ndarray = None
    custom_frame: object = None
    name: str = "scenario"

    def __post_init__(self):
        if self.frame_kind not in FRAME_KINDS:
            raise ConfigError(f"frame must be one of {FRAME_KINDS}, got {self.frame_kind!r}")
        if int(self.grid_steps) != self.grid_steps or self.grid_steps < 16:
            raise ConfigError(f"grid_steps must be an integer >= 16, got {self.grid_steps}")
        if self.frame_kind == "custom" and self.custom_frame is None:
            raise ConfigError("custom frame scenarios need 'custom_frame'")
        if self.frame_kind != "custom" and self.path is None:
            raise ConfigError("built-in frames need a 'path'")

    def build_frame(self):
        if self.frame_kind == "custom":
            return self.custom_frame
        params = frames.FrameParams(self.theta, self.varphi, self.path)
        if self.frame_kind == "one_qubit":
            return frames.one_qubit_frame(params)
        return frames.two_qubit_frame(params)

    @classmethod
    def from_dict(cls, cfg, base_dir=None):
        cfg = dict(cfg)
        kind = cfg.get("frame", "one_qubit")
        path = None
        custom = None
        try:
            if "path" in cfg:
                path = spherepaths.path_from_json(_resolve_angles(cfg["path"]))
                if "schedule" in cfg:
                    sched = spherepaths.schedule_from_json(
                        _resolve_angles(cfg["schedule"]), path.duration)
                    path = spherepaths.reparametrize(path, sched)
            if kind == "custom":
                src = cfg.get("custom_frame")
                if isinstance(src, str):
                    p = Path(src)
                    if not p.is_absolute() and base_dir is not None:
                        p = Path(base_dir) / p
                    src = json.loads(p.read_text())
                if src is None:
                    raise ConfigError("custom frame scenarios need 'custom_frame'")
                custom = frames.frame_from_json(src)
        except (spherepaths.PathError, frames.FrameError, KeyError) as exc:
            raise ConfigError(f"cannot resolve scenario: {exc}") from exc
        tol = Tolerances(**{k: float(v) for k, v in cfg.get("tolerances", {}).items()})
        target = cfg.get("target", {})
        return cls(
            frame_kind=kind,
            theta=parse_angle(cfg.get("theta", 0.0)),
            varphi=parse_angle(cfg.get("varphi", 0.0)),
            path=path,
            grid_steps=int(cfg.get("grid_steps", engine.DEFAULT_STEPS)),
            tolerances=tol,
            outputs=tuple(cfg.get("outputs", ("report", "pulses", "trace"))),
            target_angle=(parse_angle(target["angle"]) if "angle" in target else None),
            target_matrix=(matrix_from_json(target["matrix"]) if "matrix" in target else None),
            custom_frame=custom,
            name=cfg.get("name", "scenario"),
        )


def _resolve_angles(obj):
    """Evaluate string expressions inside a path/schedule descriptor."""
    if isinstance(obj, dict):
        return {k: (v if k in ("kind", "family") else _resolve_angles(v)) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_resolve_angles(v) for v in obj]
    if isinstance(obj, str):
        return parse_angle(obj)
    return obj


def _bundled(name):
    root = resources.files("holonomic") / "configs"
    for candidate in (name, f"{name}.json"):
        res = root / candidate
        if res.is_file():
            return res
    return None


def load_config(path):
    """Read a scenario dict from a file, falling back to the bundled configs."""
    p = Path(path)
    if p.is_file():
        return json.loads(p.read_text()), p.parent
    res = _bundled(str(path))
    if res is None:
        raise ConfigError(f"config {path!s} not found")
    return json.loads(res.read_text()), None


def load_scenario(path):
    cfg, base = load_config(path)
    return Scenario.from_dict(cfg, base)


@dataclass
class RunReport:
    """Results of one scenario; see :meth:`to_json` for the on-disk layout."""

    name: str
    gate_matrix: np.ndarray
    target_matrix: np.ndarray
    target_distance: float
    path_length: float
    enclosed_angle: float
    time_ratio_vs_orange_slice: float
    residuals: dict
    checks: dict
    wall_time: float
    record: object = field(default=None, repr=False)
    pulses: object = field(default=None, repr=False)
    error: str = None

    @property
    def failed_stages(self):
        return [k for k, c in self.checks.items() if not c["passed"]]

    @property
    def passed(self):
        return self.error is None and not self.failed_stages

    def to_json(self):
        def num(x):
            return None if x is None else float(x)

        return {
            "name": self.name,
            "passed": self.passed,
            "failed_stages": self.failed_stages,
            "error": self.error,
            "gate_matrix": None if self.gate_matrix is None else matrix_to_json(self.gate_matrix),
            "target_matrix": (None if self.target_matrix is None
                              else matrix_to_json(self.target_matrix)),
            "target_distance": num(self.target_distance),
            "path_length": num(self.path_length),
            "enclosed_angle": num(self.enclosed_angle),
            "time_ratio_vs_orange_slice": num(self.time_ratio_vs_orange_slice),
            "residuals": {k: float(v) for k, v in self.residuals.items()},
            "checks": self.checks,
            "timing": {"wall_time": self.wall_time},
        }


def _check(value, tol):
    return {"value": float(value), "tol": float(tol),
            "passed": bool(np.isfinite(value) and value <= tol)}


def execute(scn):
    """
    Run the full pipeline for a resolved scenario.

    Tolerance breaches are recorded in ``checks``; they do not raise.
    """
    start = time.perf_counter()
    tol = scn.tolerances
    frame = scn.build_frame()
    grid = engine.TimeGrid(int(scn.grid_steps), float(frame.tau))
    checks = {}

    nodes = np.linspace(0.0, frame.tau, 33)
    ortho = max(frames.orthonormality_residual(frame, t) for t in nodes)
    checks["frame"] = _check(max(ortho, frames.cyclicity_residual(frame)), tol.residual)

    try:
        record = engine.propagate(frame, grid, unitarity_tol=np.inf)
    except frames.FrameError as exc:
        return RunReport(scn.name, None, None, None, None, None, None, {}, checks,
                         time.perf_counter() - start, error=f"frame: {exc}")
    unit = max(float(np.max(record.unitarity)),
               max(unitarity_defect(c) for c in (record.C[0], record.C[-1])))
    checks["unitarity"] = _check(unit, tol.unitarity)
    cyclic = engine.check_cyclic(record, frame)
    checks["cyclic"] = _check(cyclic, tol.residual)
    pt = engine.check_parallel_transport(record, frame)
    checks["parallel_transport"] = _check(pt, tol.residual)
    route = gate_distance(engine.block_restriction(record.U[-1], frame), record.C[-1])
    checks["route_consistency"] = _check(route, tol.gate)

    v = engine.computational_basis_change(frame)
    gate = v @ record.C[-1] @ v.conj().T

    length = angle = ratio = None
    if scn.path is not None:
        length = spherepaths.path_length(scn.path)
        ratio = length / ORANGE_SLICE_LENGTH
        if scn.path.is_closed:
            angle = spherepaths.enclosed_angle(scn.path)

    target = scn.target_matrix
    if target is None and scn.frame_kind != "custom":
        spec_angle = scn.target_angle if scn.target_angle is not None else angle
        spec = gates.GateSpec(scn.theta, scn.varphi, spec_angle)
        target = (gates.analytic_one_qubit(spec) if scn.frame_kind == "one_qubit"
                  else gates.analytic_two_qubit(spec))
    distance = None
    if target is not None:
        distance = gate_distance(gate, target)
        checks["gate_comparison"] = _check(distance, tol.gate)

    pulses = None
    if scn.frame_kind != "custom":
        pulses = gates.pulse_profile(frames.FrameParams(scn.theta, scn.varphi, scn.path), grid)

    residuals = {"cyclic": cyclic, "parallel_transport": pt, "unitarity": unit,
                 "route_consistency": route}
    return RunReport(scn.name, gate, target, distance, length, angle, ratio, residuals,
                     checks, time.perf_counter() - start, record=record, pulses=pulses)


def write_outputs(report, scn, out_dir):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "report.json").write_text(json.dumps(report.to_json(), indent=2) + "\n")
    if "pulses" in scn.outputs and report.pulses is not None:
        (out / "pulses.csv").write_text(report.pulses.to_csv())
    if "trace" in scn.outputs and scn.path is not None:
        (out / "trace_alpha_beta.csv").write_text(scn.path.trace_csv())
    if "evolution" in scn.outputs and report.record is not None:
        (out / "evolution.csv").write_text(report.record.to_csv(report.pulses))


def _apply_overrides(cfg, steps=None, tol_gate=None, tol_residual=None):
    cfg = copy.deepcopy(cfg)
    if steps is not None:
        cfg["grid_steps"] = steps
    tols = cfg.setdefault("tolerances", {})
    if tol_gate is not None:
        tols["gate"] = tol_gate
    if tol_residual is not None:
        tols["residual"] = tol_residual
    return cfg


def run(config, out_dir=None, base_dir=None):
    """
    Execute a scenario given as a dict, a :class:`Scenario` or a file path.

    Writes outputs when ``out_dir`` is given and returns the report.
    """
    if isinstance(config, Scenario):
        scn = config
    elif isinstance(config, dict):
        scn = Scenario.from_dict(config, base_dir)
    else:
        scn = load_scenario(config)
    report = execute(scn)
    if out_dir is not None:
        write_outputs(report, scn, out_dir)
    return report


def _set_key(cfg, dotted, value):
    node = cfg
    keys = dotted.split(".")
    for k in keys[:-1]:
        node = node.setdefault(k, {})
    node[keys[-1]] = value


def expand_sweep(template, ranges):
    """One config per point of the Cartesian product of ``ranges``."""
    keys = [k for k, _ in ranges]
    points = list(itertools.product(*[vals for _, vals in ranges])) if ranges else []
    configs = []
    for i, vals in enumerate(points):
        cfg = copy.deepcopy(template)
        for k, v in zip(keys, vals):
            _set_key(cfg, k, v)
        cfg["name"] = f"{template.get('name', 'sweep')}[{i}]"
        configs.append((dict(zip(keys, vals)), cfg))
    return configs


def _sweep_point(args):
    params, cfg, base_dir = args
    try:
        report = run(cfg, base_dir=base_dir)
        report.record = None  # keep inter-process payloads small
        return params, report, None
    except (ConfigError, spherepaths.PathError, frames.FrameError, ValueError) as exc:
        return params, None, str(exc)


def sweep(template, ranges, out_dir=None, jobs=1, base_dir=None):
    """
    Run ``template`` at every point of ``ranges``.

    Failures at individual points are recorded and the sweep continues.
    Results keep the order of the points regardless of ``jobs``.

    Returns
    -------
    list of (dict, RunReport or None, str or None)
    """
    tasks = [(p, c, base_dir) for p, c in expand_sweep(template, ranges)]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_point, tasks))
    else:
        results = [_sweep_point(t) for t in tasks]
    if out_dir is not None:
        _write_sweep(results, [k for k, _ in ranges], out_dir)
    return results


def _write_sweep(results, keys, out_dir):
    out = Path(out_dir)
    (out / "reports").mkdir(parents=True, exist_ok=True)
    cols = list(keys) + ["path_length", "enclosed_angle", "time_ratio", "target_distance",
                         "passed", "error"]
    lines = [",".join(cols)]
    for i, (params, report, err) in enumerate(results):
        row = [repr(float(params[k])) for k in keys]
        if report is not None:
            (out / "reports" / f"point_{i:04d}.json").write_text(
                json.dumps(report.to_json(), indent=2) + "\n")
            vals = (report.path_length, report.enclosed_angle,
                    report.time_ratio_vs_orange_slice, report.target_distance)
            row += ["" if v is None else repr(float(v)) for v in vals]
            row += [str(report.passed).lower(), report.error or ""]
        else:
            row += ["", "", "", "", "false", err.replace(",", ";")]
        lines.append(",".join(row))
    (out / "summary.csv").write_text("\n".join(lines) + "\n")


def _build_parser():
    parser = argparse.ArgumentParser(prog="holonomic", description=__doc__.split("\n\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default=os.environ.get(OUT_ENV, "holonomic-out"),
                       help=f"output directory (default: ${OUT_ENV} or ./holonomic-out)")
        p.add_argument("--steps", type=int, help="override grid_steps")
        p.add_argument("--tol-gate", type=float, help="override the gate tolerance")
        p.add_argument("--tol-residual", type=float, help="override the residual tolerance")

    p_run = sub.add_parser("run", help="run one scenario")
    p_run.add_argument("--config", required=True,
                       help="scenario JSON file or the name of a bundled config")
    common(p_run)

    p_sweep = sub.add_parser("sweep", help="run a template over parameter ranges")
    p_sweep.add_argument("--template", required=True)
    p_sweep.add_argument("--range", action="append", default=[], dest="ranges",
                         help="key=start:stop:num or key=v1,v2,...; repeat for a grid")
    p_sweep.add_argument("--jobs", type=int, default=1)
    common(p_sweep)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            cfg, base = load_config(args.config)
            cfg = _apply_overrides(cfg, args.steps, args.tol_gate, args.tol_residual)
            report = run(cfg, args.out, base_dir=base)
            for stage, c in report.checks.items():
                mark = "ok  " if c["passed"] else "FAIL"
                print(f"{mark} {stage:<20} {c['value']:.3e} (tol {c['tol']:.1e})")
            if report.error:
                print(f"FAIL {report.error}")
            return 0 if report.passed else 1
        template, base = load_config(args.template)
        template = _apply_overrides(template, args.steps, args.tol_gate, args.tol_residual)
        ranges = [parse_range(r) for r in args.ranges]
        results = sweep(template, ranges, args.out, jobs=args.jobs, base_dir=base)
        n_ok = sum(1 for _, r, e in results if r is not None and r.passed)
        print(f"{n_ok}/{len(results)} points passed; summary in {Path(args.out) / 'summary.csv'}")
        return 0 if n_ok == len(results) else 1
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
