"""Command-line front end.

Subcommands ``trajectory``, ``verify``, ``transition`` and ``contour`` take
flags or a ``--config`` file (INI layout: a ``[common]`` section plus one
section per subcommand; flags win).  Data goes to CSV or JSON with full
round-trip precision; nothing time-dependent is written.

Exit status: 0 success, 1 a requested check failed, 2 invalid
configuration, 3 numerical failure (pole, node, non-convergence).
"""
import argparse
import configparser
import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
import io
import json
import math
import os
import sys

import numpy as np

from . import __version__, kernel
from .contour import action_integral, oracle_for, period_integral
from .dynamics import integrate_trajectory, integrate_transition
from .eigensystem import (
    BASE,
    Eigenstate,
    FamilyParams,
    eigenvalue,
    equilibria,
    intrinsic_energy,
    momentum,
    nodes,
    schrodinger_residual,
    wavefunction,
)
from .errors import CQHMError, TransitionPole
from .invariance import CatalogEntry, lookup, verify_invariance

OUTPUT_DIR_ENV = "CQHM_OUTPUT_DIR"
COMMANDS = ("trajectory", "verify", "transition", "contour")

CSV_TRAJECTORY = ["series", "t", "re_x", "im_x", "re_p", "im_p", "re_E", "im_E"]
CSV_TRANSITION = ["t", "re_x", "im_x", "re_E", "im_E"]

BOUNDS = {
    "trajectory_deviation": 1e-7,
    "wavefunction_deviation": 1e-12,
    "energy_flatness": 1e-9,
    "residual_nullity": 1e-9,
    "action_vs_residue": 1e-6,
    "period_vs_residue": 1e-4,
    "period_vs_dynamics": 1e-4,
    "period_imaginary": 1e-8,
    "action_quantization": 1e-6,
}
SWEEP_POINTS = 200
SWEEP_RADIUS = 2.0
NODE_EXCLUSION = 0.1


class ConfigError(ValueError):
    pass


def parse_complex(text):
    """Parse ``re,im`` (or a bare real) into a complex number."""
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise ConfigError(f"expected a complex value as 're,im', got {text!r}")


@dataclass
class RunConfig:
    command: str
    member: str | None = "H1"
    a: complex | None = None
    b: complex | None = None
    c: complex | None = None
    n: int = 0
    initial_conditions: list = field(default_factory=list)
    t_start: float | None = None
    t_end: float | None = None
    tolerance: float = 1e-10
    output_path: str | None = None
    format: str = "csv"
    seed: int = 0
    workers: int = 1

    def validate(self):
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not 1e-14 <= self.tolerance <= 1e-2:
            raise ConfigError(f"tolerance must lie in [1e-14, 1e-2], got {self.tolerance!r}")
        if self.n < 0:
            raise ConfigError(f"n must be non-negative, got {self.n}")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.format!r}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.explicit and self.a == 0:
            raise ConfigError("a must be nonzero")
        if not self.explicit:
            try:
                lookup(self.member)
            except KeyError as exc:
                raise ConfigError(str(exc.args[0])) from None
        for v in (self.t_start, self.t_end):
            if v is not None and not math.isfinite(v):
                raise ConfigError("time bounds must be finite")
        return self

    @property
    def explicit(self):
        return any(v is not None for v in (self.a, self.b, self.c))

    def entry(self):
        if self.explicit:
            params = FamilyParams(
                1.0 if self.a is None else self.a,
                0.0 if self.b is None else self.b,
                0.0 if self.c is None else self.c,
            )
            return CatalogEntry("custom", params, "user-supplied")
        return lookup(self.member)

    def echo(self):
        """Config as written into data files; where and how parallel a run is does not change results."""
        d = asdict(self)
        del d["output_path"], d["workers"]
        for key in ("a", "b", "c"):
            if d[key] is not None:
                d[key] = [d[key].real, d[key].imag]
        d["initial_conditions"] = [[z.real, z.imag] for z in self.initial_conditions]
        return d


def _config_file_values(path, command):
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise ConfigError(f"cannot read config file {path!r}")
    values = {}
    for section in ("common", command):
        if parser.has_section(section):
            values.update(parser.items(section))
    return values


def _coerce(key, raw):
    key = key.replace("-", "_")
    try:
        if key in ("a", "b", "c"):
            return key, parse_complex(raw)
        if key in ("x0", "initial_conditions"):
            return "initial_conditions", [parse_complex(p) for p in str(raw).split(";") if p.strip()]
        if key in ("n", "seed", "workers"):
            return key, int(raw)
        if key in ("t_start", "t_end", "tolerance"):
            return key, float(raw)
        if key in ("output", "output_path"):
            return "output_path", str(raw)
        if key in ("member", "format"):
            return key, str(raw).strip()
    except ValueError:
        raise ConfigError(f"invalid value for {key}: {raw!r}") from None
    raise ConfigError(f"unknown configuration key {key!r}")


def build_config(args):
    """Merge config-file values with flags (flags win) into a RunConfig."""
    values = {}
    if args.config:
        for key, raw in _config_file_values(args.config, args.command).items():
            k, v = _coerce(key, raw)
            values[k] = v
    flag_map = {
        "member": args.member,
        "a": args.a,
        "b": args.b,
        "c": args.c,
        "n": args.n,
        "t_start": args.t_start,
        "t_end": args.t_end,
        "tolerance": args.tolerance,
        "output_path": args.output,
        "format": args.format,
        "seed": args.seed,
        "workers": args.workers,
    }
    for key, val in flag_map.items():
        if val is not None:
            values[key] = parse_complex(val) if key in ("a", "b", "c") else val
    if args.x0:
        values["initial_conditions"] = [parse_complex(s) for s in args.x0]

    cfg = RunConfig(command=args.command, **values)
    if cfg.command in ("verify", "contour") and "format" not in values:
        cfg.format = "json"
    if not cfg.initial_conditions:
        cfg.initial_conditions = [complex(1.0 if cfg.n == 0 or cfg.command == "transition" else 3.0)]
    if cfg.command == "transition":
        if cfg.t_start is None:
            cfg.t_start = -math.pi
        if cfg.t_end is None:
            cfg.t_end = 1.0 + math.pi
        if not cfg.t_end > cfg.t_start:
            raise ConfigError("t-start must be less than t-end")
    elif cfg.t_end is None:
        cfg.t_end = 10.0
    elif not cfg.t_end > 0:
        raise ConfigError("t-end must be positive")
    return cfg.validate()


# --- formatting -------------------------------------------------------------

def _num(x):
    return format(float(x), ".17g")


def _pair(z):
    z = complex(z)
    return [z.real, z.imag]


def _metadata(cfg):
    return {
        "package": "cqhm",
        "version": __version__,
        "backend": kernel.BACKEND,
        "reproducibility": {"seed": cfg.seed, "deterministic": True},
    }


def _resolve_output(path):
    if path is None:
        return None
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir and not os.path.isabs(path):
        path = os.path.join(out_dir, path)
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    return path


def _emit(text, path):
    path = _resolve_output(path)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([r if isinstance(r, (int, str)) else _num(r) for r in row])
    return buf.getvalue()


def _json_text(obj):
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def _check(value, bound):
    return {"value": float(value), "bound": bound, "passed": bool(float(value) <= bound)}


# --- commands ---------------------------------------------------------------

def _trajectory_series(job):
    params, n, x0, t_end, tol = job
    state = Eigenstate(params, n)
    traj = integrate_trajectory(state, x0, t_end, tol)
    p = np.asarray(momentum(state, traj.x))
    e = np.asarray(intrinsic_energy(state, traj.x).total)
    return traj.metadata(), traj.t, traj.x, p, e


def _run_jobs(fn, jobs, workers):
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(job) for job in jobs]


def cmd_trajectory(cfg):
    entry = cfg.entry()
    jobs = [(entry.params, cfg.n, x0, cfg.t_end, cfg.tolerance) for x0 in cfg.initial_conditions]
    results = _run_jobs(_trajectory_series, jobs, cfg.workers)
    if cfg.format == "csv":
        rows = []
        for i, (_, t, x, p, e) in enumerate(results):
            for k in range(len(t)):
                rows.append((i, t[k], x[k].real, x[k].imag, p[k].real, p[k].imag, e[k].real, e[k].imag))
        _emit(_csv_text(CSV_TRAJECTORY, rows), cfg.output_path)
    else:
        meta = _metadata(cfg)
        meta["member"] = entry.name
        meta["eigenvalue"] = _pair(eigenvalue(Eigenstate(entry.params, cfg.n)))
        meta["series"] = []
        samples = []
        for i, (m, t, x, p, e) in enumerate(results):
            m = dict(m, series=i, x0=_pair(cfg.initial_conditions[i]))
            meta["series"].append(m)
            samples.extend(
                {"series": i, "t": float(t[k]), "x": _pair(x[k]), "p": _pair(p[k]), "E": _pair(e[k])}
                for k in range(len(t))
            )
        _emit(_json_text({"config": cfg.echo(), "metadata": meta, "samples": samples}), cfg.output_path)
    return 0


def sweep_points(state, rng, count=SWEEP_POINTS, radius=SWEEP_RADIUS, exclusion=NODE_EXCLUSION):
    """Random points in the disc |x| <= radius away from wavefunction nodes."""
    node_list = np.array(nodes(state), dtype=complex)
    out = []
    while len(out) < count:
        r = radius * math.sqrt(rng.uniform())
        z = r * complex(math.cos(th := rng.uniform(0, 2 * math.pi)), math.sin(th))
        if node_list.size and np.min(np.abs(z - node_list)) * abs(state.a) < exclusion:
            continue
        out.append(z)
    return np.array(out)


def property_sweep(state, rng):
    xs = sweep_points(state, rng)
    target = eigenvalue(state)
    energy_dev = np.abs(np.asarray(intrinsic_energy(state, xs).total) - target)
    residual = np.abs(schrodinger_residual(state, xs)) / np.maximum(1.0, np.abs(wavefunction(state, xs)))
    return xs, energy_dev, residual


def cmd_verify(cfg):
    entry = cfg.entry()
    x1 = cfg.initial_conditions[0]
    base = integrate_trajectory(Eigenstate(BASE, cfg.n), x1, cfg.t_end, cfg.tolerance)
    t_cmp = base.period if base.closed else cfg.t_end
    report = verify_invariance(entry, cfg.n, x1, t_cmp, cfg.tolerance)
    state = Eigenstate(entry.params, cfg.n)
    xs, energy_dev, residual = property_sweep(state, np.random.default_rng(cfg.seed))
    checks = {
        "trajectory_deviation": _check(report.max_trajectory_deviation, BOUNDS["trajectory_deviation"]),
        "wavefunction_deviation": _check(report.max_wavefunction_deviation, BOUNDS["wavefunction_deviation"]),
        "energy_flatness": _check(energy_dev.max(), BOUNDS["energy_flatness"]),
        "residual_nullity": _check(residual.max(), BOUNDS["residual_nullity"]),
        "eigenvalue_shift": {"value": _pair(report.eigenvalue_shift), "expected": _pair(entry.params.c),
                             "passed": report.eigenvalue_shift_checked},
    }
    passed = all(c["passed"] for c in checks.values())
    meta = _metadata(cfg)
    meta.update(
        member=entry.name,
        symmetry_class=entry.symmetry_class,
        equivalent_mass=_pair(entry.params.equivalent_mass),
        eigenvalue=_pair(eigenvalue(state)),
        equilibria=[_pair(z) for z in equilibria(state)],
        compared_over=t_cmp,
        base_closed=base.closed,
    )
    out = {
        "config": cfg.echo(),
        "metadata": meta,
        "report": report.as_dict(),
        "checks": checks,
        "passed": passed,
        "samples": [
            {"x": _pair(z), "energy_deviation": float(e), "residual": float(r)}
            for z, e, r in zip(xs, energy_dev, residual)
        ],
    }
    _emit(_json_text(out), cfg.output_path)
    if not passed:
        failed = [k for k, c in checks.items() if not c["passed"]]
        print(f"verify: checks failed: {', '.join(failed)}", file=sys.stderr)
    return 0 if passed else 1


def cmd_transition(cfg):
    x0 = cfg.initial_conditions[0]
    try:
        samples = integrate_transition(x0, cfg.t_start, cfg.t_end, cfg.tolerance)
    except TransitionPole as exc:
        when = "unknown" if exc.t is None else format(float(exc.t), ".17g")
        print(f"transition: pole of the transition field at t={when}: {exc}", file=sys.stderr)
        return 3
    if cfg.format == "csv":
        rows = [(s.t, s.x.real, s.x.imag, s.energy.real, s.energy.imag) for s in samples]
        _emit(_csv_text(CSV_TRANSITION, rows), cfg.output_path)
    else:
        out = {
            "config": cfg.echo(),
            "metadata": _metadata(cfg),
            "samples": [{"t": s.t, "x": _pair(s.x), "E": _pair(s.energy)} for s in samples],
        }
        _emit(_json_text(out), cfg.output_path)
    return 0


def _contour_series(job):
    params, n, x0, t_end, tol = job
    state = Eigenstate(params, n)
    traj = integrate_trajectory(state, x0, t_end, tol)
    if not traj.closed:
        return {"x0": _pair(x0), "closed": False, "passed": False}
    action = action_integral(traj, state)
    period = period_integral(traj, state)
    action_ref = oracle_for(traj, state, "action")
    period_ref = oracle_for(traj, state, "period")
    quanta = action.value.real / (2.0 * math.pi)
    checks = {
        "action_vs_residue": _check(abs(action.value - action_ref.value), BOUNDS["action_vs_residue"]),
        "period_vs_residue": _check(abs(period.value - period_ref.value), BOUNDS["period_vs_residue"]),
        "period_vs_dynamics": _check(abs(period.value - traj.period), BOUNDS["period_vs_dynamics"]),
        "period_imaginary": _check(abs(period.value.imag), BOUNDS["period_imaginary"]),
        "action_quantization": _check(abs(action.value - 2.0 * math.pi * round(quanta)),
                                      BOUNDS["action_quantization"]),
    }
    return {
        "x0": _pair(x0),
        "closed": True,
        "trajectory": traj.metadata(),
        "action": action.as_dict(),
        "action_residue": action_ref.as_dict(),
        "period": period.as_dict(),
        "period_residue": period_ref.as_dict(),
        "action_quanta": round(quanta),
        "checks": checks,
        "passed": all(c["passed"] for c in checks.values()),
    }


def cmd_contour(cfg):
    entry = cfg.entry()
    jobs = [(entry.params, cfg.n, x0, cfg.t_end, cfg.tolerance) for x0 in cfg.initial_conditions]
    results = _run_jobs(_contour_series, jobs, cfg.workers)
    meta = _metadata(cfg)
    meta["member"] = entry.name
    passed = all(r["passed"] for r in results)
    _emit(_json_text({"config": cfg.echo(), "metadata": meta, "passed": passed, "samples": results}),
          cfg.output_path)
    for r in results:
        if not r["closed"]:
            print(f"contour: orbit from x0={r['x0']} did not close before t-end", file=sys.stderr)
    return 0 if passed else 1


HANDLERS = {
    "trajectory": cmd_trajectory,
    "verify": cmd_verify,
    "transition": cmd_transition,
    "contour": cmd_contour,
}


def make_parser():
    parser = argparse.ArgumentParser(prog="cqhm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="INI file with [common] and per-command sections")
        p.add_argument("--member", help="catalog member H1..H6")
        p.add_argument("--a", help="explicit map factor a as re,im")
        p.add_argument("--b", help="explicit shift b as re,im")
        p.add_argument("--c", help="explicit energy offset c as re,im")
        p.add_argument("--n", type=int, help="quantum number")
        p.add_argument("--x0", action="append", help="initial condition re,im (repeatable)")
        p.add_argument("--t-start", type=float, dest="t_start")
        p.add_argument("--t-end", type=float, dest="t_end")
        p.add_argument("--tolerance", type=float)
        p.add_argument("--output", "-o", help=f"output file (relative paths honour ${OUTPUT_DIR_ENV})")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--seed", type=int, help="seed for randomized sweeps")
        p.add_argument("--workers", type=int, help="parallel workers over initial conditions")
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        cfg = build_config(args)
    except (ConfigError, ValueError) as exc:
        print(f"{args.command}: invalid configuration: {exc}", file=sys.stderr)
        return 2
    try:
        return HANDLERS[cfg.command](cfg)
    except CQHMError as exc:
        print(f"{cfg.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
