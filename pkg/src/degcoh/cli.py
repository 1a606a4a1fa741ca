"""Command-line sweeps over z (and gamma) with CSV/JSON output and optional SVG plots.

Exit codes: 0 success, 1 usage error, 2 data or convergence error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np

from .dynamics import EvolutionGrid, gk_phase_entropy, gk_phase_variance
from .entropic import number_entropy, phase_entropy
from .phase import (
    DegenerateCommutator,
    PhaseGrid,
    number_phase_commutator,
    phase_distribution,
    phase_variance,
    squeezing_report,
)
from .spectrum import (
    SpectrumError,
    build_box2d,
    build_ho2d,
    build_ho3d,
    build_nondegenerate_ho,
    get_system,
    serialize,
)
from .state import (
    SpectrumTooShort,
    TruncationNotConverged,
    TruncationPolicy,
    make_state,
    mandel_q,
    mean_number,
    number_variance,
    quadrature_report,
)

COLUMNS = ("z", "gamma", "observable", "value", "theta", "error")
UNDEFINED = "undefined"

OBSERVABLE_GROUPS = {
    "mandel": ("mean_number", "number_variance", "mandel"),
    "phase-dist": ("phase_density",),
    "squeezing": ("s_number", "s_phase", "commutator", "phase_variance", "number_variance"),
    "entropy": ("entropy_number", "entropy_phase", "entropy_total"),
    "dynamics": ("gk_entropy_phase", "gk_entropy_total", "gk_phase_variance"),
    "quadcheck": ("var_x", "var_p", "commutator_xp", "quad_deviation"),
}
# per-point errors that become rows instead of aborting the sweep
ROW_ERRORS = (TruncationNotConverged, SpectrumTooShort, DegenerateCommutator, ValueError)


class UsageError(Exception):
    pass


class OutputRecord(NamedTuple):
    z: float
    gamma: float | None
    observable: str
    value: float | str | None
    theta: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class SweepConfig:
    system: str = "box2d"
    z_min: float = 0.0
    z_max: float = 5.0
    z_steps: int = 51
    z_values: tuple[float, ...] | None = None
    theta_points: int = 4096
    theta0: float = -math.pi
    gamma_min: float | None = None
    gamma_max: float | None = None
    gamma_steps: int | None = None
    truncation: TruncationPolicy = field(default_factory=TruncationPolicy)
    output_format: str = "csv"
    plot_path: str | None = None
    sections: tuple[float, ...] = ()
    jobs: int = 1

    def __post_init__(self):
        if self.z_values is None:
            if self.z_max < self.z_min:
                raise UsageError("z_max must be >= z_min")
            if self.z_max > self.z_min and self.z_steps < 2:
                raise UsageError("z_steps must be >= 2 when z_max > z_min")
        if self.output_format not in ("csv", "json"):
            raise UsageError(f"unknown format {self.output_format!r}")

    @property
    def zs(self) -> list[float]:
        if self.z_values is not None:
            return [float(z) for z in self.z_values]
        if self.z_max == self.z_min:
            return [float(self.z_min)]
        return [float(z) for z in np.linspace(self.z_min, self.z_max, self.z_steps)]

    @property
    def grid(self) -> PhaseGrid:
        return PhaseGrid(self.theta0, self.theta_points)

    @property
    def evolution(self) -> EvolutionGrid:
        return EvolutionGrid(
            0.0 if self.gamma_min is None else self.gamma_min,
            2 * math.pi if self.gamma_max is None else self.gamma_max,
            129 if self.gamma_steps is None else self.gamma_steps,
        )


def _value(x):
    return float(x)


def _evaluate_point(job):
    """All requested observables at one z; errors become tagged rows."""
    spectrum, z, config, observables = job
    rows = []
    try:
        state = make_state(spectrum, z, config.truncation)
    except ROW_ERRORS as exc:
        return [OutputRecord(z, None, name, None, None, type(exc).__name__) for name in observables]

    grid = config.grid
    cache = {}

    def squeeze():
        if "squeeze" not in cache:
            try:
                cache["squeeze"] = squeezing_report(state, grid)
            except DegenerateCommutator as exc:
                cache["squeeze"] = exc
        return cache["squeeze"]

    for name in observables:
        try:
            if name == "phase_density":
                dist = phase_distribution(state, grid)
                rows.extend(OutputRecord(z, None, name, _value(v), float(t))
                            for t, v in zip(dist.theta, dist.values))
                continue
            if name.startswith("gk_"):
                rows.extend(_dynamics_rows(state, z, config, name))
                continue
            rows.append(OutputRecord(z, None, name, _scalar(name, state, grid, squeeze)))
        except DegenerateCommutator:
            rows.append(OutputRecord(z, None, name, UNDEFINED, None, "DegenerateCommutator"))
        except ROW_ERRORS as exc:
            rows.append(OutputRecord(z, None, name, None, None, type(exc).__name__))
    return rows


def _scalar(name, state, grid, squeeze):
    if name == "mean_number":
        return _value(mean_number(state))
    if name == "number_variance":
        return _value(number_variance(state))
    if name == "mandel":
        return _value(mandel_q(state))
    if name == "commutator":
        return _value(abs(number_phase_commutator(state, grid)))
    if name == "phase_variance":
        return _value(phase_variance(state, grid))
    if name in ("s_number", "s_phase"):
        rep = squeeze()
        if isinstance(rep, DegenerateCommutator):
            raise rep
        return _value(rep.s_number if name == "s_number" else rep.s_phase)
    if name.startswith("entropy_"):
        r_n = number_entropy(state)
        if name == "entropy_number":
            return _value(r_n)
        r_phi = phase_entropy(phase_distribution(state, grid))
        return _value(r_phi if name == "entropy_phase" else r_n + r_phi)
    if name in ("var_x", "var_p", "commutator_xp", "quad_deviation"):
        rep = quadrature_report(state)
        return _value({"var_x": rep.var_x, "var_p": rep.var_p,
                       "commutator_xp": rep.commutator_expectation,
                       "quad_deviation": rep.max_relative_deviation}[name])
    raise UsageError(f"unknown observable {name!r}")


def _dynamics_rows(state, z, config, name):
    grid = config.grid
    r_n = number_entropy(state)
    out = []
    for gamma in config.evolution.gammas:
        gamma = float(gamma)
        if name == "gk_phase_variance":
            val = gk_phase_variance(state, gamma)
        else:
            r_phi = gk_phase_entropy(state, grid, gamma)
            val = r_phi if name == "gk_entropy_phase" else r_n + r_phi
        out.append(OutputRecord(z, gamma, name, _value(val)))
    return out


def _policy_for(system, policy):
    if system == "box2d-23" and not policy.finite_system:
        return replace(policy, finite_system=True)
    return policy


def run_sweep(config: SweepConfig, observables) -> list[OutputRecord]:
    """Evaluate ``observables`` at every z of the sweep, z-major then gamma.

    Raises SpectrumError or OSError when the system cannot be loaded.
    """
    observables = tuple(observables)
    config = replace(config, truncation=_policy_for(config.system, config.truncation))
    spectrum = get_system(config.system, config.truncation.max_levels + 1)
    jobs = [(spectrum, z, config, observables) for z in config.zs]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            chunks = list(pool.map(_evaluate_point, jobs, chunksize=max(1, len(jobs) // (4 * config.jobs))))
    else:
        chunks = [_evaluate_point(job) for job in jobs]
    return [row for chunk in chunks for row in chunk]


# Figure presets.  Ranges the source figures leave unstated are documented
# choices; the z = 2, 5, 20 cross-sections of the dynamics figures are given.
_SECTIONS = (2.0, 5.0, 20.0)
_BIG = TruncationPolicy(max_levels=1024)
FIGURES = {
    "fig1": ("mandel", dict(system="box2d-23", z_min=0.0, z_max=20.0, z_steps=401), ("mandel",)),
    "fig2": ("phase-dist", dict(system="box2d-23", z_values=(1.0, 2.0, 3.0)), ("phase_density",)),
    "fig3": ("squeezing", dict(system="box2d-23", z_min=0.0, z_max=4.0, z_steps=81), ("s_number", "s_phase")),
    "fig4": ("entropy", dict(system="box2d-23", z_min=0.0, z_max=20.0, z_steps=81), OBSERVABLE_GROUPS["entropy"]),
    "fig5": ("mandel", dict(system="ho3d", z_min=0.0, z_max=20.0, z_steps=401), ("mandel",)),
    "fig6": ("phase-dist", dict(system="ho3d", z_values=(1.0, 2.0, 3.0)), ("phase_density",)),
    "fig7": ("squeezing", dict(system="ho3d", z_min=0.0, z_max=2.0, z_steps=81), ("s_number", "s_phase")),
    "fig8": ("entropy", dict(system="ho3d", z_min=0.0, z_max=20.0, z_steps=81), OBSERVABLE_GROUPS["entropy"]),
    "fig9": ("dynamics", dict(system="box2d-23", z_min=0.0, z_max=20.0, z_steps=41, sections=_SECTIONS),
             ("gk_entropy_total",)),
    "fig10": ("dynamics", dict(system="ho3d", z_min=0.0, z_max=20.0, z_steps=41, sections=_SECTIONS),
              ("gk_entropy_total",)),
}


class UnknownPreset(UsageError):
    pass


def figure_config(name: str, **overrides) -> tuple[SweepConfig, tuple[str, ...]]:
    try:
        _, defaults, observables = FIGURES[name]
    except KeyError:
        raise UnknownPreset(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}") from None
    params = dict(defaults, truncation=_BIG)
    params.update({k: v for k, v in overrides.items() if v is not None})
    if "z_min" in overrides or "z_max" in overrides or "z_steps" in overrides:
        if overrides.get("z_values") is None:
            params.pop("z_values", None)
    return SweepConfig(**params), observables


def run_figure_preset(name: str, **overrides) -> list[OutputRecord]:
    config, observables = figure_config(name, **overrides)
    records = run_sweep(config, observables)
    if config.sections:
        section_cfg = replace(config, z_values=config.sections)
        for row in run_sweep(section_cfg, observables):
            records.append(row._replace(observable=f"section_{row.observable}"))
    return records


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for rec in records:
        writer.writerow([_cell(v) for v in rec])
    return buf.getvalue()


def to_json(records) -> str:
    return json.dumps([dict(zip(COLUMNS, rec)) for rec in records], indent=1) + "\n"


def records_from_json(text: str) -> list[OutputRecord]:
    return [OutputRecord(**{k: d.get(k) for k in COLUMNS}) for d in json.loads(text)]


def emit(records, output_format="csv", plot_path=None, out=None) -> str:
    """Serialize records, write them to ``out`` (path) or return the text."""
    text = to_csv(records) if output_format == "csv" else to_json(records)
    if out is not None:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    if plot_path:
        plot_records(records, plot_path)
    return text


def plot_records(records, path):
    """Static SVG: heat map for (z, gamma) grids, line chart otherwise."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = [r for r in records if isinstance(r.value, float)]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    grid_rows = [r for r in rows if r.gamma is not None and not r.observable.startswith("section_")]
    if grid_rows:
        zs = sorted({r.z for r in grid_rows})
        gs = sorted({r.gamma for r in grid_rows})
        name = grid_rows[0].observable
        table = np.full((len(gs), len(zs)), np.nan)
        zi = {z: i for i, z in enumerate(zs)}
        gi = {g: i for i, g in enumerate(gs)}
        for r in grid_rows:
            if r.observable == name:
                table[gi[r.gamma], zi[r.z]] = r.value
        mesh = ax.pcolormesh(zs, gs, table, shading="auto")
        fig.colorbar(mesh, ax=ax, label=name)
        ax.set_xlabel("z")
        ax.set_ylabel("gamma")
    else:
        series = {}
        for r in rows:
            if r.theta is not None:
                key, x = f"{r.observable} z={r.z:g}", r.theta
            else:
                key, x = r.observable, r.z
            series.setdefault(key, []).append((x, r.value))
        for key, pts in series.items():
            xs, ys = zip(*pts)
            ax.plot(xs, ys, label=key)
        ax.set_xlabel("theta" if any(r.theta is not None for r in rows) else "z")
        ax.legend(fontsize="small")
    fig.tight_layout()
    plt.rcParams["svg.hashsalt"] = "degcoh"
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_common(p):
    p.add_argument("--system", default=None, help="box2d | box2d-23 | ho2d | ho3d | glauber | custom:<path>")
    p.add_argument("--z-min", type=float, default=None)
    p.add_argument("--z-max", type=float, default=None)
    p.add_argument("--z-steps", type=int, default=None)
    p.add_argument("--z-values", type=lambda s: tuple(float(x) for x in s.split(",")), default=None,
                   help="comma-separated explicit z values (overrides the range)")
    p.add_argument("--theta-points", type=int, default=None)
    p.add_argument("--theta0", type=float, default=None)
    p.add_argument("--gamma-min", type=float, default=None)
    p.add_argument("--gamma-max", type=float, default=None)
    p.add_argument("--gamma-steps", type=int, default=None)
    p.add_argument("--max-levels", type=int, default=None)
    p.add_argument("--tail-tol", type=float, default=None)
    p.add_argument("--finite-system", action="store_true",
                   help="treat the spectrum as the complete system (no truncation error)")
    p.add_argument("--format", dest="output_format", choices=("csv", "json"), default=None)
    p.add_argument("--plot", dest="plot_path", default=None, help="write an SVG chart here")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--jobs", type=int, default=None, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="degcoh", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sp = sub.add_parser("spectrum", help="print a spectrum in the custom text format")
    sp.add_argument("--system", default="box2d-23")
    sp.add_argument("--levels", type=int, default=23)
    sp.add_argument("--out", default=None)
    for name in OBSERVABLE_GROUPS:
        _add_common(sub.add_parser(name, help=f"sweep: {', '.join(OBSERVABLE_GROUPS[name])}"))
    fp = sub.add_parser("figure", help="run a figure preset (fig1 .. fig10)")
    fp.add_argument("name")
    _add_common(fp)
    return parser


def _overrides(args):
    keys = ("system", "z_min", "z_max", "z_steps", "z_values", "theta_points", "theta0",
            "gamma_min", "gamma_max", "gamma_steps", "output_format", "plot_path", "jobs")
    return {k: getattr(args, k) for k in keys if getattr(args, k) is not None}


def _policy(args, base):
    changes = {}
    if args.max_levels is not None:
        changes["max_levels"] = args.max_levels
    if args.tail_tol is not None:
        changes["tail_tolerance"] = args.tail_tol
    if args.finite_system:
        changes["finite_system"] = True
    return replace(base, **changes)


def _spectrum_text(args):
    builders = {"box2d": build_box2d, "ho2d": build_ho2d, "ho3d": build_ho3d, "glauber": build_nondegenerate_ho}
    if args.system in builders:
        return serialize(builders[args.system](args.levels))
    return serialize(get_system(args.system))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "spectrum":
            text = _spectrum_text(args)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return 0
        overrides = _overrides(args)
        if args.command == "figure":
            base_cfg, _ = figure_config(args.name)
            overrides["truncation"] = _policy(args, base_cfg.truncation)
            records = run_figure_preset(args.name, **overrides)
            config = replace(base_cfg, **{k: v for k, v in overrides.items()
                                          if k in ("output_format", "plot_path")})
        else:
            overrides["truncation"] = _policy(args, TruncationPolicy())
            config = SweepConfig(**overrides)
            records = run_sweep(config, OBSERVABLE_GROUPS[args.command])
        text = emit(records, config.output_format, config.plot_path, args.out)
        if args.out is None:
            sys.stdout.write(text)
        return 0
    except UsageError as exc:
        print(f"degcoh: error: {exc}", file=sys.stderr)
        return 1
    except (SpectrumError, OSError, TruncationNotConverged, ValueError) as exc:
        print(f"degcoh: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
