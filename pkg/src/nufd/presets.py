"""Canned experiments: the four derivative studies, the oscillator runs and
the mesh-profile dump.

Every preset is fully determined by its name plus the insertion fraction
``beta`` used to refine the nonuniform mesh, so runs are reproducible byte
for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from . import diffops, ivp
from .diffops import FirstDiffKind, GridFunction, Operator, SecondDiffSpec
from .functions import AnalyticFunction, make_sinusoid, sample
from .mesh import (
    Mesh,
    build_equiarclength,
    build_geometric,
    build_uniform,
    refine_insert,
    smoothness_ratios,
    write_mesh_csv,
    FLOAT_FORMAT,
)
from .metrics import SldSeries, classify, scaled_local_difference

__all__ = [
    "PRESET_NAMES",
    "DEFAULT_BETA",
    "ExperimentPreset",
    "resolve_preset",
    "run_preset",
    "run_custom",
    "section5_uniform_mesh",
    "section5_nonuniform_mesh",
    "section5_function",
    "oscillator_meshes",
    "OSCILLATOR_KAPPA",
    "write_grid_csv",
    "write_sld_csv",
    "write_oscillator_csv",
]

DEFAULT_BETA = 0.7
OSCILLATOR_KAPPA = 4 * math.pi**2

_CENTRAL = FirstDiffKind.CENTRAL
_DERIVATIVE_PRESETS: dict[str, Operator] = {
    "ex5_1": _CENTRAL,
    "ex5_2": SecondDiffSpec(FirstDiffKind.FORWARD, FirstDiffKind.FORWARD),
    "ex5_3": SecondDiffSpec(_CENTRAL, FirstDiffKind.BACKWARD),
    "ex5_4": SecondDiffSpec(_CENTRAL, _CENTRAL),
}

PRESET_NAMES = tuple(_DERIVATIVE_PRESETS) + ("ex5_5", "fig5_1")


def section5_function() -> AnalyticFunction:
    """-sin(4*pi*t), the test function of the derivative studies."""
    return make_sinusoid(amplitude=-1.0, frequency=4 * math.pi)


def section5_uniform_mesh() -> Mesh:
    """23 equally spaced points on [0, 1] (12 points plus midpoints)."""
    return refine_insert(build_uniform(0.0, 1.0, 12), 0.5)


def section5_nonuniform_mesh(beta: float = DEFAULT_BETA, quad_resolution: int = 10_000) -> Mesh:
    """The equi-arclength 12-point mesh for sin(2*pi*t), one point inserted per step.

    ``beta`` > 0.5 places the inserted points closer to their right
    neighbours.
    """
    base = build_equiarclength(
        make_sinusoid(amplitude=1.0, frequency=2 * math.pi), 0.0, 1.0, 12,
        quad_resolution=quad_resolution,
    )
    return refine_insert(base, beta)


def oscillator_meshes() -> tuple[Mesh, Mesh]:
    """(geometric, uniform) meshes of the oscillator experiment.

    The geometric mesh starts at h0 = 1/10 with ratio 50/59 for 202 points;
    the uniform one covers the same interval in ten equal steps.
    """
    geometric = build_geometric(0.0, 0.1, 50 / 59, 200)
    uniform = build_uniform(geometric.a, geometric.b, 11)
    return geometric, uniform


@dataclass(frozen=True)
class ExperimentPreset:
    """A named, fully resolved experiment configuration."""

    name: str
    beta: float
    run: Callable[[Path], dict]


def _fmt(x: float) -> str:
    return format(float(x), FLOAT_FORMAT)


def write_grid_csv(grid: GridFunction, target: Path) -> None:
    """Write ``k,t,value`` rows for one grid function."""
    lines = ["k,t,value"]
    for k, t, v in zip(grid.indices, grid.t, grid.values):
        lines.append(f"{k},{_fmt(t)},{_fmt(v)}")
    target.write_text("\n".join(lines) + "\n")


def write_sld_csv(series: SldSeries, target: Path) -> None:
    """Write ``k,t,reference,approx,sld`` rows plus the summary line."""
    lines = ["k,t,reference,approx,sld"]
    for k, t, f, g, s in zip(series.indices, series.t, series.reference, series.approx, series.sld):
        lines.append(f"{k},{_fmt(t)},{_fmt(f)},{_fmt(g)},{_fmt(s)}")
    lines.append(f"# sgei={_fmt(series.sgei)},argmax_t={_fmt(series.argmax_t)}")
    target.write_text("\n".join(lines) + "\n")


def _derivative_comparison(
    op: Operator, f: AnalyticFunction, mesh: Mesh
) -> tuple[GridFunction, SldSeries]:
    approx = diffops.apply_operator(op, sample(f, 0, mesh))
    reference = sample(f, diffops.derivative_order(op), mesh)
    return approx, scaled_local_difference(reference, approx)


def _run_derivative_preset(name: str, beta: float, out_dir: Path) -> dict:
    op = _DERIVATIVE_PRESETS[name]
    f = section5_function()
    summary: dict = {
        "schema_version": 1,
        "preset": name,
        "operator": str(op),
        "function": f.label,
        "beta": beta,
    }
    for variant, mesh in (
        ("uniform", section5_uniform_mesh()),
        ("nonuniform", section5_nonuniform_mesh(beta)),
    ):
        approx, series = _derivative_comparison(op, f, mesh)
        write_grid_csv(approx, out_dir / f"{name}_{variant}_grid.csv")
        write_sld_csv(series, out_dir / f"{name}_{variant}_sld.csv")
        summary[f"sgei_{variant}"] = series.sgei
        summary[f"argmax_t_{variant}"] = series.argmax_t
        summary[f"classification_{variant}"] = classify(series.sgei)
    return summary


def write_oscillator_csv(solution: ivp.IvpSolution, target: Path) -> None:
    series = solution.sld
    lines = ["k,t,w,exact,sld"]
    for k, t, w, e, s in zip(
        series.indices, series.t, solution.w.values, solution.exact.values, series.sld
    ):
        lines.append(f"{k},{_fmt(t)},{_fmt(w)},{_fmt(e)},{_fmt(s)}")
    lines.append(f"# sgei={_fmt(series.sgei)},argmax_t={_fmt(series.argmax_t)}")
    target.write_text("\n".join(lines) + "\n")


def _run_oscillator_preset(out_dir: Path) -> dict:
    geometric, uniform = oscillator_meshes()
    summary: dict = {
        "schema_version": 1,
        "preset": "ex5_5",
        "kappa": OSCILLATOR_KAPPA,
        "operator": str(ivp.BACKWARD_FORWARD),
        "b": geometric.b,
        "h_uniform": float(uniform.steps[0]),
    }
    for variant, mesh in (("geometric", geometric), ("uniform", uniform)):
        problem = ivp.IvpProblem(kappa=OSCILLATOR_KAPPA, mesh=mesh)
        solution = ivp.solve(problem)
        write_oscillator_csv(solution, out_dir / f"ex5_5_{variant}.csv")
        summary[f"sgei_{variant}"] = solution.sld.sgei
        summary[f"argmax_t_{variant}"] = solution.sld.argmax_t
        summary[f"classification_{variant}"] = classify(solution.sld.sgei)
    return summary


def _run_mesh_profile_preset(beta: float, out_dir: Path) -> dict:
    meshes = {
        "uniform": section5_uniform_mesh(),
        "nonuniform": section5_nonuniform_mesh(beta),
    }
    summary: dict = {"schema_version": 1, "preset": "fig5_1", "beta": beta}
    for variant, mesh in meshes.items():
        write_mesh_csv(mesh, out_dir / f"fig5_1_{variant}_mesh.csv")
        ratios = smoothness_ratios(mesh)
        lines = ["k,ratio"]
        lines.extend(f"{k},{_fmt(r)}" for k, r in enumerate(ratios))
        (out_dir / f"fig5_1_{variant}_ratios.csv").write_text("\n".join(lines) + "\n")
        summary[f"steps_{variant}"] = [float(h) for h in mesh.steps]
        summary[f"ratios_{variant}"] = [float(r) for r in ratios]
    return summary


def resolve_preset(name: str, beta: float = DEFAULT_BETA) -> ExperimentPreset:
    """Resolve a preset name into a runnable configuration."""
    if name in _DERIVATIVE_PRESETS:
        return ExperimentPreset(name, beta, lambda out: _run_derivative_preset(name, beta, out))
    if name == "ex5_5":
        return ExperimentPreset(name, beta, _run_oscillator_preset)
    if name == "fig5_1":
        return ExperimentPreset(name, beta, lambda out: _run_mesh_profile_preset(beta, out))
    raise ValueError(f"unknown preset {name!r}; known: {', '.join(PRESET_NAMES)}")


def run_preset(preset: ExperimentPreset, out_dir: Path) -> dict:
    """Run one preset, writing its CSV files into ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return preset.run(out_dir)


def run_custom(
    mesh: Mesh,
    f: AnalyticFunction,
    op: Operator,
    derivative_order: int | None = None,
    out_dir: Path | None = None,
    prefix: str = "diff",
) -> dict:
    """Compare one operator against the exact derivative on one mesh.

    ``derivative_order`` defaults to the order the operator approximates.
    When ``out_dir`` is given, the grid and sld CSV files are written there.
    """
    order = diffops.derivative_order(op) if derivative_order is None else derivative_order
    approx = diffops.apply_operator(op, sample(f, 0, mesh))
    reference = sample(f, order, mesh)
    series = scaled_local_difference(reference, approx)
    summary = {
        "schema_version": 1,
        "operator": str(op),
        "function": f.label,
        "derivative_order": order,
        "sgei": series.sgei,
        "argmax_t": series.argmax_t,
        "classification": classify(series.sgei),
    }
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_grid_csv(approx, out_dir / f"{prefix}_grid.csv")
        write_sld_csv(series, out_dir / f"{prefix}_sld.csv")
    return summary
