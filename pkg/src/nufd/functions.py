"""Analytic test functions with exact derivatives up to order 5.

These functions are the oracle against which every difference
approximation is measured: order 0 is the function itself, order n its
exact n-th derivative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .diffops import GridFunction
from .mesh import Mesh

__all__ = [
    "AnalyticFunction",
    "MAX_DERIVATIVE_ORDER",
    "make_sinusoid",
    "make_polynomial",
    "make_oscillator_solution",
    "sample",
    "FACTORIES",
]

# Fourth-derivative and fifth-derivative remainders are the deepest terms
# any in-scope expansion reaches.
MAX_DERIVATIVE_ORDER = 5


@dataclass(frozen=True)
class AnalyticFunction:
    """A scalar function bundled with its exact derivatives.

    ``evaluator(order, t)`` must accept scalar or ndarray ``t`` and be
    deterministic.  Orders 0..5 are supported.
    """

    label: str
    evaluator: Callable[[int, np.ndarray], np.ndarray] = field(repr=False)

    def evaluate(self, order: int, t):
        if not 0 <= order <= MAX_DERIVATIVE_ORDER:
            raise ValueError(
                f"derivative order must be within 0..{MAX_DERIVATIVE_ORDER}, got {order}"
            )
        return self.evaluator(order, t)

    def __call__(self, t):
        return self.evaluator(0, t)


def make_sinusoid(amplitude: float, frequency: float, phase: float = 0.0) -> AnalyticFunction:
    """A * sin(w*t + phi); the n-th derivative is A * w**n * sin(w*t + phi + n*pi/2)."""

    def evaluator(order: int, t):
        return amplitude * frequency**order * np.sin(
            frequency * np.asarray(t, dtype=np.float64) + phase + order * np.pi / 2
        )

    return AnalyticFunction(
        label=f"sinusoid(amplitude={amplitude:g},frequency={frequency:g},phase={phase:g})",
        evaluator=evaluator,
    )


def make_polynomial(coefficients: Sequence[float]) -> AnalyticFunction:
    """Polynomial c0 + c1*t + ... with exact derivatives; degree at most 5."""
    coefs = np.asarray(list(coefficients), dtype=np.float64)
    if coefs.size == 0:
        coefs = np.zeros(1)
    if coefs.size - 1 > MAX_DERIVATIVE_ORDER:
        raise ValueError(
            f"polynomial degree must be at most {MAX_DERIVATIVE_ORDER}, "
            f"got degree {coefs.size - 1}"
        )
    # derivative coefficient tables, ascending powers
    tables = [coefs]
    for _ in range(MAX_DERIVATIVE_ORDER):
        tables.append(np.polynomial.polynomial.polyder(tables[-1]))

    def evaluator(order: int, t):
        t = np.asarray(t, dtype=np.float64)
        return np.polynomial.polynomial.polyval(t, tables[order])

    pretty = ",".join(format(c, "g") for c in coefs)
    return AnalyticFunction(label=f"poly({pretty})", evaluator=evaluator)


def _oscillator(kappa: float, value_at_t0: float, slope_at_t0: float, t0: float = 0.0,
                label: str | None = None) -> AnalyticFunction:
    """Solution of u'' = -kappa*u with u(t0)=value and u'(t0)=slope."""
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa!r}")
    omega = np.sqrt(kappa)
    c_cos = value_at_t0
    c_sin = slope_at_t0 / omega

    def evaluator(order: int, t):
        arg = omega * (np.asarray(t, dtype=np.float64) - t0) + order * np.pi / 2
        return omega**order * (c_sin * np.sin(arg) + c_cos * np.cos(arg))

    return AnalyticFunction(
        label=label or f"oscillator(kappa={kappa:g},value={value_at_t0:g},slope={slope_at_t0:g})",
        evaluator=evaluator,
    )


def make_oscillator_solution(kappa: float) -> AnalyticFunction:
    """-(1/sqrt(kappa))*sin(sqrt(kappa)*t) + cos(sqrt(kappa)*t).

    This is the motion with unit initial displacement and slope -1 at t = 0.
    """
    return _oscillator(kappa, 1.0, -1.0, label=f"oscillator(kappa={kappa:g})")


def sample(f: AnalyticFunction, order: int, mesh: Mesh) -> GridFunction:
    """Sample the exact ``order``-th derivative of ``f`` at every mesh point."""
    values = np.asarray(f.evaluate(order, mesh.points), dtype=np.float64)
    return GridFunction(mesh=mesh, first_index=0, values=values)


def _reject_unknown(kind: str, params: dict, allowed: set[str]) -> None:
    unknown = set(params) - allowed
    if unknown:
        raise ValueError(
            f"unknown parameter(s) {sorted(unknown)} for '{kind}'; allowed: {sorted(allowed)}"
        )


def _sinusoid_factory(**params: float) -> AnalyticFunction:
    _reject_unknown("sinusoid", params, {"amplitude", "frequency", "phase"})
    return make_sinusoid(
        amplitude=params.get("amplitude", 1.0),
        frequency=params.get("frequency", 1.0),
        phase=params.get("phase", 0.0),
    )


def _poly_factory(**params: float) -> AnalyticFunction:
    coefs = [0.0] * (MAX_DERIVATIVE_ORDER + 1)
    top = -1
    for name, value in params.items():
        if not (name.startswith("c") and name[1:].isdigit()):
            raise ValueError(f"unknown polynomial parameter {name!r}; use c0..c5")
        power = int(name[1:])
        if power > MAX_DERIVATIVE_ORDER:
            raise ValueError(f"polynomial power {power} above the supported degree 5")
        coefs[power] = value
        top = max(top, power)
    return make_polynomial(coefs[: top + 1] if top >= 0 else [0.0])


def _oscillator_factory(**params: float) -> AnalyticFunction:
    _reject_unknown("oscillator", params, {"kappa"})
    if "kappa" not in params:
        raise ValueError("'oscillator' needs the parameter kappa")
    return make_oscillator_solution(params["kappa"])


# Registry keyed by label for command-line selection.
FACTORIES: dict[str, Callable[..., AnalyticFunction]] = {
    "sinusoid": _sinusoid_factory,
    "poly": _poly_factory,
    "oscillator": _oscillator_factory,
}
