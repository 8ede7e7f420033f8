"""Compact spec-string parsers shared by the command line, presets and tests.

Grammar sketch:

    number    := term {"/" term}            e.g. 0.5, -1, 50/59, 4pi, pi^2
    function  := name[":" key=number{"," key=number}]
                                             e.g. sinusoid:amplitude=-1,frequency=4pi
    mesh      := kind ":" args ["+insert:" number]
                 kind in {uniform, geometric, equiarc}
    operator  := "d+" | "d-" | "c" | "d2" | "<outer> <inner>"

``Npi^k`` means N times pi**k.
"""

from __future__ import annotations

import math
import re

from . import mesh as meshmod
from .diffops import D2_CORRECTED, FirstDiffKind, Operator, SecondDiffSpec
from .functions import FACTORIES, AnalyticFunction
from .mesh import Mesh

__all__ = ["SpecError", "parse_number", "parse_function_spec", "parse_mesh_spec", "parse_operator"]


class SpecError(ValueError):
    """Raised for malformed compact spec strings; includes the bad token."""


_TERM_RE = re.compile(
    r"^\s*(?P<sign>[+-])?\s*(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?)?"
    r"(?P<pi>pi(?:\^(?P<exp>\d+))?)?\s*$"
)


def _parse_term(token: str, context: str, offset: int) -> float:
    m = _TERM_RE.match(token)
    if m is None or (m.group("num") is None and m.group("pi") is None):
        raise SpecError(
            f"could not parse number {token.strip()!r} in {context!r} (column {offset + 1})"
        )
    value = float(m.group("num")) if m.group("num") is not None else 1.0
    if m.group("pi"):
        value *= math.pi ** int(m.group("exp") or 1)
    if m.group("sign") == "-":
        value = -value
    return value


def parse_number(text: str, context: str | None = None, offset: int = 0) -> float:
    """Parse a numeric literal, allowing fractions and pi multiples."""
    context = context if context is not None else text
    parts = text.split("/")
    value = _parse_term(parts[0], context, offset)
    pos = offset + len(parts[0]) + 1
    for part in parts[1:]:
        den = _parse_term(part, context, pos)
        if den == 0:
            raise SpecError(f"division by zero in {context!r} (column {pos + 1})")
        value /= den
        pos += len(part) + 1
    return value


def _parse_params(text: str, context: str, offset: int) -> dict[str, float]:
    params: dict[str, float] = {}
    pos = offset
    for item in text.split(","):
        if "=" not in item:
            raise SpecError(
                f"expected key=value but got {item!r} in {context!r} (column {pos + 1})"
            )
        key, raw = item.split("=", 1)
        params[key.strip()] = parse_number(raw, context, pos + len(key) + 1)
        pos += len(item) + 1
    return params


def parse_function_spec(text: str) -> AnalyticFunction:
    """Build an analytic function from ``name:key=value,...``."""
    name, _, rest = text.partition(":")
    name = name.strip()
    if name not in FACTORIES:
        raise SpecError(
            f"unknown function {name!r} in {text!r} (column 1); "
            f"known: {', '.join(sorted(FACTORIES))}"
        )
    params = _parse_params(rest, text, len(name) + 1) if rest else {}
    try:
        return FACTORIES[name](**params)
    except ValueError as exc:
        raise SpecError(f"bad parameters in {text!r}: {exc}") from exc


def parse_mesh_spec(text: str, default_quad_resolution: int = 10_000) -> Mesh:
    """Build a mesh from a compact string, with optional refinement suffix.

    Forms: ``uniform:a,b,n``, ``geometric:t0,h0,r,m``,
    ``equiarc:curve,a,b,n`` and any of them followed by ``+insert:beta``.
    """
    body, _, suffix = text.partition("+insert:")
    body = body.strip()
    kind, _, rest = body.partition(":")
    kind = kind.strip()
    arg_offset = len(kind) + 1

    def numbers(raw: str, expected: int) -> list[float]:
        parts = raw.split(",")
        if len(parts) != expected:
            raise SpecError(
                f"{kind!r} expects {expected} comma-separated values, got {len(parts)} "
                f"in {text!r}"
            )
        out = []
        pos = arg_offset
        for p in parts:
            out.append(parse_number(p, text, pos))
            pos += len(p) + 1
        return out

    try:
        if kind == "uniform":
            a, b, n = numbers(rest, 3)
            built = meshmod.build_uniform(a, b, _as_int(n, "n_points", text))
        elif kind == "geometric":
            t0, h0, r, m = numbers(rest, 4)
            built = meshmod.build_geometric(t0, h0, r, _as_int(m, "m", text))
        elif kind == "equiarc":
            curve_raw, rem = _split_equiarc(rest, text)
            vals = []
            pos = arg_offset + len(curve_raw) + 1
            for p in rem.split(","):
                vals.append(parse_number(p, text, pos))
                pos += len(p) + 1
            a, b, n = vals
            built = meshmod.build_equiarclength(
                parse_function_spec(curve_raw),
                a,
                b,
                _as_int(n, "n_points", text),
                quad_resolution=default_quad_resolution,
            )
        else:
            raise SpecError(
                f"unknown mesh kind {kind!r} in {text!r} (column 1); "
                "known: uniform, geometric, equiarc"
            )
    except meshmod.MeshError as exc:
        raise SpecError(f"invalid mesh spec {text!r}: {exc}") from exc

    if suffix:
        beta = parse_number(suffix, text, len(body) + len("+insert:"))
        try:
            built = meshmod.refine_insert(built, beta)
        except meshmod.MeshError as exc:
            raise SpecError(f"invalid mesh spec {text!r}: {exc}") from exc
    return built


def _split_equiarc(rest: str, context: str) -> tuple[str, str]:
    parts = rest.rsplit(",", 3)
    if len(parts) != 4:
        raise SpecError(
            f"'equiarc' expects curve,a,b,n_points but got {rest!r} in {context!r}"
        )
    return parts[0], ",".join(parts[1:])


def _as_int(value: float, name: str, context: str) -> int:
    if value != int(value):
        raise SpecError(f"{name} must be an integer in {context!r}, got {value!r}")
    return int(value)


_FIRST_BY_NAME = {k.value: k for k in FirstDiffKind}


def parse_operator(text: str) -> Operator:
    """Parse ``d+``, ``d-``, ``c``, ``d2`` or an ordered pair like ``d+ d-``."""
    parts = text.split()
    if len(parts) == 1:
        name = parts[0]
        if name == D2_CORRECTED:
            return D2_CORRECTED
        if name in _FIRST_BY_NAME:
            return _FIRST_BY_NAME[name]
        raise SpecError(
            f"unknown operator {name!r} (column 1); use d+, d-, c, d2 or a pair like 'd+ d-'"
        )
    if len(parts) == 2:
        outer, inner = parts
        if outer in _FIRST_BY_NAME and inner in _FIRST_BY_NAME:
            return SecondDiffSpec(_FIRST_BY_NAME[outer], _FIRST_BY_NAME[inner])
        bad = outer if outer not in _FIRST_BY_NAME else inner
        raise SpecError(
            f"unknown difference {bad!r} in {text!r} (column {text.find(bad) + 1})"
        )
    raise SpecError(f"operator spec {text!r} must be one name or an ordered pair")
