"""Closed-form Hamiltonians, Hofer norms, and normalization.

Expressions are written in the time symbol t and the phase-space
coordinate names (x1, y1, ... on euclidean factors; p1, p2, p3 on
spheres) using +, -, *, /, ** and the functions sin, cos, exp, sqrt;
pi is available as a constant.  On a plain euclidean plane the aliases
x and y stand for x1 and y1.

Hofer norms follow the convention

    E-(H) = integral of -min_x H(t, x) over t in [0, 1]
    E+(H) = integral of  max_x H(t, x)
    |H|   = E-(H) + E+(H),

so the norm of any constant vanishes while E-+/E+ themselves may be
negative for one-signed Hamiltonians.  Extrema are located by dense
parameter-grid scans with window refinement; euclidean factors need an
explicit bounding box.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import sympy

from ..errors import NonCompact
from .spaces import Box, PhaseSpace

_FUNCTIONS = {
    "sin": sympy.sin,
    "cos": sympy.cos,
    "exp": sympy.exp,
    "sqrt": sympy.sqrt,
    "pi": sympy.pi,
}

T_SYMBOL = sympy.Symbol("t", real=True)


def _parse(space: PhaseSpace, expression) -> sympy.Expr:
    symbols = {name: sympy.Symbol(name, real=True)
               for name in space.coord_names}
    local = dict(_FUNCTIONS)
    local.update(symbols)
    local["t"] = T_SYMBOL
    if "x1" in symbols and "x" not in symbols:
        local.setdefault("x", symbols["x1"])
    if "y1" in symbols and "y" not in symbols:
        local.setdefault("y", symbols["y1"])
    expr = sympy.sympify(expression, locals=local)
    allowed = set(symbols.values()) | {T_SYMBOL}
    stray = expr.free_symbols - allowed
    if stray:
        raise ValueError(
            f"unknown symbols {sorted(map(str, stray))}; coordinates are "
            f"{list(space.coord_names)} plus t")
    return expr


class HamiltonianField:
    """Scalar Hamiltonian H(t, x) with exact symbolic derivatives."""

    def __init__(self, space: PhaseSpace, expression):
        self.space = space
        self.expr = _parse(space, expression)
        coords = [sympy.Symbol(name, real=True)
                  for name in space.coord_names]
        args = [T_SYMBOL, *coords]
        self._value = sympy.lambdify(args, self.expr, modules="numpy")
        self._partials = [
            sympy.lambdify(args, sympy.diff(self.expr, c), modules="numpy")
            for c in coords
        ]

    def _evaluate(self, fn, t, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        flat = points.reshape(-1, self.space.dim)
        t_arr = np.asarray(t, dtype=float)
        if t_arr.ndim:
            # one time per point row, or anything broadcastable across
            # the leading point axes (e.g. a per-column time grid)
            t_arr = np.broadcast_to(t_arr, points.shape[:-1]).reshape(-1)
        out = fn(t_arr, *(flat[:, i] for i in range(self.space.dim)))
        out = np.asarray(out, dtype=float)
        if out.shape != flat.shape[:1]:
            out = np.broadcast_to(out, flat.shape[:1])
        return out.reshape(points.shape[:-1])

    def value(self, t, points) -> np.ndarray:
        """H(t, points); t is a scalar or one value per point row."""
        return self._evaluate(self._value, t, points)

    def gradient(self, t, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        parts = [self._evaluate(fn, t, points) for fn in self._partials]
        return np.stack(parts, axis=-1)

    def vector_field(self, t, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return self.space.vector_field_from_gradient(
            points, self.gradient(t, points))

    def time_reversed(self) -> "HamiltonianField":
        """The Hamiltonian -H(1-t, x) generating the reversed path."""
        reversed_expr = -self.expr.subs(T_SYMBOL, 1 - T_SYMBOL)
        return HamiltonianField(self.space, reversed_expr)

    def __repr__(self):
        return f"HamiltonianField({self.expr})"


class NormalizedField:
    """A field shifted by its spatial mean at each time."""

    def __init__(self, base: HamiltonianField, resolution: int = 64):
        if not base.space.is_compact:
            raise NonCompact(
                "normalization integrates over the phase space; euclidean "
                "factors have no finite volume (keep the base path "
                "convention instead)")
        self.base = base
        self.space = base.space
        points, weights = base.space.quadrature_grid(resolution)
        self._points = points
        self._weights = weights / weights.sum()

    def spatial_mean(self, t) -> float:
        values = self.base.value(float(t), self._points)
        return float(values @ self._weights)

    def value(self, t, points) -> np.ndarray:
        t_arr = np.asarray(t, dtype=float)
        base = self.base.value(t, points)
        if t_arr.ndim == 0:
            return base - self.spatial_mean(t_arr)
        means = np.array([self.spatial_mean(v) for v in t_arr.reshape(-1)])
        return base - means.reshape(t_arr.shape)

    # the shift is constant in space at fixed time, so the dynamics and
    # the gradient are untouched
    def gradient(self, t, points) -> np.ndarray:
        return self.base.gradient(t, points)

    def vector_field(self, t, points) -> np.ndarray:
        return self.base.vector_field(t, points)


def normalize(H: HamiltonianField, resolution: int = 64) -> NormalizedField:
    return NormalizedField(H, resolution)


@dataclass(frozen=True)
class HoferNorms:
    e_minus: float
    e_plus: float
    norm: float


def _axis_resolution(resolution: int, param_dim: int) -> int:
    cap = max(5, int(round(40_000 ** (1.0 / param_dim))))
    return max(5, min(int(resolution), cap))


def _scan(H, space: PhaseSpace, box, per_axis: int, t: float,
          sign: float) -> tuple[float, np.ndarray]:
    axes = [np.linspace(lo, hi, per_axis) for lo, hi in box]
    mesh = np.meshgrid(*axes, indexing="ij")
    params = np.stack([m.ravel() for m in mesh], axis=-1)
    values = sign * H.value(t, space.embed(params))
    best = int(np.argmax(values))
    return float(values[best]), params[best]


def _extremum(H, space: PhaseSpace, box, per_axis: int, rounds: int,
              t: float, sign: float) -> float:
    outer = list(box)
    current = list(box)
    best_value, best_param = _scan(H, space, current, per_axis, t, sign)
    for _ in range(rounds):
        next_box = []
        for i, (lo, hi) in enumerate(current):
            width = (hi - lo) / (per_axis - 1)
            center = best_param[i]
            next_box.append((max(outer[i][0], center - 1.5 * width),
                             min(outer[i][1], center + 1.5 * width)))
        current = next_box
        value, param = _scan(H, space, current, per_axis, t, sign)
        if value > best_value:
            best_value, best_param = value, param
    return sign * best_value


def hofer_norms(H, box: Box | None = None, resolution: int = 33,
                time_nodes: int = 65, refine_rounds: int = 3) -> HoferNorms:
    """E-, E+, and the Hofer norm of a Hamiltonian.

    Spatial extrema per time node come from a refined parameter scan;
    the time integral is a uniform trapezoid over [0, 1].  The returned
    norm is e_minus + e_plus by definition.
    """
    space = H.space
    pbox = space.param_box(box)
    per_axis = _axis_resolution(resolution, len(pbox))
    t_nodes = np.linspace(0.0, 1.0, int(time_nodes))
    maxima = np.empty_like(t_nodes)
    minima = np.empty_like(t_nodes)
    for j, t in enumerate(t_nodes):
        maxima[j] = _extremum(H, space, pbox, per_axis, refine_rounds,
                              float(t), 1.0)
        minima[j] = _extremum(H, space, pbox, per_axis, refine_rounds,
                              float(t), -1.0)
    e_plus = float(np.trapezoid(maxima, t_nodes))
    e_minus = float(np.trapezoid(-minima, t_nodes))
    return HoferNorms(e_minus=e_minus, e_plus=e_plus,
                      norm=e_minus + e_plus)
