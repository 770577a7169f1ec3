"""Hamiltonian flows and the gauge transformations between Floer pictures.

Flows integrate dx/dt = X_H(t, x) with fixed-step classical Runge-Kutta,
vectorized over point batches, re-projecting onto constraint manifolds
(sphere factors) after every step.  Gauge transformations move whole
paths and strips through flow compositions:

    first argument:   l(t) = phi^t (phi^1)^{-1} (l'(t))
    second argument:  l(t) = phi^(1-t) (phi^1)^{-1} (l'(t))

Each transform costs two sweeps over [0, 1] regardless of how many
points ride along: one backward sweep applying (phi^1)^{-1} to every
sample at once, then one forward sweep that drops each time slice off at
its own extraction time.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..errors import StepFailure


def _rk4_segment(H, points: np.ndarray, t0: float, t1: float,
                 max_step: float) -> np.ndarray:
    """Integrate the batch from t0 to t1 (either direction)."""
    span = t1 - t0
    if span == 0.0 or points.size == 0:
        return points
    steps = max(1, math.ceil(abs(span) / max_step))
    h = span / steps
    project = H.space.project
    t = t0
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(steps):
            k1 = H.vector_field(t, points)
            k2 = H.vector_field(t + h / 2, points + (h / 2) * k1)
            k3 = H.vector_field(t + h / 2, points + (h / 2) * k2)
            k4 = H.vector_field(t + h, points + h * k3)
            points = project(points + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4))
            t += h
            if not np.all(np.isfinite(points)):
                raise StepFailure(f"flow blew up near t = {t:.6g}")
    return points


def flow(H, t: float, point, max_step: float = 1e-3, t0: float = 0.0
         ) -> np.ndarray:
    """phi_H^t applied to a point or a batch of points (from time t0)."""
    arr = np.asarray(point, dtype=float)
    batch = arr.reshape(-1, H.space.dim)
    out = _rk4_segment(H, batch, float(t0), float(t), max_step)
    return out.reshape(arr.shape)


def transport_to_zero(H, columns: Sequence[np.ndarray],
                      times: Sequence[float], max_step: float = 1e-3
                      ) -> list[np.ndarray]:
    """Carry column i from its own start time times[i] back to time 0.

    One descending sweep: columns join the active batch as the sweep
    passes their start times.
    """
    order = sorted(range(len(columns)), key=lambda i: -float(times[i]))
    active: list[np.ndarray] = []
    labels: list[int] = []
    current = None
    for i in order:
        target = float(times[i])
        if current is None:
            current = target
        elif target < current:
            if active:
                moved = _rk4_segment(H, np.concatenate(active), current,
                                     target, max_step)
                active = list(np.split(moved, np.cumsum(
                    [a.shape[0] for a in active])[:-1]))
            current = target
        active.append(np.asarray(columns[i], dtype=float))
        labels.append(i)
    if current is None:
        return []
    if current != 0.0 and active:
        moved = _rk4_segment(H, np.concatenate(active), current, 0.0,
                             max_step)
        active = list(np.split(moved, np.cumsum(
            [a.shape[0] for a in active])[:-1]))
    result: list[np.ndarray] = [None] * len(columns)
    for label, block in zip(labels, active):
        result[label] = block
    return result


def transport_from_zero(H, columns: Sequence[np.ndarray],
                        times: Sequence[float], max_step: float = 1e-3
                        ) -> list[np.ndarray]:
    """Carry all columns forward from time 0, extracting column i at
    times[i].  One ascending sweep."""
    order = sorted(range(len(columns)), key=lambda i: float(times[i]))
    result: list[np.ndarray] = [None] * len(columns)
    active = [np.asarray(columns[i], dtype=float) for i in order]
    current = 0.0
    for rank, i in enumerate(order):
        target = float(times[i])
        if target > current:
            tail = np.concatenate(active[rank:])
            moved = _rk4_segment(H, tail, current, target, max_step)
            sizes = np.cumsum([a.shape[0] for a in active[rank:]])[:-1]
            active[rank:] = list(np.split(moved, sizes))
            current = target
        result[i] = active[rank]
    return result


def _columns_of(points: np.ndarray) -> list[np.ndarray]:
    # grid (ns, nt, dim) -> one column of ns points per time node
    return [points[:, j, :] for j in range(points.shape[1])]


def _grid_of(columns: Sequence[np.ndarray]) -> np.ndarray:
    return np.stack(columns, axis=1)


def _extraction_times(which: str, t_nodes: np.ndarray) -> np.ndarray:
    if which == "first":
        return t_nodes
    if which == "second":
        return 1.0 - t_nodes
    raise ValueError("which must be 'first' or 'second'")


def gauge_plus(H, which: str, points: np.ndarray, t_nodes=None,
               max_step: float = 1e-3) -> np.ndarray:
    """Transform a path (nt, dim) or strip grid (ns, nt, dim) sampled on
    t_nodes (uniform on [0, 1] when omitted)."""
    arr = np.asarray(points, dtype=float)
    path = arr.ndim == 2
    grid = arr[None, :, :] if path else arr
    nt = grid.shape[1]
    t_nodes = (np.linspace(0.0, 1.0, nt) if t_nodes is None
               else np.asarray(t_nodes, dtype=float))
    columns = _columns_of(grid)
    at_zero = transport_to_zero(H, columns, [1.0] * nt, max_step)
    moved = transport_from_zero(H, at_zero,
                                _extraction_times(which, t_nodes), max_step)
    out = _grid_of(moved)
    return out[0] if path else out


def gauge_minus(H, which: str, points: np.ndarray, t_nodes=None,
                max_step: float = 1e-3) -> np.ndarray:
    """Inverse of gauge_plus on the same grid."""
    arr = np.asarray(points, dtype=float)
    path = arr.ndim == 2
    grid = arr[None, :, :] if path else arr
    nt = grid.shape[1]
    t_nodes = (np.linspace(0.0, 1.0, nt) if t_nodes is None
               else np.asarray(t_nodes, dtype=float))
    columns = _columns_of(grid)
    at_zero = transport_to_zero(H, columns,
                                _extraction_times(which, t_nodes), max_step)
    moved = transport_from_zero(H, at_zero, [1.0] * nt, max_step)
    out = _grid_of(moved)
    return out[0] if path else out
