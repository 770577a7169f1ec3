"""Torus fibers of toric models: disk potentials and torsion thresholds.

A moment model is a rational polytope given by facet inequalities
<normal, u> >= offset with primitive integer normals.  Product models for
spheres, projective spaces, and the open cylinder factor are built from
named constructors.  A fiber over an interior point u carries one
holomorphic disk class per facet, with boundary class the facet normal
and symplectic area the facet distance

    area_j(u) = <normal_j, u> - offset_j > 0.

The Floer differential of the fiber at the trivial bounding datum is
interior contraction on the exterior algebra of the boundary lattice by
the covector

    w_i = sum_j T^(area_j(u)) * (normal_j)_i,

one summand per disk class, all with coefficient +1: opposite facets of a
sphere factor contribute opposite boundary classes, which is exactly how
the two hemisphere disks cancel or survive.  Contraction squares to zero,
so every fiber yields a cochain complex over the bounded Novikov subring
whose aggregate decomposition gives the free rank and torsion exponents.
The torsion threshold of that decomposition is a lower bound for the
displacement energy of the fiber.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import EmptyInterior, FiberOnBoundary
from .novikov import NovikovElement, default_truncation
from .rationals import INFINITE, Level, as_level, is_infinite
from .valmat import (
    ChainComplex,
    ModuleDecomposition,
    NovikovMatrix,
    decompose,
    torsion_threshold,
)


@dataclass(frozen=True)
class Facet:
    """Half-space <normal, u> >= offset.

    kind "closed" marks facets of a compact factor; "open" marks the
    single facet of a cylinder factor, whose opposite side runs off to
    infinity.  Both kinds bound one disk class; the kind only matters
    for boundedness bookkeeping.
    """

    normal: tuple[int, ...]
    offset: Fraction
    kind: str = "closed"

    def __post_init__(self):
        object.__setattr__(self, "normal", tuple(int(c) for c in self.normal))
        object.__setattr__(self, "offset", Fraction(self.offset))
        if self.kind not in ("closed", "open"):
            raise ValueError(f"facet kind must be closed or open, got {self.kind!r}")
        if not self.normal or math.gcd(*(abs(c) for c in self.normal)) != 1:
            raise ValueError(f"facet normal {self.normal} is not primitive")


@dataclass(frozen=True)
class MomentModel:
    """Rational polytope with named factor structure for reporting."""

    dim: int
    facets: tuple[Facet, ...]
    description: str = ""

    def __post_init__(self):
        object.__setattr__(self, "facets", tuple(self.facets))
        for facet in self.facets:
            if len(facet.normal) != self.dim:
                raise ValueError("facet dimension mismatch")

    def slacks(self, point: Sequence[Fraction]) -> tuple[Fraction, ...]:
        point = tuple(Fraction(x) for x in point)
        if len(point) != self.dim:
            raise ValueError(f"point has dimension {len(point)}, model {self.dim}")
        return tuple(
            sum(n * x for n, x in zip(facet.normal, point)) - facet.offset
            for facet in self.facets)

    def is_interior(self, point: Sequence[Fraction]) -> bool:
        return all(s > 0 for s in self.slacks(point))


def sphere_factor(area) -> MomentModel:
    """Sphere of total area a: interval [0, a], hemisphere areas u, a-u."""
    area = Fraction(area)
    if area <= 0:
        raise ValueError("sphere area must be positive")
    return MomentModel(
        dim=1,
        facets=(Facet((1,), Fraction(0)), Facet((-1,), -area)),
        description=f"S2({area})",
    )


def projective_factor(k: int, size) -> MomentModel:
    """Projective k-space scaled to line class size: the simplex
    {u_i >= 0, sum u_i <= size}."""
    size = Fraction(size)
    k = int(k)
    if k < 1 or size <= 0:
        raise ValueError("projective factor needs k >= 1 and positive size")
    unit = [0] * k
    facets = []
    for i in range(k):
        normal = unit.copy()
        normal[i] = 1
        facets.append(Facet(tuple(normal), Fraction(0)))
    facets.append(Facet((-1,) * k, -size))
    return MomentModel(dim=k, facets=tuple(facets),
                       description=f"CP{k}({size})")


def cylinder_factor() -> MomentModel:
    """Open complex-line factor: half line u >= 0, a single facet whose
    circle of radius-squared u bounds one disk of area u."""
    return MomentModel(dim=1, facets=(Facet((1,), Fraction(0), "open"),),
                       description="C")


def product(*models: MomentModel) -> MomentModel:
    """Product model: facet normals padded into the joint coordinates."""
    total_dim = sum(m.dim for m in models)
    facets = []
    offset_dim = 0
    for model in models:
        for facet in model.facets:
            normal = (0,) * offset_dim + facet.normal \
                + (0,) * (total_dim - offset_dim - model.dim)
            facets.append(Facet(normal, facet.offset, facet.kind))
        offset_dim += model.dim
    description = " x ".join(m.description or "?" for m in models)
    return MomentModel(dim=total_dim, facets=tuple(facets),
                       description=description)


@dataclass(frozen=True)
class DiskClass:
    """Maslov-index-two disk through the fiber: boundary class and area."""

    boundary: tuple[int, ...]
    area: Fraction
    facet_index: int


def facet_areas(model: MomentModel, fiber: Sequence) -> tuple[Fraction, ...]:
    """Exact facet distances; positive on the interior.

    Raises FiberOnBoundary when any distance fails to be positive.
    """
    slacks = model.slacks(fiber)
    for index, value in enumerate(slacks):
        if value <= 0:
            raise FiberOnBoundary(
                f"facet {index} has nonpositive area {value} at {tuple(fiber)}")
    return slacks


def enumerate_disks(model: MomentModel, fiber: Sequence) -> tuple[DiskClass, ...]:
    areas = facet_areas(model, fiber)
    return tuple(
        DiskClass(boundary=facet.normal, area=area, facet_index=index)
        for index, (facet, area) in enumerate(zip(model.facets, areas)))


def potential(model: MomentModel, fiber: Sequence) -> NovikovElement:
    """Sum of T^area over the disk classes (an exact element)."""
    return NovikovElement(
        (Fraction(1), disk.area, 0) for disk in enumerate_disks(model, fiber))


def boundary_covector(model: MomentModel, fiber: Sequence,
                      trunc: Level | None = None
                      ) -> tuple[NovikovElement, ...]:
    """The contraction covector w with w_i = sum_j T^(area_j) normal_j[i].

    Components cancel exactly when facet areas balance, e.g. over the
    equator of a sphere factor.
    """
    disks = enumerate_disks(model, fiber)
    if trunc is None:
        trunc = default_truncation(disk.area for disk in disks)
    level = as_level(trunc)
    components = []
    for i in range(model.dim):
        components.append(NovikovElement(
            ((Fraction(disk.boundary[i]), disk.area, 0)
             for disk in disks if disk.boundary[i] != 0), level))
    return tuple(components)


@dataclass(frozen=True)
class FloerModel:
    """Koszul contraction complex of the covector at a fiber."""

    model: MomentModel
    fiber: tuple[Fraction, ...]
    covector: tuple[NovikovElement, ...]
    complex: ChainComplex


def _contraction_matrix(covector: Sequence[NovikovElement], degree: int,
                        trunc: Level) -> NovikovMatrix:
    """Matrix of interior contraction from exterior degree d to d - 1."""
    n = len(covector)
    sources = list(itertools.combinations(range(n), degree))
    targets = list(itertools.combinations(range(n), degree - 1))
    index = {subset: row for row, subset in enumerate(targets)}
    zero = NovikovElement.zero()
    grid = [[zero] * len(sources) for _ in targets]
    for col, subset in enumerate(sources):
        for position, i in enumerate(subset):
            rest = subset[:position] + subset[position + 1:]
            sign = -1 if position % 2 else 1
            entry = covector[i] if sign == 1 else -covector[i]
            row = index[rest]
            grid[row][col] = grid[row][col] + entry
    return NovikovMatrix(grid, trunc,
                         shape=(len(targets), len(sources)))


def floer_model(model: MomentModel, fiber: Sequence,
                trunc: Level | None = None) -> FloerModel:
    """Assemble the contraction complex in all exterior degrees.

    Cochain degree k holds exterior degree n - k, so the contraction,
    which lowers exterior degree, raises cochain degree.
    """
    covector = boundary_covector(model, fiber, trunc)
    level = min((w.trunc for w in covector), default=INFINITE)
    n = model.dim
    ranks = [math.comb(n, n - k) for k in range(n + 1)]
    differentials = [
        _contraction_matrix(covector, n - k, level) for k in range(n)
    ]
    return FloerModel(
        model=model,
        fiber=tuple(Fraction(x) for x in fiber),
        covector=covector,
        complex=ChainComplex(ranks, differentials),
    )


def floer_cohomology(model: MomentModel, fiber: Sequence,
                     trunc: Level | None = None) -> ModuleDecomposition:
    """Aggregate decomposition over all degrees: free rank 2^n exactly
    when the covector vanishes, torsion exponents otherwise."""
    return decompose(floer_model(model, fiber, trunc).complex)


def torsion_threshold_at(model: MomentModel, fiber: Sequence,
                         trunc: Level | None = None) -> Level:
    return torsion_threshold(floer_cohomology(model, fiber, trunc))


def displacement_bound(model: MomentModel, fiber: Sequence,
                       trunc: Level | None = None) -> Level:
    """Lower bound for the displacement energy of the fiber: its torsion
    threshold (+inf means the fiber is non-displaceable)."""
    return torsion_threshold_at(model, fiber, trunc)


# -- optimization over the fiber location --------------------------------

def _solve_square(rows: list[list[Fraction]], rhs: list[Fraction]
                  ) -> list[Fraction] | None:
    """Exact Gaussian elimination; None for singular systems."""
    n = len(rows)
    work = [row[:] + [value] for row, value in zip(rows, rhs)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot_row is None:
            return None
        work[col], work[pivot_row] = work[pivot_row], work[col]
        pivot = work[col][col]
        work[col] = [value / pivot for value in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [a - factor * b
                           for a, b in zip(work[r], work[col])]
    return [work[r][n] for r in range(n)]


def _vertices(model: MomentModel) -> list[tuple[Fraction, ...]]:
    points = set()
    facets = model.facets
    for subset in itertools.combinations(range(len(facets)), model.dim):
        rows = [list(map(Fraction, facets[i].normal)) for i in subset]
        rhs = [facets[i].offset for i in subset]
        solution = _solve_square(rows, rhs)
        if solution is None:
            continue
        if all(s >= 0 for s in model.slacks(solution)):
            points.add(tuple(solution))
    return sorted(points)


def coordinate_intervals(model: MomentModel, cap=None
                         ) -> list[tuple[Fraction, Fraction]]:
    """Exact per-coordinate bounds of the polytope.

    Directions in which the polytope recedes along a coordinate axis
    (every normal component of one sign, as for cylinder factors) are
    capped by the required ``cap`` argument.
    """
    vertices = _vertices(model)
    if not vertices:
        raise EmptyInterior("the polytope has no vertices")
    intervals = []
    for i in range(model.dim):
        values = [v[i] for v in vertices]
        lo, hi = min(values), max(values)
        if all(f.normal[i] >= 0 for f in model.facets):
            if cap is None:
                raise ValueError(
                    f"coordinate {i} is unbounded above; pass a cap")
            hi = max(hi, Fraction(cap))
        if all(f.normal[i] <= 0 for f in model.facets):
            if cap is None:
                raise ValueError(
                    f"coordinate {i} is unbounded below; pass a cap")
            lo = min(lo, -Fraction(cap))
        intervals.append((lo, hi))
    return intervals


@dataclass(frozen=True)
class ThresholdSearch:
    """Best fiber found by grid search plus coordinate refinement."""

    fiber: tuple[Fraction, ...]
    value: Level
    resolution: int
    non_displaceable: bool


def optimize_threshold(model: MomentModel, resolution: int = 8,
                       cap=None, refine_rounds: int = 2,
                       trunc: Level | None = None) -> ThresholdSearch:
    """Maximize the torsion threshold over interior grid fibers.

    The grid subdivides each coordinate interval into ``resolution``
    parts (nested grids, so doubling the resolution never lowers the
    result).  A fiber with vanishing covector short-circuits the search
    with value +inf.  Refinement rounds run coordinate descent on
    successively halved windows around the incumbent.
    """
    if resolution < 1:
        raise ValueError("resolution must be positive")
    intervals = coordinate_intervals(model, cap)

    def evaluate(point) -> Level:
        return torsion_threshold_at(model, point, trunc)

    best_point = None
    best_value = None
    axes = [
        [lo + (hi - lo) * Fraction(j, resolution)
         for j in range(1, resolution)]
        for lo, hi in intervals
    ]
    for candidate in itertools.product(*axes):
        if not model.is_interior(candidate):
            continue
        covector = boundary_covector(model, candidate, trunc)
        if all(w.is_zero() for w in covector):
            return ThresholdSearch(fiber=tuple(candidate), value=INFINITE,
                                   resolution=resolution,
                                   non_displaceable=True)
        value = evaluate(candidate)
        if best_value is None or value > best_value:
            best_point, best_value = tuple(candidate), value
    if best_point is None:
        raise EmptyInterior(
            f"no interior grid point at resolution {resolution}")

    for round_index in range(1, refine_rounds + 1):
        for axis in range(model.dim):
            lo, hi = intervals[axis]
            window = (hi - lo) / (resolution * 2 ** round_index)
            for step in range(-resolution, resolution + 1):
                moved = list(best_point)
                moved[axis] = best_point[axis] + window * step
                if not (lo < moved[axis] < hi) or not model.is_interior(moved):
                    continue
                value = evaluate(moved)
                if value > best_value:
                    best_point, best_value = tuple(moved), value
    return ThresholdSearch(fiber=best_point, value=best_value,
                           resolution=resolution,
                           non_displaceable=is_infinite(best_value))


# -- JSON codec -----------------------------------------------------------

def model_to_json(model: MomentModel) -> dict:
    return {
        "dim": model.dim,
        "facets": [
            {"normal": list(f.normal), "offset": str(f.offset),
             "kind": f.kind}
            for f in model.facets
        ],
        "description": model.description,
    }


def model_from_json(data: dict) -> MomentModel:
    facets = tuple(
        Facet(tuple(entry["normal"]), Fraction(entry["offset"]),
              entry.get("kind", "closed"))
        for entry in data["facets"])
    return MomentModel(dim=int(data["dim"]), facets=facets,
                       description=data.get("description", ""))


_FACTOR_KEYS = ("sphere", "cp", "cylinder")


def model_from_factors(spec: Iterable[dict]) -> MomentModel:
    """Shorthand: [{"sphere": "3/2"}, {"cp": {"k": 2, "lambda": "10"}},
    {"cylinder": true}] builds the product in order."""
    factors = []
    for entry in spec:
        keys = [key for key in _FACTOR_KEYS if key in entry]
        if len(keys) != 1:
            raise ValueError(f"factor {entry!r} must name exactly one of "
                             f"{_FACTOR_KEYS}")
        key = keys[0]
        if key == "sphere":
            factors.append(sphere_factor(Fraction(entry["sphere"])))
        elif key == "cp":
            blob = entry["cp"]
            factors.append(projective_factor(int(blob["k"]),
                                             Fraction(blob["lambda"])))
        else:
            factors.append(cylinder_factor())
    if not factors:
        raise ValueError("empty factor list")
    return product(*factors)
