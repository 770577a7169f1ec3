"""Linear algebra over the bounded Novikov subring.

The bounded subring is a valuation ring: among finitely many elements the
one of smallest valuation divides all the others.  That makes a Smith-type
normal form reachable with a single clearing pass per pivot, and gives
finitely generated cohomology modules the shape

    (free part)^a  (+)  sum_i  (bounded subring) / T^(lambda_i)

with well-defined torsion exponents lambda_i > 0.  This module computes
that decomposition for explicit cochain complexes and derives the
quantities built from it: the count of torsion exponents surviving a
positive level, the resulting intersection-number floor, the torsion
threshold, and the stability comparison of two decompositions.

Matrices are dense and immutable, and all entries share one truncation
level, so a decomposition is exact whenever its exponents lie below that
level.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import NotAComplex, PrecisionExhausted
from .novikov import NovikovElement, divide_exact, parse
from .rationals import INFINITE, Level, as_level, format_level, is_infinite


class NovikovMatrix:
    """Immutable dense matrix of Novikov elements sharing one truncation."""

    __slots__ = ("rows", "cols", "entries", "trunc")

    def __init__(self, entries: Sequence[Sequence], trunc: Level | None = None,
                 shape: tuple[int, int] | None = None):
        grid = [[parse(value) for value in row] for row in entries]
        rows = len(grid)
        cols = len(grid[0]) if rows else 0
        if shape is not None:
            # only needed to give empty matrices an explicit shape
            if rows and (rows, cols) != shape:
                raise ValueError(f"entries disagree with shape {shape}")
            rows, cols = shape
        if any(len(row) != cols for row in grid):
            raise ValueError("ragged matrix")
        level = INFINITE if trunc is None else as_level(trunc)
        for row in grid:
            for value in row:
                level = min(level, value.trunc)
        grid = tuple(
            tuple(value.retruncate(level) for value in row) for row in grid)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", grid)
        object.__setattr__(self, "trunc", level)

    def __setattr__(self, name, value):
        raise AttributeError("NovikovMatrix is immutable")

    @classmethod
    def identity(cls, size: int, trunc: Level = INFINITE) -> "NovikovMatrix":
        one = NovikovElement.one()
        zero = NovikovElement.zero()
        return cls([[one if i == j else zero for j in range(size)]
                    for i in range(size)], trunc)

    @classmethod
    def zeros(cls, rows: int, cols: int, trunc: Level = INFINITE) -> "NovikovMatrix":
        zero = NovikovElement.zero()
        return cls([[zero] * cols for _ in range(rows)], trunc,
                   shape=(rows, cols))

    def entry(self, i: int, j: int) -> NovikovElement:
        return self.entries[i][j]

    def with_entry(self, i: int, j: int, value) -> "NovikovMatrix":
        grid = [list(row) for row in self.entries]
        grid[i][j] = parse(value)
        return NovikovMatrix(grid, self.trunc)

    def __mul__(self, other: "NovikovMatrix") -> "NovikovMatrix":
        if not isinstance(other, NovikovMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} x {other.shape}")
        grid = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = NovikovElement.zero()
                for k in range(self.cols):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            grid.append(row)
        return NovikovMatrix(grid, shape=(self.rows, other.cols))

    def __sub__(self, other: "NovikovMatrix") -> "NovikovMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return NovikovMatrix(
            [[self.entries[i][j] - other.entries[i][j]
              for j in range(self.cols)] for i in range(self.rows)],
            shape=self.shape)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NovikovMatrix):
            return NotImplemented
        return self.entries == other.entries and self.trunc == other.trunc

    def __hash__(self) -> int:
        return hash((self.entries, self.trunc))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero_below_truncation(self) -> bool:
        """True when every entry vanishes below the shared level."""
        return all(value.valuation() >= self.trunc
                   for row in self.entries for value in row)

    def diagonal(self) -> tuple[NovikovElement, ...]:
        return tuple(self.entries[k][k]
                     for k in range(min(self.rows, self.cols)))

    def __repr__(self) -> str:
        return f"<NovikovMatrix {self.rows}x{self.cols} mod T^{self.trunc}>"


@dataclass(frozen=True)
class SmithNormalForm:
    """u * matrix * v = diagonal, with u, v invertible over the subring."""

    u: NovikovMatrix
    diagonal: NovikovMatrix
    v: NovikovMatrix
    pivot_valuations: tuple[Fraction, ...]

    @property
    def rank(self) -> int:
        return len(self.pivot_valuations)


def smith_normal_form(matrix: NovikovMatrix) -> SmithNormalForm:
    """Diagonalize by valuation pivoting.

    Each round picks the entry of smallest valuation in the remaining
    block (ties broken by lowest (row, col)), moves it to the diagonal,
    and clears its row and column by exact division, which always
    succeeds because the pivot's valuation is minimal.  Diagonal entries
    come out with non-decreasing valuations and leading coefficient one.
    """
    work = [list(row) for row in matrix.entries]
    u = [list(row) for row in
         NovikovMatrix.identity(matrix.rows).entries]
    v = [list(row) for row in
         NovikovMatrix.identity(matrix.cols).entries]
    pivots: list[Fraction] = []

    for k in range(min(matrix.rows, matrix.cols)):
        pivot_pos = None
        pivot_val = INFINITE
        for i in range(k, matrix.rows):
            for j in range(k, matrix.cols):
                value = work[i][j].valuation()
                if value < pivot_val:
                    pivot_val = value
                    pivot_pos = (i, j)
        if pivot_pos is None:
            break
        pi, pj = pivot_pos
        if pi != k:
            work[k], work[pi] = work[pi], work[k]
            u[k], u[pi] = u[pi], u[k]
        if pj != k:
            for row in work:
                row[k], row[pj] = row[pj], row[k]
            for row in v:
                row[k], row[pj] = row[pj], row[k]

        pivot = work[k][k]
        # normalize the leading term to coefficient 1, e-exponent 0
        coeff, _, e_exp = pivot.leading_term()
        unit = NovikovElement.monomial(1 / coeff, 0, -e_exp)
        work[k] = [unit * value for value in work[k]]
        u[k] = [unit * value for value in u[k]]
        pivot = work[k][k]
        pivots.append(Fraction(pivot_val))

        # clear the pivot column with row operations
        for i in range(matrix.rows):
            if i == k or work[i][k].is_zero():
                continue
            factor = divide_exact(work[i][k], pivot)
            work[i] = [work[i][j] - factor * work[k][j]
                       for j in range(matrix.cols)]
            u[i] = [u[i][j] - factor * u[k][j]
                    for j in range(matrix.rows)]
        # the pivot column is now zero off the diagonal, so clearing the
        # pivot row only changes the row itself
        for j in range(matrix.cols):
            if j == k or work[k][j].is_zero():
                continue
            factor = divide_exact(work[k][j], pivot)
            for i in range(matrix.rows):
                work[i][j] = work[i][j] - factor * work[i][k]
            for i in range(matrix.cols):
                v[i][j] = v[i][j] - factor * v[i][k]

    return SmithNormalForm(
        u=NovikovMatrix(u),
        diagonal=NovikovMatrix(work, matrix.trunc),
        v=NovikovMatrix(v),
        pivot_valuations=tuple(pivots),
    )


class ChainComplex:
    """Finite cochain complex of free modules over the bounded subring.

    ranks[k] is the rank in degree k; differentials[k] maps degree k to
    degree k+1 and is given as a matrix with ranks[k+1] rows and ranks[k]
    columns.  Consecutive differentials must compose to zero below the
    shared truncation level.
    """

    __slots__ = ("ranks", "differentials", "trunc")

    def __init__(self, ranks: Sequence[int],
                 differentials: Sequence[NovikovMatrix]):
        ranks = tuple(int(r) for r in ranks)
        differentials = tuple(differentials)
        if len(differentials) != max(len(ranks) - 1, 0):
            raise ValueError("need exactly one differential per adjacent "
                             "pair of degrees")
        for k, matrix in enumerate(differentials):
            if matrix.shape != (ranks[k + 1], ranks[k]):
                raise ValueError(
                    f"differential {k} has shape {matrix.shape}, "
                    f"expected {(ranks[k + 1], ranks[k])}")
        level = min((m.trunc for m in differentials), default=INFINITE)
        object.__setattr__(self, "ranks", ranks)
        object.__setattr__(self, "differentials", differentials)
        object.__setattr__(self, "trunc", level)

    def __setattr__(self, name, value):
        raise AttributeError("ChainComplex is immutable")

    def top_degree(self) -> int:
        return len(self.ranks) - 1

    def validate(self) -> None:
        # truncating an honest complex leaves compositions with entries of
        # valuation at or above the shared level, so that is the tolerance
        for k in range(len(self.differentials) - 1):
            lower = self.differentials[k]
            upper = self.differentials[k + 1]
            if lower.rows == 0 or lower.cols == 0 or upper.rows == 0:
                continue
            composed = upper * lower
            if any(value.valuation() < self.trunc
                   for row in composed.entries for value in row):
                raise NotAComplex(
                    f"differentials {k} and {k + 1} do not compose to "
                    "zero below the truncation level")


@dataclass(frozen=True)
class ModuleDecomposition:
    """Free rank plus torsion exponents, sorted descending."""

    betti: int
    torsion: tuple[Fraction, ...]

    def __post_init__(self):
        ordered = tuple(sorted(self.torsion, reverse=True))
        object.__setattr__(self, "torsion", ordered)
        if any(value <= 0 for value in ordered):
            raise ValueError("torsion exponents must be positive")
        if self.betti < 0:
            raise ValueError("free rank must be nonnegative")


def decompose(complex_: ChainComplex, degree: int | None = None
              ) -> ModuleDecomposition:
    """Cohomology of the complex as free rank plus torsion exponents.

    In a single degree k the free rank is ranks[k] minus the ranks of the
    two adjacent differentials, and the torsion exponents are the positive
    pivot valuations of the incoming differential: its image sits inside
    the degree-k cocycles as a direct sum of multiples T^(lambda) of basis
    vectors, each contributing a cyclic summand of exponent lambda.  With
    degree=None the decompositions of all degrees are aggregated.
    """
    complex_.validate()
    forms = [smith_normal_form(matrix) for matrix in complex_.differentials]

    def single(k: int) -> ModuleDecomposition:
        incoming = forms[k - 1] if k >= 1 else None
        outgoing = forms[k] if k < len(forms) else None
        betti = complex_.ranks[k]
        torsion: list[Fraction] = []
        if incoming is not None:
            betti -= incoming.rank
            torsion = [value for value in incoming.pivot_valuations
                       if value > 0]
        if outgoing is not None:
            betti -= outgoing.rank
        if betti < 0:
            # the compositions vanish below the truncation level yet the
            # ranks overlap, so no exact complex truncates to this data;
            # only a higher level could tell what went wrong
            raise PrecisionExhausted(
                f"adjacent differentials overlap in degree {k}; "
                "raise the truncation level")
        return ModuleDecomposition(betti=betti, torsion=tuple(torsion))

    if degree is not None:
        if not 0 <= degree <= complex_.top_degree():
            raise ValueError(f"degree {degree} outside 0..{complex_.top_degree()}")
        return single(degree)

    betti = 0
    torsion: list[Fraction] = []
    for k in range(len(complex_.ranks)):
        piece = single(k)
        betti += piece.betti
        torsion.extend(piece.torsion)
    return ModuleDecomposition(betti=betti, torsion=tuple(torsion))


def b_count(decomposition: ModuleDecomposition, level) -> int:
    """Number of torsion exponents at or above the positive level."""
    level = Fraction(level)
    if level <= 0:
        raise ValueError("the counting level must be positive")
    return sum(1 for value in decomposition.torsion if value >= level)


def intersection_bound(decomposition: ModuleDecomposition, hofer_norm) -> int:
    """Lower bound for intersections of a Lagrangian with its image under
    a Hamiltonian diffeomorphism of the given Hofer norm: the free rank
    plus twice the torsion exponents surviving that norm."""
    return decomposition.betti + 2 * b_count(decomposition, hofer_norm)


def torsion_threshold(decomposition: ModuleDecomposition) -> Level:
    """Displacement-energy threshold read off a decomposition: +inf when
    a free part survives, the largest torsion exponent otherwise, zero
    for the vanishing module."""
    if decomposition.betti > 0:
        return INFINITE
    if decomposition.torsion:
        return decomposition.torsion[0]
    return Fraction(0)


def lipschitz_check(first: ModuleDecomposition,
                    second: ModuleDecomposition,
                    nu0) -> dict:
    """Stability comparison of two torsion ladders at distance nu0.

    For each index i with lambda_i > nu0 (exponents sorted descending)
    the second ladder must be at least i+1 long, and when both i-th
    exponents exceed nu0 they must differ by at most nu0.  Returns a
    report; never raises on failure.
    """
    nu0 = Fraction(nu0)
    checks = []
    passed = True
    for index, value in enumerate(first.torsion):
        if value <= nu0:
            continue
        survives = index < len(second.torsion)
        checks.append({
            "index": index,
            "kind": "survival",
            "ok": survives,
            "detail": f"lambda_{index} = {value} > {nu0} needs a partner",
        })
        passed = passed and survives
        if survives and second.torsion[index] > nu0:
            gap = abs(value - second.torsion[index])
            ok = gap <= nu0
            checks.append({
                "index": index,
                "kind": "distance",
                "ok": ok,
                "detail": f"|{value} - {second.torsion[index]}| = {gap} "
                          f"vs {nu0}",
            })
            passed = passed and ok
    return {"nu0": str(nu0), "checks": checks, "passed": passed}


# -- JSON codecs --------------------------------------------------------

def matrix_to_json(matrix: NovikovMatrix) -> dict:
    from .novikov import to_text
    return {
        "rows": matrix.rows,
        "cols": matrix.cols,
        "entries": [[to_text(value) for value in row]
                    for row in matrix.entries],
    }


def matrix_from_json(data: dict, trunc: Level | None = None) -> NovikovMatrix:
    entries = data["entries"]
    if len(entries) != data["rows"] or any(
            len(row) != data["cols"] for row in entries):
        raise ValueError("matrix JSON shape disagrees with entries")
    level = data.get("trunc")
    if trunc is not None:
        level = trunc
    matrix = NovikovMatrix(entries,
                           as_level(level) if level is not None else None)
    if matrix.rows == 0:
        return NovikovMatrix.zeros(data["rows"], data["cols"])
    return matrix


def complex_to_json(complex_: ChainComplex) -> dict:
    return {
        "ranks": list(complex_.ranks),
        "differentials": [matrix_to_json(m) for m in complex_.differentials],
        "trunc": format_level(complex_.trunc),
    }


def complex_from_json(data: dict, trunc: Level | None = None) -> ChainComplex:
    level = trunc if trunc is not None else data.get("trunc")
    matrices = []
    ranks = [int(r) for r in data["ranks"]]
    for index, blob in enumerate(data["differentials"]):
        if blob["rows"] == 0 or blob["cols"] == 0:
            matrix = NovikovMatrix.zeros(ranks[index + 1], ranks[index])
        else:
            matrix = matrix_from_json(blob, as_level(level)
                                      if level is not None else None)
        matrices.append(matrix)
    return ChainComplex(ranks, matrices)


def decomposition_to_json(decomposition: ModuleDecomposition) -> dict:
    return {
        "betti": decomposition.betti,
        "torsion": [str(value) for value in decomposition.torsion],
    }
