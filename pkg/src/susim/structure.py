"""Structural form check for partitioned matrix collections.

Both sides of a problem are repeatedly conjugated so that, relative to the
current row and column partitions, every matrix should look like this:

* similarity mode: diagonal cells are scalar multiples of the identity with
  the same scalar on both sides; every other square cell is a scalar
  multiple of a unitary with the same squared amplitude ``r`` on both
  sides; non-square cells are zero,
* equivalence mode: the same without the diagonal rule because every cell
  relates a row class to a column class.

:func:`check_presolution` scans all cells in a fixed order (matrix index
``l`` outer, then row class, then column class, A side before B side) and
returns the first deviation.  A deviation is either a
:class:`ScalarMismatch` (two scalars that should agree do not, which is
already a disproof) or a :class:`Violation` naming the Hermitian functional
whose eigenspaces will drive the next refinement.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .blocking import Partition, submatrix
from .linalg import (
    Matrix,
    Tolerances,
    adjoint,
    close_scalars,
    fro,
    identity_multiple,
    is_zero,
    unitary_multiple,
)

__all__ = [
    "Violation",
    "ScalarMismatch",
    "PreSolutionReport",
    "check_presolution",
    "HERM_REAL",
    "HERM_IMAG",
    "GRAM_LEFT",
    "GRAM_RIGHT",
    "PR_NORMAL",
]

HERM_REAL = "herm_real"
HERM_IMAG = "herm_imag"
GRAM_LEFT = "gram_left"
GRAM_RIGHT = "gram_right"
PR_NORMAL = "pr_normal"


@dataclass(frozen=True)
class Violation:
    """A cell that breaks the expected form, with the refinement recipe.

    ``functional`` names the Hermitian (or normal) matrix derived from the
    cell whose eigenspaces refine the partition; ``touch`` is the partition
    class it refines, as an axis/class pair.  In similarity mode the row and
    column axes address the same partition.
    """

    functional: str
    at: tuple[int, int, int]
    touch: tuple[str, int]


@dataclass(frozen=True)
class ScalarMismatch:
    """Two scalars forced to be equal by any solution, found unequal."""

    target: str
    at: tuple[int, int, int]
    a_value: complex
    b_value: complex


@dataclass(frozen=True)
class PreSolutionReport:
    """Outcome of the form scan plus the data read off when it passes."""

    status: str
    violation: Violation | None = None
    mismatch: ScalarMismatch | None = None
    diag_alphas: dict[tuple[int, int], complex] = field(default_factory=dict)
    cell_scales_a: dict[tuple[int, int, int], float] = field(default_factory=dict)
    cell_scales_b: dict[tuple[int, int, int], float] = field(default_factory=dict)


def _gram_choice(cell: Matrix, ctx: float, tol: Tolerances, i: int, j: int) -> Violation | None:
    """Pick the Gram functional that actually separates eigenvalues.

    The left Gram ``M M*`` refines the row class, the right Gram ``M* M``
    the column class.  Prefer the left one unless it is itself a scalar
    matrix, which for a nonzero non-square cell forces the right one to be
    non-scalar.  Returns only the functional and touched class; the caller
    fills in the cell address.
    """
    left = cell @ adjoint(cell)
    if identity_multiple(left, tol, ctx * ctx) is None:
        return Violation(GRAM_LEFT, (-1, i, j), ("row", i))
    return Violation(GRAM_RIGHT, (-1, i, j), ("col", j))


def _diag_choice(cell: Matrix, ctx: float, tol: Tolerances, i: int) -> Violation:
    """Pick the Hermitian part of a non-scalar diagonal cell that is non-scalar."""
    herm = (cell + adjoint(cell)) / 2.0
    if identity_multiple(herm, tol, ctx) is None:
        return Violation(HERM_REAL, (-1, i, i), ("row", i))
    return Violation(HERM_IMAG, (-1, i, i), ("row", i))


def _with_index(v: Violation, l: int) -> Violation:
    return Violation(v.functional, (l, v.at[1], v.at[2]), v.touch)


def check_presolution(
    a_mats: list[Matrix],
    b_mats: list[Matrix],
    rows: Partition,
    cols: Partition,
    mode: str,
    tol: Tolerances,
) -> PreSolutionReport:
    """Scan both collections for the expected block structure.

    ``mode`` is ``"sus"`` (similarity, one shared partition) or ``"sueq"``
    (equivalence, independent partitions).  Returns the first deviation in
    scan order, or a passing report carrying the diagonal scalars and the
    squared amplitudes of the nonzero square cells on each side.
    """
    if mode not in ("sus", "sueq"):
        raise ValueError(f"unknown mode {mode!r}")
    diag_alphas: dict[tuple[int, int], complex] = {}
    scales_a: dict[tuple[int, int, int], float] = {}
    scales_b: dict[tuple[int, int, int], float] = {}
    for l, (a, b) in enumerate(zip(a_mats, b_mats)):
        ctx_a, ctx_b = fro(a), fro(b)
        ctx = max(ctx_a, ctx_b)
        for i in range(rows.count):
            for j in range(cols.count):
                ca = submatrix(a, rows, i, cols, j)
                cb = submatrix(b, rows, i, cols, j)
                square = rows.sizes[i] == cols.sizes[j]
                if mode == "sus" and i == j:
                    alpha_a = identity_multiple(ca, tol, ctx_a)
                    if alpha_a is None:
                        return PreSolutionReport(
                            "violation", violation=_with_index(_diag_choice(ca, ctx_a, tol, i), l)
                        )
                    alpha_b = identity_multiple(cb, tol, ctx_b)
                    if alpha_b is None:
                        return PreSolutionReport(
                            "violation", violation=_with_index(_diag_choice(cb, ctx_b, tol, i), l)
                        )
                    if not close_scalars(alpha_a, alpha_b, tol, context=ctx):
                        return PreSolutionReport(
                            "mismatch",
                            mismatch=ScalarMismatch("diag_alpha", (l, i, i), alpha_a, alpha_b),
                        )
                    diag_alphas[(l, i)] = alpha_a
                elif square:
                    ra = unitary_multiple(ca, tol, ctx_a)
                    if ra is None:
                        return PreSolutionReport(
                            "violation",
                            violation=_with_index(_gram_choice(ca, ctx_a, tol, i, j), l),
                        )
                    rb = unitary_multiple(cb, tol, ctx_b)
                    if rb is None:
                        return PreSolutionReport(
                            "violation",
                            violation=_with_index(_gram_choice(cb, ctx_b, tol, i, j), l),
                        )
                    if not close_scalars(ra, rb, tol, context=ctx * ctx):
                        return PreSolutionReport(
                            "violation", violation=Violation(GRAM_LEFT, (l, i, j), ("row", i))
                        )
                    if ra > 0.0:
                        scales_a[(l, i, j)] = ra
                        scales_b[(l, i, j)] = rb
                else:
                    if not is_zero(ca, tol, ctx_a):
                        return PreSolutionReport(
                            "violation",
                            violation=_with_index(_gram_choice(ca, ctx_a, tol, i, j), l),
                        )
                    if not is_zero(cb, tol, ctx_b):
                        return PreSolutionReport(
                            "violation",
                            violation=_with_index(_gram_choice(cb, ctx_b, tol, i, j), l),
                        )
    return PreSolutionReport(
        "ok",
        diag_alphas=diag_alphas,
        cell_scales_a=scales_a,
        cell_scales_b=scales_b,
    )
