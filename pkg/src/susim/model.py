"""Problem instances, certificates and solver results.

An :class:`Instance` is two equally shaped tuples of complex matrices plus
the question being asked about them: ``"sus"`` for one unitary conjugating
every A matrix to its B partner, ``"sueq"`` for an independent unitary on
each side.  Solvers consume instances and produce a :class:`SolveResult`
that either carries the witness unitaries or a :class:`Certificate`, the
replayable refutation trail.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatch, SpecInvalid
from .linalg import Matrix
from .refine import PrPaths, RefinementStep

__all__ = ["Instance", "Certificate", "SolveResult", "SOLVED", "NOT_SIMILAR", "FAILED"]

SOLVED = "solved"
NOT_SIMILAR = "not_similar"
FAILED = "failed"


@dataclass(frozen=True)
class Instance:
    """A pair of matrix collections and the relation to decide."""

    mode: str
    a_mats: tuple[Matrix, ...]
    b_mats: tuple[Matrix, ...]
    name: str = ""

    def __post_init__(self) -> None:
        if self.mode not in ("sus", "sueq"):
            raise SpecInvalid(f"unknown mode {self.mode!r}")
        if len(self.a_mats) != len(self.b_mats):
            raise DimensionMismatch(
                f"collection sizes differ: {len(self.a_mats)} vs {len(self.b_mats)}"
            )
        if not self.a_mats:
            raise SpecInvalid("empty collection")
        shape = self.a_mats[0].shape
        for m in (*self.a_mats, *self.b_mats):
            if m.ndim != 2 or m.shape != shape:
                raise DimensionMismatch(f"matrix of shape {m.shape}, expected {shape}")
        if self.mode == "sus" and shape[0] != shape[1]:
            raise DimensionMismatch(
                f"similarity requires square matrices, got shape {shape}"
            )

    @property
    def shape(self) -> tuple[int, int]:
        return self.a_mats[0].shape

    @property
    def count(self) -> int:
        return len(self.a_mats)


@dataclass(frozen=True)
class Certificate:
    """Replayable evidence that no solution unitary exists.

    ``steps`` is the chain of refinements that forced any solution into an
    ever finer block-diagonal shape; the final entry explains the dead end:
    either two scalars that must agree (``kind "scalar"``, with the values)
    or two grouped spectra that must agree (``kind "eigenvalue"``, with the
    signatures).  ``pr_paths`` carries the edge descriptors needed to
    rebuild the path products when the final cell is a holonomy test.
    """

    mode: str
    kind: str
    target: str
    at: tuple[int, int, int]
    steps: tuple[RefinementStep, ...]
    iterations: int
    a_value: complex | None = None
    b_value: complex | None = None
    groups_a: tuple[tuple[complex, int], ...] | None = None
    groups_b: tuple[tuple[complex, int], ...] | None = None
    pr_paths: PrPaths | None = None


@dataclass(frozen=True)
class SolveResult:
    """Outcome of a decision run.

    ``status`` is ``"solved"`` with witnesses and the verified residual,
    ``"not_similar"`` with a certificate, or ``"failed"`` when the instance
    sits too close to the tolerance boundary to decide either way.
    """

    status: str
    mode: str
    iterations: int
    u: Matrix | None = None
    v: Matrix | None = None
    certificate: Certificate | None = None
    residual: float | None = None
    message: str = ""
