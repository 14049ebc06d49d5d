"""Canonical features of a matrix collection.

Running the decision loop on a collection paired with itself always ends in
a solution, and everything the loop observes on the way is invariant under
a simultaneous unitary change of basis: which cell deviates first, which
functional resolves it, the grouped spectrum it splits on, the partition
sizes, and finally the diagonal scalars, cell amplitudes and holonomy
scalars of the fully refined form.  Collecting that trace gives a
fingerprint: collections related by a unitary produce equal features, and
unequal features certify that no such unitary exists.

Features of two collections are compared entry by entry; discrete data
must agree exactly and spectra, scalars and amplitudes within the grouping
tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blocking import Partition
from .errors import InternalInconsistency
from .graph import build_paths, check_pr, vertex_key
from .linalg import DEFAULT_TOLERANCES, Tolerances, as_matrix
from .refine import apply_refinement
from .structure import check_presolution

__all__ = ["FeatureStep", "CanonicalFeatures", "extract_features", "compare_features"]

Groups = tuple[tuple[complex, int], ...]


@dataclass(frozen=True)
class FeatureStep:
    """One refinement of the self-paired run."""

    functional: str
    at: tuple[int, int, int]
    touch: tuple[str, int]
    rows_sizes: tuple[int, ...]
    cols_sizes: tuple[int, ...]
    groups: Groups


@dataclass(frozen=True)
class CanonicalFeatures:
    """Full invariant trace of a collection."""

    mode: str
    shape: tuple[int, int]
    count: int
    steps: tuple[FeatureStep, ...]
    rows_sizes: tuple[int, ...]
    cols_sizes: tuple[int, ...]
    alphas: tuple[tuple[tuple[int, int], complex], ...]
    scales: tuple[tuple[tuple[int, int, int], float], ...]
    betas: tuple[tuple[tuple[int, int, int], complex], ...]
    components: tuple[tuple[tuple[str, int], ...], ...]


def extract_features(
    a_mats, mode: str = "sus", tol: Tolerances = DEFAULT_TOLERANCES
) -> CanonicalFeatures:
    """Invariant fingerprint of one collection.

    May raise :class:`~susim.errors.NumericalFailure` when the collection
    has spectral gaps between the comparison and grouping tolerances, in
    which case no stable fingerprint exists at these settings.
    """
    mats = [as_matrix(m) for m in a_mats]
    if not mats:
        raise InternalInconsistency("cannot fingerprint an empty collection")
    m, n = mats[0].shape
    a = mats
    b = [x.copy() for x in mats]
    rows = Partition.whole(m)
    cols = rows if mode == "sus" else Partition.whole(n)
    steps: list[FeatureStep] = []
    limit = n + 1 if mode == "sus" else m + n + 1
    it = 0
    while True:
        it += 1
        if it > limit:
            raise InternalInconsistency("feature extraction exceeded its iteration bound")
        pre = check_presolution(a, b, rows, cols, mode, tol)
        if pre.status == "mismatch":
            raise InternalInconsistency("a self-paired run cannot mismatch")
        if pre.status == "violation":
            out = apply_refinement(a, b, rows, cols, mode, pre.violation, tol)
            if out.status == "mismatch":
                raise InternalInconsistency("a self-paired run cannot mismatch")
            steps.append(
                FeatureStep(
                    out.step.functional, out.step.at, out.step.touch,
                    rows.sizes, cols.sizes, out.step.groups_a,
                )
            )
            a, b, rows, cols = out.a_mats, out.b_mats, out.rows, out.cols
            continue
        paths = build_paths(a, b, rows, cols, mode, pre.cell_scales_a, pre.cell_scales_b)
        pr = check_pr(a, b, rows, cols, mode, pre.cell_scales_a, paths, tol)
        if pr.status == "mismatch":
            raise InternalInconsistency("a self-paired run cannot mismatch")
        if pr.status == "violation":
            out = apply_refinement(a, b, rows, cols, mode, pr.violation, tol, paths=paths)
            if out.status == "mismatch":
                raise InternalInconsistency("a self-paired run cannot mismatch")
            steps.append(
                FeatureStep(
                    out.step.functional, out.step.at, out.step.touch,
                    rows.sizes, cols.sizes, out.step.groups_a,
                )
            )
            a, b, rows, cols = out.a_mats, out.b_mats, out.rows, out.cols
            continue
        return CanonicalFeatures(
            mode=mode,
            shape=(m, n),
            count=len(mats),
            steps=tuple(steps),
            rows_sizes=rows.sizes,
            cols_sizes=cols.sizes,
            alphas=tuple(sorted(pre.diag_alphas.items())),
            scales=tuple(sorted(pre.cell_scales_a.items())),
            betas=tuple(sorted(pr.betas.items())),
            components=tuple(
                tuple(sorted(c, key=vertex_key)) for c in paths.components
            ),
        )


def _close(a: complex, b: complex, tol: Tolerances) -> bool:
    return abs(complex(a) - complex(b)) <= tol.group * (1.0 + max(abs(a), abs(b)))


def compare_features(
    fa: CanonicalFeatures, fb: CanonicalFeatures, tol: Tolerances = DEFAULT_TOLERANCES
) -> tuple[bool, list[str]]:
    """Entrywise comparison; returns (equal, human-readable differences)."""
    diffs: list[str] = []
    for field in ("mode", "shape", "count", "rows_sizes", "cols_sizes", "components"):
        va, vb = getattr(fa, field), getattr(fb, field)
        if va != vb:
            diffs.append(f"{field}: {va} != {vb}")
    if len(fa.steps) != len(fb.steps):
        diffs.append(f"step count: {len(fa.steps)} != {len(fb.steps)}")
    else:
        for k, (sa, sb) in enumerate(zip(fa.steps, fb.steps)):
            for field in ("functional", "at", "touch", "rows_sizes", "cols_sizes"):
                va, vb = getattr(sa, field), getattr(sb, field)
                if va != vb:
                    diffs.append(f"step {k} {field}: {va} != {vb}")
            if [m for _, m in sa.groups] != [m for _, m in sb.groups]:
                diffs.append(f"step {k} group multiplicities differ")
            elif any(not _close(va, vb, tol) for (va, _), (vb, _) in zip(sa.groups, sb.groups)):
                diffs.append(f"step {k} group values differ")
    for field in ("alphas", "scales", "betas"):
        ta, tb = getattr(fa, field), getattr(fb, field)
        if [k for k, _ in ta] != [k for k, _ in tb]:
            diffs.append(f"{field} keys: {[k for k, _ in ta]} != {[k for k, _ in tb]}")
        else:
            for (key, va), (_, vb) in zip(ta, tb):
                if not _close(va, vb, tol):
                    diffs.append(f"{field}[{key}]: {va} != {vb}")
    return not diffs, diffs
