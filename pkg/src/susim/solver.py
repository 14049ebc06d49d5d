"""Decision procedures for simultaneous unitary similarity and equivalence.

The solver alternates a structural scan with refinements.  Each pass either
finds the collections in the expected block form (and then checks the
holonomy of every edge cell), or finds the first deviation and resolves it:
a forced scalar or spectral disagreement ends the run with a certificate,
anything else conjugates both sides and strictly refines the partition.
Since a partition of ``n`` indices refines at most ``n - 1`` times, the
loop runs at most ``n`` passes in similarity mode and ``m + n`` passes in
equivalence mode.

On success the witnesses are assembled from the path products and verified
against the original input; a residual above the acceptance tolerance is
reported as a failure rather than a solution.
"""

from __future__ import annotations

import numpy as np

from .blocking import Partition, assemble_blockdiag
from .errors import InternalInconsistency, NumericalFailure
from .graph import PathData, build_paths, check_pr
from .linalg import DEFAULT_TOLERANCES, Matrix, Tolerances, adjoint, as_matrix, fro
from .model import FAILED, NOT_SIMILAR, SOLVED, Certificate, Instance, SolveResult
from .refine import RefinementStep, apply_refinement
from .structure import check_presolution

__all__ = ["solve", "solve_sus", "solve_sueq", "witness_residual"]


def witness_residual(
    a_mats: list[Matrix],
    b_mats: list[Matrix],
    mode: str,
    u: Matrix,
    v: Matrix | None = None,
) -> float:
    """Worst normalized deviation of a claimed witness.

    Covers unitarity of both factors and the mapping property for every
    matrix pair, each relative to ``1 + ||A_l||``.
    """
    m, n = a_mats[0].shape
    right = u if mode == "sus" else v
    dev = fro(u @ adjoint(u) - np.eye(m)) / np.sqrt(m)
    dev = max(dev, fro(right @ adjoint(right) - np.eye(n)) / np.sqrt(n))
    for a, b in zip(a_mats, b_mats):
        dev = max(dev, fro(u @ a @ adjoint(right) - b) / (1.0 + fro(a)))
    return dev


def _assemble_solution(
    paths: PathData, rows: Partition, cols: Partition, mode: str
) -> tuple[Matrix, Matrix | None]:
    """Blockwise witnesses from the two path products per vertex."""
    ublocks: dict[int, Matrix] = {}
    vblocks: dict[int, Matrix] = {}
    for vert in paths.rep_of:
        pa, pb = paths.paths_a[vert], paths.paths_b[vert]
        amp_b = paths.amps_b[vert]
        blk = (adjoint(pb) / (amp_b * amp_b)) @ pa
        axis, t = vert
        if axis == "row":
            ublocks[t] = blk
        else:
            vblocks[t] = blk
    u_hat = assemble_blockdiag(rows, ublocks)
    v_hat = assemble_blockdiag(cols, vblocks) if mode == "sueq" else None
    return u_hat, v_hat


def _run(mode: str, a_mats: list[Matrix], b_mats: list[Matrix], tol: Tolerances) -> SolveResult:
    orig_a, orig_b = a_mats, b_mats
    m, n = a_mats[0].shape
    rows = Partition.whole(m)
    cols = rows if mode == "sus" else Partition.whole(n)
    yrow = zrow = np.eye(m, dtype=np.complex128)
    ycol = zcol = np.eye(n, dtype=np.complex128)
    steps: list[RefinementStep] = []
    limit = n + 1 if mode == "sus" else m + n + 1
    it = 0

    def refined(out) -> None:
        nonlocal a_mats, b_mats, rows, cols, yrow, zrow, ycol, zcol
        a_mats, b_mats = out.a_mats, out.b_mats
        rows, cols = out.rows, out.cols
        if mode == "sus" or out.step.touch[0] == "row":
            yrow, zrow = out.y @ yrow, out.z @ zrow
        else:
            ycol, zcol = out.y @ ycol, out.z @ zcol
        steps.append(out.step)

    def eigen_cert(step: RefinementStep) -> SolveResult:
        cert = Certificate(
            mode,
            "eigenvalue",
            step.functional,
            step.at,
            tuple(steps),
            it,
            groups_a=step.groups_a,
            groups_b=step.groups_b,
            pr_paths=step.pr_paths,
        )
        return SolveResult(NOT_SIMILAR, mode, it, certificate=cert)

    while True:
        it += 1
        if it > limit:
            raise InternalInconsistency("refinement loop exceeded its iteration bound")

        pre = check_presolution(a_mats, b_mats, rows, cols, mode, tol)
        if pre.status == "mismatch":
            mm = pre.mismatch
            cert = Certificate(
                mode, "scalar", mm.target, mm.at, tuple(steps), it,
                a_value=mm.a_value, b_value=mm.b_value,
            )
            return SolveResult(NOT_SIMILAR, mode, it, certificate=cert)
        if pre.status == "violation":
            out = apply_refinement(a_mats, b_mats, rows, cols, mode, pre.violation, tol)
            if out.status == "mismatch":
                return eigen_cert(out.step)
            refined(out)
            continue

        paths = build_paths(a_mats, b_mats, rows, cols, mode, pre.cell_scales_a, pre.cell_scales_b)
        pr = check_pr(a_mats, b_mats, rows, cols, mode, pre.cell_scales_a, paths, tol)
        if pr.status == "mismatch":
            mm = pr.mismatch
            i, j = mm.at[1], mm.at[2]
            col_end = ("row", j) if mode == "sus" else ("col", j)
            cert = Certificate(
                mode, "scalar", mm.target, mm.at, tuple(steps), it,
                a_value=mm.a_value, b_value=mm.b_value,
                pr_paths=(paths.steps_to[("row", i)], paths.steps_to[col_end]),
            )
            return SolveResult(NOT_SIMILAR, mode, it, certificate=cert)
        if pr.status == "violation":
            out = apply_refinement(a_mats, b_mats, rows, cols, mode, pr.violation, tol, paths=paths)
            if out.status == "mismatch":
                return eigen_cert(out.step)
            refined(out)
            continue

        u_hat, v_hat = _assemble_solution(paths, rows, cols, mode)
        u = adjoint(zrow) @ u_hat @ yrow
        v = adjoint(zcol) @ v_hat @ ycol if mode == "sueq" else None
        residual = witness_residual(orig_a, orig_b, mode, u, v)
        if residual <= tol.verify:
            return SolveResult(SOLVED, mode, it, u=u, v=v, residual=residual)
        return SolveResult(
            FAILED, mode, it, residual=residual,
            message=f"assembled witness misses the acceptance tolerance: residual {residual:.3e}",
        )


def solve(instance: Instance, tol: Tolerances = DEFAULT_TOLERANCES) -> SolveResult:
    """Decide an instance; never raises on tolerance-boundary inputs."""
    a = [as_matrix(m) for m in instance.a_mats]
    b = [as_matrix(m) for m in instance.b_mats]
    try:
        return _run(instance.mode, a, b, tol)
    except NumericalFailure as exc:
        return SolveResult(FAILED, instance.mode, 0, message=str(exc))


def solve_sus(a_mats, b_mats, tol: Tolerances = DEFAULT_TOLERANCES) -> SolveResult:
    """Decide simultaneous unitary similarity of two collections."""
    inst = Instance("sus", tuple(as_matrix(m) for m in a_mats), tuple(as_matrix(m) for m in b_mats))
    return solve(inst, tol)


def solve_sueq(a_mats, b_mats, tol: Tolerances = DEFAULT_TOLERANCES) -> SolveResult:
    """Decide simultaneous unitary equivalence of two collections."""
    inst = Instance("sueq", tuple(as_matrix(m) for m in a_mats), tuple(as_matrix(m) for m in b_mats))
    return solve(inst, tol)
