"""Independent decision oracles used to cross-check the solver.

These deliberately avoid the solver's machinery:

* trace words are invariants of simultaneous unitary similarity, so one
  differing word trace certifies two collections apart;
* one normal matrix is decided by its eigenvalue multiset, one arbitrary
  matrix under equivalence by its singular values;
* a pair of 2 x 2 collections reduces, through the Pauli expansion of the
  traceless parts, to a rotation-fitting problem over the real 3-space
  solved in closed form.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import OutOfScope
from .linalg import DEFAULT_TOLERANCES, Matrix, Tolerances, adjoint, canonical_sort, fro
from .model import NOT_SIMILAR, SOLVED, Instance

__all__ = ["TraceWord", "trace_word_oracle", "word_to_string", "small_case_decider"]


@dataclass(frozen=True)
class TraceWord:
    """A word over the letters ``A_1 .. A_p, A_1* .. A_p*`` with its traces.

    ``letters`` holds indices into the doubled alphabet: ``k < p`` is the
    k-th matrix, ``k >= p`` its adjoint.
    """

    letters: tuple[int, ...]
    trace_a: complex
    trace_b: complex


def _is_cyclic_canonical(word: tuple[int, ...]) -> bool:
    return all(word <= word[k:] + word[:k] for k in range(1, len(word)))


def _evaluate(mats: list[Matrix], adjoints: list[Matrix], word: tuple[int, ...]) -> complex:
    p = len(mats)
    out = None
    for k in word:
        factor = mats[k] if k < p else adjoints[k - p]
        out = factor if out is None else out @ factor
    return complex(np.trace(out))


def trace_word_oracle(
    a_mats,
    b_mats,
    max_len: int = 4,
    margin: float = 1e-6,
) -> TraceWord | None:
    """First word whose traces clearly differ, or None.

    Words are enumerated by length, then lexicographically, skipping
    rotations of earlier words since traces are invariant under cyclic
    shifts.  A hit is a sound one-sided proof that no simultaneous unitary
    similarity exists; no hit proves nothing.
    """
    a_mats = [np.asarray(m, dtype=complex) for m in a_mats]
    b_mats = [np.asarray(m, dtype=complex) for m in b_mats]
    adj_a = [adjoint(m) for m in a_mats]
    adj_b = [adjoint(m) for m in b_mats]
    p = len(a_mats)
    for length in range(1, max_len + 1):
        for word in product(range(2 * p), repeat=length):
            if not _is_cyclic_canonical(word):
                continue
            ta = _evaluate(a_mats, adj_a, word)
            tb = _evaluate(b_mats, adj_b, word)
            if abs(ta - tb) > margin * (1.0 + max(abs(ta), abs(tb))):
                return TraceWord(word, ta, tb)
    return None


def word_to_string(word: tuple[int, ...], p: int) -> str:
    """Readable rendering, matrices numbered from one."""
    return " ".join(f"A{k + 1}" if k < p else f"A{k - p + 1}*" for k in word)


def _pauli_coefficients(m: Matrix) -> tuple[complex, np.ndarray]:
    """Trace part and the complex coefficient vector of the traceless part."""
    alpha = complex(np.trace(m)) / 2.0
    t = m - alpha * np.eye(2)
    x1 = (t[0, 1] + t[1, 0]) / 2.0
    x2 = (t[1, 0] - t[0, 1]) / 2.0j
    x3 = t[0, 0]
    return alpha, np.array([x1, x2, x3])

def _fit_rotation(p_pts: np.ndarray, q_pts: np.ndarray) -> np.ndarray:
    """Best proper rotation taking the columns of p_pts onto q_pts."""
    h = p_pts @ q_pts.T
    u, _, vt = np.linalg.svd(h)
    d = 1.0 if np.linalg.det(vt.T @ u.T) >= 0 else -1.0
    return vt.T @ np.diag([1.0, 1.0, d]) @ u.T


def _decide_two_by_two(inst: Instance, tol: Tolerances) -> str:
    cols_a, cols_b = [], []
    for a, b in zip(inst.a_mats, inst.b_mats):
        alpha_a, xa = _pauli_coefficients(a)
        alpha_b, xb = _pauli_coefficients(b)
        if abs(alpha_a - alpha_b) > tol.group * (1.0 + max(abs(alpha_a), abs(alpha_b))):
            return NOT_SIMILAR
        cols_a.extend([xa.real, xa.imag])
        cols_b.extend([xb.real, xb.imag])
    p_pts = np.array(cols_a).T
    q_pts = np.array(cols_b).T
    rot = _fit_rotation(p_pts, q_pts)
    scale = 1.0 + float(np.linalg.norm(p_pts))
    if np.linalg.norm(rot @ p_pts - q_pts) <= tol.verify * scale:
        return SOLVED
    return NOT_SIMILAR


def _is_normal(m: Matrix, tol: Tolerances) -> bool:
    return fro(m @ adjoint(m) - adjoint(m) @ m) <= tol.cmp * (1.0 + fro(m) ** 2)


def _spectra_equal(va, vb, tol: Tolerances) -> bool:
    scale = max(np.max(np.abs(va), initial=0.0), np.max(np.abs(vb), initial=0.0))
    thr = tol.group * (1.0 + scale)
    sa = canonical_sort(va, thr)
    sb = canonical_sort(vb, thr)
    return bool(np.all(np.abs(sa - sb) <= thr))


def small_case_decider(inst: Instance, tol: Tolerances = DEFAULT_TOLERANCES) -> str:
    """Closed-form decision for the classically solvable cases.

    Handles: equivalence of a single matrix (singular values), similarity
    of a single normal matrix (eigenvalues), any 2 x 2 similarity
    collection (rotation fitting), and 1 x 1 collections.  Raises
    :class:`~susim.errors.OutOfScope` for everything else.
    """
    m, n = inst.shape
    if inst.mode == "sueq":
        if inst.count != 1:
            raise OutOfScope("equivalence oracle handles a single matrix only")
        sa = np.linalg.svd(inst.a_mats[0], compute_uv=False)
        sb = np.linalg.svd(inst.b_mats[0], compute_uv=False)
        return SOLVED if _spectra_equal(sa, sb, tol) else NOT_SIMILAR
    if n == 1:
        for a, b in zip(inst.a_mats, inst.b_mats):
            if abs(a[0, 0] - b[0, 0]) > tol.group * (1.0 + max(abs(a[0, 0]), abs(b[0, 0]))):
                return NOT_SIMILAR
        return SOLVED
    if n == 2:
        return _decide_two_by_two(inst, tol)
    if inst.count == 1:
        a, b = inst.a_mats[0], inst.b_mats[0]
        if not (_is_normal(a, tol) and _is_normal(b, tol)):
            raise OutOfScope("single-matrix similarity oracle requires normal matrices")
        return (
            SOLVED
            if _spectra_equal(np.linalg.eigvals(a), np.linalg.eigvals(b), tol)
            else NOT_SIMILAR
        )
    raise OutOfScope(f"no closed-form oracle for shape {inst.shape} with {inst.count} matrices")
