"""JSON formats for instances, results, certificates and features.

Three tagged document formats are supported:

* ``susim-instance/1``: the two matrix collections plus the mode;
* ``susim-result/1``: a solve outcome with witnesses or certificate;
* ``susim-features/1``: the canonical feature trace of one collection.

Complex numbers are written as ``[re, im]`` pairs, matrices as nested row
lists of such pairs.  All matrix, row, column and class indices are
one-based in the documents and converted at this boundary; in-memory
objects stay zero-based throughout the library.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .canonical import CanonicalFeatures, FeatureStep
from .errors import FormatError
from .graph import EdgeStep
from .model import FAILED, NOT_SIMILAR, SOLVED, Certificate, Instance, SolveResult
from .refine import RefinementStep

__all__ = [
    "INSTANCE_FORMAT",
    "RESULT_FORMAT",
    "FEATURES_FORMAT",
    "matrix_to_json",
    "instance_to_json",
    "instance_from_json",
    "result_to_json",
    "result_from_json",
    "certificate_to_json",
    "certificate_from_json",
    "features_to_json",
    "features_from_json",
    "document_format",
]

INSTANCE_FORMAT = "susim-instance/1"
RESULT_FORMAT = "susim-result/1"
FEATURES_FORMAT = "susim-features/1"

_STATUSES = (SOLVED, NOT_SIMILAR, FAILED)


def _fail(msg: str) -> None:
    raise FormatError(msg)


def _get(data: Any, key: str, kind: type | tuple[type, ...], where: str) -> Any:
    if not isinstance(data, dict):
        _fail(f"{where}: expected an object")
    if key not in data:
        _fail(f"{where}: missing key {key!r}")
    value = data[key]
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        _fail(f"{where}: key {key!r} has the wrong type")
    return value


def _cpx(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _as_cpx(value: Any, where: str) -> complex:
    if (
        not isinstance(value, list)
        or len(value) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        _fail(f"{where}: expected a [re, im] pair")
    return complex(value[0], value[1])


def _mat(m: np.ndarray) -> list[list[list[float]]]:
    m = np.asarray(m, dtype=complex)
    return [[_cpx(z) for z in row] for row in m]


def _as_mat(value: Any, where: str) -> np.ndarray:
    if not isinstance(value, list) or not value:
        _fail(f"{where}: expected a non-empty list of rows")
    width = None
    rows = []
    for r, row in enumerate(value):
        if not isinstance(row, list) or not row:
            _fail(f"{where}: row {r + 1} is not a non-empty list")
        if width is None:
            width = len(row)
        elif len(row) != width:
            _fail(f"{where}: row {r + 1} has length {len(row)}, expected {width}")
        rows.append([_as_cpx(z, f"{where} row {r + 1}") for z in row])
    return np.array(rows, dtype=complex)


def matrix_to_json(m: np.ndarray) -> list[list[list[float]]]:
    """Encode one matrix the same way the document formats do."""
    return _mat(m)


def _at_out(at: tuple[int, int, int]) -> dict:
    return {"matrix": at[0] + 1, "row": at[1] + 1, "col": at[2] + 1}


def _at_in(value: Any, where: str) -> tuple[int, int, int]:
    l = _get(value, "matrix", int, where)
    i = _get(value, "row", int, where)
    j = _get(value, "col", int, where)
    if min(l, i, j) < 1:
        _fail(f"{where}: indices are one-based")
    return (l - 1, i - 1, j - 1)


def _touch_out(touch: tuple[str, int]) -> dict:
    return {"axis": touch[0], "index": touch[1] + 1}


def _touch_in(value: Any, where: str) -> tuple[str, int]:
    axis = _get(value, "axis", str, where)
    index = _get(value, "index", int, where)
    if axis not in ("row", "col") or index < 1:
        _fail(f"{where}: bad axis or index")
    return (axis, index - 1)


def _groups_out(groups) -> list[dict]:
    return [{"value": _cpx(mean), "count": int(count)} for mean, count in groups]


def _groups_in(value: Any, where: str) -> tuple[tuple[complex, int], ...]:
    if not isinstance(value, list):
        _fail(f"{where}: expected a list of groups")
    out = []
    for k, entry in enumerate(value):
        mean = _as_cpx(_get(entry, "value", list, f"{where}[{k}]"), f"{where}[{k}].value")
        count = _get(entry, "count", int, f"{where}[{k}]")
        if count < 1:
            _fail(f"{where}[{k}]: count must be positive")
        out.append((mean, count))
    return tuple(out)


def _edge_out(edge: EdgeStep) -> dict:
    return {"matrix": edge.l + 1, "row": edge.i + 1, "col": edge.j + 1, "invert": edge.invert}


def _edge_in(value: Any, where: str) -> EdgeStep:
    l, i, j = _at_in(value, where)
    return EdgeStep(l, i, j, _get(value, "invert", bool, where))


def _paths_out(paths) -> dict:
    row_path, col_path = paths
    return {
        "row": [_edge_out(e) for e in row_path],
        "col": [_edge_out(e) for e in col_path],
    }


def _paths_in(value: Any, where: str):
    row = _get(value, "row", list, where)
    col = _get(value, "col", list, where)
    return (
        tuple(_edge_in(e, f"{where}.row[{k}]") for k, e in enumerate(row)),
        tuple(_edge_in(e, f"{where}.col[{k}]") for k, e in enumerate(col)),
    )


def _step_out(step: RefinementStep) -> dict:
    out = {
        "functional": step.functional,
        "at": _at_out(step.at),
        "touch": _touch_out(step.touch),
        "groups_a": _groups_out(step.groups_a),
        "groups_b": _groups_out(step.groups_b),
    }
    if step.pr_paths is not None:
        out["pr_paths"] = _paths_out(step.pr_paths)
    return out


def _step_in(value: Any, where: str) -> RefinementStep:
    paths = None
    if isinstance(value, dict) and value.get("pr_paths") is not None:
        paths = _paths_in(value["pr_paths"], f"{where}.pr_paths")
    return RefinementStep(
        functional=_get(value, "functional", str, where),
        at=_at_in(_get(value, "at", dict, where), f"{where}.at"),
        touch=_touch_in(_get(value, "touch", dict, where), f"{where}.touch"),
        groups_a=_groups_in(_get(value, "groups_a", list, where), f"{where}.groups_a"),
        groups_b=_groups_in(_get(value, "groups_b", list, where), f"{where}.groups_b"),
        pr_paths=paths,
    )


def document_format(data: Any) -> str:
    """Format tag of a parsed document, or a FormatError."""
    if not isinstance(data, dict) or "format" not in data:
        _fail("document has no format tag")
    tag = data["format"]
    if tag not in (INSTANCE_FORMAT, RESULT_FORMAT, FEATURES_FORMAT):
        _fail(f"unsupported format {tag!r}")
    return tag


def instance_to_json(inst: Instance) -> dict:
    m, n = inst.shape
    return {
        "format": INSTANCE_FORMAT,
        "mode": inst.mode,
        "name": inst.name,
        "shape": [m, n],
        "count": inst.count,
        "a": [_mat(x) for x in inst.a_mats],
        "b": [_mat(x) for x in inst.b_mats],
    }


def instance_from_json(data: Any) -> Instance:
    if document_format(data) != INSTANCE_FORMAT:
        _fail("not an instance document")
    mode = _get(data, "mode", str, "instance")
    if mode not in ("sus", "sueq"):
        _fail(f"instance: unknown mode {mode!r}")
    a_raw = _get(data, "a", list, "instance")
    b_raw = _get(data, "b", list, "instance")
    if not a_raw or not b_raw:
        _fail("instance: empty collection")
    a_mats = tuple(_as_mat(m, f"instance a[{k + 1}]") for k, m in enumerate(a_raw))
    b_mats = tuple(_as_mat(m, f"instance b[{k + 1}]") for k, m in enumerate(b_raw))
    name = data.get("name", "")
    if not isinstance(name, str):
        _fail("instance: name must be a string")
    if "shape" in data and list(data["shape"]) != list(a_mats[0].shape):
        _fail("instance: declared shape disagrees with the matrices")
    if "count" in data and data["count"] != len(a_mats):
        _fail("instance: declared count disagrees with the matrices")
    return Instance(mode, a_mats, b_mats, name=name)


def certificate_to_json(cert: Certificate) -> dict:
    out: dict = {
        "mode": cert.mode,
        "kind": cert.kind,
        "target": cert.target,
        "at": _at_out(cert.at),
        "iterations": cert.iterations,
        "steps": [_step_out(s) for s in cert.steps],
    }
    if cert.a_value is not None:
        out["a_value"] = _cpx(cert.a_value)
        out["b_value"] = _cpx(cert.b_value)
    if cert.groups_a is not None:
        out["groups_a"] = _groups_out(cert.groups_a)
        out["groups_b"] = _groups_out(cert.groups_b)
    if cert.pr_paths is not None:
        out["pr_paths"] = _paths_out(cert.pr_paths)
    return out


def certificate_from_json(data: Any) -> Certificate:
    mode = _get(data, "mode", str, "certificate")
    kind = _get(data, "kind", str, "certificate")
    if mode not in ("sus", "sueq") or kind not in ("scalar", "eigenvalue"):
        _fail("certificate: unknown mode or kind")
    steps = tuple(
        _step_in(s, f"certificate.steps[{k}]")
        for k, s in enumerate(_get(data, "steps", list, "certificate"))
    )
    a_value = b_value = None
    if "a_value" in data:
        a_value = _as_cpx(data["a_value"], "certificate.a_value")
        b_value = _as_cpx(_get(data, "b_value", list, "certificate"), "certificate.b_value")
    groups_a = groups_b = None
    if "groups_a" in data:
        groups_a = _groups_in(data["groups_a"], "certificate.groups_a")
        groups_b = _groups_in(_get(data, "groups_b", list, "certificate"), "certificate.groups_b")
    paths = None
    if data.get("pr_paths") is not None:
        paths = _paths_in(data["pr_paths"], "certificate.pr_paths")
    return Certificate(
        mode=mode,
        kind=kind,
        target=_get(data, "target", str, "certificate"),
        at=_at_in(_get(data, "at", dict, "certificate"), "certificate.at"),
        steps=steps,
        iterations=_get(data, "iterations", int, "certificate"),
        a_value=a_value,
        b_value=b_value,
        groups_a=groups_a,
        groups_b=groups_b,
        pr_paths=paths,
    )


def result_to_json(result: SolveResult) -> dict:
    return {
        "format": RESULT_FORMAT,
        "status": result.status,
        "mode": result.mode,
        "iterations": result.iterations,
        "residual": result.residual,
        "message": result.message,
        "u": None if result.u is None else _mat(result.u),
        "v": None if result.v is None else _mat(result.v),
        "certificate": None
        if result.certificate is None
        else certificate_to_json(result.certificate),
    }


def result_from_json(data: Any) -> SolveResult:
    if document_format(data) != RESULT_FORMAT:
        _fail("not a result document")
    status = _get(data, "status", str, "result")
    if status not in _STATUSES:
        _fail(f"result: unknown status {status!r}")
    mode = _get(data, "mode", str, "result")
    if mode not in ("sus", "sueq"):
        _fail(f"result: unknown mode {mode!r}")
    residual = data.get("residual")
    if residual is not None and not isinstance(residual, (int, float)):
        _fail("result: residual must be a number or null")
    message = data.get("message", "")
    if not isinstance(message, str):
        _fail("result: message must be a string")
    u = None if data.get("u") is None else _as_mat(data["u"], "result.u")
    v = None if data.get("v") is None else _as_mat(data["v"], "result.v")
    cert = None
    if data.get("certificate") is not None:
        cert = certificate_from_json(data["certificate"])
    return SolveResult(
        status=status,
        mode=mode,
        iterations=_get(data, "iterations", int, "result"),
        u=u,
        v=v,
        certificate=cert,
        residual=None if residual is None else float(residual),
        message=message,
    )


def _feature_step_out(step: FeatureStep) -> dict:
    return {
        "functional": step.functional,
        "at": _at_out(step.at),
        "touch": _touch_out(step.touch),
        "rows_sizes": list(step.rows_sizes),
        "cols_sizes": list(step.cols_sizes),
        "groups": _groups_out(step.groups),
    }


def _feature_step_in(value: Any, where: str) -> FeatureStep:
    return FeatureStep(
        functional=_get(value, "functional", str, where),
        at=_at_in(_get(value, "at", dict, where), f"{where}.at"),
        touch=_touch_in(_get(value, "touch", dict, where), f"{where}.touch"),
        rows_sizes=_sizes_in(_get(value, "rows_sizes", list, where), f"{where}.rows_sizes"),
        cols_sizes=_sizes_in(_get(value, "cols_sizes", list, where), f"{where}.cols_sizes"),
        groups=_groups_in(_get(value, "groups", list, where), f"{where}.groups"),
    )


def _sizes_in(value: Any, where: str) -> tuple[int, ...]:
    if not isinstance(value, list) or not all(
        isinstance(s, int) and not isinstance(s, bool) and s >= 1 for s in value
    ):
        _fail(f"{where}: expected a list of positive sizes")
    return tuple(value)


def features_to_json(features: CanonicalFeatures) -> dict:
    return {
        "format": FEATURES_FORMAT,
        "mode": features.mode,
        "shape": list(features.shape),
        "count": features.count,
        "steps": [_feature_step_out(s) for s in features.steps],
        "rows_sizes": list(features.rows_sizes),
        "cols_sizes": list(features.cols_sizes),
        "alphas": [
            {"matrix": l + 1, "class": i + 1, "value": _cpx(v)}
            for (l, i), v in features.alphas
        ],
        "scales": [
            {"matrix": l + 1, "row": i + 1, "col": j + 1, "value": float(v)}
            for (l, i, j), v in features.scales
        ],
        "betas": [
            {"matrix": l + 1, "row": i + 1, "col": j + 1, "value": _cpx(v)}
            for (l, i, j), v in features.betas
        ],
        "components": [
            [_touch_out(vertex) for vertex in comp] for comp in features.components
        ],
    }


def features_from_json(data: Any) -> CanonicalFeatures:
    if document_format(data) != FEATURES_FORMAT:
        _fail("not a features document")
    mode = _get(data, "mode", str, "features")
    if mode not in ("sus", "sueq"):
        _fail(f"features: unknown mode {mode!r}")
    shape = _get(data, "shape", list, "features")
    if len(shape) != 2 or not all(isinstance(x, int) and x >= 1 for x in shape):
        _fail("features: bad shape")
    alphas = []
    for k, entry in enumerate(_get(data, "alphas", list, "features")):
        where = f"features.alphas[{k}]"
        l = _get(entry, "matrix", int, where)
        i = _get(entry, "class", int, where)
        if min(l, i) < 1:
            _fail(f"{where}: indices are one-based")
        alphas.append(((l - 1, i - 1), _as_cpx(_get(entry, "value", list, where), where)))
    scales = []
    for k, entry in enumerate(_get(data, "scales", list, "features")):
        where = f"features.scales[{k}]"
        at = _at_in(entry, where)
        scales.append((at, float(_get(entry, "value", float, where))))
    betas = []
    for k, entry in enumerate(_get(data, "betas", list, "features")):
        where = f"features.betas[{k}]"
        at = _at_in(entry, where)
        betas.append((at, _as_cpx(_get(entry, "value", list, where), where)))
    components = []
    for k, comp in enumerate(_get(data, "components", list, "features")):
        if not isinstance(comp, list):
            _fail(f"features.components[{k}]: expected a list")
        components.append(
            tuple(_touch_in(v, f"features.components[{k}][{t}]") for t, v in enumerate(comp))
        )
    return CanonicalFeatures(
        mode=mode,
        shape=(shape[0], shape[1]),
        count=_get(data, "count", int, "features"),
        steps=tuple(
            _feature_step_in(s, f"features.steps[{k}]")
            for k, s in enumerate(_get(data, "steps", list, "features"))
        ),
        rows_sizes=_sizes_in(_get(data, "rows_sizes", list, "features"), "features.rows_sizes"),
        cols_sizes=_sizes_in(_get(data, "cols_sizes", list, "features"), "features.cols_sizes"),
        alphas=tuple(alphas),
        scales=tuple(scales),
        betas=tuple(betas),
        components=tuple(components),
    )
