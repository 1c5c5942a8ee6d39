"""JSON file formats for polygons and curves.

Polygon file::

    {"type": "polygon", "scalar": "real", "n": 5,
     "vertices": [[x, y, z], ...],
     "witnesses": {"edges": [[x, y, z], ...], "angles": [[a, b, c], ...]}}

Complex entries are written as ``[re, im]`` pairs.  Curve files are either
``{"type": "curve", "kind": "generator", "family": ..., "params": {...}}`` or
``{"type": "curve", "kind": "samples", "period": T, "t": [...], "points": [...],
"phi": {"kind": "shift", "params": [c]}}``.

Errors carry the line and column of the offending item.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .errors import SelfDualError
from .polygon import Polygon, NONDEGENERACY_TOL


class FileFormatError(SelfDualError):
    def __init__(self, message, line=None, col=None):
        where = f"line {line}, column {col}: " if line is not None else ""
        super().__init__(where + message)
        self.line, self.col = line, col


def _pos(text: str, offset: int):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def locate(text: str, key: str, index: int | None = None):
    """(line, column) of ``"key"`` or of item ``index`` of the array stored under it."""
    k = text.find(f'"{key}"')
    if k < 0:
        return None, None
    if index is None:
        return _pos(text, k)
    i = text.find("[", k)
    depth, item, start = 0, 0, None
    in_str = False
    for j in range(i, len(text)):
        ch = text[j]
        if in_str:
            if ch == '"' and text[j - 1] != "\\":
                in_str = False
            continue
        if ch == '"':
            in_str = True
        elif ch in "[{":
            depth += 1
            if depth == 2 and start is None:
                start = j
            if depth == 2 and item == index:
                return _pos(text, j)
        elif ch in "]}":
            depth -= 1
            if depth == 0:
                break
        elif ch == "," and depth == 1:
            item += 1
            if item == index:
                nxt = j + 1
                while text[nxt] in " \n\t\r":
                    nxt += 1
                return _pos(text, nxt)
        elif depth == 1 and item == index and ch not in " \n\t\r":
            return _pos(text, j)
    return _pos(text, k)


def _scalar(x):
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ValueError("complex entries are [re, im] pairs")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValueError(f"not a number: {x!r}")
    return float(x)


def _encode(v):
    out = []
    for x in v:
        if isinstance(x, complex) or np.iscomplexobj(x):
            out.append([float(np.real(x)), float(np.imag(x))])
        else:
            out.append(float(x))
    return out


def _rows(data, key, text, width=3):
    rows = data.get(key)
    if not isinstance(rows, list):
        raise FileFormatError(f'"{key}" must be a list', *locate(text, key))
    out = []
    for j, r in enumerate(rows):
        try:
            if not isinstance(r, list) or len(r) != width:
                raise ValueError(f"expected {width} coordinates")
            out.append([_scalar(x) for x in r])
        except ValueError as exc:
            raise FileFormatError(f"{key}[{j}]: {exc}", *locate(text, key, j)) from None
    return out


def _degenerate_row(V):
    n = len(V)
    U = V / np.linalg.norm(V, axis=1)[:, None]
    for j in range(n):
        if np.linalg.norm(np.cross(U[j], U[(j + 1) % n])) <= NONDEGENERACY_TOL:
            return (j + 1) % n, "coincides with the previous vertex"
    if n >= 4:
        for j in range(n):
            if abs(np.linalg.det(U[[j - 1, j, (j + 1) % n]])) <= NONDEGENERACY_TOL:
                return j, "is collinear with its neighbours"
    return None


def dumps_polygon(poly: Polygon, witnesses=None, meta=None) -> str:
    lines = ["{", '  "type": "polygon",', f'  "scalar": "{poly.field}",', f'  "n": {poly.n},']
    if meta:
        lines.append(f'  "meta": {json.dumps(meta, sort_keys=True)},')
    body = ",\n".join("    " + json.dumps(_encode(v)) for v in poly.vertices)
    tail = "" if witnesses is None else ","
    lines.append('  "vertices": [\n' + body + "\n  ]" + tail)
    if witnesses is not None:
        E, A = witnesses
        e = ",\n".join("      " + json.dumps(_encode(v)) for v in E)
        a = ",\n".join("      " + json.dumps(_encode(v)) for v in A)
        lines.append('  "witnesses": {\n    "edges": [\n' + e + '\n    ],\n    "angles": [\n' + a + "\n    ]\n  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _load_json(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise FileFormatError("top level must be an object", 1, 1)
    return data


def loads_polygon(text: str):
    """Parse a polygon file; returns ``(Polygon, witnesses or None, meta)``."""
    data = _load_json(text)
    if data.get("type", "polygon") != "polygon":
        raise FileFormatError('expected "type": "polygon"', *locate(text, "type"))
    scalar = data.get("scalar", "real")
    if scalar not in ("real", "complex"):
        raise FileFormatError(f"unknown scalar field {scalar!r}", *locate(text, "scalar"))
    rows = _rows(data, "vertices", text)
    if "n" in data and data["n"] != len(rows):
        raise FileFormatError(f'"n" is {data["n"]} but {len(rows)} vertices are listed', *locate(text, "n"))
    if len(rows) < 3:
        raise FileFormatError("a polygon needs at least 3 vertices", *locate(text, "vertices"))
    V = np.array(rows, dtype=complex if scalar == "complex" else float)
    if scalar == "real" and np.iscomplexobj(np.array(rows)):
        raise FileFormatError("complex entry in a real polygon", *locate(text, "vertices"))
    for j, v in enumerate(V):
        if not np.all(np.isfinite(v)) or not np.any(v):
            raise FileFormatError(f"vertex {j} is zero or not finite", *locate(text, "vertices", j))
    bad = _degenerate_row(V)
    if bad is not None:
        j, why = bad
        raise FileFormatError(f"vertex {j} {why}", *locate(text, "vertices", j))
    poly = Polygon(V, scalar)
    wit = None
    if "witnesses" in data:
        w = data["witnesses"]
        if not isinstance(w, dict):
            raise FileFormatError('"witnesses" must be an object', *locate(text, "witnesses"))
        E = np.real(np.array(_rows(w, "edges", text)))
        A = np.real(np.array(_rows(w, "angles", text)))
        wit = (E, A)
    return poly, wit, data.get("meta", {})


# ---------------------------------------------------------------- curves

CURVE_FAMILIES = ("curve-width", "curve-rot", "curve-radon", "cubic")


def dumps_curve_generator(family: str, params: dict, samples: int) -> str:
    doc = {"type": "curve", "kind": "generator", "family": family, "params": params, "samples": samples}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def dumps_curve_samples(t, points, period, phi=None) -> str:
    lines = ["{", '  "type": "curve",', '  "kind": "samples",', f'  "period": {float(period)!r},']
    if phi is not None:
        lines.append(f'  "phi": {json.dumps({"kind": phi.kind, "params": list(phi.params)})},')
    lines.append('  "t": [' + ", ".join(repr(float(x)) for x in t) + "],")
    lines.append('  "points": [\n' + ",\n".join("    " + json.dumps(_encode(p)) for p in points) + "\n  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def build_curve(family: str, params: dict, samples: int = 2000):
    """``(ParamCurve, Reparam, expected g or None)`` for a generator family."""
    from . import curves as cv

    if family == "curve-width":
        h = cv.SupportFunction(tuple(tuple(x) for x in params.get("harmonics", ())))
        return cv.constant_width_curve(h, samples), cv.Reparam.shift(math.pi), np.eye(3)
    if family == "curve-rot":
        P = cv.RotationalCurveParams(int(params["p"]), int(params["q"]),
                                     tuple(tuple(x) for x in params.get("harmonics", ())))
        g, phi = cv.rotational_certificate(P)
        return cv.rotational_curve(P, samples), phi, g
    if family == "curve-radon":
        c = cv.radon_curve(cv.RadonSeed(tuple(params.get("coeffs", ()))), samples)
        g, phi = cv.radon_certificate()
        return c, phi, g
    if family == "cubic":
        c, g, phi = cv.cubic_example(samples)
        return c, phi, g
    raise ValueError(f"unknown curve family {family!r}")


def loads_curve(text: str):
    """Parse a curve file; returns ``(ParamCurve, Reparam or None, expected g or None)``."""
    from . import curves as cv

    data = _load_json(text)
    if data.get("type") != "curve":
        raise FileFormatError('expected "type": "curve"', *locate(text, "type"))
    kind = data.get("kind")
    if kind == "generator":
        fam = data.get("family")
        if fam not in CURVE_FAMILIES:
            raise FileFormatError(f"unknown family {fam!r}", *locate(text, "family"))
        try:
            return build_curve(fam, data.get("params", {}), int(data.get("samples", 2000)))
        except (SelfDualError, KeyError, TypeError, ValueError) as exc:
            raise FileFormatError(f"invalid parameters: {exc}", *locate(text, "params")) from None
    if kind == "samples":
        rows = np.real(np.array(_rows(data, "points", text)))
        t = np.asarray(data.get("t", []), dtype=float)
        if len(t) != len(rows):
            raise FileFormatError("t and points differ in length", *locate(text, "t"))
        period = float(data.get("period", 2 * math.pi))
        D = cv._periodic_diff(rows, period)
        D2 = cv._periodic_diff(D, period)
        curve = cv.ParamCurve(t, rows, D, period, D2, None, "samples")
        phi = None
        if "phi" in data:
            p = data["phi"]
            phi = cv.Reparam(p["kind"], tuple(p["params"]))
        return curve, phi, None
    raise FileFormatError('"kind" must be "generator" or "samples"', *locate(text, "kind"))


def sniff(text: str) -> str:
    data = _load_json(text)
    return data.get("type", "polygon")
