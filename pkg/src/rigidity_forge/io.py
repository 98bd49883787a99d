"""JSON certificate files: stable key order, decimal-string integers, version "1"."""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .fields import FieldDescriptor, FieldElement, FieldError
from .linalg import ExactMatrix, SparseChanges
from .structured import MatrixDescriptor
from .certify.core import Certificate

VERSION = "1"


class CertificateFormatError(ValueError):
    """Malformed certificate file; the message names the offending position."""


# ---------------------------------------------------------------------------
# encoding


def encode_field(field: FieldDescriptor) -> dict:
    if field.kind == "cyclotomic":
        return {"kind": "cyclotomic", "m": str(field.m)}
    if field.kind == "prime":
        return {"kind": "prime", "p": str(field.p)}
    return {"kind": "extension", "p": str(field.p), "minpoly": [str(c) for c in field.minpoly]}


def encode_element(x: FieldElement) -> list:
    if x.field.is_finite:
        return [str(int(c)) for c in x.coeffs]
    out = []
    for c in x.coeffs:
        c = Fraction(c)
        out.append(f"{c.numerator}/{c.denominator}")
    return out


def _matrix_elements(m: ExactMatrix):
    F = m.field
    rows = []
    for i in range(m.rows):
        row = []
        for j in range(m.cols):
            if F.is_finite:
                row.append([str(int(c)) for c in m.num[i, j]])
            else:
                row.append([f"{Fraction(int(c), m.den).numerator}/{Fraction(int(c), m.den).denominator}" for c in m.num[i, j]])
        rows.append(row)
    return rows


def encode_descriptor(desc: MatrixDescriptor) -> dict:
    params = {}
    for key, val in desc.params.items():
        if key in ("f", "t", "h"):
            params[key] = [encode_element(v) for v in val]
        elif key in ("a", "b"):
            params[key] = encode_element(val)
        elif key in ("d", "n", "N"):
            params[key] = str(int(val))
        elif key == "group":
            params[key] = [str(int(x)) for x in val]
        elif key == "factors":
            params[key] = [encode_descriptor(d) for d in val]
        elif key == "matrix":
            params[key] = {"rows": str(val.rows), "cols": str(val.cols), "entries": _matrix_elements(val)}
        else:
            raise CertificateFormatError(f"cannot encode descriptor parameter {key!r}")
    return {"kind": desc.kind, "params": params}


def _plain(value):
    """Provenance made JSON-safe: integers become decimal strings."""
    if isinstance(value, bool) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, Fraction)):
        return str(value)
    if isinstance(value, FieldElement):
        return encode_element(value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    return str(value)


def certificate_to_dict(cert: Certificate) -> dict:
    changes = [[str(i), str(j), encode_element(v)] for i, j, v in cert.changes.triplets()]
    return {
        "version": VERSION,
        "field": encode_field(cert.field),
        "matrix": encode_descriptor(cert.matrix),
        "shape": [str(cert.shape[0]), str(cert.shape[1])],
        "changes": changes,
        "claimed_rank": str(cert.claimed_rank),
        "claimed_regular_sparsity": str(cert.claimed_regular_sparsity),
        "provenance": _plain(cert.provenance),
    }


def serialize(cert: Certificate) -> bytes:
    return (json.dumps(certificate_to_dict(cert), sort_keys=True, indent=1) + "\n").encode()


# ---------------------------------------------------------------------------
# parsing


def _int(value, where):
    if not isinstance(value, str):
        raise CertificateFormatError(f"{where}: expected a decimal string, got {type(value).__name__}")
    try:
        return int(value)
    except ValueError:
        raise CertificateFormatError(f"{where}: {value!r} is not a decimal integer") from None


def _get(obj, key, where):
    if not isinstance(obj, dict):
        raise CertificateFormatError(f"{where}: expected an object")
    if key not in obj:
        raise CertificateFormatError(f"{where}: missing key {key!r}")
    return obj[key]


def decode_field(obj, where="field") -> FieldDescriptor:
    kind = _get(obj, "kind", where)
    try:
        if kind == "cyclotomic":
            return FieldDescriptor("cyclotomic", m=_int(_get(obj, "m", where), f"{where}.m"))
        if kind == "prime":
            return FieldDescriptor("prime", p=_int(_get(obj, "p", where), f"{where}.p"))
        if kind == "extension":
            mp = _get(obj, "minpoly", where)
            if not isinstance(mp, list):
                raise CertificateFormatError(f"{where}.minpoly: expected a list")
            coeffs = tuple(_int(c, f"{where}.minpoly[{k}]") for k, c in enumerate(mp))
            return FieldDescriptor("extension", p=_int(_get(obj, "p", where), f"{where}.p"), minpoly=coeffs)
    except FieldError as exc:
        raise CertificateFormatError(f"{where}: {exc}") from None
    raise CertificateFormatError(f"{where}.kind: unknown field kind {kind!r}")


def decode_element(obj, field: FieldDescriptor, where) -> FieldElement:
    if not isinstance(obj, list) or len(obj) != field.degree:
        raise CertificateFormatError(f"{where}: expected {field.degree} coefficients")
    coeffs = []
    for k, c in enumerate(obj):
        if not isinstance(c, str):
            raise CertificateFormatError(f"{where}[{k}]: expected a string")
        if field.is_finite:
            v = _int(c, f"{where}[{k}]")
            if not 0 <= v < field.p:
                raise CertificateFormatError(f"{where}[{k}]: {v} is not in [0, {field.p})")
            coeffs.append(v)
        else:
            try:
                coeffs.append(Fraction(c))
            except (ValueError, ZeroDivisionError):
                raise CertificateFormatError(f"{where}[{k}]: {c!r} is not a rational") from None
    return field.element(coeffs)


def decode_descriptor(obj, field: FieldDescriptor, where="matrix") -> MatrixDescriptor:
    kind = _get(obj, "kind", where)
    raw = _get(obj, "params", where)
    if not isinstance(raw, dict):
        raise CertificateFormatError(f"{where}.params: expected an object")
    params = {}
    for key, val in raw.items():
        here = f"{where}.params.{key}"
        if key in ("f", "t", "h"):
            if not isinstance(val, list):
                raise CertificateFormatError(f"{here}: expected a list")
            params[key] = [decode_element(v, field, f"{here}[{k}]") for k, v in enumerate(val)]
        elif key in ("a", "b"):
            params[key] = decode_element(val, field, here)
        elif key in ("d", "n", "N"):
            params[key] = _int(val, here)
        elif key == "group":
            if not isinstance(val, list):
                raise CertificateFormatError(f"{here}: expected a list")
            params[key] = [_int(v, f"{here}[{k}]") for k, v in enumerate(val)]
        elif key == "factors":
            if not isinstance(val, list) or not val:
                raise CertificateFormatError(f"{here}: expected a nonempty list")
            params[key] = [decode_descriptor(v, field, f"{here}[{k}]") for k, v in enumerate(val)]
        elif key == "matrix":
            rows = _int(_get(val, "rows", here), f"{here}.rows")
            cols = _int(_get(val, "cols", here), f"{here}.cols")
            entries = _get(val, "entries", here)
            if not isinstance(entries, list) or len(entries) != rows or any(
                not isinstance(r, list) or len(r) != cols for r in entries
            ):
                raise CertificateFormatError(f"{here}.entries: expected a {rows} x {cols} array")
            vals = [[decode_element(v, field, f"{here}.entries[{i}][{j}]") for j, v in enumerate(r)]
                    for i, r in enumerate(entries)]
            params[key] = ExactMatrix.from_rows(field, vals)
        else:
            raise CertificateFormatError(f"{here}: unknown parameter")
    try:
        return MatrixDescriptor(kind, params, field)
    except ValueError as exc:
        raise CertificateFormatError(f"{where}: {exc}") from None


def certificate_from_dict(obj) -> Certificate:
    if not isinstance(obj, dict):
        raise CertificateFormatError("top level: expected an object")
    version = _get(obj, "version", "top level")
    if version != VERSION:
        raise CertificateFormatError(f"version: unsupported certificate version {version!r}")
    field = decode_field(_get(obj, "field", "top level"))
    desc = decode_descriptor(_get(obj, "matrix", "top level"), field)
    shape = _get(obj, "shape", "top level")
    if not isinstance(shape, list) or len(shape) != 2:
        raise CertificateFormatError("shape: expected [rows, cols]")
    rows, cols = _int(shape[0], "shape[0]"), _int(shape[1], "shape[1]")
    raw = _get(obj, "changes", "top level")
    if not isinstance(raw, list):
        raise CertificateFormatError("changes: expected a list")
    triplets = []
    for k, t in enumerate(raw):
        if not isinstance(t, list) or len(t) != 3:
            raise CertificateFormatError(f"changes[{k}]: expected [row, col, value]")
        i, j = _int(t[0], f"changes[{k}][0]"), _int(t[1], f"changes[{k}][1]")
        if not (0 <= i < rows and 0 <= j < cols):
            raise CertificateFormatError(f"changes[{k}]: position ({i}, {j}) outside {rows} x {cols}")
        triplets.append((i, j, decode_element(t[2], field, f"changes[{k}][2]")))
    try:
        changes = SparseChanges.from_triplets(field, rows, cols, triplets)
        cert = Certificate(
            desc, field, changes,
            _int(_get(obj, "claimed_rank", "top level"), "claimed_rank"),
            _int(_get(obj, "claimed_regular_sparsity", "top level"), "claimed_regular_sparsity"),
            obj.get("provenance", {}) or {},
        )
    except (ValueError, FieldError) as exc:
        raise CertificateFormatError(f"certificate: {exc}") from None
    return cert


def parse(data) -> Certificate:
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode()
        except UnicodeDecodeError as exc:
            raise CertificateFormatError(f"byte {exc.start}: not UTF-8") from None
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise CertificateFormatError(f"line {exc.lineno} column {exc.colno} (char {exc.pos}): {exc.msg}") from None
    return certificate_from_dict(obj)


def save(cert: Certificate, path):
    with open(path, "wb") as fh:
        fh.write(serialize(cert))


def load(path) -> Certificate:
    with open(path, "rb") as fh:
        return parse(fh.read())


def matrix_to_dict(m: ExactMatrix) -> dict:
    return {"field": encode_field(m.field), "rows": str(m.rows), "cols": str(m.cols), "entries": _matrix_elements(m)}


def matrix_from_dict(obj) -> ExactMatrix:
    field = decode_field(_get(obj, "field", "top level"))
    desc = decode_descriptor({"kind": "explicit", "params": {"matrix": {k: obj[k] for k in ("rows", "cols", "entries") if k in obj}}},
                             field)
    return desc.params["matrix"]
