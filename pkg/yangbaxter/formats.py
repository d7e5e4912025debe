"""
File formats: ParamSet JSON, Matrix Market and matrix JSON.

Scalars are always written with ``format_scalar`` so exact values survive a
round trip unchanged and floats come back bit-identical.
"""

import json
import logging
from enum import Enum

from .construct import Axial, ParamSet, Quad, half_size
from .exceptions import FormatError, ParameterError
from .scalars import Backend, GaussianRational, format_scalar, parse_scalar
from .sparsemat import SparseMatrix

logger = logging.getLogger(__name__)

MATRIX_MARKET_HEADER = "%%MatrixMarket matrix coordinate complex general"


class MatrixFormat(str, Enum):
    MATRIX_MARKET = "mm"
    JSON = "json"


def params_to_dict(p):
    data = {
        "n": p.n,
        "backend": p.backend.value,
        "quads": [
            {"t": t, "s": s, **{name: format_scalar(z) for name, z in zip("abxy", p.quads[(t, s)])}}
            for t, s in sorted(p.quads)
        ],
    }
    if p.n % 2:
        data["axial"] = [
            {"t": t, "a": format_scalar(p.axial[t].a), "b": format_scalar(p.axial[t].b)}
            for t in sorted(p.axial)
        ]
        data["center"] = format_scalar(p.center)
    return data


def _index(entry, key, where):
    value = entry.get(key)
    if not isinstance(value, int) or isinstance(value, bool):
        raise ParameterError(f"{where}: '{key}' must be an integer, got {value!r}")
    return value


def _scalar(entry, key, backend, where):
    if key not in entry:
        raise ParameterError(f"{where}: missing field '{key}'")
    try:
        return parse_scalar(entry[key], backend)
    except FormatError as e:
        raise ParameterError(f"{where}: field '{key}': {e}") from e


def params_from_dict(data):
    """Validated ParamSet from its JSON form."""
    if not isinstance(data, dict):
        raise ParameterError("Parameter document must be a JSON object")
    n = data.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParameterError(f"'n' must be a positive integer, got {n!r}")
    try:
        backend = Backend(data.get("backend", Backend.EXACT.value))
    except ValueError as e:
        raise ParameterError(f"Unknown backend {data.get('backend')!r}") from e
    m = half_size(n)

    quads = {}
    for entry in data.get("quads", []):
        t, s = _index(entry, "t", "quads"), _index(entry, "s", "quads")
        if not (1 <= t <= m and 1 <= s <= m):
            raise ParameterError(f"quads key ({t},{s}) out of [1,{m}]²")
        if (t, s) in quads:
            raise ParameterError(f"quads key ({t},{s}) given twice")
        where = f"quads ({t},{s})"
        quads[(t, s)] = Quad(*(_scalar(entry, name, backend, where) for name in "abxy"))

    axial, center = {}, None
    if n % 2 == 0:
        for key in ("axial", "center"):
            if key in data:
                raise ParameterError(f"'{key}' is only allowed for odd n, got n={n}")
    else:
        if "center" not in data:
            raise ParameterError(f"missing field 'center' (required for odd n={n})")
        if "axial" not in data and m:
            raise ParameterError(f"missing field 'axial' (required for odd n={n})")
        for entry in data.get("axial", []):
            t = _index(entry, "t", "axial")
            if not 1 <= t <= m:
                raise ParameterError(f"axial key {t} out of [1,{m}]")
            if t in axial:
                raise ParameterError(f"axial key {t} given twice")
            axial[t] = Axial(*(_scalar(entry, name, backend, f"axial {t}") for name in "ab"))
        center = _scalar(data, "center", backend, "center")
    return ParamSet(n, quads, axial, center)


def dump_params(p, path):
    with open(path, "w", encoding="utf-8") as f:
        json.dump(params_to_dict(p), f, indent=2)
        f.write("\n")


def load_params(path):
    with open(path, encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as e:
            raise FormatError(f"{path}: malformed JSON: {e}") from e
    return params_from_dict(data)


def _mm_component(value):
    if isinstance(value, GaussianRational):
        return f"{value.re} {value.im}"
    return f"{value.real!r} {value.imag!r}"


def write_matrix_market(m, f):
    f.write(MATRIX_MARKET_HEADER + "\n")
    f.write(f"{m.dim} {m.dim} {m.nnz}\n")
    for row, col, value in m.entries():
        f.write(f"{row} {col} {_mm_component(value)}\n")


def _is_exact_token(token):
    return not any(ch in token for ch in ".eEnN")


def read_matrix_market(f, backend=None):
    """Reads what ``write_matrix_market`` writes.

    Float components are always written with a decimal point or exponent, so a
    file whose components are all integers or p/q tokens is read back exact
    unless ``backend`` says otherwise.
    """
    lines = iter(f)
    header = next(lines, "").strip()
    if header.lower() != MATRIX_MARKET_HEADER.lower():
        raise FormatError(f"Unsupported Matrix Market header {header!r}")
    size = None
    for line in lines:
        line = line.strip()
        if line and not line.startswith("%"):
            size = line.split()
            break
    if not size or len(size) != 3:
        raise FormatError("Missing Matrix Market size line")
    try:
        rows, cols, nnz = (int(token) for token in size)
    except ValueError as e:
        raise FormatError(f"Bad Matrix Market size line {' '.join(size)!r}") from e
    if rows != cols:
        raise FormatError(f"Matrix must be square, got {rows}x{cols}")

    raw = []
    for line in lines:
        tokens = line.split()
        if not tokens or tokens[0].startswith("%"):
            continue
        if len(tokens) != 4:
            raise FormatError(f"Bad Matrix Market entry line {line.strip()!r}")
        raw.append(tokens)
    if len(raw) != nnz:
        raise FormatError(f"Size line announces {nnz} entries, found {len(raw)}")

    if backend is None:
        exact = all(_is_exact_token(tokens[2]) and _is_exact_token(tokens[3]) for tokens in raw)
        backend = Backend.EXACT if exact else Backend.FLOAT
    backend = Backend(backend)
    entries = []
    for row, col, re_token, im_token in raw:
        sign = "" if im_token.startswith("-") else "+"
        entries.append((int(row), int(col), parse_scalar(f"{re_token}{sign}{im_token}i", backend)))
    return SparseMatrix.from_entries(rows, entries, backend=backend)


def matrix_to_dict(m):
    return {
        "dim": m.dim,
        "backend": m.backend.value,
        "entries": [[row, col, format_scalar(value)] for row, col, value in m.entries()],
    }


def matrix_from_dict(data):
    try:
        backend = Backend(data["backend"])
        dim = int(data["dim"])
        entries = [(int(row), int(col), parse_scalar(text, backend)) for row, col, text in data["entries"]]
    except (KeyError, TypeError, ValueError) as e:
        raise FormatError(f"Malformed matrix document: {e}") from e
    return SparseMatrix.from_entries(dim, entries, backend=backend)


def write_matrix(m, path, fmt=MatrixFormat.MATRIX_MARKET):
    fmt = MatrixFormat(fmt)
    with open(path, "w", encoding="utf-8") as f:
        if fmt is MatrixFormat.MATRIX_MARKET:
            write_matrix_market(m, f)
        else:
            json.dump(matrix_to_dict(m), f)
            f.write("\n")
    logger.info(f"Wrote dim {m.dim} matrix with {m.nnz} entries to {path} ({fmt.value})")


def read_matrix(path, backend=None):
    with open(path, encoding="utf-8") as f:
        text = f.read()
    if text.lstrip().startswith("%%MatrixMarket"):
        return read_matrix_market(text.splitlines(), backend)
    try:
        return matrix_from_dict(json.loads(text))
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: neither Matrix Market nor JSON: {e}") from e
