"""
Coordinate-form sparse complex matrices, 1-based like every formula they serve.

Exact matrices keep a row map ``{row: {col: GaussianRational}}``. Float
matrices keep a complex ``scipy.sparse`` CSR array so products at dimension
n**3 = 32768 stay fast. Both forms drop zeros eagerly and never densify.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from django.conf import settings

from .exceptions import BackendMismatchError, DimensionMismatchError
from .scalars import Backend, GaussianRational, backend_of, modulus, one, zero

logger = logging.getLogger(__name__)


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


def _prune(csr, threshold):
    if threshold and csr.nnz:
        csr.data[np.abs(csr.data) < threshold] = 0
    csr.eliminate_zeros()
    csr.sort_indices()
    return csr


class SparseMatrix:
    """Square ``dim`` x ``dim`` complex matrix holding only nonzero entries."""

    __slots__ = ("dim", "backend", "_rows", "_csr")

    def __init__(self, dim, backend, rows=None, csr=None):
        if dim < 1:
            raise DimensionMismatchError(f"Matrix dimension must be positive, got {dim}")
        self.dim = dim
        self.backend = backend
        self._rows = rows if backend is Backend.EXACT else None
        self._csr = csr if backend is Backend.FLOAT else None
        if backend is Backend.EXACT and rows is None:
            self._rows = {}
        if backend is Backend.FLOAT and csr is None:
            self._csr = sp.csr_matrix((dim, dim), dtype=np.complex128)

    @classmethod
    def from_entries(cls, dim, entries, backend=None, drop_threshold=0.0):
        """Build from ``(row, col, value)`` triples or a ``{(row, col): value}`` map.

        Zero values are skipped; Float values with modulus not above
        ``drop_threshold`` are skipped as well.
        """
        if hasattr(entries, "items"):
            entries = ((row, col, value) for (row, col), value in entries.items())
        seen = set()
        rows, cols, values = [], [], []
        for row, col, value in entries:
            if not (1 <= row <= dim and 1 <= col <= dim):
                raise DimensionMismatchError(f"Entry ({row}, {col}) outside a {dim}x{dim} matrix")
            if (row, col) in seen:
                raise ValueError(f"Duplicate entry at ({row}, {col})")
            seen.add((row, col))
            value_backend = backend_of(value)
            if backend is None:
                backend = value_backend
            elif value_backend is not backend:
                raise BackendMismatchError(
                    f"Entry ({row}, {col}) is {value_backend.value}, matrix is {backend.value}"
                )
            rows.append(row)
            cols.append(col)
            values.append(value)
        backend = backend or Backend.EXACT

        if backend is Backend.EXACT:
            row_map = {}
            for row, col, value in zip(rows, cols, values):
                if value:
                    row_map.setdefault(row, {})[col] = value
            return cls(dim, backend, rows=row_map)

        data = np.array(values, dtype=np.complex128)
        keep = np.abs(data) > drop_threshold
        csr = sp.csr_matrix(
            (data[keep], (np.array(rows, dtype=np.int64)[keep] - 1, np.array(cols, dtype=np.int64)[keep] - 1)),
            shape=(dim, dim),
        )
        return cls(dim, backend, csr=_prune(csr, 0.0))

    @classmethod
    def from_csr(cls, csr):
        rows, cols = csr.shape
        if rows != cols:
            raise DimensionMismatchError(f"Matrix must be square, got {rows}x{cols}")
        return cls(rows, Backend.FLOAT, csr=_prune(sp.csr_matrix(csr, dtype=np.complex128, copy=True), 0.0))

    @classmethod
    def from_dense(cls, array, backend=None):
        """Build from a nested sequence or 2-d numpy array of scalars."""
        dim = len(array)
        entries = []
        for r, line in enumerate(array, start=1):
            if len(line) != dim:
                raise DimensionMismatchError(f"Row {r} has {len(line)} entries, expected {dim}")
            for c, value in enumerate(line, start=1):
                if isinstance(value, (np.complexfloating, np.floating)):
                    value = complex(value)
                entries.append((r, c, value))
        return cls.from_entries(dim, entries, backend=backend)

    @property
    def nnz(self):
        if self.backend is Backend.EXACT:
            return sum(len(cols) for cols in self._rows.values())
        return int(self._csr.nnz)

    def get(self, row, col):
        if self.backend is Backend.EXACT:
            return self._rows.get(row, {}).get(col, zero(Backend.EXACT))
        return complex(self._csr[row - 1, col - 1])

    def row(self, row):
        """``{col: value}`` for one row."""
        if self.backend is Backend.EXACT:
            return dict(self._rows.get(row, {}))
        start, end = self._csr.indptr[row - 1], self._csr.indptr[row]
        return {
            int(col) + 1: complex(value)
            for col, value in zip(self._csr.indices[start:end], self._csr.data[start:end])
        }

    def entries(self):
        """All ``(row, col, value)`` triples sorted by (row, col)."""
        if self.backend is Backend.EXACT:
            return [
                (row, col, self._rows[row][col])
                for row in sorted(self._rows)
                for col in sorted(self._rows[row])
            ]
        coo = self._csr.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return [
            (int(coo.row[k]) + 1, int(coo.col[k]) + 1, complex(coo.data[k]))
            for k in order
        ]

    def positions(self):
        return {(row, col) for row, col, _ in self.entries()}

    def to_csr(self):
        if self.backend is Backend.FLOAT:
            return self._csr.copy()
        raise BackendMismatchError("Exact matrices have no CSR form")

    def to_dense(self):
        """numpy array (Float) or nested list of GaussianRational (Exact)."""
        if self.backend is Backend.FLOAT:
            return self._csr.toarray()
        dense = [[zero(Backend.EXACT)] * self.dim for _ in range(self.dim)]
        for row, cols in self._rows.items():
            for col, value in cols.items():
                dense[row - 1][col - 1] = value
        return dense

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        if self.dim != other.dim or self.backend is not other.backend:
            return False
        return self.entries() == other.entries()

    __hash__ = None

    def __repr__(self):
        return f"SparseMatrix(dim={self.dim}, backend={self.backend.value}, nnz={self.nnz})"


@dataclass(frozen=True)
class StateVector:
    """Dense vector of scalars; ``component(1)`` is the first entry."""

    components: tuple

    def __post_init__(self):
        if not self.components:
            raise DimensionMismatchError("A state vector needs at least one component")
        object.__setattr__(self, "components", tuple(self.components))

    @property
    def dim(self):
        return len(self.components)

    @property
    def backend(self):
        return backend_of(self.components[0])

    def component(self, index):
        return self.components[index - 1]

    def is_zero(self):
        return not any(self.components)

    @classmethod
    def basis(cls, dim, index, backend=Backend.EXACT):
        return cls(tuple(one(backend) if k == index else zero(backend) for k in range(1, dim + 1)))

    @classmethod
    def tensor(cls, u, v):
        """u ⊗ v, with u's index the slow one."""
        return cls(tuple(a * b for a in u.components for b in v.components))

    def to_numpy(self):
        return np.array([complex(z) for z in self.components], dtype=np.complex128)


def _check_pair(a, b):
    if a.dim != b.dim:
        raise DimensionMismatchError(f"Dimension mismatch: {a.dim} vs {b.dim}")
    if a.backend is not b.backend:
        raise BackendMismatchError(f"Backend mismatch: {a.backend.value} vs {b.backend.value}")


def identity(dim, backend=Backend.EXACT):
    if backend is Backend.EXACT:
        unit = one(backend)
        return SparseMatrix(dim, backend, rows={k: {k: unit} for k in range(1, dim + 1)})
    return SparseMatrix(dim, backend, csr=sp.identity(dim, dtype=np.complex128, format="csr"))


def zeros(dim, backend=Backend.EXACT):
    return SparseMatrix(dim, backend)


def _multiply_rows(row_keys, a_rows, b_rows):
    """Rows of a product of Gaussian-integer row maps, entries as ``(re, im)`` ints."""
    product = {}
    for row in row_keys:
        acc = {}
        for mid, (ar, ai) in a_rows[row].items():
            right_row = b_rows.get(mid)
            if not right_row:
                continue
            for col, (br, bi) in right_row.items():
                cell = acc.get(col)
                if cell is None:
                    acc[col] = [ar * br - ai * bi, ar * bi + ai * br]
                else:
                    cell[0] += ar * br - ai * bi
                    cell[1] += ar * bi + ai * br
        line = {col: (re, im) for col, (re, im) in acc.items() if re or im}
        if line:
            product[row] = line
    return product


def _chunks(keys, count):
    size = -(-len(keys) // count)
    return [keys[k:k + size] for k in range(0, len(keys), size)]


@dataclass(frozen=True)
class ScaledIntegerMatrix:
    """Exact matrix held as Gaussian-integer rows over one common denominator.

    Entry (r, c) is ``complex(*rows[r][c]) / denominator``. Products multiply
    plain ints and denominators, so no Fraction is built per term.
    """

    dim: int
    rows: dict
    denominator: int = 1

    @classmethod
    def from_sparse(cls, m):
        if m.backend is not Backend.EXACT:
            raise BackendMismatchError("Only exact matrices have an integer form")
        denominator = math.lcm(
            1, *(d for cols in m._rows.values() for v in cols.values() for d in (v.re.denominator, v.im.denominator))
        )
        rows = {
            row: {
                col: (
                    v.re.numerator * (denominator // v.re.denominator),
                    v.im.numerator * (denominator // v.im.denominator),
                )
                for col, v in cols.items()
            }
            for row, cols in m._rows.items()
        }
        return cls(m.dim, rows, denominator)

    def to_sparse(self):
        d = self.denominator
        rows = {
            row: {col: GaussianRational(Fraction(re, d), Fraction(im, d)) for col, (re, im) in cols.items()}
            for row, cols in self.rows.items()
        }
        return SparseMatrix(self.dim, Backend.EXACT, rows=rows)

    def matmul(self, other, workers=None):
        if self.dim != other.dim:
            raise DimensionMismatchError(f"Dimension mismatch: {self.dim} vs {other.dim}")
        workers = workers or settings.YBE_WORKERS
        keys = sorted(self.rows)
        if workers <= 1 or len(keys) < 2 * workers:
            rows = _multiply_rows(keys, self.rows, other.rows)
        else:
            logger.debug(f"Splitting {len(keys)} rows of a dim {self.dim} product over {workers} workers")
            rows = {}
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [pool.submit(_multiply_rows, chunk, self.rows, other.rows) for chunk in _chunks(keys, workers)]
                for future in futures:
                    rows.update(future.result())
        return ScaledIntegerMatrix(self.dim, rows, self.denominator * other.denominator)

    def max_abs_diff(self, other):
        """Exact max(|Δre|, |Δim|) of ``self - other`` as a Fraction."""
        if self.dim != other.dim:
            raise DimensionMismatchError(f"Dimension mismatch: {self.dim} vs {other.dim}")
        da, db = self.denominator, other.denominator
        largest = 0
        for row in self.rows.keys() | other.rows.keys():
            left, right = self.rows.get(row, {}), other.rows.get(row, {})
            for col in left.keys() | right.keys():
                ar, ai = left.get(col, (0, 0))
                br, bi = right.get(col, (0, 0))
                largest = max(largest, abs(ar * db - br * da), abs(ai * db - bi * da))
        return Fraction(largest, da * db)


def matmul(a, b, workers=None):
    """Sparse product ``a @ b``; zeros produced by cancellation are dropped.

    Exact products split output rows over ``workers`` processes (default
    YBE_WORKERS); the result does not depend on the worker count.
    """
    _check_pair(a, b)
    if a.backend is Backend.FLOAT:
        csr = a._csr @ b._csr
        return SparseMatrix(a.dim, Backend.FLOAT, csr=_prune(sp.csr_matrix(csr), settings.YBE_FLOAT_DROP_THRESHOLD))
    product = ScaledIntegerMatrix.from_sparse(a).matmul(ScaledIntegerMatrix.from_sparse(b), workers)
    return product.to_sparse()


def kron_identity(m, k, side):
    """``I_k ⊗ M`` for ``Side.LEFT``, ``M ⊗ I_k`` for ``Side.RIGHT``.

    Left places M_{v,w} at (d(r-1)+v, d(r-1)+w), right at (k(v-1)+r, k(w-1)+r),
    with d = M.dim and 1 <= r <= k.
    """
    if k < 1:
        raise ValueError(f"Identity size must be positive, got {k}")
    side = Side(side)
    if k == 1:
        return m
    dim = m.dim * k
    if m.backend is Backend.FLOAT:
        eye = sp.identity(k, dtype=np.complex128, format="csr")
        csr = sp.kron(eye, m._csr, format="csr") if side is Side.LEFT else sp.kron(m._csr, eye, format="csr")
        return SparseMatrix(dim, Backend.FLOAT, csr=_prune(csr, 0.0))

    rows = {}
    d = m.dim
    for v, cols in m._rows.items():
        for r in range(1, k + 1):
            if side is Side.LEFT:
                offset = d * (r - 1)
                rows[offset + v] = {offset + w: value for w, value in cols.items()}
            else:
                rows[k * (v - 1) + r] = {k * (w - 1) + r: value for w, value in cols.items()}
    return SparseMatrix(dim, Backend.EXACT, rows=rows)


def kron(a, b):
    """General Kronecker product ``a ⊗ b``."""
    if a.backend is not b.backend:
        raise BackendMismatchError(f"Backend mismatch: {a.backend.value} vs {b.backend.value}")
    dim = a.dim * b.dim
    if a.backend is Backend.FLOAT:
        return SparseMatrix(dim, Backend.FLOAT, csr=_prune(sp.kron(a._csr, b._csr, format="csr"), 0.0))
    rows = {}
    for ra, cols_a in a._rows.items():
        for rb, cols_b in b._rows.items():
            line = {}
            for ca, va in cols_a.items():
                for cb, vb in cols_b.items():
                    line[b.dim * (ca - 1) + cb] = va * vb
            rows[b.dim * (ra - 1) + rb] = line
    return SparseMatrix(dim, Backend.EXACT, rows=rows)


def dagger(m):
    """Conjugate transpose."""
    if m.backend is Backend.FLOAT:
        return SparseMatrix(m.dim, Backend.FLOAT, csr=_prune(m._csr.conj().T.tocsr(), 0.0))
    rows = {}
    for row, cols in m._rows.items():
        for col, value in cols.items():
            rows.setdefault(col, {})[row] = value.conjugate()
    return SparseMatrix(m.dim, Backend.EXACT, rows=rows)


def scale(m, c):
    if m.backend is Backend.FLOAT:
        return SparseMatrix(m.dim, Backend.FLOAT, csr=_prune(m._csr * complex(c), 0.0))
    if not c:
        return zeros(m.dim, Backend.EXACT)
    rows = {row: {col: value * c for col, value in cols.items()} for row, cols in m._rows.items()}
    return SparseMatrix(m.dim, Backend.EXACT, rows=rows)


def _combine(a, b, sign):
    _check_pair(a, b)
    if a.backend is Backend.FLOAT:
        csr = a._csr + b._csr if sign > 0 else a._csr - b._csr
        return SparseMatrix(a.dim, Backend.FLOAT, csr=_prune(sp.csr_matrix(csr), 0.0))
    rows = {row: dict(cols) for row, cols in a._rows.items()}
    for row, cols in b._rows.items():
        line = rows.setdefault(row, {})
        for col, value in cols.items():
            delta = value if sign > 0 else -value
            total = line[col] + delta if col in line else delta
            if total:
                line[col] = total
            else:
                line.pop(col, None)
        if not line:
            del rows[row]
    return SparseMatrix(a.dim, Backend.EXACT, rows=rows)


def add(a, b):
    return _combine(a, b, 1)


def sub(a, b):
    return _combine(a, b, -1)


def max_abs_diff(a, b):
    """Largest entry size of ``a - b``: float modulus, or exact max(|Δre|, |Δim|)."""
    _check_pair(a, b)
    if a.backend is Backend.FLOAT:
        diff = a._csr - b._csr
        return float(np.abs(diff.data).max()) if diff.nnz else 0.0
    diff = sub(a, b)
    return max((modulus(value) for cols in diff._rows.values() for value in cols.values()), default=Fraction(0))


def max_abs_entry(m):
    if m.backend is Backend.FLOAT:
        return float(np.abs(m._csr.data).max()) if m.nnz else 0.0
    return max((modulus(value) for cols in m._rows.values() for value in cols.values()), default=Fraction(0))


def apply(m, v):
    """Matrix-vector product ``m v``."""
    if m.dim != v.dim:
        raise DimensionMismatchError(f"Cannot apply a dim {m.dim} matrix to a dim {v.dim} vector")
    if m.backend is not v.backend:
        raise BackendMismatchError(f"Backend mismatch: {m.backend.value} vs {v.backend.value}")
    if m.backend is Backend.FLOAT:
        return StateVector(tuple(complex(z) for z in m._csr @ v.to_numpy()))
    out = []
    for row in range(1, m.dim + 1):
        acc = zero(Backend.EXACT)
        for col, value in m._rows.get(row, {}).items():
            acc = acc + value * v.components[col - 1]
        out.append(acc)
    return StateVector(tuple(out))
