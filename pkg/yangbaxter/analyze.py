"""
Unitarity, tensor-product factorization, Schmidt rank and the entangling-gate
decision for the R family.
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from django.conf import settings

from .construct import Axial, ParamSet, Quad, build_R, build_S, half_size
from .exceptions import DimensionMismatchError, NonInvertibleError, ParameterError
from .scalars import Backend, GaussianRational, format_scalar, modulus, resolve_tolerance, zero
from .sparsemat import SparseMatrix, StateVector, apply, dagger, identity, kron, matmul, max_abs_diff

logger = logging.getLogger(__name__)


def quad_residuals(a, b, x, y):
    """(r1, r2, r3, r4) of the four unitarity conditions for one quadruple."""
    ac, bc, xc, yc = a.conjugate(), b.conjugate(), x.conjugate(), y.conjugate()
    return (
        modulus(a * ac + b * bc + x * xc + y * yc - 1),
        modulus(x * ac + a * xc + y * bc + b * yc),
        modulus(x * bc + b * xc + y * ac + a * yc),
        modulus(a * bc + b * ac + x * yc + y * xc),
    )


@dataclass(frozen=True)
class UnitarityResiduals:
    """Per-quad and per-axial (r1..r4) plus the center's |x x̄ - 1|.

    Axial pairs use the same four expressions with x = y = 0, so their r2 and
    r3 are identically zero.
    """

    quads: dict = field(default_factory=dict)
    axial: dict = field(default_factory=dict)
    center: object = None

    def all_residuals(self):
        for key in sorted(self.quads):
            yield from self.quads[key]
        for key in sorted(self.axial):
            yield from self.axial[key]
        if self.center is not None:
            yield self.center

    def max_residual(self):
        return max(self.all_residuals(), default=Fraction(0))

    def within(self, tol=0):
        return self.max_residual() <= tol

    def to_dict(self):
        return {
            "quads": [
                {"t": t, "s": s, "residuals": [str(r) for r in self.quads[(t, s)]]}
                for t, s in sorted(self.quads)
            ],
            "axial": [{"t": t, "residuals": [str(r) for r in self.axial[t]]} for t in sorted(self.axial)],
            "center": None if self.center is None else str(self.center),
            "max_residual": str(self.max_residual()),
        }


def unitarity_residuals(p):
    backend = p.backend
    nil = zero(backend)
    quads = {key: quad_residuals(*quad) for key, quad in p.quads.items()}
    axial = {t: quad_residuals(pair.a, pair.b, nil, nil) for t, pair in p.axial.items()}
    center = None
    if p.center is not None:
        center = modulus(p.center * p.center.conjugate() - 1)
    return UnitarityResiduals(quads, axial, center)


def is_unitary(p, tol=None):
    return unitarity_residuals(p).within(resolve_tolerance(p.backend, tol))


def unitarity_matrix_residual(m):
    """max |M†M - I|, the matrix-level unitarity check."""
    return max_abs_diff(matmul(dagger(m), m), identity(m.dim, m.backend))


def unitary_quad(alpha, beta, phi, psi):
    """Quad satisfying all four conditions, built from u, p, v, q.

    With u = a+b, v = a-b, p = x+y, q = x-y the conditions become
    |u|²+|p|² = 1, |v|²+|q|² = 1, Re(p ū) = 0 and Re(q v̄) = 0.
    """
    u = math.cos(alpha) * cmath.exp(1j * phi)
    p = 1j * math.sin(alpha) * cmath.exp(1j * phi)
    v = math.cos(beta) * cmath.exp(1j * psi)
    q = 1j * math.sin(beta) * cmath.exp(1j * psi)
    return Quad((u + v) / 2, (u - v) / 2, (p + q) / 2, (p - q) / 2)


def unitary_axial(gamma, chi):
    return Axial(math.cos(gamma) * cmath.exp(1j * chi), 1j * math.sin(gamma) * cmath.exp(1j * chi))


def sample_unitary_params(n, seed=0):
    """Deterministic Float ParamSet whose R is unitary."""
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    m = half_size(n)
    quads = {}
    for t in range(1, m + 1):
        for s in range(1, m + 1):
            quads[(t, s)] = unitary_quad(*(float(angle) for angle in rng.uniform(0.0, 2 * math.pi, size=4)))
    if n % 2 == 0:
        return ParamSet(n, quads)
    axial = {t: unitary_axial(*(float(angle) for angle in rng.uniform(0.0, 2 * math.pi, size=2))) for t in range(1, m + 1)}
    center = cmath.exp(1j * float(rng.uniform(0.0, 2 * math.pi)))
    return ParamSet(n, quads, axial, center)


@dataclass(frozen=True)
class FactorWitness:
    """M = X ⊗ Y with X's pivot entry equal to 1 (X = Y = 0 when M = 0)."""

    X: tuple
    Y: tuple
    degenerate: bool = False

    def kron(self):
        return kron(SparseMatrix.from_dense(self.X), SparseMatrix.from_dense(self.Y))

    def to_dict(self):
        return {
            "X": [[format_scalar(z) for z in row] for row in self.X],
            "Y": [[format_scalar(z) for z in row] for row in self.Y],
            "degenerate": self.degenerate,
        }


def _reshuffle(m, n):
    """T[(i-1)n+j, (k-1)n+l] = M[(i-1)n+k, (j-1)n+l], each row a vectorized block."""
    table = {}
    for row, col, value in m.entries():
        i, k = divmod(row - 1, n)
        j, l = divmod(col - 1, n)
        table[(i * n + j + 1, k * n + l + 1)] = value
    return table


def _size(z):
    return z.abs2() if isinstance(z, GaussianRational) else abs(z)


def tensor_factor(m, n, tol=None):
    """Witness for M = X ⊗ Y, or None when the reshuffled array has rank > 1."""
    if m.dim != n * n:
        raise DimensionMismatchError(f"Expected a {n * n}x{n * n} matrix for n={n}, got dim {m.dim}")
    backend = m.backend
    tol = resolve_tolerance(backend, tol)
    table = _reshuffle(m, n)
    nil = zero(backend)
    if not table:
        blank = tuple(tuple(nil for _ in range(n)) for _ in range(n))
        logger.info("tensor_factor: zero matrix, returning degenerate witness")
        return FactorWitness(blank, blank, degenerate=True)

    pivot_pos, pivot = None, None
    for pos in sorted(table):
        if pivot is None or _size(table[pos]) > _size(pivot):
            pivot_pos, pivot = pos, table[pos]
    p_row, p_col = pivot_pos

    column = {r: v for (r, c), v in table.items() if c == p_col}
    line = {c: v for (r, c), v in table.items() if r == p_row}
    bound = tol * abs(pivot) ** 2 if backend is Backend.FLOAT else 0
    checked = set(table) | {(r, c) for r in column for c in line}
    for r, c in checked:
        minor = table.get((r, c), nil) * pivot - column.get(r, nil) * line.get(c, nil)
        if modulus(minor) > bound:
            logger.debug(f"tensor_factor: minor at {(r, c)} is {minor}, not a product")
            return None

    X = tuple(
        tuple(column.get(i * n + j + 1, nil) / pivot for j in range(n))
        for i in range(n)
    )
    Y = tuple(
        tuple(line.get(k * n + l + 1, nil) for l in range(n))
        for k in range(n)
    )
    return FactorWitness(X, Y)


def exact_rank(rows):
    """Rank of a dense GaussianRational matrix by Gaussian elimination."""
    work = [list(row) for row in rows]
    rank = 0
    width = len(work[0]) if work else 0
    for col in range(width):
        pivot = next((r for r in range(rank, len(work)) if work[r][col]), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = work[rank][col].inverse()
        for r in range(rank + 1, len(work)):
            factor = work[r][col]
            if factor:
                factor = factor * inv
                work[r] = [a - factor * b for a, b in zip(work[r], work[rank])]
        rank += 1
    return rank


def schmidt_rank(v, n, tol=None):
    """Rank of W with W[i][j] = v[(i-1)n+j]; 1 means a product state."""
    if v.dim != n * n:
        raise DimensionMismatchError(f"Expected a length {n * n} vector for n={n}, got {v.dim}")
    if v.is_zero():
        raise ParameterError("The zero vector has no Schmidt rank")
    backend = v.backend
    tol = resolve_tolerance(backend, tol)
    if backend is Backend.EXACT:
        return exact_rank([v.components[i * n:(i + 1) * n] for i in range(n)])
    singular = np.linalg.svd(v.to_numpy().reshape(n, n), compute_uv=False)
    return int(np.count_nonzero(singular > tol * singular[0]))


def is_invertible(m):
    if m.backend is Backend.EXACT:
        return exact_rank(m.to_dense()) == m.dim
    return int(np.linalg.matrix_rank(m.to_dense())) == m.dim


@dataclass(frozen=True)
class EntanglingReport:
    entangling: bool
    factor_of_R: FactorWitness = None
    factor_of_RS: FactorWitness = None
    witness_state: StateVector = None
    witness_rank: int = None

    def to_dict(self):
        return {
            "entangling": self.entangling,
            "factor_of_R": self.factor_of_R.to_dict() if self.factor_of_R else None,
            "factor_of_RS": self.factor_of_RS.to_dict() if self.factor_of_RS else None,
            "witness_state": (
                [format_scalar(z) for z in self.witness_state.components] if self.witness_state else None
            ),
            "witness_rank": self.witness_rank,
        }


def _random_vector(rng, n, backend):
    if backend is Backend.EXACT:
        nums = rng.integers(-9, 10, size=(n, 2))
        dens = rng.integers(1, 10, size=(n, 2))
        return StateVector(tuple(
            GaussianRational(Fraction(int(a), int(c)), Fraction(int(b), int(d)))
            for (a, b), (c, d) in zip(nums, dens)
        ))
    return StateVector(tuple(complex(z) for z in rng.normal(size=n) + 1j * rng.normal(size=n)))


def find_witness(r, n, trials, seed=0, tol=None):
    """First product state whose image under R has Schmidt rank >= 2.

    Basis states e_i ⊗ e_j are tried in order, then ``trials`` seeded random
    product states. Returns (state, rank) or (None, None).
    """
    backend = r.backend
    for index in range(1, n * n + 1):
        state = StateVector.basis(n * n, index, backend)
        image = apply(r, state)
        if image.is_zero():
            continue
        rank = schmidt_rank(image, n, tol)
        if rank >= 2:
            logger.info(f"Entangling witness: basis state {index} maps to Schmidt rank {rank}")
            return state, rank
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    for trial in range(trials):
        u, v = _random_vector(rng, n, backend), _random_vector(rng, n, backend)
        if u.is_zero() or v.is_zero():
            continue
        state = StateVector.tensor(u, v)
        image = apply(r, state)
        if image.is_zero():
            continue
        rank = schmidt_rank(image, n, tol)
        logger.debug(f"witness trial {trial}: Schmidt rank {rank}")
        if rank >= 2:
            return state, rank
    return None, None


def entangling_check(p, tol=None, witness_trials=None, seed=0, assume_invertible=False):
    """R is entangling iff neither R nor RS factors as X ⊗ Y (invertible R only)."""
    r = build_R(p)
    tol = resolve_tolerance(p.backend, tol)
    if not assume_invertible and not is_unitary(p, tol) and not is_invertible(r):
        logger.error(f"entangling_check: R for n={p.n} is not invertible")
        raise NonInvertibleError("R is not invertible; the entangling criterion does not apply")
    rs = matmul(r, build_S(p.n, p.backend))
    factor_r = tensor_factor(r, p.n, tol)
    factor_rs = tensor_factor(rs, p.n, tol)
    entangling = factor_r is None and factor_rs is None
    logger.info(f"entangling_check n={p.n}: entangling={entangling}")
    if not entangling:
        return EntanglingReport(False, factor_r, factor_rs)
    if witness_trials is None:
        witness_trials = settings.YBE_WITNESS_TRIALS
    state, rank = find_witness(r, p.n, witness_trials, seed, tol)
    return EntanglingReport(True, None, None, state, rank)
