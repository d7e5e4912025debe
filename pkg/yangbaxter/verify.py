"""
Residual checks for the braid equation, the quantum Yang-Baxter equation and
the braid-group relations of the induced representation.

All products stay sparse: the factors R ⊗ I and I ⊗ R have n·nnz(R) entries
and the triple products have bounded row width.
"""

import logging
import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from django.conf import settings

from .construct import build_S
from .exceptions import DimensionMismatchError, ParameterError, SizeLimitError
from .scalars import Backend, resolve_tolerance
from .sparsemat import ScaledIntegerMatrix, Side, kron_identity, matmul, max_abs_diff

logger = logging.getLogger(__name__)


class Equation(str, Enum):
    BRAID = "braid"
    QUANTUM = "quantum"
    BRAID_RELATIONS = "braid_relations"


@dataclass(frozen=True)
class VerificationReport:
    equation: Equation
    n: int
    dims: int
    residual: object
    passed: bool
    elapsed: float
    tolerance: object = 0

    def to_dict(self):
        return {
            "equation": self.equation.value,
            "n": self.n,
            "dims": self.dims,
            "residual": str(self.residual),
            "passed": self.passed,
            "elapsed_ms": round(self.elapsed * 1000.0, 3),
        }


def _check_dim(m, n):
    if m.dim != n * n:
        raise DimensionMismatchError(f"Expected a {n * n}x{n * n} matrix for n={n}, got dim {m.dim}")


def _report(equation, n, dims, residual, tol, started):
    passed = residual <= tol
    report = VerificationReport(equation, n, dims, residual, passed, time.perf_counter() - started, tol)
    logger.info(f"{equation.value} check n={n} dims={dims}: residual={residual} passed={passed}")
    return report


def _lift(m):
    """Exact factors go to integer form for the products; Float ones stay CSR."""
    return ScaledIntegerMatrix.from_sparse(m) if m.backend is Backend.EXACT else m


def _mul(a, b, workers=None):
    if isinstance(a, ScaledIntegerMatrix):
        return a.matmul(b, workers)
    return matmul(a, b, workers)


def _diff(a, b):
    if isinstance(a, ScaledIntegerMatrix):
        return a.max_abs_diff(b)
    return max_abs_diff(a, b)


def _triple_residual(first, second, workers=None):
    """max |ABA - BAB| for the two lifted factors A, B."""
    lhs = _mul(_mul(first, second, workers), first, workers)
    rhs = _mul(_mul(second, first, workers), second, workers)
    return _diff(lhs, rhs)


def braid_residual(r, n, tol=None, workers=None):
    """Residual of (R⊗I)(I⊗R)(R⊗I) = (I⊗R)(R⊗I)(I⊗R) on (Cⁿ)^⊗3."""
    _check_dim(r, n)
    tol = resolve_tolerance(r.backend, tol)
    started = time.perf_counter()
    r_i = _lift(kron_identity(r, n, Side.RIGHT))
    i_r = _lift(kron_identity(r, n, Side.LEFT))
    residual = _triple_residual(r_i, i_r, workers)
    return _report(Equation.BRAID, n, n ** 3, residual, tol, started)


def quantum_residual(rhat, n, tol=None, workers=None):
    """Residual of R̂₁₂R̂₁₃R̂₂₃ = R̂₂₃R̂₁₃R̂₁₂ with R̂₁₃ = (I⊗S)(R̂⊗I)(I⊗S)."""
    _check_dim(rhat, n)
    tol = resolve_tolerance(rhat.backend, tol)
    started = time.perf_counter()
    r12 = _lift(kron_identity(rhat, n, Side.RIGHT))
    r23 = _lift(kron_identity(rhat, n, Side.LEFT))
    i_s = _lift(kron_identity(build_S(n, rhat.backend), n, Side.LEFT))
    r13 = _mul(_mul(i_s, r12, workers), i_s, workers)
    lhs = _mul(_mul(r12, r13, workers), r23, workers)
    rhs = _mul(_mul(r23, r13, workers), r12, workers)
    residual = _diff(lhs, rhs)
    return _report(Equation.QUANTUM, n, n ** 3, residual, tol, started)


def braid_generator(r, n, strands, position):
    """ρ_i = I^{⊗(i-1)} ⊗ R ⊗ I^{⊗(k-i-1)} acting on (Cⁿ)^⊗k."""
    right = kron_identity(r, n ** (strands - position - 1), Side.RIGHT)
    return kron_identity(right, n ** (position - 1), Side.LEFT)


def braid_rep_check(r, n, strands=3, tol=None, limit=None, workers=None):
    """Largest residual over ρᵢρᵢ₊₁ρᵢ = ρᵢ₊₁ρᵢρᵢ₊₁ and ρᵢρⱼ = ρⱼρᵢ for |i-j| >= 2."""
    _check_dim(r, n)
    if strands < 3:
        raise ParameterError(f"Braid relations need at least 3 strands, got {strands}")
    limit = limit or settings.YBE_BRAID_STATE_LIMIT
    if n ** strands > limit:
        raise SizeLimitError(f"n^k = {n ** strands} exceeds the configured limit {limit}")
    tol = resolve_tolerance(r.backend, tol)
    started = time.perf_counter()

    generators = [_lift(braid_generator(r, n, strands, i)) for i in range(1, strands)]
    residual = 0.0 if r.backend is Backend.FLOAT else Fraction(0)
    for i in range(len(generators) - 1):
        residual = max(residual, _triple_residual(generators[i], generators[i + 1], workers))
    for i in range(len(generators)):
        for j in range(i + 2, len(generators)):
            far = _diff(
                _mul(generators[i], generators[j], workers),
                _mul(generators[j], generators[i], workers),
            )
            logger.debug(f"far commutation ρ{i + 1}ρ{j + 1}: {far}")
            residual = max(residual, far)
    return _report(Equation.BRAID_RELATIONS, n, n ** strands, residual, tol, started)


def solution_equivalence(m, n, tol=None, workers=None):
    """Braid report for M next to the quantum report for M·S."""
    swapped = matmul(m, build_S(n, m.backend))
    return braid_residual(m, n, tol, workers), quantum_residual(swapped, n, tol, workers)
