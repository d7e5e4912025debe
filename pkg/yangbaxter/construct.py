"""
The matrix families: R (the braid-equation solution), the swap S and
R̂ = RS, together with their index combinatorics and parameter sampling.

Everything is 1-based. For 1 <= t, s <= m a quadruple (a, b, x, y) occupies
sixteen positions of R; for odd n an axial pair (a, b) occupies eight more
per t, and a center scalar sits at ((n²+1)/2, (n²+1)/2).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import numpy as np

from .exceptions import BackendMismatchError, ParameterError
from .scalars import Backend, GaussianRational, backend_of, one
from .sparsemat import SparseMatrix, matmul

logger = logging.getLogger(__name__)


class Method(str, Enum):
    PRODUCT = "product"
    DIRECT = "direct"


class Family(str, Enum):
    R = "r"
    RHAT = "rhat"


def half_size(n):
    """m: n/2 for even n, (n-1)/2 for odd n."""
    return n // 2


@dataclass(frozen=True)
class Quad:
    a: object
    b: object
    x: object
    y: object

    def __iter__(self):
        return iter((self.a, self.b, self.x, self.y))


@dataclass(frozen=True)
class Axial:
    a: object
    b: object

    def __iter__(self):
        return iter((self.a, self.b))


@dataclass(frozen=True)
class ParamSet:
    """Free parameters of R for dimension ``n``.

    ``quads`` is keyed by (t, s) with 1 <= t, s <= m; ``axial`` by t and only
    for odd n; ``center`` is present iff n is odd.
    """

    n: int
    quads: dict = field(default_factory=dict)
    axial: dict = field(default_factory=dict)
    center: object = None

    def __post_init__(self):
        n = self.n
        if not isinstance(n, int) or n < 1:
            raise ParameterError(f"n must be a positive integer, got {n!r}")
        m = half_size(n)
        expected = {(t, s) for t in range(1, m + 1) for s in range(1, m + 1)}
        for key in self.quads:
            if key not in expected:
                raise ParameterError(f"quads key {key} out of [1,{m}]²")
        missing = expected - set(self.quads)
        if missing:
            raise ParameterError(f"quads missing keys {sorted(missing)}")
        if n % 2 == 0:
            if self.axial:
                raise ParameterError(f"axial parameters are only defined for odd n, got n={n}")
            if self.center is not None:
                raise ParameterError(f"center is only defined for odd n, got n={n}")
        else:
            if set(self.axial) != set(range(1, m + 1)):
                raise ParameterError(f"axial keys must be exactly 1..{m}, got {sorted(self.axial)}")
            if self.center is None:
                raise ParameterError(f"center is required for odd n={n}")
        backends = {backend_of(z) for z in self.scalars()}
        if len(backends) > 1:
            raise BackendMismatchError("ParamSet mixes exact and float scalars")

    @property
    def m(self):
        return half_size(self.n)

    @property
    def backend(self):
        for z in self.scalars():
            return backend_of(z)
        return Backend.EXACT

    def scalars(self):
        for key in sorted(self.quads):
            yield from self.quads[key]
        for key in sorted(self.axial):
            yield from self.axial[key]
        if self.center is not None:
            yield self.center

    def label_index(self, t, s):
        """Subscript used for the quad at (t, s), e.g. 6 for a₆ in R₁₆."""
        return (t - 1) * self.n + s


@dataclass(frozen=True)
class IndexQuadruple:
    t: int
    s: int
    i: int
    j: int
    k: int
    l: int
    i_tilde: int
    j_tilde: int
    k_tilde: int
    l_tilde: int

    def as_tuple(self):
        return (self.i, self.j, self.k, self.l, self.i_tilde, self.j_tilde, self.k_tilde, self.l_tilde)


def index_quadruple(n, t, s):
    if n < 2:
        raise ParameterError(f"Index quadruples need n >= 2, got n={n}")
    m = half_size(n)
    if not (1 <= t <= m and 1 <= s <= m):
        raise ParameterError(f"(t, s) = ({t}, {s}) out of [1,{m}]²")
    nn = n * n + 1
    i = (t - 1) * n + s
    j = (s - 1) * n + t
    k = (t - 1) * n + (n - s + 1)
    l = (n - s) * n + t
    return IndexQuadruple(t, s, i, j, k, l, nn - i, nn - j, nn - k, nn - l)


def axial_indices(n, t):
    """(i, j, ĩ, j̃) of the odd-n axial pair t."""
    mid = (n + 1) // 2
    i = (t - 1) * n + mid
    j = (mid - 1) * n + t
    nn = n * n + 1
    return i, j, nn - i, nn - j


def center_index(n):
    return (n * n + 1) // 2


def _r_placements(p):
    """(row, col, value, label) for every position R assigns."""
    n = p.n
    for (t, s), quad in sorted(p.quads.items()):
        q = index_quadruple(n, t, s)
        label = p.label_index(t, s)
        i, j, k, l, it, jt, kt, lt = q.as_tuple()
        for name, value, spots in (
            ("a", quad.a, ((i, j), (k, l), (kt, lt), (it, jt))),
            ("b", quad.b, ((i, jt), (k, lt), (kt, l), (it, j))),
            ("x", quad.x, ((i, lt), (k, jt), (kt, j), (it, l))),
            ("y", quad.y, ((i, l), (k, j), (kt, jt), (it, lt))),
        ):
            for row, col in spots:
                yield row, col, value, f"{name}{label}"
    if n % 2:
        for t, pair in sorted(p.axial.items()):
            i, j, it, jt = axial_indices(n, t)
            for name, value, spots in (
                ("a", pair.a, ((i, j), (j, i), (jt, it), (it, jt))),
                ("b", pair.b, ((i, jt), (j, it), (jt, i), (it, j))),
            ):
                for row, col in spots:
                    yield row, col, value, f"{name}{i}"
        c = center_index(n)
        yield c, c, p.center, "x"


def _rhat_placements(p):
    n = p.n
    for (t, s), quad in sorted(p.quads.items()):
        q = index_quadruple(n, t, s)
        label = p.label_index(t, s)
        i, k, it, kt = q.i, q.k, q.i_tilde, q.k_tilde
        for name, value, spots in (
            ("a", quad.a, ((i, i), (k, k), (kt, kt), (it, it))),
            ("b", quad.b, ((i, it), (k, kt), (kt, k), (it, i))),
            ("x", quad.x, ((i, kt), (k, it), (kt, i), (it, k))),
            ("y", quad.y, ((i, k), (k, i), (kt, it), (it, kt))),
        ):
            for row, col in spots:
                yield row, col, value, f"{name}{label}"
    if n % 2:
        for t, pair in sorted(p.axial.items()):
            i, j, it, jt = axial_indices(n, t)
            for name, value, spots in (
                ("a", pair.a, ((i, i), (j, j), (jt, jt), (it, it))),
                ("b", pair.b, ((i, it), (j, jt), (jt, j), (it, i))),
            ):
                for row, col in spots:
                    yield row, col, value, f"{name}{i}"
        c = center_index(n)
        yield c, c, p.center, "x"


def _collect(placements):
    cells = {}
    for row, col, value, label in placements:
        if (row, col) in cells:
            raise AssertionError(f"Placement collision at ({row}, {col}) for {label}")
        cells[(row, col)] = (value, label)
    return cells


def layout(n, family=Family.R):
    """``{(row, col): label}`` of every parameter slot, e.g. ``{(1, 1): "a1", ...}``."""
    p = symbolic_params(n)
    placements = _r_placements(p) if Family(family) is Family.R else _rhat_placements(p)
    return {pos: label for pos, (_, label) in _collect(placements).items()}


def symbolic_params(n):
    """A ParamSet of ones; only its key structure matters."""
    unit = one(Backend.EXACT)
    m = half_size(n)
    quads = {(t, s): Quad(unit, unit, unit, unit) for t in range(1, m + 1) for s in range(1, m + 1)}
    if n % 2 == 0:
        return ParamSet(n, quads)
    return ParamSet(n, quads, {t: Axial(unit, unit) for t in range(1, m + 1)}, unit)


def build_R(p):
    cells = _collect(_r_placements(p))
    matrix = SparseMatrix.from_entries(
        p.n * p.n, {pos: value for pos, (value, _) in cells.items()}, backend=p.backend
    )
    logger.info(f"Built R for n={p.n}: {len(cells)} slots, {matrix.nnz} nonzero")
    return matrix


def build_S(n, backend=Backend.EXACT):
    """Swap gate: S_{v,w} = 1 for v = (t-1)n+s, w = (s-1)n+t, 1 <= t, s <= n."""
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    unit = one(backend)
    entries = [
        ((t - 1) * n + s, (s - 1) * n + t, unit)
        for t in range(1, n + 1)
        for s in range(1, n + 1)
    ]
    return SparseMatrix.from_entries(n * n, entries, backend=backend)


def build_Rhat(p, method=Method.PRODUCT):
    method = Method(method)
    if method is Method.PRODUCT:
        return matmul(build_R(p), build_S(p.n, p.backend))
    cells = _collect(_rhat_placements(p))
    return SparseMatrix.from_entries(
        p.n * p.n, {pos: value for pos, (value, _) in cells.items()}, backend=p.backend
    )


def lemma_R(p):
    """R rebuilt from the function form a(t,s), b(t,s), x(t,s), y(t,s), even n only.

    Each function folds t -> min(t, n-t+1), s -> min(s, n-s+1) into the quad
    table and is placed over the full range 1 <= t, s <= n.
    """
    n = p.n
    if n % 2:
        raise ParameterError(f"The function-form constructor only covers even n, got n={n}")
    nn = n * n + 1

    def fold(u):
        return min(u, n - u + 1)

    cells = {}
    for t in range(1, n + 1):
        for s in range(1, n + 1):
            quad = p.quads[(fold(t), fold(s))]
            v = (t - 1) * n + s
            for value, w in (
                (quad.a, (s - 1) * n + t),
                (quad.b, nn - ((s - 1) * n + t)),
                (quad.x, nn - ((n - s) * n + t)),
                (quad.y, (n - s) * n + t),
            ):
                if (v, w) in cells:
                    raise AssertionError(f"Function-form collision at ({v}, {w})")
                cells[(v, w)] = value
    return SparseMatrix.from_entries(n * n, cells, backend=p.backend)


def _draw(rng, backend, nonzero):
    while True:
        if backend is Backend.EXACT:
            nums = rng.integers(-9, 10, size=2)
            dens = rng.integers(1, 10, size=2)
            z = GaussianRational(Fraction(int(nums[0]), int(dens[0])), Fraction(int(nums[1]), int(dens[1])))
        else:
            re, im = rng.uniform(-1.0, 1.0, size=2)
            z = complex(float(re), float(im))
        if z or not nonzero:
            return z


def random_params(n, seed=0, backend=Backend.EXACT, nonzero=False):
    """Deterministic ParamSet for (n, seed).

    Exact components are p/q with p in [-9, 9] and q in [1, 9]; Float
    components are uniform in [-1, 1]. ``nonzero`` redraws zero scalars.
    """
    if n < 1:
        raise ParameterError(f"n must be positive, got {n}")
    backend = Backend(backend)
    rng = np.random.default_rng(seed & 0xFFFFFFFFFFFFFFFF)
    m = half_size(n)
    quads = {}
    for t in range(1, m + 1):
        for s in range(1, m + 1):
            quads[(t, s)] = Quad(*(_draw(rng, backend, nonzero) for _ in range(4)))
    if n % 2 == 0:
        return ParamSet(n, quads)
    axial = {t: Axial(_draw(rng, backend, nonzero), _draw(rng, backend, nonzero)) for t in range(1, m + 1)}
    return ParamSet(n, quads, axial, _draw(rng, backend, nonzero))
