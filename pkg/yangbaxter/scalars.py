"""
Scalar arithmetic for both backends.

Exact scalars are Gaussian rationals (``GaussianRational``, rational real and
imaginary parts held as ``fractions.Fraction``). Float scalars are plain
Python ``complex`` values. Every downstream module works on either through the
helpers below.
"""

import logging
import math
from enum import Enum
from fractions import Fraction
from numbers import Rational

from django.conf import settings

from .exceptions import BackendMismatchError, FormatError

logger = logging.getLogger(__name__)


class Backend(str, Enum):
    EXACT = "exact"
    FLOAT = "float"


class GaussianRational:
    """Complex number with rational components; arithmetic never rounds."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, Rational):
            return GaussianRational(other)
        if isinstance(other, (float, complex)):
            raise BackendMismatchError(
                f"Cannot combine an exact scalar with {type(other).__name__} {other!r}"
            )
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            return GaussianRational(a * c)
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, exponent):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = GaussianRational(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __pos__(self):
        return self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return self.re == other and not self.im
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __reduce__(self):
        return (GaussianRational, (self.re, self.im))

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def abs2(self):
        """Squared modulus, exact."""
        return self.re * self.re + self.im * self.im

    def inverse(self):
        norm = self.abs2()
        if not norm:
            raise ZeroDivisionError("GaussianRational division by zero")
        return GaussianRational(self.re / norm, -self.im / norm)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


def backend_of(z):
    if isinstance(z, GaussianRational):
        return Backend.EXACT
    if isinstance(z, (float, complex)):
        return Backend.FLOAT
    raise BackendMismatchError(f"{type(z).__name__} is not a scalar of either backend")


def same_backend(a, b):
    """Backend shared by ``a`` and ``b``; mixing them is an error."""
    backend = backend_of(a)
    if backend_of(b) is not backend:
        raise BackendMismatchError(f"Backend mismatch: {backend.value} vs {backend_of(b).value}")
    return backend


def zero(backend):
    return GaussianRational() if backend is Backend.EXACT else 0j


def one(backend):
    return GaussianRational(1) if backend is Backend.EXACT else 1 + 0j


def as_scalar(value, backend):
    """Lift ints, Fractions, floats or complex values into ``backend``."""
    if backend is Backend.EXACT:
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, Rational):
            return GaussianRational(value)
        raise BackendMismatchError(f"{value!r} has no exact representation")
    if isinstance(value, GaussianRational):
        raise BackendMismatchError(f"{value} is exact, expected a float scalar")
    return complex(value)


def add(a, b):
    same_backend(a, b)
    return a + b


def sub(a, b):
    same_backend(a, b)
    return a - b


def mul(a, b):
    same_backend(a, b)
    return a * b


def neg(a):
    return -a


def conj(a):
    return a.conjugate()


def modulus(z):
    """Entry size used by every residual: exact max(|re|, |im|) or float |z|."""
    if isinstance(z, GaussianRational):
        return max(abs(z.re), abs(z.im))
    return abs(z)


def approx_zero(a, tol=0.0):
    if tol < 0:
        raise ValueError(f"Tolerance must be nonnegative, got {tol}")
    if isinstance(a, GaussianRational):
        if tol:
            raise ValueError("Exact scalars are compared with tolerance 0")
        return not a
    return max(abs(a.real), abs(a.imag)) <= tol


def resolve_tolerance(backend, tol=None):
    """Exact checks always use 0; Float checks fall back to YBE_FLOAT_TOLERANCE."""
    if backend is Backend.EXACT:
        if tol:
            logger.warning(f"Ignoring tolerance {tol} for the exact backend")
        return 0
    if tol is None:
        tol = settings.YBE_FLOAT_TOLERANCE
    if tol < 0:
        raise ValueError(f"Tolerance must be nonnegative, got {tol}")
    return tol


def format_scalar(z):
    """Encode as ``"<re><+|-><|im|>i"``, e.g. ``"3/5-4/5i"`` or ``"0.5+0.25i"``."""
    if isinstance(z, GaussianRational):
        sign = "-" if z.im < 0 else "+"
        return f"{z.re}{sign}{abs(z.im)}i"
    z = complex(z)
    sign = "-" if math.copysign(1.0, z.imag) < 0 else "+"
    return f"{z.real!r}{sign}{abs(z.imag)!r}i"


def _split_complex(text):
    body = text.replace(" ", "")
    if not body:
        raise FormatError("Empty scalar string")
    if not body.endswith("i"):
        return body, "0"
    body = body[:-1]
    split = None
    for pos in range(len(body) - 1, 0, -1):
        if body[pos] in "+-" and body[pos - 1] not in "eE":
            split = pos
            break
    if split is None:
        re_part, im_part = "0", body
    else:
        re_part, im_part = body[:split], body[split:]
    if im_part in ("", "+", "-"):
        im_part += "1"
    return re_part, im_part


def _exact_component(token, text):
    negative = token.startswith("-")
    digits = token[1:] if token[:1] in ("+", "-") else token
    numerator, _, denominator = digits.partition("/")
    if not numerator.isdigit() or (denominator and not denominator.isdigit()):
        raise FormatError(f"Not an exact scalar: {text!r}")
    if denominator and int(denominator) == 0:
        raise FormatError(f"Zero denominator in {text!r}")
    value = Fraction(int(numerator), int(denominator or 1))
    return -value if negative else value


def parse_scalar(text, backend):
    """Inverse of :func:`format_scalar` for the given backend."""
    if not isinstance(text, str):
        if isinstance(text, bool):
            raise FormatError(f"Not a scalar: {text!r}")
        if backend is Backend.EXACT and isinstance(text, int):
            return GaussianRational(text)
        if backend is Backend.FLOAT and isinstance(text, (int, float)):
            return complex(text)
        raise FormatError(f"Not a {backend.value} scalar: {text!r}")
    re_part, im_part = _split_complex(text.strip())
    if backend is Backend.EXACT:
        return GaussianRational(_exact_component(re_part, text), _exact_component(im_part, text))
    try:
        return complex(float(re_part), float(im_part))
    except ValueError as e:
        raise FormatError(f"Not a float scalar: {text!r}") from e
