from fractions import Fraction

from django.test import SimpleTestCase, override_settings
from hypothesis import given, settings as hypothesis_settings
from hypothesis import strategies as st

from yangbaxter.exceptions import BackendMismatchError, FormatError
from yangbaxter.scalars import (
    Backend,
    GaussianRational,
    add,
    approx_zero,
    as_scalar,
    backend_of,
    format_scalar,
    modulus,
    mul,
    one,
    parse_scalar,
    resolve_tolerance,
    zero,
)

fractions = st.fractions(max_denominator=50).filter(lambda f: abs(f) < 1000)
gaussians = st.builds(GaussianRational, fractions, fractions)


def g(re, im=0):
    return GaussianRational(Fraction(re), Fraction(im))


class GaussianRationalTests(SimpleTestCase):
    def test_product_of_conjugates(self):
        z = g(Fraction(3, 5), Fraction(4, 5))
        self.assertEqual(z * z.conjugate(), g(1))

    def test_i_squared(self):
        self.assertEqual(g(0, 1) * g(0, 1), g(-1))

    def test_division(self):
        self.assertEqual(g(1, 1) / g(1, -1), g(0, 1))
        self.assertEqual(1 / g(0, 2), g(0, Fraction(-1, 2)))

    def test_power(self):
        self.assertEqual(g(1, 1) ** 4, g(-4))
        self.assertEqual(g(0, 2) ** -1, g(0, Fraction(-1, 2)))
        self.assertEqual(g(7, 3) ** 0, g(1))

    def test_division_by_zero(self):
        with self.assertRaises(ZeroDivisionError):
            g(1) / g(0)

    def test_mixing_with_float_is_rejected(self):
        with self.assertRaises(BackendMismatchError):
            g(1) + 0.5
        with self.assertRaises(BackendMismatchError):
            g(1) * 1j

    def test_integers_and_fractions_lift(self):
        self.assertEqual(g(1, 1) + 1, g(2, 1))
        self.assertEqual(Fraction(1, 2) * g(2, 4), g(1, 2))
        self.assertEqual(1 - g(0, 1), g(1, -1))

    def test_equality_and_hash(self):
        self.assertEqual(g(2), 2)
        self.assertEqual(hash(g(2)), hash(Fraction(2)))
        self.assertNotEqual(g(2, 1), 2)
        self.assertEqual(len({g(1, 2), g(Fraction(2, 2), 2)}), 1)

    def test_bool(self):
        self.assertFalse(g(0))
        self.assertTrue(g(0, Fraction(1, 9)))

    def test_complex_conversion(self):
        self.assertEqual(complex(g(Fraction(1, 2), -2)), 0.5 - 2j)

    @given(gaussians, gaussians, gaussians)
    @hypothesis_settings(max_examples=60, deadline=None)
    def test_field_axioms(self, a, b, c):
        self.assertEqual(a + b, b + a)
        self.assertEqual(a * b, b * a)
        self.assertEqual((a + b) + c, a + (b + c))
        self.assertEqual((a * b) * c, a * (b * c))
        self.assertEqual(a * (b + c), a * b + a * c)
        self.assertEqual(a - a, g(0))
        if a:
            self.assertEqual(a * a.inverse(), g(1))

    @given(gaussians, gaussians)
    @hypothesis_settings(max_examples=60, deadline=None)
    def test_conjugation_is_an_automorphism(self, a, b):
        self.assertEqual((a + b).conjugate(), a.conjugate() + b.conjugate())
        self.assertEqual((a * b).conjugate(), a.conjugate() * b.conjugate())
        self.assertEqual(a.conjugate().conjugate(), a)
        self.assertEqual(a * a.conjugate(), g(a.abs2()))


class HelperTests(SimpleTestCase):
    def test_backend_of(self):
        self.assertIs(backend_of(g(1)), Backend.EXACT)
        self.assertIs(backend_of(1j), Backend.FLOAT)
        self.assertIs(backend_of(0.5), Backend.FLOAT)
        with self.assertRaises(BackendMismatchError):
            backend_of("1")

    def test_checked_arithmetic_rejects_mixed_backends(self):
        with self.assertRaises(BackendMismatchError):
            add(g(1), 1j)
        with self.assertRaises(BackendMismatchError):
            mul(1j, g(1))
        self.assertEqual(add(g(1), g(0, 1)), g(1, 1))
        self.assertEqual(mul(2j, 2j), -4 + 0j)

    def test_zero_and_one(self):
        self.assertEqual(zero(Backend.EXACT), g(0))
        self.assertEqual(one(Backend.EXACT), g(1))
        self.assertEqual(zero(Backend.FLOAT), 0j)
        self.assertEqual(one(Backend.FLOAT), 1 + 0j)

    def test_as_scalar(self):
        self.assertEqual(as_scalar(Fraction(1, 3), Backend.EXACT), g(Fraction(1, 3)))
        self.assertEqual(as_scalar(2, Backend.FLOAT), 2 + 0j)
        with self.assertRaises(BackendMismatchError):
            as_scalar(0.5, Backend.EXACT)
        with self.assertRaises(BackendMismatchError):
            as_scalar(g(1), Backend.FLOAT)

    def test_modulus(self):
        self.assertEqual(modulus(g(-3, 2)), 3)
        self.assertEqual(modulus(3 + 4j), 5.0)

    def test_approx_zero(self):
        self.assertTrue(approx_zero(g(0)))
        self.assertFalse(approx_zero(g(0, Fraction(1, 10 ** 9))))
        self.assertTrue(approx_zero(1e-13 + 1e-13j, 1e-12))
        self.assertFalse(approx_zero(1e-11, 1e-12))
        with self.assertRaises(ValueError):
            approx_zero(0j, -1.0)
        with self.assertRaises(ValueError):
            approx_zero(g(0), 1e-12)

    @override_settings(YBE_FLOAT_TOLERANCE=1e-9)
    def test_resolve_tolerance(self):
        self.assertEqual(resolve_tolerance(Backend.EXACT), 0)
        with self.assertLogs("yangbaxter.scalars", level="WARNING"):
            self.assertEqual(resolve_tolerance(Backend.EXACT, 1e-6), 0)
        self.assertEqual(resolve_tolerance(Backend.FLOAT), 1e-9)
        self.assertEqual(resolve_tolerance(Backend.FLOAT, 1e-3), 1e-3)
        with self.assertRaises(ValueError):
            resolve_tolerance(Backend.FLOAT, -1e-3)


class EncodingTests(SimpleTestCase):
    def test_format_exact(self):
        self.assertEqual(format_scalar(g(Fraction(3, 5), Fraction(-4, 5))), "3/5-4/5i")
        self.assertEqual(format_scalar(g(1)), "1+0i")
        self.assertEqual(format_scalar(g(0, -1)), "0-1i")

    def test_format_float(self):
        self.assertEqual(format_scalar(0.5 + 0.25j), "0.5+0.25i")
        self.assertEqual(format_scalar(complex(1.0, -0.0)), "1.0-0.0i")

    def test_parse_exact(self):
        self.assertEqual(parse_scalar("3/5-4/5i", Backend.EXACT), g(Fraction(3, 5), Fraction(-4, 5)))
        self.assertEqual(parse_scalar("-2", Backend.EXACT), g(-2))
        self.assertEqual(parse_scalar("i", Backend.EXACT), g(0, 1))
        self.assertEqual(parse_scalar("-1/2i", Backend.EXACT), g(0, Fraction(-1, 2)))
        self.assertEqual(parse_scalar(7, Backend.EXACT), g(7))

    def test_parse_float(self):
        self.assertEqual(parse_scalar("0.5+0.25i", Backend.FLOAT), 0.5 + 0.25j)
        self.assertEqual(parse_scalar("1e-3-2.5e+2i", Backend.FLOAT), complex(1e-3, -2.5e2))
        self.assertEqual(parse_scalar(2.5, Backend.FLOAT), 2.5 + 0j)

    def test_parse_rejects_garbage(self):
        for text in ("0.5", "1/0", "abc", "", "1/2/3"):
            with self.subTest(text=text), self.assertRaises(FormatError):
                parse_scalar(text, Backend.EXACT)
        with self.assertRaises(FormatError):
            parse_scalar("one", Backend.FLOAT)
        with self.assertRaises(FormatError):
            parse_scalar(True, Backend.EXACT)

    @given(gaussians)
    @hypothesis_settings(max_examples=60, deadline=None)
    def test_exact_encoding_is_lossless(self, z):
        self.assertEqual(parse_scalar(format_scalar(z), Backend.EXACT), z)

    @given(st.complex_numbers(allow_nan=False, allow_infinity=False))
    @hypothesis_settings(max_examples=60, deadline=None)
    def test_float_encoding_is_bit_identical(self, z):
        back = parse_scalar(format_scalar(z), Backend.FLOAT)
        self.assertEqual(repr(back.real), repr(z.real))
        self.assertEqual(repr(back.imag), repr(z.imag))
