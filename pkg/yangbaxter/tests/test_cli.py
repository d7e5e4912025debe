import cmath
import io
import json
import os
import tempfile
from fractions import Fraction

from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase

from yangbaxter.cli import EXIT_FAILED, EXIT_OK, EXIT_USAGE, RunConfig, dispatch, export_matrix, import_matrix, parse_params
from yangbaxter.construct import ParamSet, Quad, build_R, random_params
from yangbaxter.exceptions import ParameterError
from yangbaxter.formats import MatrixFormat, dump_params
from yangbaxter.scalars import Backend, GaussianRational
from yangbaxter.sparsemat import identity

HALF = GaussianRational(Fraction(1, 2))


def ybe(*args):
    out = io.StringIO()
    call_command("ybe", *args, stdout=out)
    return json.loads(out.getvalue())


class CliTestCase(SimpleTestCase):
    def setUp(self):
        super().setUp()
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)

    def path(self, name):
        return os.path.join(self._tmp.name, name)

    def ybe_exit(self, *args):
        """Exit status, stdout and stderr of a ybe run expected to fail."""
        out, err = io.StringIO(), io.StringIO()
        with self.assertRaises(SystemExit) as cm:
            call_command("ybe", *args, stdout=out, stderr=err)
        return cm.exception.code, out.getvalue(), err.getvalue()

    def write_json(self, name, data):
        path = self.path(name)
        with open(path, "w") as f:
            json.dump(data, f)
        return path

    def write_params(self, name, p):
        path = self.path(name)
        dump_params(p, path)
        return path


class CommandTests(CliTestCase):
    def test_verify_braid_exact(self):
        report = ybe("verify-braid", "--n", "3", "--seed", "7", "--backend", "exact")
        self.assertEqual(report["residual"], "0")
        self.assertTrue(report["passed"])
        self.assertEqual(report["equation"], "braid")
        self.assertEqual(report["dims"], 27)

    def test_verify_quantum_float(self):
        report = ybe("verify-quantum", "--n", "4", "--backend", "float", "--tol", "1e-10")
        self.assertTrue(report["passed"])

    def test_braid_check(self):
        report = ybe("braid-check", "--n", "2", "--strands", "4")
        self.assertEqual(report["residual"], "0")
        self.assertEqual(report["dims"], 16)

    def test_check_unitary_violation_exits_one(self):
        path = self.write_json("quad.json", {
            "n": 2,
            "backend": "exact",
            "quads": [{"t": 1, "s": 1, "a": "1/2", "b": "1/2", "x": "1/2", "y": "1/2"}],
        })
        out = io.StringIO()
        with self.assertRaises(SystemExit) as cm:
            call_command("ybe", "check-unitary", "--params", path, stdout=out)
        self.assertEqual(cm.exception.code, EXIT_FAILED)
        report = json.loads(out.getvalue())
        self.assertFalse(report["unitary"])
        self.assertEqual(report["residuals"]["quads"][0]["residuals"][3], "1")

    def test_gen_s_matrix_market(self):
        path = self.path("s4.mtx")
        report = ybe("gen-s", "--n", "2", "--format", "mm", "--out", path)
        self.assertEqual(report["nnz"], 4)
        with open(path) as f:
            self.assertEqual(
                f.read(),
                "%%MatrixMarket matrix coordinate complex general\n"
                "4 4 4\n"
                "1 1 1 0\n"
                "2 3 1 0\n"
                "3 2 1 0\n"
                "4 4 1 0\n",
            )

    def test_gen_rhat_methods_agree(self):
        product, direct = self.path("product.json"), self.path("direct.json")
        ybe("gen-rhat", "--n", "5", "--seed", "3", "--format", "json", "--out", product)
        ybe("gen-rhat", "--n", "5", "--seed", "3", "--format", "json", "--method", "direct", "--out", direct)
        with open(product) as a, open(direct) as b:
            self.assertEqual(a.read(), b.read())

    def test_gen_r_round_trips(self):
        path = self.path("r.mtx")
        ybe("gen-r", "--n", "4", "--seed", "9", "--out", path)
        self.assertEqual(import_matrix(path), build_R(random_params(4, 9)))

    def test_gen_without_out_is_usage_error(self):
        code, out, err = self.ybe_exit("gen-r", "--n", "2")
        self.assertEqual(code, EXIT_USAGE)
        self.assertEqual(out, "")
        self.assertIn("--out", err)

    def test_missing_center_is_usage_error(self):
        path = self.write_json("odd.json", {
            "n": 3,
            "quads": [{"t": 1, "s": 1, "a": "1", "b": "0", "x": "0", "y": "0"}],
            "axial": [{"t": 1, "a": "1", "b": "0"}],
        })
        code, _, err = self.ybe_exit("verify-braid", "--params", path)
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("center", err)

    def test_too_few_strands(self):
        code, _, err = self.ybe_exit("braid-check", "--n", "2", "--strands", "2")
        self.assertEqual(code, EXIT_USAGE)
        self.assertIn("strands", err)

    def test_unknown_subcommand(self):
        with self.assertRaises(CommandError):
            call_command("ybe", "verify-everything", stdout=io.StringIO())

    def test_reports_are_reproducible(self):
        first = ybe("verify-quantum", "--n", "4", "--seed", "5")
        second = ybe("verify-quantum", "--n", "4", "--seed", "5")
        first.pop("elapsed_ms")
        second.pop("elapsed_ms")
        self.assertEqual(first, second)

    def test_sample_unitary_feeds_check_unitary(self):
        path = self.path("unitary.json")
        report = ybe("sample-unitary", "--n", "3", "--seed", "4", "--out", path)
        self.assertTrue(report["unitary"])
        self.assertEqual(parse_params(path).n, 3)
        self.assertTrue(ybe("check-unitary", "--params", path)["unitary"])

    def test_check_entangling(self):
        x = 0.5j * cmath.exp(0.25j * cmath.pi)
        path = self.write_params("phase.json", ParamSet(2, {(1, 1): Quad(0.5 + 0j, 0.5 + 0j, x, -x)}))
        report = ybe("check-entangling", "--params", path)
        self.assertTrue(report["entangling"])
        self.assertEqual(report["witness_rank"], 2)

    def test_check_factor(self):
        path = self.write_params("factor.json", ParamSet(2, {(1, 1): Quad(HALF, HALF, HALF * GaussianRational(0, 1), -HALF * GaussianRational(0, 1))}))
        report = ybe("check-factor", "--params", path, "--target", "rhat")
        self.assertTrue(report["factors"])
        self.assertEqual(report["witness"]["X"], [["1+0i", "0+1i"], ["0+1i", "1+0i"]])
        with self.assertRaises(SystemExit) as cm:
            call_command("ybe", "check-factor", "--params", path, "--target", "r", stdout=io.StringIO())
        self.assertEqual(cm.exception.code, EXIT_FAILED)


class DispatchTests(CliTestCase):
    def run_config(self, **kwargs):
        out, err = io.StringIO(), io.StringIO()
        status = dispatch(RunConfig(**kwargs), out, err)
        return status, out.getvalue(), err.getvalue()

    def test_exit_statuses(self):
        status, out, err = self.run_config(subcommand="verify-braid", n=2, seed=1)
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(json.loads(out)["residual"], "0")
        self.assertEqual(err, "")

        path = self.path("identity.mtx")
        export_matrix(identity(9), path, MatrixFormat.MATRIX_MARKET)
        status, out, _ = self.run_config(subcommand="check-factor", matrix_path=path)
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(json.loads(out)["n"], 3)

        status, out, err = self.run_config(subcommand="verify-braid")
        self.assertEqual(status, EXIT_USAGE)
        self.assertEqual(out, "")
        self.assertIn("--n", err)

    def test_field_mapping_is_validated_under_the_same_mapping(self):
        out, err = io.StringIO(), io.StringIO()
        self.assertEqual(dispatch({"subcommand": "verify-braid", "n": 0}, out, err), EXIT_USAGE)
        self.assertIn("error:", err.getvalue())
        self.assertEqual(dispatch({"subcommand": "verify-everything"}, out, io.StringIO()), EXIT_USAGE)
        self.assertEqual(dispatch({"subcommand": "verify-braid", "n": 2}, out, io.StringIO()), EXIT_OK)
        self.assertEqual(json.loads(out.getvalue())["residual"], "0")

    def test_non_invertible_is_usage_error(self):
        zero = GaussianRational()
        path = self.write_params("zero.json", ParamSet(2, {(1, 1): Quad(zero, zero, zero, zero)}))
        status, _, err = self.run_config(subcommand="check-entangling", params_path=path)
        self.assertEqual(status, EXIT_USAGE)
        self.assertIn("invertible", err)
        status, out, _ = self.run_config(subcommand="check-entangling", params_path=path, assume_invertible=True)
        self.assertEqual(status, EXIT_FAILED)
        self.assertFalse(json.loads(out)["entangling"])

    def test_params_conflicts(self):
        path = self.write_params("p.json", random_params(2, seed=1))
        status, _, err = self.run_config(subcommand="verify-braid", params_path=path, n=3)
        self.assertEqual(status, EXIT_USAGE)
        status, _, _ = self.run_config(subcommand="verify-braid", params_path=path, backend="float")
        self.assertEqual(status, EXIT_USAGE)

    def test_workers_flag(self):
        status, out, _ = self.run_config(subcommand="verify-braid", n=4, seed=2, workers=2)
        self.assertEqual(status, EXIT_OK)
        self.assertEqual(json.loads(out)["residual"], "0")


class RunConfigTests(SimpleTestCase):
    def test_exact_forces_zero_tolerance(self):
        with self.assertLogs("yangbaxter.cli", level="WARNING"):
            config = RunConfig(subcommand="verify-braid", n=2, backend="exact", tolerance=1e-6)
        self.assertEqual(config.tolerance, 0)
        self.assertIs(config.backend, Backend.EXACT)

    def test_validation(self):
        with self.assertRaises(ParameterError):
            RunConfig(subcommand="verify-braid", n=0)
        with self.assertRaises(ParameterError):
            RunConfig(subcommand="braid-check", n=2, strands=2)
        with self.assertRaises(ParameterError):
            RunConfig(subcommand="verify-braid", n=2, tolerance=-1.0)
        with self.assertRaises(ParameterError):
            RunConfig(subcommand="sample-unitary", n=2, backend="exact", unitary=True)
        with self.assertRaises(ValueError):
            RunConfig(subcommand="verify-everything")
