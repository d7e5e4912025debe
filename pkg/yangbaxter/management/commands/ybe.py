import logging
import sys

from django.core.management.base import BaseCommand

from yangbaxter.cli import EXIT_OK, Subcommand, dispatch
from yangbaxter.construct import Family, Method
from yangbaxter.formats import MatrixFormat
from yangbaxter.scalars import Backend

HELP = {
    Subcommand.GEN_R: "Construct R and write it to --out",
    Subcommand.GEN_S: "Construct the swap gate S and write it to --out",
    Subcommand.GEN_RHAT: "Construct R̂ = RS and write it to --out",
    Subcommand.VERIFY_BRAID: "Residual of the braid equation for R",
    Subcommand.VERIFY_QUANTUM: "Residual of the quantum Yang-Baxter equation for R̂",
    Subcommand.BRAID_CHECK: "Braid-group relations of the representation on --strands strands",
    Subcommand.CHECK_UNITARY: "Unitarity conditions of the parameters",
    Subcommand.SAMPLE_UNITARY: "Draw parameters for which R is unitary",
    Subcommand.CHECK_FACTOR: "Decide whether R, R̂ or a matrix file is a tensor product X ⊗ Y",
    Subcommand.CHECK_ENTANGLING: "Decide whether R is an entangling gate",
}

VERBOSITY_LEVELS = {2: logging.INFO, 3: logging.DEBUG}


def _add_run_arguments(parser):
    parser.add_argument("--n", type=int, help="Qudit dimension n (R is n²×n²)")
    parser.add_argument("--seed", type=int, default=0, help="Seed for random parameters (default 0)")
    parser.add_argument("--backend", choices=[b.value for b in Backend], help="exact (default) or float")
    parser.add_argument("--tol", type=float, help="Residual tolerance; always 0 for exact")
    parser.add_argument("--params", help="ParamSet JSON file to use instead of random parameters")
    parser.add_argument("--out", help="Output file for generated matrices or sampled parameters")
    parser.add_argument(
        "--format", choices=[f.value for f in MatrixFormat], default=MatrixFormat.MATRIX_MARKET.value
    )
    parser.add_argument("--workers", type=int, help="Processes for exact products (default YBE_WORKERS)")
    parser.add_argument("--unitary", action="store_true", help="Draw unitary float parameters")
    parser.add_argument("--method", choices=[m.value for m in Method], default=Method.PRODUCT.value)


class Command(BaseCommand):
    help = "Construct and verify Yang-Baxter solutions"

    def add_arguments(self, parser):
        subparsers = parser.add_subparsers(
            dest="subcommand",
            required=True,
        )
        for subcommand in Subcommand:
            sub = subparsers.add_parser(subcommand.value, help=HELP[subcommand])
            _add_run_arguments(sub)
            if subcommand is Subcommand.BRAID_CHECK:
                sub.add_argument("--strands", type=int, default=3, help="Number of strands k >= 3")
            if subcommand is Subcommand.CHECK_FACTOR:
                sub.add_argument("--target", choices=[f.value for f in Family], default=Family.RHAT.value)
                sub.add_argument("--matrix", help="Matrix Market or JSON matrix file to factor")
            if subcommand is Subcommand.CHECK_ENTANGLING:
                sub.add_argument("--trials", type=int, help="Random witness trials (default YBE_WITNESS_TRIALS)")
                sub.add_argument(
                    "--assume-invertible",
                    action="store_true",
                    help="Skip the invertibility precondition",
                )

    def handle(self, *args, **options):
        level = VERBOSITY_LEVELS.get(options["verbosity"])
        if level is not None:
            logging.getLogger("yangbaxter").setLevel(level)

        status = dispatch(
            {
                "subcommand": options["subcommand"],
                "n": options["n"],
                "backend": options["backend"],
                "seed": options["seed"],
                "tolerance": options["tol"],
                "params_path": options["params"],
                "matrix_path": options.get("matrix"),
                "out_path": options["out"],
                "fmt": options["format"],
                "strands": options.get("strands", 3),
                "trials": options.get("trials"),
                "method": options["method"],
                "target": options.get("target", Family.RHAT.value),
                "unitary": options["unitary"],
                "assume_invertible": options.get("assume_invertible", False),
                "workers": options["workers"],
            },
            self.stdout,
            self.stderr,
        )
        if status != EXIT_OK:
            sys.exit(status)
