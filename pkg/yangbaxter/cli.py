"""
Run orchestration behind ``manage.py ybe``.

Every subcommand builds its inputs from a parameter file or from
(n, seed, backend), runs one library operation and prints a JSON report.
Exit status is 0 when the checked property holds, 1 when it fails and 2 for
usage or input errors.
"""

import json
import logging
import math
import sys
from dataclasses import dataclass
from enum import Enum

from .analyze import entangling_check, sample_unitary_params, tensor_factor, unitarity_matrix_residual, unitarity_residuals
from .construct import Family, Method, build_R, build_Rhat, build_S, random_params
from .exceptions import ParameterError, YangBaxterError
from .formats import MatrixFormat, dump_params, load_params, params_to_dict, read_matrix, write_matrix
from .scalars import Backend, resolve_tolerance
from .verify import braid_rep_check, braid_residual, quantum_residual

logger = logging.getLogger(__name__)


class Subcommand(str, Enum):
    GEN_R = "gen-r"
    GEN_S = "gen-s"
    GEN_RHAT = "gen-rhat"
    VERIFY_BRAID = "verify-braid"
    VERIFY_QUANTUM = "verify-quantum"
    BRAID_CHECK = "braid-check"
    CHECK_UNITARY = "check-unitary"
    SAMPLE_UNITARY = "sample-unitary"
    CHECK_FACTOR = "check-factor"
    CHECK_ENTANGLING = "check-entangling"


EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


@dataclass
class RunConfig:
    subcommand: Subcommand
    n: int = None
    backend: Backend = None
    seed: int = 0
    tolerance: float = None
    params_path: str = None
    matrix_path: str = None
    out_path: str = None
    fmt: MatrixFormat = MatrixFormat.MATRIX_MARKET
    strands: int = 3
    trials: int = None
    method: Method = Method.PRODUCT
    target: Family = Family.RHAT
    unitary: bool = False
    assume_invertible: bool = False
    workers: int = None

    def __post_init__(self):
        self.subcommand = Subcommand(self.subcommand)
        self.fmt = MatrixFormat(self.fmt)
        self.method = Method(self.method)
        self.target = Family(self.target)
        if self.backend is not None:
            self.backend = Backend(self.backend)
        if self.n is not None and self.n < 1:
            raise ParameterError(f"--n must be at least 1, got {self.n}")
        if self.subcommand is Subcommand.BRAID_CHECK and self.strands < 3:
            raise ParameterError(f"--strands must be at least 3, got {self.strands}")
        if self.tolerance is not None and self.tolerance < 0:
            raise ParameterError(f"--tol must be non-negative, got {self.tolerance}")
        if self.trials is not None and self.trials < 0:
            raise ParameterError(f"--trials must be non-negative, got {self.trials}")
        if self.workers is not None and self.workers < 1:
            raise ParameterError(f"--workers must be at least 1, got {self.workers}")
        if self.unitary and self.backend is Backend.EXACT:
            raise ParameterError("--unitary draws float parameters; drop --backend exact")
        if self.backend is Backend.EXACT and self.tolerance:
            logger.warning(f"Ignoring --tol {self.tolerance} for the exact backend")
            self.tolerance = 0


def parse_params(path):
    p = load_params(path)
    logger.info(f"Loaded {p.backend.value} parameters for n={p.n} from {path}")
    return p


def export_matrix(m, path, fmt=MatrixFormat.MATRIX_MARKET):
    write_matrix(m, path, fmt)


def import_matrix(path):
    return read_matrix(path)


def _require_n(config):
    if config.n is None:
        raise ParameterError(f"{config.subcommand.value} needs --n or --params")
    return config.n


def _resolve_params(config):
    if config.params_path:
        p = parse_params(config.params_path)
        if config.n is not None and config.n != p.n:
            raise ParameterError(f"--n {config.n} disagrees with n={p.n} in {config.params_path}")
        if config.backend is not None and config.backend is not p.backend:
            raise ParameterError(f"--backend {config.backend.value} disagrees with the {p.backend.value} parameter file")
        return p
    n = _require_n(config)
    if config.unitary:
        return sample_unitary_params(n, config.seed)
    return random_params(n, config.seed, config.backend or Backend.EXACT)


def _require_out(config):
    if not config.out_path:
        raise ParameterError(f"{config.subcommand.value} writes a matrix file; pass --out")
    return config.out_path


def _generate(config):
    out = _require_out(config)
    if config.subcommand is Subcommand.GEN_S:
        n = _require_n(config)
        matrix = build_S(n, config.backend or Backend.EXACT)
    else:
        p = _resolve_params(config)
        n = p.n
        matrix = build_R(p) if config.subcommand is Subcommand.GEN_R else build_Rhat(p, config.method)
    export_matrix(matrix, out, config.fmt)
    report = {
        "subcommand": config.subcommand.value,
        "n": n,
        "dims": matrix.dim,
        "backend": matrix.backend.value,
        "nnz": matrix.nnz,
        "format": config.fmt.value,
        "out": str(out),
    }
    return report, True


def _verify(config):
    p = _resolve_params(config)
    tol = config.tolerance
    if config.subcommand is Subcommand.VERIFY_BRAID:
        report = braid_residual(build_R(p), p.n, tol, config.workers)
    elif config.subcommand is Subcommand.VERIFY_QUANTUM:
        report = quantum_residual(build_Rhat(p, config.method), p.n, tol, config.workers)
    else:
        report = braid_rep_check(build_R(p), p.n, config.strands, tol, workers=config.workers)
    return report.to_dict(), report.passed


def _check_unitary(config):
    p = _resolve_params(config)
    tol = resolve_tolerance(p.backend, config.tolerance)
    residuals = unitarity_residuals(p)
    passed = residuals.within(tol)
    report = {
        "n": p.n,
        "backend": p.backend.value,
        "unitary": passed,
        "tolerance": str(tol),
        "residuals": residuals.to_dict(),
        "matrix_residual": str(unitarity_matrix_residual(build_R(p))),
    }
    return report, passed


def _sample_unitary(config):
    if config.params_path:
        raise ParameterError("sample-unitary draws its own parameters; drop --params")
    n = _require_n(config)
    p = sample_unitary_params(n, config.seed)
    if config.out_path:
        dump_params(p, config.out_path)
    tol = resolve_tolerance(p.backend, config.tolerance)
    residuals = unitarity_residuals(p)
    passed = residuals.within(tol)
    report = {
        "n": n,
        "seed": config.seed,
        "unitary": passed,
        "max_residual": str(residuals.max_residual()),
        "params": params_to_dict(p),
    }
    return report, passed


def _check_factor(config):
    if config.matrix_path:
        matrix = import_matrix(config.matrix_path)
        n = math.isqrt(matrix.dim)
        if n * n != matrix.dim:
            raise ParameterError(f"Matrix dimension {matrix.dim} is not a square n²")
        source = str(config.matrix_path)
    else:
        p = _resolve_params(config)
        n = p.n
        matrix = build_R(p) if config.target is Family.R else build_Rhat(p, config.method)
        source = config.target.value
    witness = tensor_factor(matrix, n, config.tolerance)
    report = {
        "n": n,
        "source": source,
        "factors": witness is not None,
        "witness": witness.to_dict() if witness else None,
    }
    return report, witness is not None


def _check_entangling(config):
    p = _resolve_params(config)
    result = entangling_check(
        p,
        tol=config.tolerance,
        witness_trials=config.trials,
        seed=config.seed,
        assume_invertible=config.assume_invertible,
    )
    return {"n": p.n, **result.to_dict()}, result.entangling


HANDLERS = {
    Subcommand.GEN_R: _generate,
    Subcommand.GEN_S: _generate,
    Subcommand.GEN_RHAT: _generate,
    Subcommand.VERIFY_BRAID: _verify,
    Subcommand.VERIFY_QUANTUM: _verify,
    Subcommand.BRAID_CHECK: _verify,
    Subcommand.CHECK_UNITARY: _check_unitary,
    Subcommand.SAMPLE_UNITARY: _sample_unitary,
    Subcommand.CHECK_FACTOR: _check_factor,
    Subcommand.CHECK_ENTANGLING: _check_entangling,
}


def render(report):
    return json.dumps(report, sort_keys=True, indent=2)


def run(config, stdout=None):
    """Runs one subcommand and prints its report; errors propagate."""
    stdout = stdout or sys.stdout
    report, passed = HANDLERS[config.subcommand](config)
    stdout.write(render(report) + "\n")
    status = EXIT_OK if passed else EXIT_FAILED
    logger.info(f"{config.subcommand.value} finished with exit status {status}")
    return status


def dispatch(config, stdout=None, stderr=None):
    """:func:`run` with input errors mapped to exit status 2.

    ``config`` is a RunConfig or a mapping of its fields; a mapping is
    validated under the same error mapping.
    """
    stderr = stderr or sys.stderr
    name = config.get("subcommand") if isinstance(config, dict) else config.subcommand.value
    try:
        if isinstance(config, dict):
            config = RunConfig(**config)
        return run(config, stdout)
    except (YangBaxterError, OSError, ValueError) as e:
        logger.error(f"{name} failed: {e}")
        stderr.write(f"error: {e}\n")
        return EXIT_USAGE
