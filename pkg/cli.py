import argparse
import io
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, TextIO, Tuple, Union

import matplotlib
import numpy as np
from matplotlib.figure import Figure
from matplotlib.patches import Polygon

from elliptical_range import ellipse_boundary, elliptical_range
from kippenhahn import boundary_csv, boundary_frame, convex_hull, fov_boundary, kippenhahn_points, numerical_radius
from matrix_core import FieldOfValuesError, MatrixFormatError, SquareComplexMatrix, hermitian_parts
from poly_core import adjugate_dual, conic_of, normalize_conic, pencil_determinant, poly_of_conic
from verify import VerificationSuite

# Configure logging
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')
logger = logging.getLogger(__name__)

CONFIG_FILE = "fov_config.json"
SUBCOMMANDS = ("ellipse", "poly", "dual", "boundary", "verify", "plot", "radius")
FORMATS = {
    "ellipse": ("json",),
    "poly": ("json",),
    "dual": ("json",),
    "boundary": ("csv", "json"),
    "verify": ("json", "csv"),
    "plot": ("svg",),
    "radius": ("json",),
}
DEFAULTS: Dict[str, Any] = {
    "grid": 720,
    "seed": 0,
    "tol": 1e-9,
    "samples": 10000,
    "normal_tol": 1e-10,
    "workers": 1,
    "random_count": 0,
}
ENV_OVERRIDES = {
    "FOV_GRID": ("grid", int),
    "FOV_SEED": ("seed", int),
    "FOV_TOL": ("tol", float),
    "FOV_SAMPLES": ("samples", int),
    "FOV_WORKERS": ("workers", int),
}

EXIT_OK = 0
EXIT_FAILED_CHECKS = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3


class UsageError(FieldOfValuesError):
    """Invalid flag combination or configuration value"""


def load_fov_config(path: str = CONFIG_FILE) -> Dict[str, Any]:
    """
    Load defaults from the config file, then apply environment overrides

    Args:
        path: JSON object with any of the DEFAULTS keys

    Returns:
        Dictionary with every DEFAULTS key
    """
    config = dict(DEFAULTS)
    if os.path.exists(path):
        try:
            with open(path, 'r', encoding='utf-8') as f:
                stored = json.load(f)
            if not isinstance(stored, dict):
                raise ValueError("config file must hold a JSON object")
            config.update({key: value for key, value in stored.items() if key in DEFAULTS})
        except (OSError, ValueError) as e:
            logger.warning(f"Error loading {path}, using built-in defaults: {e}")
    else:
        logger.warning(f"Config file {path} not found, using built-in defaults")

    for variable, (key, cast) in ENV_OVERRIDES.items():
        raw = os.environ.get(variable)
        if raw is None:
            continue
        try:
            config[key] = cast(raw)
        except ValueError:
            raise UsageError(f"{variable}={raw!r} is not a valid {cast.__name__}")
    return config


@dataclass
class CliConfig:
    subcommand: str
    matrix_text: Optional[str] = None
    input_path: Optional[str] = None
    grid: int = 720
    seed: int = 0
    tol: float = 1e-9
    samples: int = 10000
    normal_tol: float = 1e-10
    workers: int = 1
    output: Optional[str] = None
    format: Optional[str] = None
    branches: str = "outer"
    random_count: int = 0
    golden: bool = False

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise UsageError(f"Unknown subcommand {self.subcommand!r}")
        if self.grid < 3:
            raise UsageError(f"--grid must be at least 3, got {self.grid}")
        if not self.tol > 0 or not self.normal_tol > 0:
            raise UsageError("Tolerances must be positive")
        if self.samples < 1 or self.workers < 1 or self.random_count < 0:
            raise UsageError("--samples and --workers must be positive, --random-count nonnegative")
        if self.matrix_text is not None and self.input_path is not None:
            raise UsageError("Give the matrix with either --matrix or --input, not both")
        if self.branches not in ("all", "outer"):
            raise UsageError(f"--branches must be 'all' or 'outer', got {self.branches!r}")
        if self.format is None:
            self.format = FORMATS[self.subcommand][0]
        if self.format not in FORMATS[self.subcommand]:
            raise UsageError(f"Format {self.format!r} is not available for '{self.subcommand}'")


def load_matrix_document(matrix_text: Optional[str], input_path: Optional[str],
                         stream: Optional[TextIO] = None) -> Tuple[bool, Union[SquareComplexMatrix, str]]:
    """
    Read a matrix JSON document from an inline literal, a file or a stream

    Args:
        matrix_text: Inline JSON literal (--matrix)
        input_path: Path of a JSON file (--input)
        stream: Fallback when neither is given, standard input by default

    Returns:
        (True, matrix) on success, (False, error message) otherwise
    """
    try:
        if matrix_text is not None:
            source, text = "--matrix", matrix_text
        elif input_path is not None:
            source = input_path
            with open(input_path, 'r', encoding='utf-8') as f:
                text = f.read()
        else:
            source, text = "standard input", (stream or sys.stdin).read()
        matrix = SquareComplexMatrix.from_json(json.loads(text))
        logger.info(f"Loaded a {matrix.n}x{matrix.n} matrix from {source}")
        return True, matrix
    except OSError as e:
        return False, f"Cannot read matrix file: {e}"
    except json.JSONDecodeError as e:
        return False, f"Matrix document is not valid JSON: {e}"
    except MatrixFormatError as e:
        return False, f"Malformed matrix document: {e}"


def render_svg(matrix: SquareComplexMatrix, grid: int, workers: int = 1) -> str:
    """
    Draw F(A) as an SVG document

    The hull of the boundary samples is one patch, every grid angle gets one
    sample marker and every eigenvalue one cross; 2x2 matrices also mark the
    ellipse foci and outline the closed-form ellipse. The view is padded by
    10% of the larger hull extent.

    Args:
        matrix: The square matrix A
        grid: Number of boundary angles
        workers: Threads for the boundary sweep

    Returns:
        SVG text
    """
    samples = fov_boundary(matrix, grid, workers)
    points = np.array([s.point for s in samples])
    hull = convex_hull(points)
    spectrum = np.linalg.eigvals(matrix.entries)
    vertices = np.array([[z.real, z.imag] for z in hull.vertices])

    xs = np.concatenate([vertices[:, 0], spectrum.real])
    ys = np.concatenate([vertices[:, 1], spectrum.imag])
    extent = max(xs.max() - xs.min(), ys.max() - ys.min())
    pad = 0.1 * extent if extent > 0 else 0.5

    fig = Figure(figsize=(6, 6))
    ax = fig.subplots()
    ax.add_patch(Polygon(vertices, closed=True, facecolor="#cfe2f3", edgecolor="#1f4e79", gid="hull"))
    ax.plot(points.real, points.imag, linestyle="none", marker="o", markersize=1.5, color="#1f4e79",
            gid="samples")
    ax.plot(spectrum.real, spectrum.imag, linestyle="none", marker="x", markersize=6, color="#c00000",
            gid="eigenvalues")
    if matrix.n == 2:
        disk = elliptical_range(matrix)
        foci = np.array([disk.focus1, disk.focus2])
        ax.plot(foci.real, foci.imag, linestyle="none", marker="s", markersize=3, fillstyle="none",
                color="#7f6000", gid="foci")
        if disk.semi_major > 0:
            outline = np.array([[z.real, z.imag] for z in ellipse_boundary(disk, grid)])
            ax.add_patch(Polygon(outline, closed=True, fill=False, linestyle="--", linewidth=0.8,
                                 edgecolor="#7f6000", gid="ellipse"))
    ax.set_xlim(xs.min() - pad, xs.max() + pad)
    ax.set_ylim(ys.min() - pad, ys.max() + pad)
    ax.set_aspect("equal")
    ax.set_xlabel("Re z")
    ax.set_ylabel("Im z")
    ax.set_title(f"F(A), {matrix.n}x{matrix.n}, {grid} angles")
    buffer = io.StringIO()
    # Fixed salt and no date keep the document reproducible
    with matplotlib.rc_context({"svg.hashsalt": "field-of-values"}):
        fig.savefig(buffer, format="svg", metadata={"Date": None})
    logger.info(f"Rendered SVG with {len(samples)} samples and {len(hull.vertices)} hull vertices")
    return buffer.getvalue()


def _dual_document(matrix: SquareComplexMatrix) -> Dict[str, Any]:
    poly = pencil_determinant(hermitian_parts(matrix))
    dual = normalize_conic(adjugate_dual(conic_of(poly)))
    return {"conic": dual.to_json(), "point_equation": poly_of_conic(dual).to_json()}


def _boundary_document(config: CliConfig, matrix: SquareComplexMatrix) -> str:
    if config.branches == "all":
        samples = kippenhahn_points(matrix, config.grid, config.workers)
    else:
        samples = fov_boundary(matrix, config.grid, config.workers)
    if config.format == "csv":
        return boundary_csv(samples)
    return boundary_frame(samples).to_json(orient="records", double_precision=15)


def _verify(config: CliConfig, matrix: Optional[SquareComplexMatrix]) -> VerificationSuite:
    suite = VerificationSuite(config.grid, config.seed, config.tol, config.samples, config.workers,
                              config.normal_tol)
    if matrix is not None:
        suite.run_matrix(matrix)
    if config.golden:
        suite.run_golden()
    if config.random_count:
        suite.run_random(config.random_count)
    logger.info(f"Verification finished: {sum(r.passed for r in suite.reports)}/{len(suite.reports)} checks passed")
    return suite


def _emit(config: CliConfig, document: str) -> None:
    if not document.endswith("\n"):
        document += "\n"
    if config.output is None or config.output == "-":
        sys.stdout.write(document)
        sys.stdout.flush()
    else:
        with open(config.output, 'w', encoding='utf-8') as f:
            f.write(document)
        logger.info(f"Wrote {config.subcommand} output to {config.output}")


def run(config: CliConfig, stream: Optional[TextIO] = None) -> int:
    """
    Execute one subcommand and emit its document

    Args:
        config: Validated or raw command configuration
        stream: Matrix source when neither --matrix nor --input is set

    Returns:
        Exit status: 0 success, 1 failed verification, 2 usage or parse
        error, 3 dimension, degree or degeneracy violation
    """
    try:
        config.validate()
        needs_matrix = (config.subcommand != "verify" or config.matrix_text is not None
                        or config.input_path is not None or not (config.golden or config.random_count))
        matrix = None
        if needs_matrix:
            success, result = load_matrix_document(config.matrix_text, config.input_path, stream)
            if not success:
                logger.error(result)
                return EXIT_USAGE
            matrix = result

        status = EXIT_OK
        if config.subcommand == "ellipse":
            document = json.dumps(elliptical_range(matrix).to_json(), indent=2)
        elif config.subcommand == "poly":
            document = json.dumps(pencil_determinant(hermitian_parts(matrix)).to_json(), indent=2)
        elif config.subcommand == "dual":
            document = json.dumps(_dual_document(matrix), indent=2)
        elif config.subcommand == "boundary":
            document = _boundary_document(config, matrix)
        elif config.subcommand == "radius":
            document = json.dumps({"numerical_radius": numerical_radius(matrix, config.grid), "grid": config.grid})
        elif config.subcommand == "plot":
            document = render_svg(matrix, config.grid, config.workers)
        else:
            suite = _verify(config, matrix)
            if config.format == "csv":
                document = suite.summary_frame().to_csv(index=False)
            else:
                document = json.dumps([r.to_json() for r in suite.reports], indent=2)
            status = EXIT_OK if suite.all_passed else EXIT_FAILED_CHECKS
        _emit(config, document)
        return status
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE
    except FieldOfValuesError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_DOMAIN
    except OSError as e:
        logger.error(f"Cannot write output: {e}")
        return EXIT_USAGE


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group()
    source.add_argument("--matrix", dest="matrix_text", help="Inline matrix JSON literal")
    source.add_argument("--input", dest="input_path", help="Path of a matrix JSON file (default: standard input)")
    common.add_argument("--config", default=CONFIG_FILE, help=f"Defaults file (default: {CONFIG_FILE})")
    common.add_argument("--grid", type=int, help="Number of sample angles")
    common.add_argument("--seed", type=int, help="Seed for random vectors and matrices")
    common.add_argument("--tol", type=float, help="Relative verification tolerance")
    common.add_argument("--samples", type=int, help="Rayleigh quotients per containment check")
    common.add_argument("--workers", type=int, help="Threads for boundary sweeps")
    common.add_argument("--output", help="Output path (default: standard output)")
    common.add_argument("--format", help="Output format: json, csv or svg")

    parser = argparse.ArgumentParser(
        prog="fov",
        description="Fields of values, boundary generating polynomials and the elliptical range theorem",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    sub.add_parser("ellipse", parents=[common], help="Closed-form elliptical disk of a 2x2 matrix")
    sub.add_parser("poly", parents=[common], help="Boundary generating polynomial det(H1 u + H2 v + I w)")
    sub.add_parser("dual", parents=[common], help="Normalized point conic dual to the degree-2 polynomial")
    boundary = sub.add_parser("boundary", parents=[common], help="Boundary samples as CSV or JSON")
    boundary.add_argument("--branches", choices=["all", "outer"], default="outer",
                          help="Every eigenvalue branch or only the outer boundary")
    verify = sub.add_parser("verify", parents=[common], help="Run the verification checks")
    verify.add_argument("--random-count", type=int, help="Append the seeded random 2x2 suite with N matrices")
    verify.add_argument("--golden", action="store_true", help="Append the worked canonical cases")
    sub.add_parser("plot", parents=[common], help="SVG drawing of F(A)")
    sub.add_parser("radius", parents=[common], help="Numerical radius on the angle grid")
    return parser


def config_from_args(args: argparse.Namespace) -> CliConfig:
    """Merge config file, environment and flags, in increasing priority"""
    settings = load_fov_config(args.config)
    for key in ("grid", "seed", "tol", "samples", "workers", "random_count"):
        value = getattr(args, key, None)
        if value is not None:
            settings[key] = value
    return CliConfig(
        subcommand=args.subcommand,
        matrix_text=args.matrix_text,
        input_path=args.input_path,
        grid=settings["grid"],
        seed=settings["seed"],
        tol=settings["tol"],
        samples=settings["samples"],
        normal_tol=settings["normal_tol"],
        workers=settings["workers"],
        output=args.output,
        format=args.format,
        branches=getattr(args, "branches", "outer"),
        random_count=settings["random_count"] if args.subcommand == "verify" else 0,
        golden=getattr(args, "golden", False),
    )


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = config_from_args(args)
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
