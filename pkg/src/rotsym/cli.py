"""Command line interface.

Subcommands: test (run symmetry tests on a CSV of directions), sample (draw
from the supported families), simulate (run a power study from a TOML config),
are (efficiency curve of the unspecified-axis location test), describe (kernel
summary of the cosines around an axis).

Exit codes: 0 success, 2 bad usage or config, 3 data or runtime failure.
Errors are emitted as one JSON object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import __version__, distributions, geometry, lecam, montecarlo, symtests
from .errors import ConfigError, NormalizationError, RotsymError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3


def _fail(code: int, kind: str, message: str):
    json.dump({"error": kind, "message": message}, sys.stderr)
    sys.stderr.write("\n")
    raise SystemExit(code)


# ---------------------------------------------------------------------------
# Ingest


def read_directions(path, fmt: str = "unit_vectors_csv", tolerance: float = 1e-3) -> np.ndarray:
    """Load an (n, p) array of unit vectors from a CSV file.

    unit_vectors_csv: one direction per row, renormalized when the norm is
    within `tolerance` of 1, rejected otherwise.  lonlat_degrees_csv: rows of
    (longitude, latitude) in degrees, mapped onto S^2.
    """
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            raw = []
            for i, row in enumerate(reader):
                row = [cell.strip() for cell in row if cell.strip() != ""]
                if not row:
                    continue
                if i == 0 and not _all_floats(row):
                    continue  # header line
                try:
                    raw.append([float(cell) for cell in row])
                except ValueError as exc:
                    raise NormalizationError(f"row {i + 1}: non-numeric cell ({exc})") from exc
    except OSError as exc:
        raise NormalizationError(f"cannot read {path}: {exc}") from exc
    if not raw:
        raise NormalizationError(f"no data rows in {path}")
    widths = {len(row) for row in raw}
    if len(widths) != 1:
        raise NormalizationError(f"ragged rows in {path}: widths {sorted(widths)}")
    data = np.asarray(raw, dtype=float)

    if fmt == "lonlat_degrees_csv":
        if data.shape[1] != 2:
            raise NormalizationError(
                f"lonlat format needs 2 columns, got {data.shape[1]}"
            )
        lon = np.radians(data[:, 0])
        lat = np.radians(data[:, 1])
        return np.column_stack(
            [np.cos(lat) * np.cos(lon), np.cos(lat) * np.sin(lon), np.sin(lat)]
        )
    if fmt != "unit_vectors_csv":
        raise ConfigError(f"unknown input format {fmt!r}")
    norms = np.linalg.norm(data, axis=1)
    bad = np.where(np.abs(norms - 1.0) > tolerance)[0]
    if bad.size:
        raise NormalizationError(
            f"{bad.size} rows deviate from unit norm by more than {tolerance:g} "
            f"(first offender: row {bad[0] + 1}, norm {norms[bad[0]]:.6g})"
        )
    return data / norms[:, None]


def _all_floats(cells) -> bool:
    try:
        [float(c) for c in cells]
        return True
    except ValueError:
        return False


def _parse_axis(text: str) -> np.ndarray:
    try:
        return np.asarray([float(v) for v in text.split(",")], dtype=float)
    except ValueError as exc:
        raise ConfigError(f"axis must be comma-separated numbers, got {text!r}") from exc


# ---------------------------------------------------------------------------
# Subcommands


def cmd_test(args) -> int:
    sample = read_directions(args.data, args.format, args.tolerance)
    labels = args.tests.split(",") if args.tests else None
    theta = _parse_axis(args.theta) if args.theta else None
    if labels is None:
        labels = (
            list(symtests.SPECIFIED_TESTS) + list(symtests.UNSPECIFIED_TESTS)
            if theta is not None
            else list(symtests.UNSPECIFIED_TESTS)
        )
    results = []
    for label in labels:
        label = label.strip()
        result = symtests.run_test(label, sample, theta=theta, estimator=args.estimator)
        results.append(result.asdict())
    report = {
        "schema": "rotsym-test-report/1",
        "version": __version__,
        "input": {"path": args.data, "format": args.format, "n": int(sample.shape[0]),
                  "p": int(sample.shape[1])},
        "theta": None if theta is None else list(map(float, theta / np.linalg.norm(theta))),
        "estimator": args.estimator,
        "results": results,
    }
    _emit(report, args.output)
    return EXIT_OK


def cmd_sample(args) -> int:
    rng = np.random.default_rng(args.seed)
    theta = _parse_axis(args.theta)
    p = theta.size
    g = distributions.vmf_angular(args.concentration)
    if args.family == "vmf":
        draws = distributions.sample_vmf(theta, args.concentration, args.n, rng)
    elif args.family == "uniform":
        draws = distributions.sample_uniform_sphere(p, args.n, rng)
    elif args.family == "tangent-elliptical":
        lam = montecarlo.shape_matrix_at(args.severity, p)
        params = distributions.TangentEllipticalParams(theta=theta, g=g, lam=lam)
        draws = distributions.sample_tangent_elliptical(params, args.n, rng)
    elif args.family == "tangent-vmf":
        mu = np.zeros(p - 1)
        mu[0] = 1.0
        params = distributions.TangentVmfParams(theta=theta, g=g, mu=mu, kappa=args.skewness)
        draws = distributions.sample_tangent_vmf(params, args.n, rng)
    else:
        raise ConfigError(f"unknown family {args.family!r}")
    writer = csv.writer(sys.stdout if args.output == "-" else open(args.output, "w", newline=""))
    for row in draws:
        writer.writerow([f"{x:.12g}" for x in row])
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = montecarlo.load_config(args.config)
    if args.workers is not None:
        from dataclasses import replace

        config = replace(config, workers=args.workers)
    table = montecarlo.run_experiment(config)
    if args.csv:
        table.to_csv(args.csv)
    payload = json.loads(table.to_json())
    payload["schema"] = "rotsym-power-table/1"
    payload["config"] = {k: getattr(config, k) for k in
                         ("scenario", "p", "n", "reps", "level", "base_seed")}
    _emit(payload, args.output)
    return EXIT_OK


def cmd_are(args) -> int:
    etas = [float(v) for v in args.eta.split(",")]
    rows = [
        {"p": args.p, "eta": eta, "are": lecam.are_vmf(args.p, eta)}
        for eta in etas
    ]
    _emit({"schema": "rotsym-are/1", "rows": rows}, args.output)
    return EXIT_OK


def cmd_describe(args) -> int:
    sample = read_directions(args.data, args.format, args.tolerance)
    if args.theta:
        theta = geometry.as_unit_vector(_parse_axis(args.theta))
        axis_mode = "specified"
    else:
        theta = geometry.ESTIMATORS[args.estimator](sample)
        axis_mode = f"estimated:{args.estimator}"
    frame = geometry.tangent_frame(theta)
    v, _ = geometry.decompose_sample(sample, frame)
    summary = describe_cosines(v, mass=args.mass)
    summary.update(
        {
            "schema": "rotsym-describe/1",
            "axis": list(map(float, theta)),
            "axis_mode": axis_mode,
            "n": int(sample.shape[0]),
            "p": int(sample.shape[1]),
        }
    )
    _emit(summary, args.output)
    return EXIT_OK


def describe_cosines(v: np.ndarray, mass: float = 0.90, grid_size: int = 1024) -> dict:
    """Kernel summary of a sample of cosines: Gaussian KDE with the normal
    reference bandwidth, local modes, and the shortest density-threshold set
    holding at least `mass` probability."""
    from scipy.stats import gaussian_kde

    v = np.asarray(v, dtype=float)
    if v.size < 3:
        raise ConfigError(f"describe needs at least 3 observations, got {v.size}")
    if not 0.0 < mass < 1.0:
        raise ConfigError(f"mass must be in (0, 1), got {mass}")
    sd = float(np.std(v, ddof=1))
    if sd <= 1e-12:
        raise ConfigError("cosines are numerically constant")
    bandwidth = 1.06 * sd * v.size ** (-1.0 / 5.0)
    kde = gaussian_kde(v, bw_method=bandwidth / sd)
    grid = np.linspace(-1.0, 1.0, grid_size)
    dens = kde(grid)
    interior = np.zeros(grid_size, dtype=bool)
    interior[1:-1] = (dens[1:-1] > dens[:-2]) & (dens[1:-1] >= dens[2:])
    modes = [float(grid[i]) for i in np.where(interior)[0]]

    # shortest set: sweep density thresholds, keep the level set with the
    # requested mass; on a fixed grid that is the smallest such union
    order = np.argsort(dens)[::-1]
    cell = grid[1] - grid[0]
    cum = np.cumsum(dens[order]) * cell
    k = int(np.searchsorted(cum, mass)) + 1
    members = np.zeros(grid_size, dtype=bool)
    members[order[:k]] = True
    intervals = []
    start = None
    for i, inside in enumerate(members):
        if inside and start is None:
            start = i
        elif not inside and start is not None:
            intervals.append([float(grid[start]), float(grid[i - 1])])
            start = None
    if start is not None:
        intervals.append([float(grid[start]), float(grid[grid_size - 1])])
    return {
        "mean_cosine": float(np.mean(v)),
        "sd_cosine": sd,
        "bandwidth": bandwidth,
        "modes": modes,
        "mass": mass,
        "shortest_set": intervals,
    }


def _emit(payload: dict, output):
    text = json.dumps(payload, indent=2)
    if output in (None, "-"):
        print(text)
    else:
        with open(output, "w") as fh:
            fh.write(text + "\n")


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotsym", description="Tests of rotational symmetry on the unit sphere"
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_ingest(p):
        p.add_argument("data", help="CSV file of directions")
        p.add_argument(
            "--format",
            choices=["unit_vectors_csv", "lonlat_degrees_csv"],
            default="unit_vectors_csv",
        )
        p.add_argument("--tolerance", type=float, default=1e-3,
                       help="max deviation from unit norm before a row is rejected")
        p.add_argument("--output", "-o", default="-", help="output path, - for stdout")

    p_test = sub.add_parser("test", help="run symmetry tests on a data file")
    add_ingest(p_test)
    p_test.add_argument("--theta", help="comma-separated axis; omit to estimate it")
    p_test.add_argument("--tests", help="comma-separated labels (s-loc,...,u-hybF)")
    p_test.add_argument("--estimator", default="spherical_mean",
                        choices=sorted(geometry.ESTIMATORS))
    p_test.set_defaults(fn=cmd_test)

    p_sample = sub.add_parser("sample", help="draw synthetic directions")
    p_sample.add_argument("--family", required=True,
                          choices=["vmf", "uniform", "tangent-elliptical", "tangent-vmf"])
    p_sample.add_argument("--theta", default="1,0,0")
    p_sample.add_argument("--n", type=int, default=100)
    p_sample.add_argument("--concentration", type=float, default=2.0)
    p_sample.add_argument("--severity", type=float, default=1.0,
                          help="shape severity for tangent-elliptical")
    p_sample.add_argument("--skewness", type=float, default=1.0,
                          help="sign concentration for tangent-vmf")
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--output", "-o", default="-")
    p_sample.set_defaults(fn=cmd_sample)

    p_sim = sub.add_parser("simulate", help="run a power study from a TOML config")
    p_sim.add_argument("config")
    p_sim.add_argument("--csv", help="also write the table as CSV")
    p_sim.add_argument("--workers", type=int)
    p_sim.add_argument("--output", "-o", default="-")
    p_sim.set_defaults(fn=cmd_simulate)

    p_are = sub.add_parser("are", help="efficiency of the unspecified-axis location test")
    p_are.add_argument("--p", type=int, default=3)
    p_are.add_argument("--eta", default="0.5,1,2,5,10", help="comma-separated concentrations")
    p_are.add_argument("--output", "-o", default="-")
    p_are.set_defaults(fn=cmd_are)

    p_desc = sub.add_parser("describe", help="kernel summary of the cosines about an axis")
    add_ingest(p_desc)
    p_desc.add_argument("--theta", help="comma-separated axis; omit to estimate it")
    p_desc.add_argument("--estimator", default="spherical_mean",
                        choices=sorted(geometry.ESTIMATORS))
    p_desc.add_argument("--mass", type=float, default=0.90)
    p_desc.set_defaults(fn=cmd_describe)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors already
        raise exc
    try:
        return args.fn(args)
    except ConfigError as exc:
        _fail(EXIT_USAGE, type(exc).__name__, str(exc))
    except RotsymError as exc:
        _fail(EXIT_DATA, type(exc).__name__, str(exc))
    except OSError as exc:
        _fail(EXIT_DATA, "OSError", str(exc))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
