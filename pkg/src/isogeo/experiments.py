"""Config-driven experiment dispatch behind the command line.

Each experiment reads its settings from an ExperimentConfig, writes
plot-ready CSVs plus a JSON summary into the output directory, and always
leaves a run manifest behind, even when it fails.  Exit codes: 0 success,
2 usage/config error, 3 stall or non-convergence (partial traces are still
written).
"""

import os
import time
from importlib import metadata

import numpy as np
import scipy

from .clustering import adjusted_rand_index, euclidean_kmeans, iso_kmeans, riemannian_kmeans
from .config import ConfigError
from .datasets import generate_dataset
from .descent import barycentre_ratio_field, iso_barycentre, iso_lipschitz_ratio, iso_monotonicity_ratio
from .diffeos import make_diffeomorphism
from .errors import DegenerateCurveError, DomainError, StallError
from .isomaps import iso_geodesic, iso_log
from .pullback import PullbackManifold, closed_form_barycentre, lc_geodesic
from .serialize import write_csv, write_json
from .submanifold import GeodesicSubmanifold, iso_rank_r_approx, l2pg_ird, submanifold_from_rank_r

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_STALL = 3


def _versions():
    try:
        own = metadata.version("isogeo")
    except metadata.PackageNotFoundError:
        own = "unreleased"
    return {"isogeo": own, "numpy": np.__version__, "scipy": scipy.__version__}


def build_manifold(config):
    diffeo = make_diffeomorphism(config.geometry_name, config.geometry_params)
    return PullbackManifold(diffeo, config.quad)


def _parse_point(raw, dim, where):
    try:
        coords = [float(part) for part in str(raw).split(",")]
    except ValueError as exc:
        raise ConfigError([f"{where}: {exc}"]) from exc
    if len(coords) != dim:
        raise ConfigError([f"{where}: expected {dim} comma-separated "
                           f"coordinates, got {len(coords)}"])
    return np.asarray(coords)


def geodesic_rows(M, start, end, samples, iso):
    ts = np.linspace(0.0, 1.0, samples)
    rows = []
    for t in ts:
        if iso:
            p = start if t == 0.0 else end if t == 1.0 else iso_geodesic(M, start, end, t)
        else:
            p = lc_geodesic(M, start, end, t)
        rows.append([t, *p])
    return rows


def _run_geodesic(config, M, outdir):
    if config.extras.get("from") is None or config.extras.get("to") is None:
        raise ConfigError(["experiment.from / experiment.to: required for geodesic"])
    start = _parse_point(config.extras["from"], M.dim, "experiment.from")
    end = _parse_point(config.extras["to"], M.dim, "experiment.to")
    rows = geodesic_rows(M, start, end, config.extras["samples"],
                         config.extras["iso"])
    header = ["t"] + [f"x{i}" for i in range(M.dim)]
    write_csv(os.path.join(outdir, "geodesic.csv"), header, rows)
    return EXIT_OK, {}


def _write_points(path, points, labels=None, extra=()):
    dim = points.shape[1]
    header = [f"x{i}" for i in range(dim)]
    columns = [points[:, i] for i in range(dim)]
    if labels is not None:
        header.append("truth")
        columns.append(labels)
    for name, values in extra:
        header.append(name)
        columns.append(values)
    write_csv(path, header, zip(*columns))


def _run_barycentre(config, M, outdir):
    data = generate_dataset(config.dataset, M)
    pts = np.atleast_2d(data.points)
    _write_points(os.path.join(outdir, "points.csv"), pts, data.labels)
    euclidean_mean = pts.mean(axis=0)
    riemannian = closed_form_barycentre(M, pts)
    summary = {"euclidean_mean": euclidean_mean, "riemannian_barycentre": riemannian}
    code = EXIT_OK
    try:
        bary, trace = iso_barycentre(M, pts, config.solver)
        summary["iso_barycentre"] = bary
        summary["converged"] = trace.converged
    except StallError as stall:
        trace = stall.trace
        summary["iso_barycentre"] = stall.best
        summary["converged"] = False
        summary["stalled"] = True
        code = EXIT_STALL
    trace.write_csv(os.path.join(outdir, "trace.csv"))
    summary["iterations"] = len(trace) - 1
    summary["final_field_norm"] = trace.field_norms[-1]
    write_json(os.path.join(outdir, "summary.json"), summary)
    return code, summary


def _run_kmeans(config, M, outdir):
    data = generate_dataset(config.dataset, M)
    pts = np.atleast_2d(data.points)
    K = config.extras["k"]
    seed = config.dataset.seed
    results = {
        "euclidean": euclidean_kmeans(pts, K, seed),
        "riemannian": riemannian_kmeans(M, pts, K, seed),
        "iso": iso_kmeans(M, pts, K, seed, config.solver),
    }
    extra = [(f"label_{name}", res.labels) for name, res in results.items()]
    _write_points(os.path.join(outdir, "points.csv"), pts, data.labels, extra)
    summary = {}
    for name, res in results.items():
        entry = {"centroids": res.centroids, "iterations": res.iterations,
                 "converged": res.converged}
        if data.labels is not None:
            entry["ari"] = adjusted_rand_index(res.labels, data.labels)
        summary[name] = entry
    write_json(os.path.join(outdir, "summary.json"), summary)
    return EXIT_OK, summary


def _vertical_line_submanifold(M, offset):
    basis = np.zeros((M.dim, 1))
    basis[1, 0] = 1.0
    phi_base = np.zeros(M.dim)
    phi_base[0] = offset
    return GeodesicSubmanifold(M, M.diffeo.inverse(phi_base), basis)


def inverse_problem(M, extras):
    """Seeded least-squares problem constrained to a phi-vertical line.

    The Gaussian operator is rescaled so its action on the unit tangent at
    the solution has norm one, i.e. the problem satisfies approximate
    restricted isometry along the manifold.
    """
    S = _vertical_line_submanifold(M, extras["offset"])
    rng = np.random.default_rng(extras["op_seed"])
    A = rng.standard_normal((extras["rows"], M.dim))
    x_true = S.point_at(extras["s_true"])
    tangent = S.tangent_basis(x_true)[:, 0]
    A = A / np.linalg.norm(A @ (tangent / np.linalg.norm(tangent)))
    b = A @ x_true + extras["noise"] * rng.standard_normal(extras["rows"])

    def f(x):
        r = A @ x - b
        return 0.5 * float(np.dot(r, r))

    def grad(x):
        return A.T @ (A @ x - b)

    return S, A, b, x_true, f, grad


def grid_search_1d(S, f, s_min, s_max, n_points):
    """Brute-force minimizer of f over the 1D submanifold parameter."""
    s = np.linspace(s_min, s_max, n_points)
    X = S.points_at(s)
    values = np.array([f(x) for x in X])
    best = int(values.argmin())
    return s[best], X[best], values[best], s[1] - s[0]


def _run_inverse(config, M, outdir):
    extras = config.extras
    S, A, b, x_true, f, grad = inverse_problem(M, extras)
    x0 = S.point_at(extras["s0"])
    summary = {"A": A, "b": b, "x_true": x_true, "s_true": extras["s_true"],
               "offset": extras["offset"]}
    code = EXIT_OK
    try:
        solution, trace = l2pg_ird(S, f, grad, x0, config.solver)
        summary["converged"] = trace.converged
    except StallError as stall:
        solution, trace = stall.best, stall.trace
        summary["converged"] = False
        summary["stalled"] = True
        code = EXIT_STALL
    trace.write_csv(os.path.join(outdir, "trace.csv"))
    s_grid, x_grid, f_grid, cell = grid_search_1d(
        S, f, extras["grid_min"], extras["grid_max"], extras["grid_points"])
    s_solution = float(S.params_of(solution)[0])
    summary.update({
        "solution": solution, "s_solution": s_solution,
        "objective": f(solution), "grid_minimizer": x_grid,
        "s_grid": s_grid, "grid_objective": f_grid, "grid_cell": cell,
        "param_gap": abs(s_solution - s_grid),
    })
    write_json(os.path.join(outdir, "summary.json"), summary)
    return code, summary


def ratio_grid_rows(M, points, xbar, grid):
    """(coords, monotonicity, lipschitz) rows; NaN where ratios are undefined."""
    rows = []
    for node in grid:
        try:
            field = barycentre_ratio_field(M, node, points)
            mono = iso_monotonicity_ratio(M, node, xbar, field)
            lips = iso_lipschitz_ratio(M, node, xbar, field)
        except (ValueError, DomainError, DegenerateCurveError):
            mono = lips = float("nan")
        rows.append([*node, mono, lips])
    return rows


def _run_ratios(config, M, outdir):
    data = generate_dataset(config.dataset, M)
    pts = np.atleast_2d(data.points)
    _write_points(os.path.join(outdir, "points.csv"), pts, data.labels)
    code = EXIT_OK
    try:
        xbar, _ = iso_barycentre(M, pts, config.solver)
    except StallError as stall:
        xbar = stall.best
        code = EXIT_STALL
    extras = config.extras
    axes = [np.linspace(extras["x1_min"], extras["x1_max"], extras["grid_n"])]
    if M.dim >= 2:
        axes.append(np.linspace(extras["x2_min"], extras["x2_max"],
                                extras["grid_n"]))
    mesh = np.meshgrid(*axes, indexing="ij")
    grid = np.stack([m.ravel() for m in mesh], axis=-1)
    rows = ratio_grid_rows(M, pts, xbar, grid)
    header = [f"x{i}" for i in range(M.dim)] + ["monotonicity", "lipschitz"]
    write_csv(os.path.join(outdir, "ratios.csv"), header, rows)
    finite = np.asarray([r[M.dim:] for r in rows], dtype=float)
    finite = finite[np.all(np.isfinite(finite), axis=1)]
    summary = {"iso_barycentre": xbar,
               "monotonicity_min": finite[:, 0].min() if len(finite) else None,
               "lipschitz_max": finite[:, 1].max() if len(finite) else None}
    write_json(os.path.join(outdir, "summary.json"), summary)
    return code, summary


def _run_rankr(config, M, outdir):
    data = generate_dataset(config.dataset, M)
    pts = np.atleast_2d(data.points)
    base = closed_form_barycentre(M, pts)
    r = config.extras["r"]
    U = iso_rank_r_approx(M, pts, base, r)
    S = submanifold_from_rank_r(M, pts, base, r)
    logs = np.stack([iso_log(M, base, p).vec for p in pts], axis=1)
    svals = np.linalg.svd(logs, compute_uv=False)
    write_csv(os.path.join(outdir, "basis.csv"),
              [f"u{j}" for j in range(r)], U)
    write_csv(os.path.join(outdir, "phi_basis.csv"),
              [f"b{j}" for j in range(r)], S.phi_basis)
    summary = {"base": base, "singular_values": svals,
               "tail_energy": float(np.sum(svals[r:] ** 2))}
    write_json(os.path.join(outdir, "summary.json"), summary)
    return EXIT_OK, summary


_RUNNERS = {
    "geodesic": _run_geodesic,
    "barycentre": _run_barycentre,
    "kmeans": _run_kmeans,
    "inverse": _run_inverse,
    "ratios": _run_ratios,
    "rankr": _run_rankr,
}


def run(config):
    """Dispatch an experiment config; returns the process exit code."""
    outdir = config.output_dir
    os.makedirs(outdir, exist_ok=True)
    manifest = {"config": config.echo(), "versions": _versions(),
                "status": "running"}
    started = time.perf_counter()
    try:
        M = build_manifold(config)
        code, _ = _RUNNERS[config.experiment](config, M, outdir)
        manifest["status"] = "ok" if code == EXIT_OK else "stalled"
    except ConfigError as exc:
        manifest["status"] = "error"
        manifest["error"] = str(exc)
        code = EXIT_USAGE
    except Exception as exc:  # manifest still records the failure
        manifest["status"] = "error"
        manifest["error"] = f"{type(exc).__name__}: {exc}"
        code = EXIT_STALL
    finally:
        manifest["wall_time_s"] = time.perf_counter() - started
        write_json(os.path.join(outdir, "run_manifest.json"), manifest)
    return code
