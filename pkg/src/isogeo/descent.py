"""Iso-Riemannian descent: fixed-step scheme, barycentre solver, diagnostics.

The descent iteration moves against a vector field through the
iso-exponential, x+ = iso_exp_x(-r xi_x).  With line search on the field
norm this computes iso-barycentres (zeros of the averaged iso-logarithm
field); the ratio diagnostics bound the monotonicity and Lipschitz constants
that govern the admissible step-size window.
"""

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import StallError
from .isomaps import iso_distance, iso_exp, iso_log, iso_transport
from .pullback import TangentVector, as_point, closed_form_barycentre, lc_log


@dataclass
class LineSearchConfig:
    """Backtracking line-search settings shared by the iterative solvers.

    ``tol`` is the stopping threshold on the monitored quantity: the field
    norm for barycentres, the projected-gradient norm relative to the initial
    objective for projected descent.
    """

    r0: float = 1.0
    c: float = 0.5
    max_backtracks: int = 50
    max_iters: int = 500
    tol: float = 1e-6

    def __post_init__(self):
        if self.r0 <= 0:
            raise ValueError(f"r0 must be > 0, got {self.r0}")
        if not 0.0 < self.c < 1.0:
            raise ValueError(f"c must lie in (0, 1), got {self.c}")
        if self.tol <= 0:
            raise ValueError(f"tol must be > 0, got {self.tol}")


@dataclass
class ConvergenceTrace:
    """Per-iteration record emitted by every iterative solver.

    Entry i belongs to iterate i; step_sizes[0] is the configured initial
    step (no step produced the starting point).  Objectives are recorded only
    by solvers that evaluate an objective.
    """

    iterates: list = field(default_factory=list)
    field_norms: list = field(default_factory=list)
    step_sizes: list = field(default_factory=list)
    objectives: list = None
    converged: bool = False
    stalled: bool = False

    def append(self, x, field_norm, step_size, objective=None):
        self.iterates.append(np.asarray(x, dtype=float).copy())
        self.field_norms.append(float(field_norm))
        self.step_sizes.append(float(step_size))
        if objective is not None:
            if self.objectives is None:
                self.objectives = []
            self.objectives.append(float(objective))

    def __len__(self):
        return len(self.iterates)

    def write_csv(self, path):
        """Columns: iter, field_norm, step_size, objective, x0..x{d-1}."""
        dim = len(self.iterates[0]) if self.iterates else 0
        header = ["iter", "field_norm", "step_size", "objective"]
        header += [f"x{i}" for i in range(dim)]
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for i, (x, fn, r) in enumerate(
                    zip(self.iterates, self.field_norms, self.step_sizes)):
                obj = ("" if self.objectives is None
                       else format(self.objectives[i], ".17g"))
                row = [str(i), format(fn, ".17g"), format(r, ".17g"), obj]
                row += [format(c, ".17g") for c in x]
                writer.writerow(row)


def ird_step(M, x, v, r):
    """One iso-Riemannian descent step iso_exp_x(-r v)."""
    x = as_point(x, M.dim, "x")
    if not np.array_equal(v.base, x):
        raise ValueError("descent direction must be based at x")
    if r <= 0:
        raise ValueError(f"step size must be > 0, got {r}")
    return iso_exp(M, TangentVector(x, -r * v.vec))


def ird_descent(M, vector_field, x0, r, tol=1e-8, max_iters=500):
    """Fixed-step iso-Riemannian descent on a vector field (no line search).

    Iterates x+ = iso_exp_x(-r field(x)) until the field norm drops below
    tol or the iteration cap is hit.  Returns (point, trace).
    """
    x = as_point(x0, M.dim, "x0")
    xi = vector_field(x)
    trace = ConvergenceTrace()
    trace.append(x, xi.norm, r)
    for _ in range(max_iters):
        if xi.norm < tol:
            trace.converged = True
            break
        x = ird_step(M, x, xi, r)
        xi = vector_field(x)
        trace.append(x, xi.norm, r)
    else:
        trace.converged = xi.norm < tol
    return x, trace


def iso_barycentre_field(M, x, points):
    """The descent field -(1/N) sum iso_log_x(x_i); zero at an iso-barycentre."""
    x = as_point(x, M.dim, "x")
    if len(points) == 0:
        raise ValueError("iso_barycentre_field requires a nonempty point list")
    acc = np.zeros(M.dim)
    for p in points:
        acc += iso_log(M, x, p).vec
    return TangentVector(x, -acc / len(points))


def iso_barycentre(M, points, cfg=None, x0=None):
    """Iso-barycentre by iso-Riemannian descent with line search.

    Starts from the closed-form Riemannian barycentre (or x0 when given); a
    trial step is accepted only if it strictly decreases the field norm,
    otherwise the step is shrunk by cfg.c.  Raises StallError (carrying the
    best iterate and the trace) when no decrease is found within
    cfg.max_backtracks.
    """
    cfg = cfg or LineSearchConfig()
    pts = [as_point(p, M.dim, "point") for p in points]
    if not pts:
        raise ValueError("iso_barycentre requires a nonempty point list")
    x = closed_form_barycentre(M, pts) if x0 is None else as_point(x0, M.dim, "x0")
    xi = iso_barycentre_field(M, x, pts)
    trace = ConvergenceTrace()
    trace.append(x, xi.norm, cfg.r0)
    for _ in range(cfg.max_iters):
        if xi.norm < cfg.tol:
            trace.converged = True
            return x, trace
        r = cfg.r0
        accepted = False
        for _ in range(cfg.max_backtracks):
            trial = ird_step(M, x, xi, r)
            xi_trial = iso_barycentre_field(M, trial, pts)
            if xi_trial.norm < xi.norm:
                accepted = True
                break
            r *= cfg.c
        if not accepted:
            trace.stalled = True
            raise StallError(
                f"line search stalled at field norm {xi.norm:.3e}", x, trace)
        x, xi = trial, xi_trial
        trace.append(x, xi.norm, r)
    trace.converged = xi.norm < cfg.tol
    return x, trace


def barycentre_ratio_field(M, x, points, use_iso_log=True):
    """Field whose ratios diagnose the barycentre problem at x.

    The default is the descent field -(1/N) sum iso_log_x(x_i), which is
    1-strongly iso-monotone and 1-iso-Lipschitz on 1D pullbacks; with
    use_iso_log=False the plain logarithm replaces the iso-logarithm.
    """
    if use_iso_log:
        return iso_barycentre_field(M, x, points)
    x = as_point(x, M.dim, "x")
    acc = np.zeros(M.dim)
    for p in points:
        acc += lc_log(M, x, p).vec
    return TangentVector(x, -acc / len(points))


def _ratio_denominator(M, x, xbar):
    dist = iso_distance(M, xbar, x)
    if dist == 0.0:
        raise ValueError("ratios are undefined at x = xbar")
    return dist


def iso_monotonicity_ratio(M, x, xbar, field_at_x):
    """Normalized strong iso-monotonicity of a field vanishing at xbar.

    <field(x), iso-transport of iso_log_xbar(x)> / iso_distance(xbar, x)^2;
    lower bound witnesses for the monotonicity constant alpha.
    """
    dist = _ratio_denominator(M, x, xbar)
    moved = iso_transport(M, xbar, x, iso_log(M, xbar, x))
    return float(np.dot(field_at_x.vec, moved.vec)) / dist ** 2


def iso_lipschitz_ratio(M, x, xbar, field_at_x):
    """|field(x)| / iso_distance(xbar, x); witnesses the Lipschitz constant."""
    return field_at_x.norm / _ratio_denominator(M, x, xbar)


def restricted_isometry_check(M, A, pairs):
    """Two-sided restricted-isometry witnesses of A over sampled pairs.

    For each pair, the ratio |A iso_log_x(y)|^2 / iso_distance(x, y)^2 is
    computed; returns (min - 1, max - 1).  Coincident pairs are skipped with
    a warning.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[1] != M.dim:
        raise ValueError(f"A must have {M.dim} columns, got shape {A.shape}")
    ratios = []
    for x, y in pairs:
        dist = iso_distance(M, x, y)
        if dist == 0.0:
            warnings.warn("skipping coincident pair in restricted_isometry_check")
            continue
        v = iso_log(M, x, y).vec
        ratios.append(float(np.dot(A @ v, A @ v)) / dist ** 2)
    if not ratios:
        raise ValueError("no non-degenerate pairs to check")
    return min(ratios) - 1.0, max(ratios) - 1.0
