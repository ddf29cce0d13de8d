"""Geodesic submanifolds, tangent projections, and projected descent.

A geodesic submanifold here is the phi^-1 image of an affine subspace in
phi-coordinates: base point plus an orthonormal basis of the subspace
directions.  Parallel transport preserves that span, so the tangent space at
any member point is obtained by pushing the basis through the inverse
Jacobian.
"""

import numpy as np

from .descent import ConvergenceTrace
from .errors import DegenerateBasisError, DomainError, StallError
from .isomaps import iso_exp, iso_log
from .pullback import (TangentVector, as_point, lc_geodesic,
                       lc_geodesic_velocity)


class GeodesicSubmanifold:
    """phi^-1 image of an affine subspace: base point + orthonormal phi-basis."""

    def __init__(self, manifold, base, phi_basis):
        self.manifold = manifold
        self.base = as_point(base, manifold.dim, "base")
        B = np.asarray(phi_basis, dtype=float)
        if B.ndim != 2 or B.shape[0] != manifold.dim:
            raise ValueError(
                f"phi_basis must be ({manifold.dim}, m), got shape {B.shape}")
        gram = B.T @ B
        if not np.allclose(gram, np.eye(B.shape[1]), atol=1e-10):
            raise ValueError("phi_basis columns must be orthonormal to 1e-10")
        self.phi_basis = B
        self._phi_base = manifold.diffeo.forward(self.base)

    @property
    def subspace_dim(self):
        return self.phi_basis.shape[1]

    def params_of(self, x):
        """Affine coordinates of phi(x) - phi(base) in the basis."""
        x = as_point(x, self.manifold.dim, "x")
        return self.phi_basis.T @ (self.manifold.diffeo.forward(x) - self._phi_base)

    def point_at(self, s):
        """Member point with affine coordinates s (scalar allowed when m=1)."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        return self.manifold.diffeo.inverse(self._phi_base + self.phi_basis @ s)

    def points_at(self, s):
        """Batch of member points, one per row of affine coordinates."""
        s = np.asarray(s, dtype=float)
        if s.ndim == 1:
            s = s[:, None]
        return self.manifold.diffeo.inverse(self._phi_base + s @ self.phi_basis.T)

    def contains(self, x, tol=1e-8):
        x = as_point(x, self.manifold.dim, "x")
        delta = self.manifold.diffeo.forward(x) - self._phi_base
        resid = delta - self.phi_basis @ (self.phi_basis.T @ delta)
        return float(np.linalg.norm(resid)) <= tol

    def tangent_basis(self, x):
        """Transported basis U_x: inverse Jacobian applied to the phi-basis."""
        x = as_point(x, self.manifold.dim, "x")
        p = self.manifold.diffeo.forward(x)
        cols = self.manifold.diffeo.inv_jvp(
            np.broadcast_to(p, (self.subspace_dim, self.manifold.dim)),
            self.phi_basis.T)
        return cols.T


def tangent_projection(S, x, v):
    """l2-orthogonal projection of v onto the tangent space of S at x."""
    x = as_point(x, S.manifold.dim, "x")
    if not S.contains(x):
        raise DomainError("x is not on the submanifold (membership tol 1e-8)")
    v = as_point(v, S.manifold.dim, "v")
    U = S.tangent_basis(x)
    gram = U.T @ U
    if not np.all(np.isfinite(gram)) or np.linalg.cond(gram) > 1e14:
        raise DegenerateBasisError(
            "transported basis has a numerically singular Gram matrix")
    return TangentVector(x, U @ np.linalg.solve(gram, U.T @ v))


def l2pg_ird(S, f, grad_f, x0, cfg):
    """Projected-gradient iso-Riemannian descent over a geodesic submanifold.

    Iterates xi = P_x grad f(x), trial = iso_exp_x(-r xi), accepting the trial
    only if it strictly decreases f.  Stops once |P grad f| / f(x0) falls
    below cfg.tol (absolute when f(x0) <= 0) or the iteration cap is hit.
    Raises StallError carrying the best iterate when backtracking fails.
    """
    M = S.manifold
    x = as_point(x0, M.dim, "x0")
    if not S.contains(x):
        raise DomainError("x0 is not on the submanifold")
    f_ref = float(f(x))
    denom = f_ref if f_ref > 0.0 else 1.0
    fx = f_ref
    xi = tangent_projection(S, x, grad_f(x))
    trace = ConvergenceTrace()
    trace.append(x, xi.norm, cfg.r0, objective=fx)
    for _ in range(cfg.max_iters):
        if xi.norm / denom < cfg.tol:
            trace.converged = True
            return x, trace
        r = cfg.r0
        accepted = False
        for _ in range(cfg.max_backtracks):
            trial = iso_exp(M, TangentVector(x, -r * xi.vec))
            f_trial = float(f(trial))
            if f_trial < fx:
                accepted = True
                break
            r *= cfg.c
        if not accepted:
            trace.stalled = True
            raise StallError(
                f"line search stalled at objective {fx:.6e}", x, trace)
        if not S.contains(trial):
            raise DomainError("iterate drifted off the submanifold")
        x, fx = trial, f_trial
        xi = tangent_projection(S, x, grad_f(x))
        trace.append(x, xi.norm, r, objective=fx)
    trace.converged = xi.norm / denom < cfg.tol
    return x, trace


def iso_rank_r_approx(M, points, base, r):
    """Top-r left singular vectors of the iso-logarithm matrix at the base.

    Columns are orthonormal; signs are fixed so the largest-magnitude entry
    of each column is positive.
    """
    base = as_point(base, M.dim, "base")
    pts = [as_point(p, M.dim, "point") for p in points]
    if not pts:
        raise ValueError("iso_rank_r_approx requires a nonempty point list")
    if not 1 <= r <= min(M.dim, len(pts)):
        raise ValueError(
            f"rank r must satisfy 1 <= r <= min(d, N) = "
            f"{min(M.dim, len(pts))}, got {r}")
    logs = np.stack([iso_log(M, base, p).vec for p in pts], axis=1)
    U, _, _ = np.linalg.svd(logs, full_matrices=True)
    U = U[:, :r]
    flip = np.sign(U[np.abs(U).argmax(axis=0), np.arange(r)])
    flip[flip == 0.0] = 1.0
    return U * flip


def submanifold_from_rank_r(M, points, base, r):
    """Geodesic submanifold spanned by the rank-r directions at the base.

    The tangent-space directions are pushed to phi-coordinates through the
    Jacobian and re-orthonormalized there.
    """
    base = as_point(base, M.dim, "base")
    U = iso_rank_r_approx(M, points, base, r)
    pushed = M.diffeo.jvp(np.broadcast_to(base, (r, M.dim)), U.T).T
    Q, _ = np.linalg.qr(pushed)
    flip = np.sign(Q[np.abs(Q).argmax(axis=0), np.arange(r)])
    flip[flip == 0.0] = 1.0
    return GeodesicSubmanifold(M, base, Q * flip)


def convexity_bounds_1d(S, grad_f, x, y, t_grid, hvp=None, gamma_h=1e-4):
    """Hessian and curvature terms of the projected gradient field on 1D S.

    Along the geodesic from x to y evaluates, at each grid time, the
    direction-normalized second derivative of f and the inner product of the
    normal gradient component with the curve acceleration (both divided by
    the squared speed).  Their sum over the grid brackets the monotonicity
    and Lipschitz constants of P grad f.  The acceleration is computed by
    central differences of the geodesic velocity with step gamma_h; the
    Hessian action falls back to central differences of grad_f when no
    Hessian-vector product is supplied.

    Returns an (len(t_grid), 3) array of rows (t, hess_term, curvature_term).
    """
    M = S.manifold
    if S.subspace_dim != 1:
        raise ValueError("convexity_bounds_1d requires a 1-dimensional submanifold")
    x = as_point(x, M.dim, "x")
    y = as_point(y, M.dim, "y")
    for name, p in (("x", x), ("y", y)):
        if not S.contains(p):
            raise DomainError(f"{name} is not on the submanifold")
    rows = []
    for t in np.asarray(t_grid, dtype=float):
        p = lc_geodesic(M, x, y, t)
        vel = lc_geodesic_velocity(M, x, y, t).vec
        speed2 = float(np.dot(vel, vel))
        acc = (lc_geodesic_velocity(M, x, y, t + gamma_h).vec
               - lc_geodesic_velocity(M, x, y, t - gamma_h).vec) / (2.0 * gamma_h)
        if hvp is not None:
            hess_term = float(np.dot(hvp(p, vel), vel)) / speed2
        else:
            h = 1e-6 * (1.0 + np.linalg.norm(p))
            unit = vel / np.sqrt(speed2)
            dgrad = (np.asarray(grad_f(p + h * unit), dtype=float)
                     - np.asarray(grad_f(p - h * unit), dtype=float)) / (2.0 * h)
            hess_term = float(np.dot(dgrad, unit))
        grad = np.asarray(grad_f(p), dtype=float)
        normal = grad - tangent_projection(S, p, grad).vec
        rows.append((float(t), hess_term, float(np.dot(normal, acc)) / speed2))
    return np.asarray(rows)
