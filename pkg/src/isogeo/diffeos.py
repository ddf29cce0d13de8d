"""Analytic diffeomorphisms of R^d and the registry used by experiment configs.

All built-in maps act on the last axis of their input, so a single point is a
``(d,)`` array and a batch of points is ``(..., d)``.  Jacobian actions are
analytic for every built-in; user-supplied diffeomorphisms that omit them fall
back to central finite differences.
"""

import math

import numpy as np

from .errors import DimensionError, DomainError

TWO_PI = 2.0 * math.pi


def _fd_jvp(mapping):
    # Central differences with displacement 1e-6 * (1 + |x|), batch-safe.
    def jvp(x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        nv = np.linalg.norm(v, axis=-1, keepdims=True)
        safe = np.where(nv > 0.0, nv, 1.0)
        h = 1e-6 * (1.0 + np.linalg.norm(x, axis=-1, keepdims=True))
        e = h / safe
        out = (mapping(x + e * v) - mapping(x - e * v)) / (2.0 * e)
        return np.where(nv > 0.0, out, 0.0)

    return jvp


class Diffeomorphism:
    """A smooth invertible map of R^d bundled with its Jacobian actions.

    Parameters
    ----------
    dim : int
        Ambient dimension d.
    forward, inverse : callable
        The map and its inverse, acting on the last axis of ``(..., d)`` arrays.
    jvp : callable, optional
        ``jvp(x, v)``, the Jacobian of ``forward`` at x applied to v.
        Defaults to central finite differences of ``forward``.
    inv_jvp : callable, optional
        ``inv_jvp(y, w)``, the Jacobian of ``inverse`` at y applied to w.
        Defaults to central finite differences of ``inverse``.
    """

    def __init__(self, dim, forward, inverse, jvp=None, inv_jvp=None,
                 name="custom", params=None):
        if dim < 1:
            raise DimensionError(f"dim must be a positive integer, got {dim}")
        self.dim = int(dim)
        self.forward = forward
        self.inverse = inverse
        self.jvp = jvp if jvp is not None else _fd_jvp(forward)
        self.inv_jvp = inv_jvp if inv_jvp is not None else _fd_jvp(inverse)
        self.name = name
        self.params = dict(params) if params else {}

    def __repr__(self):
        args = ", ".join(f"{k}={v}" for k, v in self.params.items())
        return f"Diffeomorphism({self.name}({args}), dim={self.dim})"


def identity(dim=2):
    """The identity map; every operation reduces to its Euclidean form."""
    dim = int(dim)

    def fwd(x):
        return np.asarray(x, dtype=float).copy()

    def vec(x, v):
        return np.asarray(v, dtype=float).copy()

    return Diffeomorphism(dim, fwd, fwd, vec, vec, name="identity",
                          params={"dim": dim})


def river(beta=5.0, eta=0.25):
    """Shear along a meandering channel: (x1 - beta sin x2, sinh(eta x2))."""
    if beta <= 0 or eta <= 0:
        raise ValueError(f"river requires beta, eta > 0, got {beta}, {eta}")

    def forward(x):
        x = np.asarray(x, dtype=float)
        x1, x2 = x[..., 0], x[..., 1]
        return np.stack([x1 - beta * np.sin(x2), np.sinh(eta * x2)], axis=-1)

    def inverse(y):
        y = np.asarray(y, dtype=float)
        y1, y2 = y[..., 0], y[..., 1]
        x2 = np.arcsinh(y2) / eta
        return np.stack([y1 + beta * np.sin(x2), x2], axis=-1)

    def jvp(x, v):
        x2 = x[..., 1]
        return np.stack(
            [v[..., 0] - beta * np.cos(x2) * v[..., 1],
             eta * np.cosh(eta * x2) * v[..., 1]],
            axis=-1,
        )

    def inv_jvp(y, w):
        y2 = y[..., 1]
        dx2 = w[..., 1] / (eta * np.sqrt(1.0 + y2 ** 2))
        x2 = np.arcsinh(y2) / eta
        return np.stack([w[..., 0] + beta * np.cos(x2) * dx2, dx2], axis=-1)

    return Diffeomorphism(2, forward, inverse, jvp, inv_jvp, name="river",
                          params={"beta": beta, "eta": eta})


def spiral(beta=0.25):
    """Polar winding map (R/beta, (angle - R/beta) mod 2pi).

    The angle coordinate is reduced into [0, 2pi); geodesics are only valid
    between points whose images stay clear of the 0/2pi branch cut, which the
    library does not unwrap.  The map is undefined at the origin, and the
    inverse is restricted to positive radial coordinate.
    """
    if beta <= 0:
        raise ValueError(f"spiral requires beta > 0, got {beta}")

    def forward(x):
        x = np.asarray(x, dtype=float)
        x1, x2 = x[..., 0], x[..., 1]
        radius = np.hypot(x1, x2)
        if np.any(radius == 0.0):
            raise DomainError("spiral map is undefined at the origin")
        angle = np.mod(np.arctan2(x2, x1), TWO_PI)
        r = radius / beta
        return np.stack([r, np.mod(angle - r, TWO_PI)], axis=-1)

    def inverse(p):
        p = np.asarray(p, dtype=float)
        r, theta = p[..., 0], p[..., 1]
        if np.any(r <= 0.0):
            raise DomainError("spiral inverse requires positive radial coordinate")
        return beta * r[..., None] * np.stack(
            [np.cos(r + theta), np.sin(r + theta)], axis=-1)

    def jvp(x, v):
        x1, x2 = x[..., 0], x[..., 1]
        radius = np.hypot(x1, x2)
        if np.any(radius == 0.0):
            raise DomainError("spiral map is undefined at the origin")
        radial = (x1 * v[..., 0] + x2 * v[..., 1]) / (beta * radius)
        angular = (x1 * v[..., 1] - x2 * v[..., 0]) / radius ** 2
        return np.stack([radial, angular - radial], axis=-1)

    def inv_jvp(p, w):
        r, theta = p[..., 0], p[..., 1]
        if np.any(r <= 0.0):
            raise DomainError("spiral inverse requires positive radial coordinate")
        c, s = np.cos(r + theta), np.sin(r + theta)
        wr, wt = w[..., 0], w[..., 1]
        return beta * np.stack(
            [(c - r * s) * wr - r * s * wt,
             (s + r * c) * wr + r * c * wt],
            axis=-1,
        )

    return Diffeomorphism(2, forward, inverse, jvp, inv_jvp, name="spiral",
                          params={"beta": beta})


def banana(a=1.0 / 9.0, z=0.0):
    """Quadratic shear (x1 - a x2^2 - z, x2); the identity when a = z = 0."""

    def forward(x):
        x = np.asarray(x, dtype=float)
        x1, x2 = x[..., 0], x[..., 1]
        return np.stack([x1 - a * x2 ** 2 - z, x2], axis=-1)

    def inverse(y):
        y = np.asarray(y, dtype=float)
        y1, y2 = y[..., 0], y[..., 1]
        return np.stack([y1 + a * y2 ** 2 + z, y2], axis=-1)

    def jvp(x, v):
        return np.stack([v[..., 0] - 2.0 * a * x[..., 1] * v[..., 1],
                         v[..., 1]], axis=-1)

    def inv_jvp(y, w):
        return np.stack([w[..., 0] + 2.0 * a * y[..., 1] * w[..., 1],
                         w[..., 1]], axis=-1)

    return Diffeomorphism(2, forward, inverse, jvp, inv_jvp, name="banana",
                          params={"a": a, "z": z})


def sinh_shift_1d():
    """The 1D map sinh(x + 1), whose pullback slows geodesics down near -1."""

    def forward(x):
        return np.sinh(np.asarray(x, dtype=float) + 1.0)

    def inverse(y):
        return np.arcsinh(np.asarray(y, dtype=float)) - 1.0

    def jvp(x, v):
        return np.cosh(np.asarray(x, dtype=float) + 1.0) * v

    def inv_jvp(y, w):
        return w / np.sqrt(1.0 + np.asarray(y, dtype=float) ** 2)

    return Diffeomorphism(1, forward, inverse, jvp, inv_jvp,
                          name="sinh_shift_1d", params={})


_REGISTRY = {
    "identity": identity,
    "river": river,
    "spiral": spiral,
    "banana": banana,
    "sinh_shift_1d": sinh_shift_1d,
}


def registered_names():
    return sorted(_REGISTRY)


def make_diffeomorphism(name, params=None):
    """Instantiate a registered diffeomorphism from its name and parameter map."""
    try:
        factory = _REGISTRY[name]
    except KeyError:
        known = ", ".join(registered_names())
        raise KeyError(f"unknown geometry {name!r}; registered: {known}") from None
    return factory(**(params or {}))
