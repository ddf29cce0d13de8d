"""Seeded synthetic dataset generators for the experiment runner.

Band datasets sample an interval of the first phi-coordinate, hold the
remaining coordinate at a fixed center, add Gaussian noise in
phi-coordinates, and map through phi^-1.  Two-cluster variants place two
such bands on separated parameter ranges and carry ground-truth labels.
"""

import math
from dataclasses import dataclass

import numpy as np

DATASET_KINDS = ("river_band", "spiral_band", "two_clusters", "grid",
                 "custom_points")

# Safe default for the spiral angle coordinate: well clear of the 0/2pi cut.
_SPIRAL_CENTER = math.pi


@dataclass
class DatasetSpec:
    """Generator name plus the seed and shape of the sample.

    For band kinds, (t_min, t_max) bounds the first phi-coordinate and
    ``center`` fixes the second (defaults: 0 for river bands, pi for spiral
    bands).  ``gap`` separates the two parameter ranges of two_clusters.
    ``box`` bounds grid datasets, with n points per axis.
    """

    kind: str
    n: int = 100
    seed: int = 0
    noise_sigma: float = 0.0
    t_min: float = -5.0
    t_max: float = 5.0
    center: float = None
    gap: float = 4.0
    box: tuple = ((-8.0, 8.0), (-8.0, 8.0))
    points: list = None

    def __post_init__(self):
        if self.kind not in DATASET_KINDS:
            raise ValueError(
                f"unknown dataset kind {self.kind!r}; known: {DATASET_KINDS}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")


@dataclass
class Dataset:
    points: np.ndarray
    labels: np.ndarray = None


def _band(M, rng, n, t_min, t_max, center, sigma):
    t = rng.uniform(t_min, t_max, size=n)
    if M.dim == 1:
        coords = t[:, None]
    else:
        coords = np.zeros((n, M.dim))
        coords[:, 0] = t
        coords[:, 1] = center
    coords += sigma * rng.standard_normal(coords.shape) if sigma > 0 else 0.0
    return M.diffeo.inverse(coords)


def _default_center(spec, M):
    if spec.center is not None:
        return spec.center
    if spec.kind == "spiral_band" or M.diffeo.name == "spiral":
        return _SPIRAL_CENTER
    return 0.0


def generate_dataset(spec, M):
    """Deterministic sample of points (and labels, for two_clusters) on M."""
    rng = np.random.default_rng(spec.seed)
    if spec.kind in ("river_band", "spiral_band"):
        pts = _band(M, rng, spec.n, spec.t_min, spec.t_max,
                    _default_center(spec, M), spec.noise_sigma)
        return Dataset(pts)
    if spec.kind == "two_clusters":
        span = spec.t_max - spec.t_min - spec.gap
        if span <= 0:
            raise ValueError("two_clusters needs t_max - t_min > gap")
        half = span / 2.0
        center = _default_center(spec, M)
        n1 = spec.n // 2
        band1 = _band(M, rng, n1, spec.t_min, spec.t_min + half,
                      center, spec.noise_sigma)
        band2 = _band(M, rng, spec.n - n1, spec.t_max - half, spec.t_max,
                      center, spec.noise_sigma)
        labels = np.concatenate([np.ones(n1, dtype=int),
                                 np.full(spec.n - n1, 2, dtype=int)])
        return Dataset(np.concatenate([band1, band2]), labels)
    if spec.kind == "grid":
        axes = [np.linspace(lo, hi, spec.n) for lo, hi in spec.box[:M.dim]]
        mesh = np.meshgrid(*axes, indexing="ij")
        return Dataset(np.stack([m.ravel() for m in mesh], axis=-1))
    if spec.kind == "custom_points":
        if spec.points is None:
            raise ValueError("custom_points requires explicit points")
        return Dataset(np.asarray(spec.points, dtype=float))
    raise ValueError(f"unknown dataset kind {spec.kind!r}")
