"""Shared fixtures: manifolds and seeded, domain-safe point samplers."""

import numpy as np
import pytest

import isogeo as ig

# Spiral samples live in a phi-coordinate box clear of the origin and of the
# 0/2pi angular branch cut; phi-convex combinations stay inside the box.
SPIRAL_PHI_LO = np.array([1.5, 1.0])
SPIRAL_PHI_HI = np.array([6.0, 5.3])


def make_manifold(name, quad=None):
    factories = {
        "identity": lambda: ig.identity(2),
        "river": ig.river,
        "spiral": ig.spiral,
        "banana": ig.banana,
        "sinh": ig.sinh_shift_1d,
    }
    return ig.PullbackManifold(factories[name](), quad or ig.QuadratureConfig())


def sample_point(name, M, rng):
    if name == "spiral":
        return M.diffeo.inverse(rng.uniform(SPIRAL_PHI_LO, SPIRAL_PHI_HI))
    if name == "sinh":
        return rng.uniform(-3.0, 3.0, 1)
    return rng.uniform(-4.0, 4.0, 2)


def sample_pairs(name, M, rng, n):
    return [(sample_point(name, M, rng), sample_point(name, M, rng))
            for _ in range(n)]


def safe_tangent(name, M, rng, x, y):
    """A tangent at x whose iso-exponential stays on the manifold's domain."""
    if name == "spiral":
        return ig.TangentVector(x, rng.uniform(0.1, 0.9) * ig.iso_log(M, x, y).vec)
    return ig.TangentVector(x, 0.4 * (y - x))


@pytest.fixture
def identity2():
    return make_manifold("identity")


@pytest.fixture
def river_manifold():
    return make_manifold("river")


@pytest.fixture
def spiral_manifold():
    return make_manifold("spiral")


@pytest.fixture
def banana_manifold():
    return make_manifold("banana")


@pytest.fixture
def sinh_manifold():
    return make_manifold("sinh")


@pytest.fixture(params=["identity", "river", "spiral", "banana", "sinh"])
def any_manifold(request):
    return request.param, make_manifold(request.param)
