import importlib.resources as ir
import json

import numpy as np
import pytest

from varorbit.core import MassSystem
from varorbit.groups import load_group_file
from varorbit.paths import FourierPath, symmetrize

GROUP_DIR = ir.files("varorbit") / "data" / "groups"


def group_file(name: str) -> str:
    return str(GROUP_DIR / f"{name}.json")


def load_group(name: str):
    return load_group_file(group_file(name))


def group_dict(name: str) -> dict:
    return json.loads((GROUP_DIR / f"{name}.json").read_text())


@pytest.fixture
def kepler_group():
    return load_group("two_body_choreography")


@pytest.fixture
def eight_group():
    return load_group("figure_eight")


@pytest.fixture
def brake_group():
    return load_group("brake_reflection")


@pytest.fixture
def trivial2():
    return load_group("trivial")


def random_system(rng, n=None, d=None, equal_masses=False) -> MassSystem:
    n = n or int(rng.integers(2, 5))
    d = d or int(rng.integers(1, 4))
    masses = (np.full(n, 1.0) if equal_masses
              else rng.uniform(0.5, 2.0, n))
    return MassSystem(n=n, d=d, alpha=1.0, masses=masses)


def random_separated_config(rng, system, spread=3.0):
    """Collision-free configuration with mutual distances of order 1."""
    while True:
        q = rng.normal(scale=spread, size=(system.n, system.d))
        ii, jj = np.triu_indices(system.n, k=1)
        if np.linalg.norm(q[ii] - q[jj], axis=1).min() > 0.5:
            return q


def separated_random_path(rng, group, s, spread=3.0, amplitude=0.3):
    """Symmetric path whose bodies stay well apart (for quadrature tests)."""
    system = group.system
    for _ in range(2000):
        coeffs = rng.uniform(-amplitude, amplitude,
                             (s + 2, system.n, system.d))
        base = random_separated_config(rng, system, spread)
        coeffs[0] += base
        coeffs[-1] += base
        path = symmetrize(FourierPath(system, group, s, coeffs))
        from varorbit.paths import QuadratureParams, sample_nodes
        samples = sample_nodes(path, QuadratureParams(128))
        ii, jj = np.triu_indices(system.n, k=1)
        if np.linalg.norm(samples[:, ii] - samples[:, jj], axis=2).min() > 0.3:
            return path
    raise RuntimeError("could not build a separated symmetric path")
