import numpy as np
import pytest

from sparsehelly.core import HPolytope, VPolytope
from sparsehelly.generate import generate
from sparsehelly.io import hpolytope_from_json, vpolytope_from_json


def instance_v(kind, d, seed, index=0, n=None) -> VPolytope:
    return vpolytope_from_json(generate(kind, d, n, seed, index))


def instance_h(kind, d, seed, index=0, n=None) -> HPolytope:
    return hpolytope_from_json(generate(kind, d, n, seed, index))


def cube(d) -> HPolytope:
    return instance_h("cube", d, 0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
