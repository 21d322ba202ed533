"""Shared samplers and fixtures for the test suite."""

import random
from fractions import Fraction

import numpy as np
import pytest

from tanglev import coloring, factgroup
from tanglev.factgroup import Mat2
from tanglev.rational import QC
from tanglev.uqalgebra import CentralCharacter, RootData, is_generic


def rational_scalar(rng, span=5, maxden=4):
    den = rng.randint(1, maxden)
    return QC(Fraction(rng.randint(-span * den, span * den), den))


def rational_mat(rng, span=5, maxden=4):
    """A random factorizable 2x2 matrix with bounded rational entries."""
    while True:
        m = Mat2(*(rational_scalar(rng, span, maxden) for _ in range(4)))
        try:
            factgroup.factorize(m)
            return m
        except factgroup.NotFactorizable:
            continue


def float_group(rng):
    return Mat2(*(complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
                  for _ in range(4)))


def generic_group(rng, rd):
    """A random complex group element whose character is generic."""
    while True:
        g = float_group(rng)
        try:
            factgroup.factorize(g)
        except factgroup.NotFactorizable:
            continue
        if is_generic(CentralCharacter.from_group(g), rd):
            return g


def generic_char(rng, rd):
    while True:
        ch = CentralCharacter(*(complex(rng.uniform(-2, 2),
                                        rng.uniform(-2, 2))
                                for _ in range(4)))
        if is_generic(ch, rd):
            return ch


def trefoil_meridians():
    """Generic meridian matrices with A B A = B A B."""
    s, lam = 0.5 + 1.0j, 0.8 - 0.5j
    a0 = np.array([[1, s], [0, 1]])
    b0 = np.array([[1, 0], [-1 / s, 1]])
    p = np.array([[1.1 + 0.3j, -0.4 + 0.2j], [0.6 - 0.1j, 0.9 + 0.7j]])
    pinv = np.linalg.inv(p)
    return lam * (p @ a0 @ pinv), lam * (p @ b0 @ pinv)


def mat2_of(m):
    return Mat2(*(complex(v) for v in np.asarray(m).ravel()))


def trefoil_boundary_2():
    """(bottom color, cup seed) for the partial closure of s1^3."""
    a, b = trefoil_meridians()
    bnd = coloring.functor_f_object([(1, mat2_of(a)), (1, mat2_of(a @ b))])
    return bnd.colors()


def trefoil_boundary_3():
    """Colors for the partial closure of the 3-strand torus word."""
    a, b = trefoil_meridians()
    bnd = coloring.functor_f_object(
        [(1, mat2_of(a)), (1, mat2_of(a @ b)), (1, mat2_of(a @ b @ a))])
    return bnd.colors()


@pytest.fixture(scope="session")
def rd3():
    return RootData(3)


@pytest.fixture()
def rng():
    return random.Random(20260823)
