""" executed when running with pytest"""

import pytest
import sys

import numpy as np

import screwkit as sk

def pytest_configure(config):
  sys._called_from_test = True

def pytest_unconfigure(config):
  del sys._called_from_test


@pytest.fixture
def rng():
  return np.random.default_rng(20260417)


@pytest.fixture
def tol():
  return sk.catalog.tolerance('articulated')


@pytest.fixture
def tol_complex():
  return sk.catalog.tolerance('complex')


@pytest.fixture
def revolute_z():
  """ unit revolute screw about z through (0.5, 0.2, 0) """
  return sk.ScrewParams.from_point([0., 0., 1.], [0.5, 0.2, 0.], 0., 1.)
