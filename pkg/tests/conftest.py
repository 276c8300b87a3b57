"""Shared fixtures and helpers for the satdgates test suite."""
import math

import numpy as np
import pytest

from satdgates.pulses import DriveParams, Path


def make_drive(eta=1.0, x=2.0, *, phi2=math.pi / 2, path=Path.Z,
               sigma=0.0, omega0=None) -> DriveParams:
    kw = {} if omega0 is None else {"omega0": omega0}
    return DriveParams.from_dimensionless(eta, x, phi2=phi2, path=path,
                                          sigma=sigma, **kw)


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (a + a.conj().T) / 2.0


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(dim, dim))
                        + 1j * rng.normal(size=(dim, dim)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260826)
