"""Deterministic seeded generators shared by the check handlers and tests."""

from __future__ import annotations

import numpy as np

from .extension import DilationParams, GroupElement
from .heisenberg import symplectic_matrix
from .matrices import mat_exp
from .reps import TestFunction, gaussian


def random_group_element(params: DilationParams, rng: np.random.Generator,
                         t_scale: float = 0.7, v_scale: float = 1.0) -> GroupElement:
    return GroupElement(
        t=rng.uniform(-t_scale, t_scale, size=2),
        x=rng.uniform(-v_scale, v_scale, size=params.n),
        y=rng.uniform(-v_scale, v_scale, size=params.n),
        z=float(rng.uniform(-v_scale, v_scale)),
    )


def random_probe(n: int, rng: np.random.Generator, tag: str | None = None) -> TestFunction:
    """Gaussian probe on R^{n+1}; tagged probes sit well inside their half-space."""
    center = rng.uniform(-1.0, 1.0, size=n + 1)
    if tag is not None:
        sign = 1.0 if tag.endswith("+") else -1.0
        center[0] = sign * rng.uniform(1.6, 2.4)
    sigma = rng.uniform(0.2, 0.3, size=n + 1)
    if tag is not None:
        sigma[0] = rng.uniform(0.12, 0.18)
    modulation = rng.uniform(-1.0, 1.0, size=n + 1)
    return gaussian(center, 1.0 / sigma ** 2, modulation, support=tag)


def random_symplectic(n: int, rng: np.random.Generator, scale: float = 0.4) -> np.ndarray:
    """exp(J S) for symmetric S is symplectic."""
    sym = rng.uniform(-scale, scale, size=(2 * n, 2 * n))
    sym = 0.5 * (sym + sym.T)
    return mat_exp(symplectic_matrix(n) @ sym)


def random_anti_symplectic(n: int, rng: np.random.Generator, scale: float = 0.4) -> np.ndarray:
    """A matrix with S^T J S = -J: symplectic times diag(I, -I)."""
    flip = np.eye(2 * n)
    flip[n:, n:] *= -1.0
    return random_symplectic(n, rng, scale) @ flip


def random_commuting_params(n: int, rng: np.random.Generator) -> DilationParams:
    """Random parameters with B2 a polynomial in B1, hence commuting."""
    b1 = rng.uniform(-1.0, 1.0, size=(n, n))
    coeffs = rng.uniform(-1.0, 1.0, size=3)
    b2 = coeffs[0] * np.eye(n) + coeffs[1] * b1 + coeffs[2] * (b1 @ b1)
    return DilationParams(n=n, p=rng.uniform(-1.0, 1.0, size=2), b1=b1, b2=b2)
