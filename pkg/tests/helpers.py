"""Shared oracles for the test suite.

These deliberately avoid the library's construction paths: null spaces
come from dense SVD, momenta from direct resampling, so agreement with
the closed forms is a genuine cross-check.
"""

from __future__ import annotations

import numpy as np

from qdirac import FourVector, mass_shell_energy


def null_space(matrix: np.ndarray, rtol: float = 1e-9) -> np.ndarray:
    """Orthonormal basis of the (numerical) null space via SVD,
    shape (4, k)."""
    u, s, vh = np.linalg.svd(matrix)
    scale = s[0] if s[0] > 0 else 1.0
    keep = s <= rtol * scale
    return vh[keep].conj().T


def matrix_rank(matrix: np.ndarray, rtol: float = 1e-9) -> int:
    s = np.linalg.svd(matrix, compute_uv=False)
    scale = s[0] if s[0] > 0 else 1.0
    return int(np.sum(s > rtol * scale))


def in_span(vec: np.ndarray, basis: np.ndarray) -> float:
    """Relative distance of vec from span(basis); 0 means contained."""
    proj = basis @ (basis.conj().T @ vec)
    return float(np.linalg.norm(vec - proj) / np.linalg.norm(vec))


def rank_one_gram_defect(a: np.ndarray, b: np.ndarray) -> float:
    """Ratio s2/s1 of the singular values of [a | b]; 0 iff parallel."""
    m = np.stack([a / np.linalg.norm(a), b / np.linalg.norm(b)], axis=1)
    s = np.linalg.svd(m, compute_uv=False)
    return float(s[1] / s[0])


def random_onshell(rng: np.random.Generator, mass: float, sign: int) -> FourVector:
    kvec = rng.uniform(-2.0, 2.0, size=3)
    if mass == 0.0 and np.linalg.norm(kvec) == 0.0:
        kvec = np.array([0.0, 0.0, 1.0])
    return FourVector(mass_shell_energy(kvec, mass, sign), *kvec)


def random_null_fourvector(rng: np.random.Generator) -> FourVector:
    direction = rng.normal(size=3)
    direction = direction / np.linalg.norm(direction)
    scale = rng.uniform(0.5, 2.0)
    sign = 1.0 if rng.uniform() < 0.5 else -1.0
    return FourVector(sign * scale, *(scale * direction))


def quaternion_components(rng: np.random.Generator, n: int, bound: float = 2.0) -> np.ndarray:
    return rng.uniform(-bound, bound, size=(n, 4))
