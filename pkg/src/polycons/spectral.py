"""Consensus weight matrices and their non-consensus spectrum."""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np

from .graph import Edge, Graph

ROW_SUM_TOL = 1e-12
CENTER_TOL = 1e-9
RESIDUAL_TOL = 1e-9
ZERO_EIG = 1e-12


class SpectrumError(ValueError):
    """The weight matrix has no isolated consensus eigenvalue or is malformed."""


@dataclass(frozen=True, eq=False)
class WeightMatrix:
    """Symmetric consensus matrix ``P = I - L(w)`` on a support graph.

    ``weights[k]`` is the weight on ``support.edges[k]``; the diagonal is
    induced so that every row sums to one. Diagonal entries may be negative.
    """

    support: Graph
    weights: np.ndarray
    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.support.n

    def weight_map(self) -> dict[Edge, float]:
        return {e: float(w) for e, w in zip(self.support.edges, self.weights)}

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "edges": [[i, j, float(w)] for (i, j), w in zip(self.support.edges, self.weights)],
        }

    @classmethod
    def from_json(cls, data: dict | str) -> "WeightMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        g = Graph(data["n"], [e[:2] for e in data["edges"]])
        return weight_matrix(g, {(int(e[0]), int(e[1])): float(e[2]) for e in data["edges"]})


def laplacian_from_weights(g: Graph, w: np.ndarray) -> np.ndarray:
    lap = np.zeros((g.n, g.n))
    if g.m:
        i, j = np.array(g.edges).T
        np.add.at(lap, (i, j), -w)
        np.add.at(lap, (j, i), -w)
        np.add.at(lap, (i, i), w)
        np.add.at(lap, (j, j), w)
    return lap


def from_edge_vector(g: Graph, w: Sequence[float]) -> WeightMatrix:
    """Build ``P`` from weights ordered like ``g.edges``."""
    w = np.array(w, dtype=float)
    if w.shape != (g.m,):
        raise SpectrumError(f"expected {g.m} edge weights, got shape {w.shape}")
    mat = np.eye(g.n) - laplacian_from_weights(g, w)
    mat = 0.5 * (mat + mat.T)
    mat.setflags(write=False)
    w.setflags(write=False)
    return WeightMatrix(g, w, mat)


def weight_matrix(g: Graph, weights: Mapping[tuple[int, int], float] | float) -> WeightMatrix:
    """``P`` with off-diagonal ``(i, j)`` equal to the edge weight.

    ``weights`` maps every edge of ``g`` (either orientation) to a real, or
    is a single float applied uniformly.
    """
    if isinstance(weights, (int, float)):
        return from_edge_vector(g, np.full(g.m, float(weights)))
    vec = {}
    for (i, j), w in weights.items():
        key = (i, j) if i < j else (j, i)
        if not g.has_edge(*key):
            raise SpectrumError(f"weight given on non-edge {key}")
        if key in vec:
            raise SpectrumError(f"edge {key} weighted twice")
        vec[key] = float(w)
    missing = [e for e in g.edges if e not in vec]
    if missing:
        raise SpectrumError(f"missing weights for edges {missing}")
    return from_edge_vector(g, [vec[e] for e in g.edges])


@lru_cache(maxsize=64)
def _complement_basis(n: int) -> np.ndarray:
    # orthonormal basis of the subspace orthogonal to the all-ones vector
    a = np.eye(n)
    a[:, 0] = 1.0
    q, _ = np.linalg.qr(a)
    basis = q[:, 1:].copy()
    basis.setflags(write=False)
    return basis


def eigensystem(p: WeightMatrix | np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Non-consensus eigenpairs of a symmetric matrix with ``P 1 = 1``.

    The consensus direction is deflated exactly by restricting ``P`` to the
    orthogonal complement of the all-ones vector, so a nearly degenerate
    eigenvalue at 1 cannot be confused with it. Returns ascending
    eigenvalues and ambient eigenvectors as columns.
    """
    mat = p.matrix if isinstance(p, WeightMatrix) else np.asarray(p, dtype=float)
    n = mat.shape[0]
    if n == 1:
        return np.empty(0), np.empty((1, 0))
    q = _complement_basis(n)
    lams, u = np.linalg.eigh(q.T @ mat @ q)
    vecs = q @ u
    scale = max(1.0, float(np.abs(mat).max()))
    resid = np.abs(mat @ vecs - vecs * lams).max() if lams.size else 0.0
    if resid > RESIDUAL_TOL * scale * n:
        raise SpectrumError(f"eigen-residual {resid:.3e} exceeds tolerance")
    return lams, vecs


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Non-consensus eigenvalues of ``P`` (ascending) with SLEM and SEM."""

    lambdas: np.ndarray
    mu: float
    sigma: float
    centered: bool

    @property
    def shift(self) -> float:
        """Midpoint of the extreme non-consensus eigenvalues."""
        if self.lambdas.size == 0:
            return 0.0
        return 0.5 * (float(self.lambdas[-1]) + float(self.lambdas[0]))

    def centered_image(self) -> "Spectrum":
        """Spectrum after the affine map ``l -> (l - s) / (1 - s)``."""
        s = self.shift
        if s >= 1.0:
            raise SpectrumError(f"spectral midpoint {s} >= 1 cannot be centered")
        return spectrum_from_values((self.lambdas - s) / (1.0 - s))

    def to_json(self) -> dict:
        return {
            "mu": self.mu,
            "sigma": self.sigma,
            "centered": self.centered,
            "lambdas": [float(v) for v in self.lambdas],
        }


def spectrum_from_values(lambdas: Sequence[float]) -> Spectrum:
    lam = np.sort(np.asarray(lambdas, dtype=float))
    if lam.size == 0:
        return Spectrum(lam, 0.0, 0.0, True)
    mods = np.abs(lam)
    mu = float(mods.max())
    sigma = 0.0 if mods.min() < ZERO_EIG else float(mods.min())
    centered = abs(lam[-1] + lam[0]) <= CENTER_TOL * (1.0 + mu)
    lam.setflags(write=False)
    return Spectrum(lam, mu, sigma, bool(centered))


def spectrum(p: WeightMatrix) -> Spectrum:
    if not p.support.is_connected():
        raise SpectrumError("support graph is disconnected")
    lams, _ = eigensystem(p)
    if lams.size and np.any(np.abs(lams - 1.0) <= 1e-9):
        raise SpectrumError("consensus eigenvalue 1 is not simple (effectively disconnected)")
    return spectrum_from_values(lams)


def center(p: WeightMatrix) -> WeightMatrix:
    """Affinely rescale ``P`` so its extreme non-consensus eigenvalues are ``+-mu``."""
    s = spectrum(p).shift
    if s >= 1.0:
        raise SpectrumError(f"spectral midpoint {s} >= 1 cannot be centered")
    if s == 0.0:
        return p
    return from_edge_vector(p.support, np.asarray(p.weights) / (1.0 - s))


def is_deadbeat_2step(s: Spectrum, tol: float = 1e-9) -> bool:
    """True when a quadratic filter annihilates the whole non-consensus spectrum."""
    c = s.centered_image()
    return c.mu - c.sigma <= tol
