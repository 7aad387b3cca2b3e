"""Lie algebra of the Galilei group over the basis {a_ij, b_i, d_i, f}.

a_ij generate rotations (matrix with +1 at (i,j), -1 at (j,i)), b_i space
translations, d_i boosts, f time translation.  The commutator is carried out
on the coefficient blocks, which reproduces the matrix commutator of the
(dim+2)x(dim+2) embedding exactly.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .group import GalileiElement

__all__ = [
    "AlgebraElement",
    "zero",
    "basis_element",
    "basis_names",
    "commutator",
    "jacobi_residual",
    "embed_algebra",
    "exponential",
    "random_algebra_element",
    "algebra_to_dict",
    "algebra_from_dict",
]

_ANTISYM_TOL = 1e-12


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """Real coefficients: rot (antisymmetric matrix over a_ij), trans (b_i),
    boost (d_i), time (f)."""

    dim: int
    rot: np.ndarray
    trans: np.ndarray
    boost: np.ndarray
    time: float

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        rot = np.array(self.rot, dtype=float).reshape(self.dim, self.dim)
        if np.max(np.abs(rot + rot.T)) > _ANTISYM_TOL:
            raise ValueError("rot must be antisymmetric")
        object.__setattr__(self, "rot", _frozen(rot))
        object.__setattr__(self, "trans",
                           _frozen(np.asarray(self.trans, dtype=float).reshape(self.dim)))
        object.__setattr__(self, "boost",
                           _frozen(np.asarray(self.boost, dtype=float).reshape(self.dim)))
        object.__setattr__(self, "time", float(self.time))

    def scale(self, c: float) -> "AlgebraElement":
        return AlgebraElement(self.dim, c * self.rot, c * self.trans,
                              c * self.boost, c * self.time)

    def add(self, other: "AlgebraElement") -> "AlgebraElement":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        return AlgebraElement(self.dim, self.rot + other.rot,
                              self.trans + other.trans,
                              self.boost + other.boost,
                              self.time + other.time)

    def max_abs(self) -> float:
        return max(np.max(np.abs(self.rot)), np.max(np.abs(self.trans)),
                   np.max(np.abs(self.boost)), abs(self.time))


def zero(dim: int) -> AlgebraElement:
    z = np.zeros(dim)
    return AlgebraElement(dim, np.zeros((dim, dim)), z, z, 0.0)


def basis_names(dim: int) -> list[str]:
    """All basis element names for the dimension, e.g. a12, b1, d1, f."""
    names = [f"a{i + 1}{j + 1}" for i in range(dim) for j in range(i + 1, dim)]
    names += [f"b{i + 1}" for i in range(dim)]
    names += [f"d{i + 1}" for i in range(dim)]
    names.append("f")
    return names


def basis_element(name: str, dim: int) -> AlgebraElement:
    """Basis element by name string: "a12", "b1", "d3" or "f" (1-based)."""
    X = zero(dim)
    if name == "f":
        return AlgebraElement(dim, X.rot, X.trans, X.boost, 1.0)
    m = re.fullmatch(r"([abd])([1-3])([1-3])?", name)
    if not m:
        raise ValueError(f"unknown basis element {name!r}")
    kind, i = m.group(1), int(m.group(2)) - 1
    if kind == "a":
        if m.group(3) is None:
            raise ValueError(f"rotation basis needs two indices, got {name!r}")
        j = int(m.group(3)) - 1
        if i == j or i >= dim or j >= dim:
            raise ValueError(f"indices of {name!r} out of range for dim {dim}")
        rot = np.zeros((dim, dim))
        rot[i, j] = 1.0
        rot[j, i] = -1.0
        return AlgebraElement(dim, rot, X.trans, X.boost, 0.0)
    if m.group(3) is not None:
        raise ValueError(f"unknown basis element {name!r}")
    if i >= dim:
        raise ValueError(f"index of {name!r} out of range for dim {dim}")
    vec = np.zeros(dim)
    vec[i] = 1.0
    if kind == "b":
        return AlgebraElement(dim, X.rot, vec, X.boost, 0.0)
    return AlgebraElement(dim, X.rot, X.trans, vec, 0.0)


def commutator(X: AlgebraElement, Y: AlgebraElement) -> AlgebraElement:
    """[X, Y], matching the matrix commutator of the embedding."""
    if X.dim != Y.dim:
        raise ValueError("dimension mismatch")
    rot = X.rot @ Y.rot - Y.rot @ X.rot
    boost = X.rot @ Y.boost - Y.rot @ X.boost
    trans = (X.rot @ Y.trans - Y.rot @ X.trans
             + Y.time * X.boost - X.time * Y.boost)
    return AlgebraElement(X.dim, rot, trans, boost, 0.0)


def jacobi_residual(X: AlgebraElement, Y: AlgebraElement,
                    Z: AlgebraElement) -> float:
    """Max-norm of [X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]]."""
    total = commutator(X, commutator(Y, Z)).add(
        commutator(Y, commutator(Z, X))).add(
        commutator(Z, commutator(X, Y)))
    return total.max_abs()


def embed_algebra(X: AlgebraElement) -> np.ndarray:
    """(dim+2)x(dim+2) matrix [[rot, boost, trans], [0, 0, time], [0, 0, 0]].

    The matrix exponential of this embedding is the group embedding of
    exponential(X).
    """
    d = X.dim
    M = np.zeros((d + 2, d + 2))
    M[:d, :d] = X.rot
    M[:d, d] = X.boost
    M[:d, d + 1] = X.trans
    M[d, d + 1] = X.time
    return M


def _expm(M: np.ndarray, tol: float = 1e-14) -> np.ndarray:
    """Scaled-and-squared Taylor series; fine for these small matrices."""
    n = M.shape[0]
    norm = np.max(np.sum(np.abs(M), axis=1))
    squarings = max(0, int(math.ceil(math.log2(norm / 0.5))) if norm > 0.5 else 0)
    A = M / (2.0 ** squarings)
    result = np.eye(n)
    term = np.eye(n)
    k = 1
    while True:
        term = term @ A / k
        result = result + term
        if np.max(np.abs(term)) < tol:
            break
        k += 1
        if k > 200:
            raise RuntimeError("matrix exponential series failed to converge")
    for _ in range(squarings):
        result = result @ result
    return result


def exponential(X: AlgebraElement) -> GalileiElement:
    """Exponential map onto the group, via the embedding."""
    d = X.dim
    E = _expm(embed_algebra(X))
    return GalileiElement(d, E[:d, :d], E[d, d + 1], E[:d, d], E[:d, d + 1])


def random_algebra_element(seed, dim: int, scale: float = 1.0) -> AlgebraElement:
    """Seeded random element with coefficients of the given scale."""
    rng = np.random.default_rng(seed)
    A = rng.uniform(-scale, scale, size=(dim, dim))
    return AlgebraElement(dim, A - A.T,
                          rng.uniform(-scale, scale, size=dim),
                          rng.uniform(-scale, scale, size=dim),
                          rng.uniform(-scale, scale))


def algebra_to_dict(X: AlgebraElement) -> dict:
    return {
        "dim": X.dim,
        "rot": [float(x) for x in X.rot.reshape(-1)],
        "trans": [float(x) for x in X.trans],
        "boost": [float(x) for x in X.boost],
        "time": X.time,
    }


def algebra_from_dict(d: dict) -> AlgebraElement:
    dim = int(d["dim"])
    rot = np.asarray(d["rot"], dtype=float).reshape(dim, dim)
    return AlgebraElement(dim, rot, d["trans"], d["boost"], float(d["time"]))
