"""Galilei group elements in (1+1), (2+1) and (3+1) dimensions.

An element bundles a rotation W, a time shift eta, a boost velocity v and a
space translation u, composed as (W_r W_s, eta_r + eta_s, W_r v_s + v_r,
W_r u_s + u_r + eta_s v_r).  The faithful (dim+2)x(dim+2) matrix picture and
the momentum action used by the ray representations live here too.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GalileiElement",
    "identity",
    "multiply",
    "inverse",
    "embed_matrix",
    "act_on_momentum",
    "rotation_2d",
    "rotation_angle",
    "random_rotation",
    "random_element",
    "element_to_dict",
    "element_from_dict",
]

_ORTHO_TOL = 1e-9


def _frozen(a):
    a = np.array(a, dtype=float)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class GalileiElement:
    """Immutable group element (W, eta, v, u) in spatial dimension dim."""

    dim: int
    W: np.ndarray
    eta: float
    v: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        W = np.array(self.W, dtype=float).reshape(self.dim, self.dim)
        v = np.array(self.v, dtype=float).reshape(self.dim)
        u = np.array(self.u, dtype=float).reshape(self.dim)
        ortho_err = np.max(np.abs(W.T @ W - np.eye(self.dim)))
        if ortho_err > _ORTHO_TOL:
            raise ValueError(f"W not orthogonal, max deviation {ortho_err:.3e}")
        if np.linalg.det(W) < 0.0:
            raise ValueError("W must be a proper rotation (det +1)")
        object.__setattr__(self, "W", _frozen(W))
        object.__setattr__(self, "eta", float(self.eta))
        object.__setattr__(self, "v", _frozen(v))
        object.__setattr__(self, "u", _frozen(u))

    def __repr__(self):
        return (f"GalileiElement(dim={self.dim}, W={self.W.tolist()}, "
                f"eta={self.eta}, v={self.v.tolist()}, u={self.u.tolist()})")


def _check_same_dim(r, s):
    if r.dim != s.dim:
        raise ValueError(f"dimension mismatch: {r.dim} vs {s.dim}")


def identity(dim: int) -> GalileiElement:
    """Neutral element in the given dimension."""
    z = np.zeros(dim)
    return GalileiElement(dim, np.eye(dim), 0.0, z, z)


def multiply(r: GalileiElement, s: GalileiElement) -> GalileiElement:
    """Group composition rs."""
    _check_same_dim(r, s)
    return GalileiElement(
        r.dim,
        r.W @ s.W,
        r.eta + s.eta,
        r.W @ s.v + r.v,
        r.W @ s.u + r.u + s.eta * r.v,
    )


def inverse(r: GalileiElement) -> GalileiElement:
    """Group inverse, so that multiply(r, inverse(r)) is the identity."""
    Winv = r.W.T
    return GalileiElement(
        r.dim,
        Winv,
        -r.eta,
        -(Winv @ r.v),
        -(Winv @ (r.u - r.eta * r.v)),
    )


def embed_matrix(r: GalileiElement) -> np.ndarray:
    """Faithful (dim+2)x(dim+2) matrix: [[W, v, u], [0, 1, eta], [0, 0, 1]].

    Matrix multiplication of embeddings reproduces the group law.
    """
    d = r.dim
    M = np.zeros((d + 2, d + 2))
    M[:d, :d] = r.W
    M[:d, d] = r.v
    M[:d, d + 1] = r.u
    M[d, d] = 1.0
    M[d, d + 1] = r.eta
    M[d + 1, d + 1] = 1.0
    return M


def act_on_momentum(r: GalileiElement, p, gamma: float) -> np.ndarray:
    """Substitution argument W^{-1}(p + gamma v) used by the momentum reps."""
    p = np.asarray(p, dtype=float)
    return r.W.T @ (p + gamma * r.v)


def rotation_2d(theta: float) -> np.ndarray:
    """2D rotation matrix for angle theta."""
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def rotation_angle(r) -> float:
    """Angle of the rotation part, dim=2 only; principal branch (-pi, pi]."""
    W = r.W if isinstance(r, GalileiElement) else np.asarray(r, dtype=float)
    if W.shape != (2, 2):
        raise ValueError("rotation_angle is defined only for dim=2")
    return math.atan2(W[1, 0], W[0, 0])


def random_rotation(rng, dim: int, max_angle: float = math.pi) -> np.ndarray:
    """Random rotation: trivial at dim=1, uniform angle at dim=2,
    uniform-axis/uniform-angle at dim=3.  max_angle bounds |angle|."""
    rng = np.random.default_rng(rng)
    if dim == 1:
        return np.eye(1)
    angle = rng.uniform(-max_angle, max_angle)
    if dim == 2:
        return rotation_2d(angle)
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    K = np.array([
        [0.0, -axis[2], axis[1]],
        [axis[2], 0.0, -axis[0]],
        [-axis[1], axis[0], 0.0],
    ])
    return np.eye(3) + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K)


def random_element(seed, dim: int, scale: float = 1.0,
                   max_angle: float = math.pi) -> GalileiElement:
    """Seeded random element: W a random rotation, eta and the components of
    v, u uniform in [-scale, scale].

    seed may be an integer or a numpy Generator (streamed draws).  max_angle
    restricts the rotation angle; cocycle sweeps pass a value below pi/3 so
    that angles of triple products stay on the principal branch.
    """
    rng = np.random.default_rng(seed)
    W = random_rotation(rng, dim, max_angle)
    eta = float(rng.uniform(-scale, scale))
    v = rng.uniform(-scale, scale, size=dim)
    u = rng.uniform(-scale, scale, size=dim)
    return GalileiElement(dim, W, eta, v, u)


def element_to_dict(r: GalileiElement) -> dict:
    """JSON-ready encoding with W flattened row-major."""
    return {
        "dim": r.dim,
        "W": [float(x) for x in r.W.reshape(-1)],
        "eta": r.eta,
        "v": [float(x) for x in r.v],
        "u": [float(x) for x in r.u],
    }


def element_from_dict(d: dict) -> GalileiElement:
    dim = int(d["dim"])
    W = np.asarray(d["W"], dtype=float).reshape(dim, dim)
    return GalileiElement(dim, W, float(d["eta"]), d["v"], d["u"])
