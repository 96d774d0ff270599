"""Spherical product quadrature and deterministic integration over a ball.

Nodes are an N_r-point Gauss-Legendre rule on [0, r_max] (with r^2 folded
into the weights), an N_theta-point Gauss-Legendre rule in cos(theta) and
an N_phi-point trapezoidal rule in phi. Integrands are evaluated in
fixed-size chunks, possibly on several threads, and the weighted values
are combined by a fixed pairwise tree, so results do not depend on the
number of workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

THREADS_ENV = "SPINOBS_THREADS"
CHUNK = 4096
REFINE_FACTOR = 1.5


@dataclass(frozen=True)
class SphericalGrid:
    r_max: float
    n_r: int
    n_theta: int
    n_phi: int

    def __post_init__(self):
        if not self.r_max > 0:
            raise ValueError(f"r_max must be positive, got {self.r_max}")
        for name in ("n_r", "n_theta", "n_phi"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v}")

    @cached_property
    def radial_nodes(self):
        """(r, weight) with the r^2 Jacobian included."""
        t, w = np.polynomial.legendre.leggauss(self.n_r)
        half = 0.5 * self.r_max
        r = half * (t + 1.0)
        return r, w * half * r * r

    @cached_property
    def polar_nodes(self):
        """(theta, weight) from Gauss-Legendre in cos(theta)."""
        x, w = np.polynomial.legendre.leggauss(self.n_theta)
        return np.arccos(x[::-1]), w[::-1]

    @cached_property
    def azimuthal_nodes(self):
        """(phi, weight); all weights equal 2 pi / n_phi."""
        phi = 2.0 * math.pi * np.arange(self.n_phi) / self.n_phi
        return phi, np.full(self.n_phi, 2.0 * math.pi / self.n_phi)

    @property
    def size(self):
        return self.n_r * self.n_theta * self.n_phi

    @cached_property
    def points(self):
        """Cartesian nodes, shape (size, 3), radial index slowest."""
        r, _ = self.radial_nodes
        th, _ = self.polar_nodes
        ph, _ = self.azimuthal_nodes
        R, T, P = np.meshgrid(r, th, ph, indexing="ij")
        st = np.sin(T)
        pts = np.stack([R * st * np.cos(P), R * st * np.sin(P), R * np.cos(T)], axis=-1)
        pts = pts.reshape(-1, 3)
        pts.flags.writeable = False
        return pts

    @cached_property
    def weights(self):
        _, wr = self.radial_nodes
        _, wt = self.polar_nodes
        _, wp = self.azimuthal_nodes
        w = (wr[:, None, None] * wt[None, :, None] * wp[None, None, :]).reshape(-1)
        w.flags.writeable = False
        return w

    def refined(self, factor=REFINE_FACTOR):
        return SphericalGrid(
            self.r_max,
            math.ceil(self.n_r * factor),
            math.ceil(self.n_theta * factor),
            math.ceil(self.n_phi * factor),
        )

    def describe(self):
        return {"r_max": self.r_max, "n_r": self.n_r, "n_theta": self.n_theta, "n_phi": self.n_phi}


def make_grid(r_max, n_r=80, n_theta=16, n_phi=16):
    return SphericalGrid(float(r_max), int(n_r), int(n_theta), int(n_phi))


def default_grid(state):
    """Grid sized to the state's extent and angular content."""
    if state.kind == "hydrogenic":
        r_max = 25.0 * state.n_max**2 / state.Z
        n_theta = 2 * state.l_max + 16
        n_phi = max(2 * state.m_max + 8, 16)
        return make_grid(r_max, 80, n_theta, n_phi)
    if state.kind == "gaussian":
        r_max = float(np.linalg.norm(state.center)) + 12.0 * state.sigma
        n_ang = max(32, math.ceil(8.0 * float(np.linalg.norm(state.momentum)) * r_max))
        return make_grid(r_max, 80, n_ang, n_ang)
    raise TypeError(f"unknown state kind {state.kind!r}")


def resolve_workers(workers=None):
    if workers is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        workers = int(env) if env else 1
    return max(1, int(workers))


def pairwise_sum(values):
    """Sum along axis 0 by a fixed balanced tree of pairwise additions."""
    v = np.asarray(values)
    if v.shape[0] == 0:
        return np.zeros(v.shape[1:], dtype=v.dtype)
    while v.shape[0] > 1:
        n = v.shape[0]
        head = v[0 : n - 1 : 2] + v[1:n:2]
        v = np.concatenate([head, v[n - 1 :]]) if n % 2 else head
    return v[0]


def _evaluate_nodes(field, pts, workers):
    chunks = [pts[i : i + CHUNK] for i in range(0, len(pts), CHUNK)]
    if workers == 1 or len(chunks) == 1:
        parts = [np.asarray(field(c)) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = [np.asarray(p) for p in pool.map(field, chunks)]
    return np.concatenate(parts, axis=0)


def integrate(field, grid, workers=None):
    """Integrate a vectorized field over the grid.

    ``field`` maps an (N, 3) array of points to an array whose leading axis
    has length N; any trailing shape is integrated componentwise.
    """
    vals = _evaluate_nodes(field, grid.points, resolve_workers(workers))
    if not np.all(np.isfinite(vals)):
        raise FloatingPointError("integrand is not finite at every node")
    w = grid.weights.reshape((-1,) + (1,) * (vals.ndim - 1))
    return pairwise_sum(vals * w)


def integrate_vector(field, grid, workers=None):
    """Integral of a 3-vector field; ``field`` maps (N, 3) points to (N, 3) values."""
    out = integrate(field, grid, workers)
    if out.shape != (3,):
        raise ValueError(f"vector field must return shape (N, 3), integral has shape {out.shape}")
    return out


def integrate_scalar(field, grid, workers=None):
    return float(integrate(field, grid, workers))


def convergence_report(field, grid, workers=None):
    """Integral on a refined grid plus the max-norm change from ``grid``.

    Each node count is multiplied by 1.5 and rounded up. Returns
    ``(refined_value, estimate)``.
    """
    coarse = integrate(field, grid, workers)
    fine = integrate(field, grid.refined(), workers)
    return fine, float(np.max(np.abs(fine - coarse)))
