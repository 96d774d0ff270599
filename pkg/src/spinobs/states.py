"""Two-component spinor fields and their pointwise evaluation.

Two kinds of state are supported: finite superpositions of hydrogenic
basis kets |n l m, spin> and free Gaussian wavepackets carrying a constant
spinor. Both evaluate to psi and its Cartesian gradient at arrays of points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from spinobs.coupling import clebsch_half
from spinobs.special import DomainError, MAX_N, radial_wavefunction, spherical_harmonic, spherical_harmonic_derivs

SPINS = ("up", "down")


class SingularPointError(ValueError):
    """Evaluation requested at r = 0 or on the polar axis where the gradient is not resolved."""


@dataclass(frozen=True)
class BasisTerm:
    n: int
    l: int
    m: int
    spin: str
    coeff: complex = 1.0

    def __post_init__(self):
        if self.spin not in SPINS:
            raise DomainError(f"spin must be 'up' or 'down', got {self.spin!r}")
        for name in ("n", "l", "m"):
            if int(getattr(self, name)) != getattr(self, name):
                raise DomainError(f"{name} must be an integer")
        if not (1 <= self.n <= MAX_N and 0 <= self.l < self.n and abs(self.m) <= self.l):
            raise DomainError(f"invalid hydrogenic quantum numbers (n={self.n}, l={self.l}, m={self.m})")

    @property
    def key(self):
        return (self.n, self.l, self.m, self.spin)


@dataclass(frozen=True)
class HydrogenicState:
    """Normalized superposition of hydrogenic kets; build with :func:`hydrogenic_state`."""

    terms: tuple
    Z: float = 1.0
    kind: str = field(default="hydrogenic", init=False)

    @property
    def n_max(self):
        return max(t.n for t in self.terms)

    @property
    def l_max(self):
        return max(t.l for t in self.terms)

    @property
    def m_max(self):
        return max(abs(t.m) for t in self.terms)


@dataclass(frozen=True)
class GaussianPacket:
    """psi = (2 pi sigma^2)^(-3/4) exp(-|x - x0|^2 / (4 sigma^2)) exp(i p.x) chi."""

    sigma: float
    center: tuple
    momentum: tuple
    spinor: tuple
    kind: str = field(default="gaussian", init=False)


SpinorState = Union[HydrogenicState, GaussianPacket]


@dataclass(frozen=True)
class SpinorSample:
    """psi with shape (..., 2) and its gradient with shape (..., 2, 3)."""

    psi: np.ndarray
    grad_psi: np.ndarray
    point: np.ndarray


def hydrogenic_state(terms, Z=1.0, normalize=True):
    """Build a hydrogenic state from BasisTerms or (n, l, m, spin, coeff) tuples.

    Repeated kets are merged. The coefficient vector is rescaled to unit
    norm unless ``normalize`` is false, in which case it must already be
    normalized to 1e-12.
    """
    if Z <= 0:
        raise DomainError(f"nuclear charge must be positive, got {Z}")
    merged = {}
    for t in terms:
        if not isinstance(t, BasisTerm):
            t = BasisTerm(*t)
        merged[t.key] = merged.get(t.key, 0.0) + complex(t.coeff)
    merged = {k: c for k, c in merged.items() if c != 0}
    norm2 = sum(abs(c) ** 2 for c in merged.values())
    if norm2 == 0.0:
        raise DomainError("state has no nonzero coefficients")
    if normalize:
        scale = 1.0 / math.sqrt(norm2)
    elif abs(norm2 - 1.0) > 1e-12:
        raise DomainError(f"coefficients are not normalized (sum |c|^2 = {norm2})")
    else:
        scale = 1.0
    ordered = sorted(merged.items(), key=lambda kc: (kc[0][0], kc[0][1], kc[0][2], SPINS.index(kc[0][3])))
    return HydrogenicState(tuple(BasisTerm(*k, coeff=c * scale) for k, c in ordered), float(Z))


def gaussian_state(sigma=1.0, center=(0.0, 0.0, 0.0), momentum=(0.0, 0.0, 0.0), spinor=(1.0, 0.0)):
    if sigma <= 0:
        raise DomainError(f"wavepacket width must be positive, got {sigma}")
    chi = np.asarray(spinor, dtype=complex).reshape(2)
    nrm = np.sqrt(np.sum(np.abs(chi) ** 2))
    if nrm == 0:
        raise DomainError("spinor must be nonzero")
    chi = chi / nrm
    center = tuple(float(c) for c in np.asarray(center, dtype=float).reshape(3))
    momentum = tuple(float(p) for p in np.asarray(momentum, dtype=float).reshape(3))
    return GaussianPacket(float(sigma), center, momentum, (complex(chi[0]), complex(chi[1])))


def make_coupled_state(n, l, j, m_j, Z=1.0):
    """Hydrogenic eigenstate of J^2 and J_z built from the spinor spherical harmonic."""
    c_up, c_down = clebsch_half(l, j, m_j)
    m_up = int(round(m_j - 0.5))
    terms = []
    if c_up != 0.0:
        terms.append(BasisTerm(n, l, m_up, "up", c_up))
    if c_down != 0.0:
        terms.append(BasisTerm(n, l, m_up + 1, "down", c_down))
    return hydrogenic_state(terms, Z)


def random_superposition(rng, n_max=3, Z=1.0, max_terms=6):
    """Random normalized hydrogenic superposition with complex coefficients."""
    kets = [
        (n, l, m, s)
        for n in range(1, n_max + 1)
        for l in range(n)
        for m in range(-l, l + 1)
        for s in SPINS
    ]
    k = int(rng.integers(1, min(max_terms, len(kets)) + 1))
    picks = rng.choice(len(kets), size=k, replace=False)
    coeffs = rng.normal(size=k) + 1j * rng.normal(size=k)
    return hydrogenic_state([(*kets[i], c) for i, c in zip(sorted(picks), coeffs)], Z)


def _as_points(point):
    pts = np.asarray(point, dtype=float)
    if pts.shape[-1] != 3:
        raise ValueError(f"points must have a trailing dimension of 3, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")
    return pts


def _evaluate_hydrogenic(state, pts):
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    rho_xy = np.hypot(x, y)
    r = np.hypot(rho_xy, z)
    if np.any(r == 0.0):
        raise SingularPointError("hydrogenic fields are not evaluated at r = 0")
    if state.m_max > 0 and np.any(rho_xy == 0.0):
        raise SingularPointError("gradient of m != 0 terms is not evaluated on the polar axis")
    theta = np.arctan2(rho_xy, z)
    phi = np.arctan2(y, x)
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    r_hat = np.stack([st * cp, st * sp, ct], axis=-1)
    t_hat = np.stack([ct * cp, ct * sp, -st], axis=-1)
    p_hat = np.stack([-sp, cp, np.zeros_like(sp)], axis=-1)

    radial = {}
    angular = {}
    psi = np.zeros(pts.shape[:-1] + (2,), dtype=complex)
    grad = np.zeros(pts.shape[:-1] + (2, 3), dtype=complex)
    for t in state.terms:
        if (t.n, t.l) not in radial:
            radial[(t.n, t.l)] = radial_wavefunction(t.n, t.l, state.Z, r)
        if (t.l, t.m) not in angular:
            ylm = np.asarray(spherical_harmonic(t.l, t.m, theta, phi))
            d_theta, d_phi = spherical_harmonic_derivs(t.l, t.m, theta, phi)
            if t.m != 0:
                d_phi_over_sin = np.asarray(d_phi) / st
            else:
                d_phi_over_sin = np.zeros_like(ylm)
            angular[(t.l, t.m)] = (ylm, np.asarray(d_theta), d_phi_over_sin)
        rv, dr = radial[(t.n, t.l)]
        ylm, d_theta, d_phi_s = angular[(t.l, t.m)]
        s = SPINS.index(t.spin)
        psi[..., s] += t.coeff * rv * ylm
        g_r = dr * ylm
        g_t = rv / r * d_theta
        g_p = rv / r * d_phi_s
        grad[..., s, :] += t.coeff * (g_r[..., None] * r_hat + g_t[..., None] * t_hat + g_p[..., None] * p_hat)
    return psi, grad


def _evaluate_gaussian(state, pts):
    d = pts - np.asarray(state.center)
    p = np.asarray(state.momentum)
    sig2 = state.sigma**2
    env = (2.0 * math.pi * sig2) ** -0.75 * np.exp(-np.sum(d * d, axis=-1) / (4.0 * sig2))
    phase = pts[..., 0] * p[0] + pts[..., 1] * p[1] + pts[..., 2] * p[2]
    wave = env * np.exp(1j * phase)
    chi = np.asarray(state.spinor)
    psi = wave[..., None] * chi
    log_grad = -d / (2.0 * sig2) + 1j * p
    grad = psi[..., :, None] * log_grad[..., None, :]
    return psi, grad


def evaluate(state, point):
    """Evaluate psi and its Cartesian gradient at one point or an (..., 3) array of points."""
    pts = _as_points(point)
    if state.kind == "hydrogenic":
        psi, grad = _evaluate_hydrogenic(state, pts)
    elif state.kind == "gaussian":
        psi, grad = _evaluate_gaussian(state, pts)
    else:
        raise TypeError(f"unknown state kind {state.kind!r}")
    return SpinorSample(psi, grad, pts)


def norm_squared(state, grid, workers=None):
    """Integral of psi^dagger psi over the grid's ball."""
    from spinobs.quadrature import integrate_scalar

    def density(pts):
        psi = evaluate(state, pts).psi
        return np.sum(psi.real**2 + psi.imag**2, axis=-1)

    return integrate_scalar(density, grid, workers=workers)

