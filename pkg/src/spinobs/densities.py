"""Pointwise current, momentum and moment densities of a spinor field.

With the convection current v = Im(psi^dagger grad psi) and the spin
magnetization s = psi^dagger sigma psi, the two vector densities are

    mass-flow current   m_e k = hbar v + (hbar/2) curl s
    momentum density    G     = hbar v + (hbar/4) curl s

and they differ only in the coefficient of the curl term. The curl is
expanded with the product rule, so only first derivatives of psi are used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from spinobs.constants import E_CHARGE, HBAR, M_E
from spinobs.states import evaluate

#: coefficient of curl s in the momentum density
MOMENTUM_SPIN_COEFF = HBAR / 4.0
#: coefficient of curl s in the mass-flow current
MASSFLOW_SPIN_COEFF = HBAR / 2.0

MOMENT_KINDS = ("bowman_mass_flow", "momentum_G", "magnetic")


@dataclass(frozen=True)
class FieldSample:
    point: np.ndarray
    rho: np.ndarray
    convection: np.ndarray
    magnetization: np.ndarray
    curl_magnetization: np.ndarray
    mass_current: np.ndarray
    momentum_density: np.ndarray


def _magnetization(psi):
    a, b = psi[..., 0], psi[..., 1]
    ab = np.conj(a) * b
    return np.stack([2.0 * ab.real, 2.0 * ab.imag, np.abs(a) ** 2 - np.abs(b) ** 2], axis=-1)


def _sigma_psi(psi):
    # (sigma_x psi, sigma_y psi, sigma_z psi) stacked on a new trailing axis, shape (..., 2, 3)
    a, b = psi[..., 0], psi[..., 1]
    up = np.stack([b, -1j * b, a], axis=-1)
    down = np.stack([a, 1j * a, -b], axis=-1)
    return np.stack([up, down], axis=-2)


def _curl_from_jacobian(d):
    # d[..., j, k] = d_j s_k
    return np.stack(
        [
            d[..., 1, 2] - d[..., 2, 1],
            d[..., 2, 0] - d[..., 0, 2],
            d[..., 0, 1] - d[..., 1, 0],
        ],
        axis=-1,
    )


def _convection(psi, grad):
    # Im(conj(psi) grad psi) in real arithmetic, summed over spin components
    re, im = psi.real[..., None], psi.imag[..., None]
    return np.sum(re * grad.imag - im * grad.real, axis=-2)


def _assemble(point, psi, convection, curl, spin_coeff):
    rho = np.sum(psi.real**2 + psi.imag**2, axis=-1)
    return FieldSample(
        point=point,
        rho=rho,
        convection=convection,
        magnetization=_magnetization(psi),
        curl_magnetization=curl,
        mass_current=HBAR * convection + MASSFLOW_SPIN_COEFF * curl,
        momentum_density=HBAR * convection + spin_coeff * curl,
    )


def sample_densities(state, point, spin_coeff=MOMENTUM_SPIN_COEFF):
    """All pointwise densities of ``state`` at one point or an (..., 3) array.

    ``spin_coeff`` is the curl coefficient of the momentum density. It
    exists so that tests can inject the mass-flow value hbar/2 and confirm
    the checks notice.
    """
    smp = evaluate(state, point)
    psi, grad = smp.psi, smp.grad_psi
    sig = _sigma_psi(psi)
    # d_j s_k = 2 Re[(d_j psi)^dagger sigma_k psi]
    jac = 2.0 * np.einsum("...sj,...sk->...jk", np.conj(grad), sig).real
    return _assemble(smp.point, psi, _convection(psi, grad), _curl_from_jacobian(jac), spin_coeff)


def equivalent_forms_check(state, point):
    """Convection part of the current written two ways.

    ``lhs`` is (hbar/2) * 2 Im(psi^dagger grad psi), ``rhs`` is
    (hbar/2i) [psi^dagger grad psi - (grad psi^dagger) psi]. They are
    computed independently and should agree to rounding.
    """
    smp = evaluate(state, point)
    psi, grad = smp.psi[..., None], smp.grad_psi
    lhs = 0.5 * HBAR * 2.0 * np.sum(psi.real * grad.imag - psi.imag * grad.real, axis=-2)
    forward = np.sum(np.conj(psi) * grad, axis=-2)
    backward = np.sum(np.conj(grad) * psi, axis=-2)
    rhs = (HBAR / 2j * (forward - backward)).real
    return lhs, rhs


def _stencil(pts, step):
    # central-difference offsets: shape (..., 3 axes, 2 signs, 3 coords)
    eye = np.eye(3) * step
    offs = np.stack([eye, -eye], axis=1)
    return pts[..., None, None, :] + offs


def fd_oracle_sample(state, point, step=1e-4, spin_coeff=MOMENTUM_SPIN_COEFF):
    """Densities with every derivative replaced by a central finite difference.

    grad psi comes from differences of psi and curl s from differences of
    s = psi^dagger sigma psi, so nothing here reuses the analytic gradient.
    Truncation error is O(step^2).
    """
    if step <= 0:
        raise ValueError("finite-difference step must be positive")
    pts = np.asarray(point, dtype=float)
    psi = evaluate(state, pts).psi
    nbr = evaluate(state, _stencil(pts, step)).psi  # (..., 3, 2, 2)
    grad = np.moveaxis((nbr[..., 0, :] - nbr[..., 1, :]) / (2.0 * step), -2, -1)
    mag = _magnetization(nbr)  # (..., 3, 2, 3)
    jac = (mag[..., 0, :] - mag[..., 1, :]) / (2.0 * step)
    return _assemble(pts, psi, _convection(psi, grad), _curl_from_jacobian(jac), spin_coeff)


def fd_divergence(state, point, step=1e-4, which="mass_current"):
    """Central-difference divergence of an analytic vector density."""
    pts = np.asarray(point, dtype=float)
    vals = getattr(sample_densities(state, _stencil(pts, step)), which)  # (..., 3, 2, 3)
    diag = np.diagonal(vals[..., 0, :] - vals[..., 1, :], axis1=-2, axis2=-1)
    return np.sum(diag, axis=-1) / (2.0 * step)


def moment_density(sample, which):
    """x cross (density) for the requested prescription.

    bowman_mass_flow uses the mass-flow current, momentum_G the momentum
    density, and magnetic gives -(e/2) x cross k with k the probability
    current (mass-flow current / m_e), in atomic units.
    """
    x = np.asarray(sample.point, dtype=float)
    if which == "bowman_mass_flow":
        return np.cross(x, sample.mass_current)
    if which == "momentum_G":
        return np.cross(x, sample.momentum_density)
    if which == "magnetic":
        return -0.5 * E_CHARGE * np.cross(x, sample.mass_current / M_E)
    raise ValueError(f"unknown moment density {which!r}; expected one of {MOMENT_KINDS}")
