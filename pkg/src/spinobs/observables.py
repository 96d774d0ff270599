"""Integrated angular momentum and magnetic moment, and their operator values.

The orbital part L comes from the convection current and is shared by both
prescriptions. The spin part comes from the moment of curl(psi^dagger sigma
psi), which integrates to twice the volume integral of the magnetization;
with the momentum-density coefficient hbar/4 this is <S>, with the mass-flow
coefficient hbar/2 it is 2<S>.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from spinobs.constants import BOHR_MAGNETON, E_CHARGE, HBAR, M_E, PAULI
from spinobs.densities import MASSFLOW_SPIN_COEFF, MOMENTUM_SPIN_COEFF, moment_density, sample_densities
from spinobs.quadrature import convergence_report, integrate

CONVERGENCE_TOL = 1e-6
G_SPIN_FLOOR = 1e-9
PRESCRIPTIONS = ("momentum_G", "bowman_mass_flow")


class ConvergenceWarning(UserWarning):
    """Grid refinement changed an integral by more than the tolerance."""


def _vec(v):
    return tuple(float(x) for x in v)


@dataclass(frozen=True)
class ObservableReport:
    """Angular momenta in hbar, magnetic moment in Bohr magnetons."""

    state: object
    L: tuple
    S_momentum: tuple
    S_massflow: tuple
    J_momentum: tuple
    J_bowman: tuple
    mu: tuple
    g_spin: float | None
    oracle_L: tuple
    oracle_S: tuple
    max_discrepancy: float
    convergence_estimate: float

    @property
    def converged(self):
        return self.convergence_estimate <= CONVERGENCE_TOL

    def to_dict(self):
        return {
            "state": self.state,
            "units": {"J": "hbar", "mu": "bohr_magneton"},
            "L": list(self.L),
            "S_momentum": list(self.S_momentum),
            "S_massflow": list(self.S_massflow),
            "J_momentum": list(self.J_momentum),
            "J_bowman": list(self.J_bowman),
            "mu": list(self.mu),
            "g_spin": self.g_spin,
            "oracle": {"L": list(self.oracle_L), "S": list(self.oracle_S)},
            "max_discrepancy": self.max_discrepancy,
            "convergence_estimate": self.convergence_estimate,
        }

    @classmethod
    def from_dict(cls, d):
        expected = {"state", "units", "L", "S_momentum", "S_massflow", "J_momentum", "J_bowman", "mu",
                    "g_spin", "oracle", "max_discrepancy", "convergence_estimate"}
        if set(d) != expected:
            raise ValueError(f"report keys differ from schema: {sorted(set(d) ^ expected)}")
        g = d["g_spin"]
        return cls(
            state=d["state"],
            L=_vec(d["L"]),
            S_momentum=_vec(d["S_momentum"]),
            S_massflow=_vec(d["S_massflow"]),
            J_momentum=_vec(d["J_momentum"]),
            J_bowman=_vec(d["J_bowman"]),
            mu=_vec(d["mu"]),
            g_spin=None if g is None else float(g),
            oracle_L=_vec(d["oracle"]["L"]),
            oracle_S=_vec(d["oracle"]["S"]),
            max_discrepancy=float(d["max_discrepancy"]),
            convergence_estimate=float(d["convergence_estimate"]),
        )


def _warn_if_unconverged(estimate, what):
    if estimate > CONVERGENCE_TOL:
        warnings.warn(
            f"{what}: grid refinement changed the result by {estimate:.3e} (> {CONVERGENCE_TOL:g})",
            ConvergenceWarning,
            stacklevel=3,
        )


def angular_momentum(state, prescription, grid, workers=None, spin_coeff=MOMENTUM_SPIN_COEFF):
    """Volume integral of x cross G or x cross (m_e k), in units of hbar."""
    if prescription not in PRESCRIPTIONS:
        raise ValueError(f"unknown prescription {prescription!r}; expected one of {PRESCRIPTIONS}")

    def field(pts):
        return moment_density(sample_densities(state, pts, spin_coeff), prescription)

    value, estimate = convergence_report(field, grid, workers)
    _warn_if_unconverged(estimate, f"angular momentum ({prescription})")
    return value / HBAR


def magnetic_moment(state, grid, workers=None):
    """Volume integral of -(e/2) x cross k_pauli, in Bohr magnetons."""

    def field(pts):
        return moment_density(sample_densities(state, pts), "magnetic")

    value, estimate = convergence_report(field, grid, workers)
    _warn_if_unconverged(estimate, "magnetic moment")
    return value / BOHR_MAGNETON


def moment_split(state, grid, workers=None):
    """Orbital and spin parts of the magnetic moment, in Bohr magnetons.

    The orbital part is the moment of the convection term of k_pauli, the
    spin part that of its curl term.
    """

    def field(pts):
        smp = sample_densities(state, pts)
        x = smp.point
        orb = np.cross(x, HBAR * smp.convection / M_E)
        spin = np.cross(x, MASSFLOW_SPIN_COEFF * smp.curl_magnetization / M_E)
        return -0.5 * E_CHARGE * np.stack([orb, spin], axis=1)

    value, estimate = convergence_report(field, grid, workers)
    _warn_if_unconverged(estimate, "magnetic moment split")
    return value[0] / BOHR_MAGNETON, value[1] / BOHR_MAGNETON


def _spin_expectation(chi):
    chi = np.asarray(chi, dtype=complex)
    return np.array([0.5 * HBAR * (np.conj(chi) @ s @ chi).real for s in PAULI])


def operator_oracle(state):
    """Exact <L> and <S> (in hbar) from the expansion coefficients."""
    if state.kind == "gaussian":
        L = np.cross(np.asarray(state.center), np.asarray(state.momentum))
        return L, _spin_expectation(state.spinor)

    coeff = {t.key: complex(t.coeff) for t in state.terms}
    lz = 0.0
    l_plus = 0.0 + 0.0j
    spin = np.zeros(3)
    for (n, l, m, s), c in coeff.items():
        lz += abs(c) ** 2 * m
        # <n l m+1 s| L+ |n l m s> = sqrt((l - m)(l + m + 1))
        up = coeff.get((n, l, m + 1, s))
        if up is not None:
            l_plus += np.conj(up) * c * math.sqrt((l - m) * (l + m + 1))
        if s == "up":
            chi = (c, coeff.get((n, l, m, "down"), 0.0))
            spin += _spin_expectation(chi)
        elif (n, l, m, "up") not in coeff:
            spin += _spin_expectation((0.0, c))
    L = np.array([l_plus.real, l_plus.imag, lz]) * HBAR
    return L, spin


def full_report(state, grid, label=None, workers=None, spin_coeff=MOMENTUM_SPIN_COEFF):
    """Both angular-momentum prescriptions, the magnetic moment and the oracle side by side."""

    def field(pts):
        smp = sample_densities(state, pts, spin_coeff)
        return np.stack(
            [
                np.cross(smp.point, HBAR * smp.convection),
                np.cross(smp.point, smp.curl_magnetization),
                moment_density(smp, "magnetic"),
            ],
            axis=1,
        )

    value, estimate = convergence_report(field, grid, workers)
    L = value[0] / HBAR
    curl_moment = value[1]
    S_momentum = spin_coeff * curl_moment / HBAR
    S_massflow = MASSFLOW_SPIN_COEFF * curl_moment / HBAR
    J_momentum = L + S_momentum
    J_bowman = L + S_massflow
    mu = value[2] / BOHR_MAGNETON

    oracle_L, oracle_S = operator_oracle(state)
    predicted_bowman = oracle_L + 2.0 * oracle_S
    max_discrepancy = max(
        np.max(np.abs(J_momentum - (oracle_L + oracle_S))),
        np.max(np.abs(J_bowman - predicted_bowman)),
        np.max(np.abs(mu + predicted_bowman)),
    )
    s_norm = float(np.linalg.norm(S_momentum))
    g_spin = None
    if s_norm > G_SPIN_FLOOR:
        # spin part of mu in Bohr magnetons is -S_massflow
        g_spin = float(np.linalg.norm(S_massflow)) / s_norm
    return ObservableReport(
        state=label,
        L=_vec(L),
        S_momentum=_vec(S_momentum),
        S_massflow=_vec(S_massflow),
        J_momentum=_vec(J_momentum),
        J_bowman=_vec(J_bowman),
        mu=_vec(mu),
        g_spin=g_spin,
        oracle_L=_vec(oracle_L),
        oracle_S=_vec(oracle_S),
        max_discrepancy=float(max_discrepancy),
        convergence_estimate=estimate,
    )
