"""Invariant suite run by ``spinobs check``.

Each check returns a CheckResult with the measured worst-case error and
the tolerance it is held to. Everything is seeded, so two runs with the
same seed print identical text.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from spinobs.constants import HBAR
from spinobs.densities import (
    MOMENTUM_SPIN_COEFF,
    equivalent_forms_check,
    fd_divergence,
    fd_oracle_sample,
    sample_densities,
)
from spinobs.observables import full_report
from spinobs.quadrature import default_grid, integrate
from spinobs.states import evaluate, gaussian_state, hydrogenic_state, make_coupled_state, random_superposition


@dataclass(frozen=True)
class CheckResult:
    name: str
    measured: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.measured <= self.tolerance)

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<28s} measured={self.measured:.3e}  tol={self.tolerance:.1e}"


def reference_states():
    return [
        ("1s up", hydrogenic_state([(1, 0, 0, "up")])),
        ("2p m=1 up", hydrogenic_state([(2, 1, 1, "up")])),
        ("2p j=1/2 mj=1/2", make_coupled_state(2, 1, 0.5, 0.5)),
        ("3d j=5/2 mj=-3/2", make_coupled_state(3, 2, 2.5, -1.5)),
        ("gaussian sigma=2", gaussian_state(2.0, momentum=(0.0, 0.3, 0.0), spinor=(1.0, 1.0j))),
    ]


def random_points(rng, count, r_min=0.1, r_max=20.0):
    """Points with log-uniform radius in [r_min, r_max] and isotropic direction."""
    r = np.exp(rng.uniform(np.log(r_min), np.log(r_max), size=count))
    v = rng.normal(size=(count, 3))
    return r[:, None] * v / np.linalg.norm(v, axis=1, keepdims=True)


def _vec_norm(a):
    return np.linalg.norm(a, axis=-1)


def check_factor_of_two(rng, spin_coeff=MOMENTUM_SPIN_COEFF, n_points=2000):
    """(mass current - hbar v) = 2 (G - hbar v) pointwise."""
    worst = 0.0
    for _, state in reference_states():
        pts = random_points(rng, n_points)
        smp = sample_densities(state, pts, spin_coeff)
        spin_mass = smp.mass_current - HBAR * smp.convection
        spin_g = smp.momentum_density - HBAR * smp.convection
        scale = _vec_norm(spin_mass) + np.finfo(float).tiny
        worst = max(worst, float(np.max(_vec_norm(spin_mass - 2.0 * spin_g) / scale)))
    return CheckResult("factor_of_two_pointwise", worst, 1e-12)


def check_equivalent_forms(rng, n_points=10_000, max_ulps=8.0):
    """Convection current via Im(psi^dagger grad psi) versus the antisymmetric difference.

    Error is counted in ulps of the size of the products being summed, so
    that cancellation to a tiny result is not read as a large relative error.
    """
    worst = 0.0
    for _, state in reference_states():
        pts = random_points(rng, n_points)
        lhs, rhs = equivalent_forms_check(state, pts)
        smp = evaluate(state, pts)
        # sum over spin of |psi_s| |d_j psi_s|, per Cartesian component
        size = HBAR * np.sum(np.abs(smp.psi)[..., None] * np.abs(smp.grad_psi), axis=-2)
        ulp = np.spacing(np.maximum(size, np.finfo(float).tiny))
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / ulp)))
    return CheckResult("eq1a_equals_eq1b_ulps", worst, max_ulps)


def fd_relative_error(state, pts, step=1e-4, spin_coeff=MOMENTUM_SPIN_COEFF):
    """Worst relative gap between analytic and finite-difference densities.

    Each vector field is compared in norm against |psi| |grad psi|, the
    natural size of a bilinear first-derivative density at that point.
    """
    an = sample_densities(state, pts, spin_coeff)
    fd = fd_oracle_sample(state, pts, step, spin_coeff)
    smp = evaluate(state, pts)
    scale = np.linalg.norm(smp.psi, axis=-1) * np.linalg.norm(smp.grad_psi.reshape(len(pts), -1), axis=-1)
    scale = np.maximum(scale, np.finfo(float).tiny)
    worst = 0.0
    for name in ("convection", "curl_magnetization", "mass_current", "momentum_density"):
        gap = _vec_norm(getattr(an, name) - getattr(fd, name)) / scale
        worst = max(worst, float(np.max(gap)))
    return worst


def check_fd_oracle(rng, n_points=500, spin_coeff=MOMENTUM_SPIN_COEFF):
    worst = 0.0
    for _, state in reference_states():
        worst = max(worst, fd_relative_error(state, random_points(rng, n_points), spin_coeff=spin_coeff))
    return CheckResult("fd_oracle_relative", worst, 1e-6)


def check_divergence(rng, n_points=500, step=5e-5):
    """Continuity for stationary states: div(mass current) = 0 (absolute, a.u.)."""
    worst = 0.0
    for _, state in reference_states()[:4]:
        div = fd_divergence(state, random_points(rng, n_points), step)
        worst = max(worst, float(np.max(np.abs(div))))
    return CheckResult("divergence_free_current", worst, 1e-6)


def moment_of_curl_gap(state, grid=None, workers=None):
    """Relative gap |int x cross curl s - 2 int s| / |2 int s| for s = psi^dagger sigma psi."""
    grid = grid or default_grid(state)

    def field(pts):
        smp = sample_densities(state, pts)
        return np.stack([np.cross(smp.point, smp.curl_magnetization), smp.magnetization], axis=1)

    val = integrate(field, grid, workers)
    target = 2.0 * val[1]
    return float(np.linalg.norm(val[0] - target) / np.linalg.norm(target))


def check_moment_of_curl():
    states = [s for _, s in reference_states()][1:4]
    worst = max(moment_of_curl_gap(s) for s in states)
    return CheckResult("moment_of_curl_identity", worst, 1e-8)


def check_oracle_equivalence(rng, count=8, spin_coeff=MOMENTUM_SPIN_COEFF):
    """J_momentum = <L> + <S> and J_bowman = <L> + 2<S> for random superpositions."""
    worst = 0.0
    worst_mu = 0.0
    for _ in range(count):
        state = random_superposition(rng)
        rep = full_report(state, default_grid(state), spin_coeff=spin_coeff)
        worst = max(worst, rep.max_discrepancy)
        worst_mu = max(worst_mu, float(np.max(np.abs(np.add(rep.mu, rep.J_bowman)))))
    return [
        CheckResult("oracle_equivalence", worst, 1e-7),
        CheckResult("mu_equals_minus_J_bowman", worst_mu, 1e-10),
    ]


def run_checks(seed=0, spin_coeff=MOMENTUM_SPIN_COEFF):
    rng = np.random.default_rng(seed)
    results = [
        check_factor_of_two(rng, spin_coeff),
        check_equivalent_forms(rng),
        check_fd_oracle(rng, spin_coeff=spin_coeff),
        check_divergence(rng),
        check_moment_of_curl(),
    ]
    results.extend(check_oracle_equivalence(rng, spin_coeff=spin_coeff))
    return results
