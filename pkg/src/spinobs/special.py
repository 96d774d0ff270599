"""Special functions for hydrogenic spinor fields.

Generalized Laguerre polynomials, spherical harmonics with the
Condon-Shortley phase, and normalized hydrogenic radial functions. All of
them use three-term recurrences rather than factorial closed forms, which
keeps them finite for principal quantum numbers up to about 20.
"""

import math

import numpy as np

MAX_N = 20
MAX_L = MAX_N - 1


class DomainError(ValueError):
    """Quantum numbers or arguments outside the supported range."""


def assoc_laguerre(k, alpha, x):
    """Generalized Laguerre polynomial L_k^alpha(x).

    Uses the upward recurrence
    (j+1) L_{j+1} = (2j+1+alpha-x) L_j - (j+alpha) L_{j-1}.
    ``x`` may be a scalar or an array.
    """
    if int(k) != k or k < 0:
        raise DomainError(f"Laguerre degree must be a non-negative integer, got {k}")
    if alpha <= -1:
        raise DomainError(f"Laguerre parameter must exceed -1, got {alpha}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if k == 0:
        return prev if prev.ndim else float(prev)
    cur = 1.0 + alpha - x
    for j in range(1, int(k)):
        prev, cur = cur, ((2 * j + 1 + alpha - x) * cur - (j + alpha) * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


def assoc_laguerre_deriv(k, alpha, x):
    """d/dx L_k^alpha(x) = -L_{k-1}^{alpha+1}(x)."""
    if int(k) != k or k < 0:
        raise DomainError(f"Laguerre degree must be a non-negative integer, got {k}")
    if k == 0:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        return out if out.ndim else 0.0
    return -assoc_laguerre(k - 1, alpha + 1, x)


def _legendre_normalized(l, m, cos_t, sin_t):
    # orthonormal P_l^m (m >= 0) including the Condon-Shortley sign and 1/sqrt(4pi)
    pmm = np.full_like(cos_t, math.sqrt(1.0 / (4.0 * math.pi)))
    for k in range(1, m + 1):
        pmm = -math.sqrt((2 * k + 1) / (2.0 * k)) * sin_t * pmm
    if l == m:
        return pmm
    p_prev = pmm
    p_cur = math.sqrt(2 * m + 3) * cos_t * pmm
    for ll in range(m + 2, l + 1):
        a = math.sqrt((4.0 * ll * ll - 1.0) / (ll * ll - m * m))
        b = math.sqrt(((ll - 1.0) ** 2 - m * m) / (4.0 * (ll - 1.0) ** 2 - 1.0))
        p_prev, p_cur = p_cur, a * (cos_t * p_cur - b * p_prev)
    return p_cur


def _check_lm(l, m):
    if int(l) != l or l < 0:
        raise DomainError(f"l must be a non-negative integer, got {l}")
    if int(m) != m or abs(m) > l:
        raise DomainError(f"|m| must not exceed l (l={l}, m={m})")
    if l > MAX_L:
        raise DomainError(f"l={l} exceeds the supported maximum {MAX_L}")


def _theta_part(l, m, theta):
    # real Y_lm(theta, phi) e^{-i m phi}; zero when |m| > l
    if abs(m) > l:
        return np.zeros_like(theta)
    p = _legendre_normalized(l, abs(m), np.cos(theta), np.sin(theta))
    return -p if (m < 0 and m % 2) else p


def spherical_harmonic(l, m, theta, phi):
    """Y_lm(theta, phi) with the Condon-Shortley phase."""
    _check_lm(l, m)
    l, m = int(l), int(m)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    y = _theta_part(l, m, theta) * np.exp(1j * m * phi)
    return y if y.ndim else complex(y)


def spherical_harmonic_derivs(l, m, theta, phi):
    """Analytic (dY/dtheta, dY/dphi) for Y_lm.

    dY/dphi = i m Y_lm and
    dY/dtheta = m cot(theta) Y_lm + sqrt((l-m)(l+m+1)) e^{-i phi} Y_{l,m+1}.
    The ladder term is combined on the real theta factors, so m = 0
    derivatives carry no rounding-level imaginary part. The cot term is
    singular on the polar axis when m != 0.
    """
    _check_lm(l, m)
    l, m = int(l), int(m)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    base = _theta_part(l, m, theta)
    d_base = math.sqrt((l - m) * (l + m + 1)) * _theta_part(l, m + 1, theta)
    if m != 0:
        with np.errstate(divide="ignore", invalid="ignore"):
            d_base = d_base + m * (np.cos(theta) / np.sin(theta)) * base
    phase = np.exp(1j * m * phi)
    d_theta = d_base * phase
    d_phi = 1j * m * base * phase
    if d_theta.ndim == 0:
        return complex(d_theta), complex(d_phi)
    return d_theta, d_phi


def _radial_norm(n, l, z):
    # sqrt((2Z/n)^3 (n-l-1)! / (2n (n+l)!)) via log-gamma
    log_ratio = math.lgamma(n - l) - math.lgamma(n + l + 1)
    return math.sqrt((2.0 * z / n) ** 3 / (2.0 * n) * math.exp(log_ratio))


def radial_wavefunction(n, l, Z, r):
    """Hydrogenic R_nl(r) and dR_nl/dr for nuclear charge Z.

    Normalized so that the integral of R^2 r^2 over [0, inf) is one.
    Returns ``(value, derivative)``.
    """
    if int(n) != n or n < 1 or n > MAX_N:
        raise DomainError(f"n must be an integer in [1, {MAX_N}], got {n}")
    if int(l) != l or l < 0 or l >= n:
        raise DomainError(f"need 0 <= l < n (n={n}, l={l})")
    if Z <= 0:
        raise DomainError(f"nuclear charge must be positive, got {Z}")
    n, l = int(n), int(l)
    r = np.asarray(r, dtype=float)
    scale = 2.0 * Z / n
    rho = scale * r
    k = n - l - 1
    lag = assoc_laguerre(k, 2 * l + 1, rho)
    dlag = assoc_laguerre_deriv(k, 2 * l + 1, rho)
    decay = np.exp(-0.5 * rho)
    norm = _radial_norm(n, l, Z)
    rho_l = rho**l
    value = norm * rho_l * decay * lag
    # d/drho [rho^l e^{-rho/2} L] = rho^{l-1} e^{-rho/2} [(l - rho/2) L + rho L']
    rho_lm1 = rho ** (l - 1) if l >= 1 else np.ones_like(rho)
    if l >= 1:
        dvalue = norm * scale * decay * rho_lm1 * ((l - 0.5 * rho) * lag + rho * dlag)
    else:
        dvalue = norm * scale * decay * (-0.5 * lag + dlag)
    if value.ndim == 0:
        return float(value), float(dvalue)
    return value, dvalue
