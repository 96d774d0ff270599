"""Clebsch-Gordan coefficients for coupling orbital l with spin 1/2."""

import math
from fractions import Fraction

from spinobs.special import MAX_L, DomainError


def _half(x):
    try:
        f = Fraction(x).limit_denominator(4)
    except (TypeError, ValueError):
        raise DomainError(f"not a half-integer: {x!r}") from None
    if f.denominator not in (1, 2) or abs(float(f) - float(x)) > 1e-12:
        raise DomainError(f"not a half-integer: {x!r}")
    return f


def clebsch_half(l, j, m_j):
    """Coefficients of Y_{l,m_j-1/2}|up> and Y_{l,m_j+1/2}|down> in Omega_{j,l,m_j}.

    Condon-Shortley convention: in the top state of each j multiplet the
    orbital with the largest m_l enters with a positive coefficient.

    >>> clebsch_half(1, 0.5, 0.5)
    (-0.5773502691896257, 0.816496580927726)
    """
    if int(l) != l or l < 0 or l > MAX_L:
        raise DomainError(f"l must be an integer in [0, {MAX_L}], got {l}")
    l = int(l)
    j, m_j = _half(j), _half(m_j)
    if j.denominator != 2 or m_j.denominator != 2:
        raise DomainError(f"j and m_j must be half-odd integers (j={j}, m_j={m_j})")
    if j not in (l + Fraction(1, 2), l - Fraction(1, 2)) or j < 0:
        raise DomainError(f"j={j} cannot couple l={l} with spin 1/2")
    if abs(m_j) > j:
        raise DomainError(f"|m_j| must not exceed j (j={j}, m_j={m_j})")
    denom = 2 * l + 1
    plus = math.sqrt(float(l + m_j + Fraction(1, 2)) / denom)
    minus = math.sqrt(float(l - m_j + Fraction(1, 2)) / denom)
    if j == l + Fraction(1, 2):
        return plus, minus
    return -minus, plus


def coupling_table(l_max):
    """All coefficients for l <= l_max keyed by (l, j, m_j) with Fraction j, m_j."""
    table = {}
    for l in range(l_max + 1):
        for j in (Fraction(2 * l + 1, 2), Fraction(2 * l - 1, 2)):
            if j < 0:
                continue
            m = -j
            while m <= j:
                table[(l, j, m)] = clebsch_half(l, j, m)
                m += 1
    return table
