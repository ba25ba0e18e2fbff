"""Clebsch-Gordan coefficients and angular electric-multipole matrix elements.

Everything here is exact angular-momentum algebra in the Condon-Shortley
convention (all coefficients real). Matrix elements of the spherical-harmonic
operators between fine-structure states |l, s=1/2, j, m_j> reduce to a short
sum of products of three Clebsch-Gordan coefficients times a Gaunt-integral
prefactor.
"""

from __future__ import annotations

import math
from functools import lru_cache

_S = 0.5  # single valence electron


def _twice(x: float) -> int:
    """Return 2x as an exact integer, rejecting non-half-integer input."""
    t = 2.0 * x
    ti = round(t)
    if abs(t - ti) > 1e-9:
        raise ValueError(f"quantum number {x} is not a half-integer")
    return int(ti)


def _triangle_ok(j1: float, j2: float, j: float) -> bool:
    return abs(j1 - j2) <= j <= j1 + j2


@lru_cache(maxsize=None)
def _cg_doubled(tj1: int, tm1: int, tj2: int, tm2: int, tj: int, tm: int) -> float:
    """Clebsch-Gordan coefficient on doubled (integer) arguments, Racah sum."""
    if tm1 + tm2 != tm:
        return 0.0
    if not (abs(tj1 - tj2) <= tj <= tj1 + tj2) or (tj1 + tj2 + tj) % 2 != 0:
        return 0.0
    if abs(tm1) > tj1 or abs(tm2) > tj2 or abs(tm) > tj:
        return 0.0
    if (tj1 + tm1) % 2 or (tj2 + tm2) % 2 or (tj + tm) % 2:
        return 0.0

    f = math.factorial

    def fh(t: int) -> int:
        # factorial of a (necessarily integral) half-sum of doubled arguments
        assert t % 2 == 0
        return f(t // 2)

    pref = (tj + 1) * (
        fh(tj1 + tj2 - tj) * fh(tj1 - tj2 + tj) * fh(-tj1 + tj2 + tj)
        / fh(tj1 + tj2 + tj + 2)
    )
    pref *= (
        fh(tj + tm) * fh(tj - tm)
        * fh(tj1 - tm1) * fh(tj1 + tm1)
        * fh(tj2 - tm2) * fh(tj2 + tm2)
    )

    kmin = max(0, (tj2 - tj - tm1) // 2, (tj1 - tj + tm2) // 2)
    kmax = min((tj1 + tj2 - tj) // 2, (tj1 - tm1) // 2, (tj2 + tm2) // 2)
    total = 0.0
    for k in range(kmin, kmax + 1):
        denom = (
            f(k)
            * fh(tj1 + tj2 - tj - 2 * k)
            * fh(tj1 - tm1 - 2 * k)
            * fh(tj2 + tm2 - 2 * k)
            * fh(tj - tj2 + tm1 + 2 * k)
            * fh(tj - tj1 - tm2 + 2 * k)
        )
        total += (-1.0) ** k / denom
    return math.sqrt(pref) * total


def clebsch_gordan(j1: float, m1: float, j2: float, m2: float,
                   j: float, m: float) -> float:
    """<j1 m1 j2 m2 | j m> in the Condon-Shortley convention.

    Returns 0 for violated selection rules; raises ValueError for arguments
    that are not half-integers or have |m| > j.
    """
    args = [_twice(v) for v in (j1, m1, j2, m2, j, m)]
    tj1, tm1, tj2, tm2, tj, tm = args
    if tj1 < 0 or tj2 < 0 or tj < 0:
        raise ValueError("angular momenta must be non-negative")
    if abs(tm1) > tj1 or abs(tm2) > tj2 or abs(tm) > tj:
        raise ValueError("|m| exceeds j")
    if (tj1 + tm1) % 2 or (tj2 + tm2) % 2 or (tj + tm) % 2:
        raise ValueError("m must differ from j by an integer")
    return _cg_doubled(tj1, tm1, tj2, tm2, tj, tm)


def gaunt_prefactor(l: int, k: int, l_prime: int) -> float:
    """sqrt((2k+1)/4pi) sqrt((2l+1)/(2l'+1)) <l 0 k 0 | l' 0>."""
    return (
        math.sqrt((2 * k + 1) / (4.0 * math.pi))
        * math.sqrt((2 * l + 1) / (2 * l_prime + 1))
        * clebsch_gordan(l, 0, k, 0, l_prime, 0)
    )


def _angular_quantum_numbers(state) -> tuple[int, float, float]:
    if hasattr(state, "l"):
        return state.l, state.j, state.m_j
    l, j, m_j = state
    return l, j, m_j


def angular_matrix_element(bra, k: int, m_k: int, ket) -> float:
    """<l', j', m_j'| Y_k^{m_k} |l, j, m_j> for spin-1/2 fine-structure states.

    `bra` and `ket` are (l, j, m_j) tuples or objects with those attributes.
    Vanishes unless m_j' = m_j + m_k and |l - k| <= l' <= l + k.
    """
    lp, jp, mjp = _angular_quantum_numbers(bra)
    l, j, mj = _angular_quantum_numbers(ket)
    if abs(mjp - (mj + m_k)) > 1e-9:
        return 0.0
    if not (abs(l - k) <= lp <= l + k):
        return 0.0
    if not (_triangle_ok(lp, _S, jp) and _triangle_ok(l, _S, j)):
        return 0.0

    total = 0.0
    for m_s in (-_S, _S):
        ml = mj - m_s
        mlp = mj + m_k - m_s
        if abs(ml) > l or abs(mlp) > lp:
            continue
        total += (
            clebsch_gordan(lp, mlp, _S, m_s, jp, mjp)
            * clebsch_gordan(l, ml, _S, m_s, j, mj)
            * clebsch_gordan(l, ml, k, m_k, lp, mlp)
        )
    return gaunt_prefactor(l, k, lp) * total
