"""Closed-form spectral constants for the quantitative bounds.

Everything in this module is a plain double-precision evaluation; the only
p-adic input is the matrix handed to cartan_valuations.  The pieces are

  * the Harish-Chandra function of PGL_2(Q_p) at diag(p^k, 1),
  * Cartan (elementary divisor) valuations of an invertible matrix,
  * the matrix-coefficient decay bound built from both,
  * mixing and equidistribution envelopes with rate (c, alpha, delta),
  * the headline constant kappa and the bound it yields from an entropy gap.

Sign convention: the decay factor in kappa is (1 - ||a||^(-delta))^(-1),
the sum of the geometric series sum_n ||a||^(-delta n).  With the exponent
written positive the factor would be negative for ||a|| > 1, which is the
regime every other formula assumes.  ||a|| is the max-norm, so for
a = diag(1/p, p) we have ||a|| = p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    DivergentSeries,
    NegativeExponent,
    NegativeGap,
    SingularAtPrecision,
)
from .matrix import PadicMatrix


def xi_pgl2(p: int, k: int) -> float:
    """Harish-Chandra function of PGL_2(Q_p) at the element diag(p^k, 1).

    Xi(p^k) = p^(-k/2) * (k(p-1) + p + 1) / (p + 1).  Equals 1 at k = 0 and
    decays like k p^(-k/2).

    Args:
        p: the residue prime.
        k: nonnegative Cartan exponent.
    """
    if k < 0:
        raise ValueError(f"Cartan exponent must be >= 0, got {k}")
    return p ** (-k / 2.0) * (k * (p - 1) + p + 1) / (p + 1)


def cartan_valuations(g: PadicMatrix) -> list[int]:
    """Valuations of the diagonal Cartan factor of g, sorted descending.

    The elementary divisors of g over Z_p are read off by valuation-pivot
    elimination: repeatedly take a minimum-valuation entry as pivot and
    clear its row and column.  The pivot valuations are the elementary
    divisor valuations; the Cartan diagonal is their descending reordering,
    so diag(p, 1/p) gives (1, -1) and any unimodular-integral g gives all
    zeros.

    Raises:
        SingularAtPrecision: g has no inverse (a zero elementary divisor).
    """
    work = [[x.as_rational() for x in row] for row in g.rows]
    p = g.ctx.p
    size = g.dim

    def val(x: Fraction) -> int:
        num, den = x.numerator, x.denominator
        v = 0
        while num % p == 0:
            num //= p
            v += 1
        while den % p == 0:
            den //= p
            v -= 1
        return v

    pivots: list[int] = []
    rows_left = list(range(size))
    cols_left = list(range(size))
    for _ in range(size):
        best = None
        for i in rows_left:
            for j in cols_left:
                if work[i][j] == 0:
                    continue
                v = val(work[i][j])
                if best is None or v < best[0]:
                    best = (v, i, j)
        if best is None:
            raise SingularAtPrecision("matrix has a zero elementary divisor")
        v, pi, pj = best
        pivot = work[pi][pj]
        for i in rows_left:
            if i == pi:
                continue
            factor = work[i][pj] / pivot
            for j in cols_left:
                work[i][j] -= factor * work[pi][j]
        pivots.append(v)
        rows_left.remove(pi)
        cols_left.remove(pj)
    pivots.sort(reverse=True)
    return pivots


def oh_bound(p: int, m: int, cartan: list[int], dim_kv: int, dim_kw: int) -> float:
    """Matrix-coefficient decay bound from Cartan data.

    sqrt(dim_kv * dim_kw) times the product of Xi(p^(k_i - k_{m+1-i})) over
    the first floor(m/2) indices of a descending Cartan list k_1 >= ... >= k_m.

    Raises:
        NegativeExponent: some paired difference is negative (list unsorted).
    """
    if m < 2:
        raise ValueError(f"need m >= 2 Cartan entries, got {m}")
    if len(cartan) != m:
        raise ValueError(f"Cartan list has {len(cartan)} entries, expected {m}")
    if dim_kv < 1 or dim_kw < 1:
        raise ValueError("fixed-vector space dimensions must be >= 1")
    product = math.sqrt(dim_kv * dim_kw)
    for i in range(m // 2):
        diff = cartan[i] - cartan[m - 1 - i]
        if diff < 0:
            raise NegativeExponent(
                f"k_{i + 1} - k_{m - i} = {diff} < 0: Cartan list must descend"
            )
        product *= xi_pgl2(p, diff)
    return product


@dataclass(frozen=True)
class MixingParams:
    """Exponential mixing rate data: |corr| <= c p^((l_f+l_h) alpha) ||a||^(-delta n)."""

    c: float
    alpha: float
    delta: float

    def __post_init__(self):
        if self.c <= 0 or self.alpha <= 0 or self.delta <= 0:
            raise ValueError("mixing parameters must all be strictly positive")


@dataclass(frozen=True)
class ConstantsBundle:
    """Everything kappa and the equidistribution bound consume.

    entropy_nats is |nu| ln p; base_ball_measure is the Haar mass of the
    level-2 congruence ball; a_norm the max-norm of a.  lf_shift_applied
    records whether the caller already replaced l_f by l_f + |nu| when
    moving between plain and adapted balls; nothing here changes arithmetic
    based on the flag, it only documents which convention the inputs use.
    """

    mixing: MixingParams
    p: int
    d: int
    entropy_nats: float
    base_ball_measure: float
    a_norm: float
    nu_total: int
    lf_shift_applied: bool = False

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be a prime >= 2")
        if self.d < 1:
            raise ValueError("group dimension must be >= 1")
        if self.entropy_nats < 0:
            raise ValueError("entropy must be >= 0")
        if not 0 < self.base_ball_measure <= 1:
            raise ValueError("base ball measure must lie in (0, 1]")
        if self.a_norm <= 0:
            raise ValueError("||a|| must be positive")
        if self.nu_total < 0:
            raise ValueError("|nu| must be >= 0")


def mixing_bound(
    params: MixingParams, p: int, l_f: int, l_h: int, a_norm: float, n: int
) -> float:
    """Mixing envelope c p^((l_f + l_h) alpha) ||a||^(-delta n) at time n."""
    if n < 0:
        raise ValueError("time n must be >= 0")
    if a_norm <= 1:
        raise ValueError("||a|| must exceed 1 for decay")
    return params.c * p ** ((l_f + l_h) * params.alpha) * a_norm ** (-params.delta * n)


def ball_measure_at(k: int, base_ball_measure: float, d: int, p: int) -> float:
    """Haar mass of the level-k ball: each level splits into p^d translates."""
    if k < 2:
        raise ValueError(f"ball levels start at 2, got {k}")
    return base_ball_measure * float(p) ** (-d * (k - 2))


def test_vector_norm(bundle: ConstantsBundle, l_f: int) -> float:
    """The normalized-indicator ingredient ||h_x - 1|| <= p^(d(l_f+|nu|)/2)/sqrt(base)."""
    if l_f < 0:
        raise ValueError("smoothness level l_f must be >= 0")
    return (
        bundle.p ** (bundle.d * (l_f + bundle.nu_total) / 2.0)
        / math.sqrt(bundle.base_ball_measure)
    )


def equidistribution_bound(bundle: ConstantsBundle, l_f: int, n: int) -> float:
    """Decay bound for smooth test functions, per unit L2 norm.

    (c / sqrt(base)) p^((alpha + d/2)|nu| + 2 alpha) p^(l_f (2 alpha + d/2))
    ||a||^(-delta n).  Consecutive n differ by the exact factor
    ||a||^(-delta).
    """
    if l_f < 0:
        raise ValueError("smoothness level l_f must be >= 0")
    if n < 0:
        raise ValueError("time n must be >= 0")
    mix = bundle.mixing
    lead = mix.c / math.sqrt(bundle.base_ball_measure)
    nu_power = float(bundle.p) ** ((mix.alpha + bundle.d / 2.0) * bundle.nu_total + 2.0 * mix.alpha)
    lf_power = float(bundle.p) ** (l_f * (2.0 * mix.alpha + bundle.d / 2.0))
    return lead * nu_power * lf_power * bundle.a_norm ** (-mix.delta * n)


def kappa(bundle: ConstantsBundle) -> float:
    """The headline constant.

    kappa = sqrt(2) c p^(2 alpha) base^(-1/2) (1 - ||a||^(-delta))^(-1)
            exp((3 alpha + d) h).

    Raises:
        DivergentSeries: ||a|| <= 1, where the geometric series diverges.
    """
    if bundle.a_norm <= 1:
        raise DivergentSeries(
            f"||a|| = {bundle.a_norm} <= 1: the decay series does not converge"
        )
    mix = bundle.mixing
    series = 1.0 / (1.0 - bundle.a_norm ** (-mix.delta))
    return (
        math.sqrt(2.0)
        * mix.c
        * bundle.p ** (2.0 * mix.alpha)
        / math.sqrt(bundle.base_ball_measure)
        * series
        * math.exp((3.0 * mix.alpha + bundle.d) * bundle.entropy_nats)
    )


def theorem1_rhs(
    kappa_value: float,
    p: int,
    alpha: float,
    d: int,
    l_f: int,
    f_l2_norm: float,
    gap: float,
) -> float:
    """Bound on |integral against Haar - integral against mu|.

    kappa p^((2 alpha + d/2) l_f) ||f||_{L2} sqrt(gap), where gap is the
    entropy deficit from the maximal-entropy measure.

    Raises:
        NegativeGap: gap < 0.
    """
    if gap < 0:
        raise NegativeGap(f"entropy gap must be >= 0, got {gap}")
    if l_f < 0:
        raise ValueError("smoothness level l_f must be >= 0")
    if f_l2_norm < 0:
        raise ValueError("norm must be >= 0")
    return kappa_value * p ** ((2.0 * alpha + d / 2.0) * l_f) * f_l2_norm * math.sqrt(gap)
