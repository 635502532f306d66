"""Matrix algebra and root finding against exact rational oracles.

Random matrices are drawn with exact Fraction shadows, so determinants,
inverses and characteristic polynomials can all be recomputed independently
and compared at the precision each entry claims.
"""

import math
import random
from fractions import Fraction

import pytest

from padlab import PadicContext, PadicMatrix, PadicScalar
from padlab.errors import NotSplitAtPrecision, PrecisionExhausted, SingularAtPrecision
from padlab.matrix import hensel_roots, nullspace, poly_eval, zp_module_basis


def vp(fr: Fraction, p: int):
    if fr == 0:
        return math.inf
    v = 0
    num, den = fr.numerator, fr.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def check_entry(got: PadicScalar, exact: Fraction) -> None:
    assert vp(got.as_rational() - exact, got.ctx.p) >= got.abs_precision()


def random_fraction_matrix(rng: random.Random, n: int) -> list[list[Fraction]]:
    return [
        [Fraction(rng.randint(-60, 60), rng.randint(1, 40)) for _ in range(n)]
        for _ in range(n)
    ]


def frac_det(m: list[list[Fraction]]) -> Fraction:
    n = len(m)
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = Fraction(0)
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        total += (-1) ** j * m[0][j] * frac_det(minor)
    return total


def frac_inverse(m: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(m)
    work = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(m)]
    for col in range(n):
        piv = next(i for i in range(col, n) if work[i][col] != 0)
        work[col], work[piv] = work[piv], work[col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for i in range(n):
            if i != col and work[i][col] != 0:
                f = work[i][col]
                work[i] = [a - f * b for a, b in zip(work[i], work[col])]
    return [row[n:] for row in work]


def frac_char_poly(m: list[list[Fraction]]) -> list[Fraction]:
    """Ascending coefficients of det(xI - A) by direct expansion, n <= 3."""
    n = len(m)
    if n == 1:
        return [-m[0][0], Fraction(1)]
    if n == 2:
        return [frac_det(m), -(m[0][0] + m[1][1]), Fraction(1)]
    tr = m[0][0] + m[1][1] + m[2][2]
    # sum of principal 2x2 minors
    s2 = Fraction(0)
    for i in range(3):
        for j in range(i + 1, 3):
            s2 += m[i][i] * m[j][j] - m[i][j] * m[j][i]
    return [-frac_det(m), s2, -tr, Fraction(1)]


# ---- ring operations --------------------------------------------------------


@pytest.mark.parametrize("p,n", [(2, 2), (3, 3), (5, 2), (3, 2)])
def test_matmul_and_det_match_fractions(p, n):
    ctx = PadicContext(p)
    rng = random.Random(100 * p + n)
    for _ in range(40):
        fa = random_fraction_matrix(rng, n)
        fb = random_fraction_matrix(rng, n)
        a = PadicMatrix.from_rationals(ctx, fa)
        b = PadicMatrix.from_rationals(ctx, fb)
        prod = a @ b
        for i in range(n):
            for j in range(n):
                exact = sum(fa[i][k] * fb[k][j] for k in range(n))
                if prod.rows[i][j].is_zero:
                    assert exact == 0
                else:
                    check_entry(prod.rows[i][j], exact)
        try:
            d = a.det()
        except PrecisionExhausted:
            continue
        exact = frac_det(fa)
        if d.is_zero:
            assert vp(exact, p) >= ctx.precision + a.min_valuation()
        else:
            check_entry(d, exact)


@pytest.mark.parametrize("p,n", [(2, 3), (3, 2), (7, 3)])
def test_inverse_matches_fractions(p, n):
    ctx = PadicContext(p)
    rng = random.Random(31 * p + n)
    done = 0
    while done < 30:
        fm = random_fraction_matrix(rng, n)
        if frac_det(fm) == 0:
            continue
        done += 1
        m = PadicMatrix.from_rationals(ctx, fm)
        try:
            inv = m.inverse()
        except PrecisionExhausted:
            continue
        exact = frac_inverse(fm)
        for i in range(n):
            for j in range(n):
                got = inv.rows[i][j]
                if got.is_zero:
                    # only absorbed when the true entry sits below resolution
                    assert exact[i][j] == 0 or vp(exact[i][j], p) >= ctx.precision
                else:
                    check_entry(got, exact[i][j])


def test_exactly_singular():
    ctx = PadicContext(3)
    m = PadicMatrix.from_rationals(ctx, [[1, 2], [2, 4]])
    assert m.det().is_zero
    with pytest.raises(SingularAtPrecision):
        m.inverse()


@pytest.mark.parametrize("p,n", [(2, 2), (3, 3), (5, 3)])
def test_char_poly_matches_cofactor_expansion(p, n):
    ctx = PadicContext(p)
    rng = random.Random(55 * p + n)
    for _ in range(25):
        fm = random_fraction_matrix(rng, n)
        m = PadicMatrix.from_rationals(ctx, fm)
        try:
            got = m.char_poly()
        except PrecisionExhausted:
            continue
        exact = frac_char_poly(fm)
        assert len(got) == n + 1
        for g, e in zip(got, exact):
            if g.is_zero:
                assert e == 0 or vp(e, p) >= ctx.precision + m.min_valuation()
            else:
                check_entry(g, e)


def test_trace_transpose_flat():
    ctx = PadicContext(5)
    m = PadicMatrix.from_rationals(ctx, [[1, 2], [3, 4]])
    assert m.trace() == ctx.from_rational(5)
    assert m.transpose().rows[0][1] == ctx.from_rational(3)
    again = PadicMatrix.from_flat(ctx, 2, m.flat())
    assert again == m
    assert m.max_norm() == Fraction(1)
    assert m.min_valuation() == 0
    shifted = m.scale(ctx.from_rational(1, 25))
    assert shifted.min_valuation() == -2
    assert shifted.max_norm() == Fraction(25)


def test_congruent_mod_matrices():
    ctx = PadicContext(3)
    a = PadicMatrix.from_rationals(ctx, [[1, 0], [0, 1]])
    b = PadicMatrix.from_rationals(ctx, [[1 + 3**7, 0], [3**7, 1]])
    assert a.congruent_mod(b, 7)
    assert not a.congruent_mod(b, 8)


# ---- Hensel root finding ----------------------------------------------------


def ascending(ctx, *coeffs):
    return [ctx.from_rational(Fraction(c)) for c in coeffs]


def match_roots(found, truth, p):
    """Pair claimed roots with exact rationals and verify the certificates."""
    assert sorted(m for _, m in found) == sorted(m for _, m in truth)
    used = set()
    for root, mult in found:
        hit = None
        for idx, (exact, emult) in enumerate(truth):
            if idx in used or emult != mult:
                continue
            if vp(root.as_rational() - exact, p) >= root.abs_precision():
                hit = idx
                break
        assert hit is not None, f"no exact root matches {root!r}"
        used.add(hit)


def test_hensel_simple_split():
    ctx = PadicContext(7)
    # (x-1)(x-2)(x-4), distinct residues, full lift
    roots = hensel_roots(ascending(ctx, -8, 14, -7, 1))
    assert [(r.as_rational(), m) for r, m in roots] == [(1, 1), (2, 1), (4, 1)]
    assert all(r.digits == 12 for r, _ in roots)


def test_hensel_valuation_split():
    ctx = PadicContext(3)
    # (x - 3)(x - 1/3): one root per Newton slope
    roots = hensel_roots(ascending(ctx, 1, Fraction(-10, 3), 1))
    assert [r.valuation() for r, _ in roots] == [-1, 1]
    match_roots(roots, [(Fraction(1, 3), 1), (Fraction(3), 1)], 3)


def test_hensel_zero_roots():
    ctx = PadicContext(5)
    roots = hensel_roots(ascending(ctx, 0, 0, -1, 1))  # x^2 (x - 1)
    # sorted by valuation, so the exact zero (infinite valuation) comes last
    assert roots[0][0] == ctx.one() and roots[0][1] == 1
    assert roots[1][0].is_zero and roots[1][1] == 2


def test_hensel_triple_root():
    ctx = PadicContext(3)
    roots = hensel_roots(ascending(ctx, 1, 3, 3, 1))  # (x+1)^3
    assert len(roots) == 1
    root, mult = roots[0]
    assert mult == 3
    assert root.congruent_mod(ctx.from_rational(-1), 4)
    assert root.digits == 4


def test_hensel_double_plus_simple():
    ctx = PadicContext(3)
    # (x-1)(x+1)^2: residues 1 and -1 are distinct mod 3
    roots = hensel_roots(ascending(ctx, -1, -1, 1, 1))
    match_roots(roots, [(Fraction(1), 1), (Fraction(-1), 2)], 3)
    by_mult = {m: r for r, m in roots}
    assert by_mult[1].digits == 12
    assert by_mult[2].digits == 6  # double roots certify half the digits


def test_hensel_quadruple_root():
    ctx = PadicContext(3)
    roots = hensel_roots(ascending(ctx, 1, -4, 6, -4, 1))  # (x-1)^4
    assert len(roots) == 1
    root, mult = roots[0]
    assert mult == 4
    assert root.digits == 3
    assert root.congruent_mod(ctx.one(), 3)


def test_hensel_near_collision_simple_roots():
    ctx = PadicContext(3)
    # roots 1 and 82 share residues through 3^4; both are simple
    roots = hensel_roots(ascending(ctx, 82, -83, 1))
    match_roots(roots, [(Fraction(1), 1), (Fraction(82), 1)], 3)
    assert sorted(r.digits for r, _ in roots) == [8, 11]


def test_hensel_cluster_double_and_simple():
    ctx = PadicContext(3)
    # (x+1)^2 (x-26): 26 = -1 + 27, all three roots share residue 2 mod 3.
    # Certified digits are limited by the double root in the cluster.
    roots = hensel_roots(ascending(ctx, -26, -51, -24, 1))
    match_roots(roots, [(Fraction(-1), 2), (Fraction(26), 1)], 3)
    assert all(r.digits == 5 for r, _ in roots)


def test_hensel_q2_with_denominator():
    ctx = PadicContext(2)
    # (3x+1)^2 (x-2) expanded, monic-normalized by the leading 9
    roots = hensel_roots(ascending(ctx, -2, -11, -12, 9))
    match_roots(roots, [(Fraction(-1, 3), 2), (Fraction(2), 1)], 2)
    by_mult = {m: r for r, m in roots}
    assert by_mult[2].digits == 6
    assert by_mult[1].digits == 12


def test_hensel_residual_certificates():
    # every returned root satisfies the polynomial to its certified depth
    ctx = PadicContext(3)
    coeffs = ascending(ctx, -26, -51, -24, 1)
    for root, mult in hensel_roots(coeffs):
        try:
            val = poly_eval(coeffs, root)
        except PrecisionExhausted:
            continue  # cancelled past every certified digit: zero at depth
        assert val.is_zero or val.valuation() >= mult * root.digits - 1


def test_hensel_refuses_ramified():
    ctx = PadicContext(3)
    with pytest.raises(NotSplitAtPrecision):
        hensel_roots(ascending(ctx, -3, 0, 1))  # x^2 - 3, slope 1/2


def test_hensel_refuses_unramified_extension():
    ctx = PadicContext(2)
    with pytest.raises(NotSplitAtPrecision):
        hensel_roots(ascending(ctx, 1, 1, 1))  # x^2 + x + 1 irreducible mod 2


def test_hensel_random_split_products():
    # random monic products of distinct-residue linear factors fully recover
    for p in (3, 5):
        ctx = PadicContext(p)
        rng = random.Random(400 + p)
        for _ in range(20):
            k = rng.randint(2, min(3, p - 1))
            residues = rng.sample(range(1, p), k)
            roots_exact = [Fraction(r + p * rng.randint(0, 20)) for r in residues]
            coeffs = [Fraction(1)]
            for r in roots_exact:
                coeffs = [a - r * b for a, b in zip(coeffs + [Fraction(0)], [Fraction(0)] + coeffs)]
            coeffs.reverse()
            found = hensel_roots([ctx.from_rational(c) for c in coeffs])
            match_roots(found, [(r, 1) for r in roots_exact], p)


# ---- kernels and lattice bases ----------------------------------------------


def test_nullspace_rank_one():
    ctx = PadicContext(3)
    m = PadicMatrix.from_rationals(ctx, [[1, 2], [2, 4]])
    basis = nullspace(m)
    assert len(basis) == 1
    vec = basis[0]
    assert min(x.valuation() for x in vec) == 0  # content-normalized
    image = [sum((m.rows[i][j] * vec[j] for j in range(2)), ctx.zero()) for i in range(2)]
    assert all(x.is_zero or x.valuation() >= 10 for x in image)


def test_nullspace_full_rank_empty():
    ctx = PadicContext(5)
    m = PadicMatrix.from_rationals(ctx, [[1, 1], [0, 1]])
    assert nullspace(m) == []


def test_nullspace_rank_two_of_three():
    ctx = PadicContext(2)
    rows = [[1, 0, 1], [0, 1, 1], [1, 1, 2]]
    basis = nullspace(PadicMatrix.from_rationals(ctx, rows))
    assert len(basis) == 1
    m = PadicMatrix.from_rationals(ctx, rows)
    vec = basis[0]
    for i in range(3):
        try:
            x = sum((m.rows[i][j] * vec[j] for j in range(3)), ctx.zero())
        except PrecisionExhausted:
            continue  # cancelled below resolution, which is null enough
        assert x.is_zero or x.valuation() >= 10


def test_zp_module_basis_unit_pivots():
    ctx = PadicContext(3)
    vin = [
        [ctx.from_rational(3), ctx.from_rational(3)],
        [ctx.zero(), ctx.from_rational(9)],
    ]
    basis = zp_module_basis(vin)
    assert len(basis) == 2
    for vec in basis:
        assert min(x.valuation() for x in vec if not x.is_zero) == 0
    # the input span is all of Q_p^2, so the integral basis has unit det
    det = basis[0][0] * basis[1][1] - basis[0][1] * basis[1][0]
    assert det.valuation() == 0


def test_zp_module_basis_drops_dependent_rows():
    ctx = PadicContext(3)
    one = ctx.one()
    vin = [[one, one], [ctx.from_rational(2), ctx.from_rational(2)]]
    basis = zp_module_basis(vin)
    assert len(basis) == 1
