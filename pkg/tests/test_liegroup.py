"""Exponential, logarithm, BCH and horospherical factorization.

The deep-ball hypothesis ||X|| <= p^-2 makes exp and log mutually inverse
isometries, so round trips and norm preservation can be asserted exactly.
"""

import random
from fractions import Fraction

import pytest

from padlab import GroupSpec, PadicContext, PadicMatrix, bch, decompose, exp, log
from padlab.errors import DomainError
from padlab.liegroup import FactorResult, ball_membership, horospherical_factor


def random_deep_element(spec: GroupSpec, rng: random.Random) -> PadicMatrix:
    """Algebra element with every coefficient at valuation >= 2."""
    ctx = spec.ctx
    p = ctx.p
    while True:
        x = PadicMatrix.zeros(ctx, spec.dim)
        for b in spec.lie_basis:
            c = rng.randint(-(p**5), p**5) * p ** rng.randint(2, 4)
            if c:
                x = x + b.scale(ctx.from_rational(c))
        if x.min_valuation() >= 2 and x.min_valuation() != float("inf"):
            return x


@pytest.mark.parametrize("p,d", [(2, 2), (3, 2), (3, 3), (5, 2)])
def test_exp_log_round_trip(p, d):
    ctx = PadicContext(p)
    spec = GroupSpec.sl(ctx, d)
    rng = random.Random(p * 100 + d)
    for _ in range(25):
        x = random_deep_element(spec, rng)
        g = exp(x)
        assert log(g).congruent_mod(x, ctx.precision)
        # exp is an isometry of the deep ball onto the deep congruence ball
        diff = g - PadicMatrix.identity(ctx, d)
        assert diff.max_norm() == x.max_norm()
        assert ball_membership(g, spec, 2)


def test_exp_log_other_direction():
    ctx = PadicContext(3)
    spec = GroupSpec.sl(ctx, 2)
    rng = random.Random(7)
    for _ in range(25):
        g = exp(random_deep_element(spec, rng))
        assert exp(log(g)).congruent_mod(g, ctx.precision)


def test_exp_of_zero_is_identity():
    ctx = PadicContext(3)
    z = PadicMatrix.zeros(ctx, 2)
    assert exp(z) == PadicMatrix.identity(ctx, 2)
    assert log(PadicMatrix.identity(ctx, 2)).min_valuation() == float("inf")


def test_shallow_arguments_rejected():
    ctx = PadicContext(3)
    e12 = PadicMatrix.from_rationals(ctx, [[0, 1], [0, 0]])
    with pytest.raises(DomainError):
        exp(e12)  # valuation 0
    with pytest.raises(DomainError):
        exp(e12.scale(ctx.from_rational(3)))  # valuation 1 still too shallow
    with pytest.raises(DomainError):
        log(PadicMatrix.from_rationals(ctx, [[1, 3], [0, 1]]))


def test_exp_homomorphism_on_commuting_elements():
    ctx = PadicContext(3)
    x = PadicMatrix.from_rationals(ctx, [[9, 0], [0, -9]])
    y = PadicMatrix.from_rationals(ctx, [[18, 0], [0, -18]])
    assert (exp(x) @ exp(y)).congruent_mod(exp(x + y), ctx.precision)
    for mode in ("direct", "dynkin"):
        assert bch(x, y, mode=mode).congruent_mod(x + y, ctx.precision)


@pytest.mark.parametrize("p", [3, 5])
def test_bch_modes_agree(p):
    ctx = PadicContext(p)
    spec = GroupSpec.sl(ctx, 2)
    rng = random.Random(31 + p)
    for _ in range(15):
        x = random_deep_element(spec, rng)
        y = random_deep_element(spec, rng)
        direct = bch(x, y, mode="direct")
        dynkin = bch(x, y, mode="dynkin")
        assert direct.congruent_mod(dynkin, 10)
        # both satisfy the defining property
        assert exp(direct).congruent_mod(exp(x) @ exp(y), 10)


def test_bch_nilpotent_is_exact():
    # strictly upper triangular 3x3: all triple commutators vanish, so the
    # series is the polynomial x + y + [x,y]/2 and both modes must hit it
    ctx = PadicContext(3)
    x = PadicMatrix.from_rationals(ctx, [[0, 9, 18], [0, 0, 0], [0, 0, 0]])
    y = PadicMatrix.from_rationals(ctx, [[0, 0, 27], [0, 0, 9], [0, 0, 0]])
    half = ctx.from_rational(1, 2)
    expected = x + y + (x @ y - y @ x).scale(half)
    for mode in ("direct", "dynkin"):
        got = bch(x, y, mode=mode)
        assert got.congruent_mod(expected, ctx.precision)


def test_bch_rejects_unknown_mode():
    ctx = PadicContext(3)
    x = PadicMatrix.from_rationals(ctx, [[9, 0], [0, -9]])
    with pytest.raises(ValueError):
        bch(x, x, mode="magic")


def test_ball_membership_levels():
    ctx = PadicContext(3)
    spec = GroupSpec.sl(ctx, 2)
    ident = PadicMatrix.identity(ctx, 2)
    assert ball_membership(ident, spec, 12)
    g = exp(PadicMatrix.from_rationals(ctx, [[0, 9], [0, 0]]))
    assert ball_membership(g, spec, 2)
    assert not ball_membership(g, spec, 3)  # ||g - e|| = 3^-2 exactly
    # right norm, wrong determinant
    h = PadicMatrix.from_rationals(ctx, [[10, 0], [0, 1]])
    assert not ball_membership(h, spec, 2)
    with pytest.raises(ValueError):
        ball_membership(ident, spec, -1)


def test_group_spec_validation():
    ctx = PadicContext(3)
    e = PadicMatrix.from_rationals(ctx, [[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        GroupSpec(ctx, "custom", 2, (e, e))  # dependent
    with pytest.raises(ValueError):
        GroupSpec(ctx, "custom", 2, (e.scale(ctx.from_rational(3)),))  # content 1


def test_algebra_coordinates_detect_outsiders():
    ctx = PadicContext(3)
    spec = GroupSpec.sl(ctx, 2)
    inside = PadicMatrix.from_rationals(ctx, [[2, 5], [7, -2]])
    coords = spec.algebra_coordinates(inside)
    assert coords is not None
    rebuilt = PadicMatrix.zeros(ctx, 2)
    for c, b in zip(coords, spec.lie_basis):
        if not c.is_zero:
            rebuilt = rebuilt + b.scale(c)
    assert rebuilt.congruent_mod(inside, ctx.precision)
    # nonzero trace lies outside sl_2
    outside = PadicMatrix.from_rationals(ctx, [[1, 0], [0, 0]])
    assert spec.algebra_coordinates(outside) is None


# ---- horospherical factorization --------------------------------------------


def sl2_flow(p: int):
    ctx = PadicContext(p)
    spec = GroupSpec.sl(ctx, 2)
    a = PadicMatrix.from_rationals(ctx, [[Fraction(1, p), 0], [0, p]])
    return spec, decompose(a, spec)


def test_factorization_shape_and_accuracy():
    spec, dec = sl2_flow(3)
    ctx = spec.ctx
    rng = random.Random(271)
    for _ in range(40):
        g = exp(random_deep_element(spec, rng))
        res = horospherical_factor(g, 2, dec)
        assert isinstance(res, FactorResult)
        f, h, rounds = res
        assert rounds <= 6
        # unstable part is unipotent upper triangular for a = diag(1/3, 3)
        assert f.rows[1][0].is_zero or f.rows[1][0].valuation() >= ctx.precision
        assert f.rows[0][0].congruent_mod(ctx.one(), ctx.precision)
        assert f.rows[1][1].congruent_mod(ctx.one(), ctx.precision)
        # bounded part carries no unstable component
        assert h.rows[0][1].is_zero or h.rows[0][1].valuation() >= ctx.precision
        assert (f @ h).congruent_mod(g, ctx.precision)
        assert ball_membership(f, spec, 2)
        assert ball_membership(h, spec, 2)


def test_factorization_rejects_shallow_elements():
    spec, dec = sl2_flow(3)
    shallow = PadicMatrix.from_rationals(spec.ctx, [[1, 1], [0, 1]])
    with pytest.raises(DomainError):
        horospherical_factor(shallow, 2, dec)
    with pytest.raises(DomainError):
        horospherical_factor(shallow, 1, dec)  # level below 2 refused outright


def test_factorization_of_pure_parts_is_trivial():
    spec, dec = sl2_flow(3)
    ctx = spec.ctx
    # already unstable: one round peels everything
    f_only = exp(PadicMatrix.from_rationals(ctx, [[0, 9], [0, 0]]))
    res = horospherical_factor(f_only, 2, dec)
    assert res.unstable.congruent_mod(f_only, ctx.precision)
    assert res.bounded.congruent_mod(PadicMatrix.identity(ctx, 2), ctx.precision)
    # identity needs no rounds at all
    res = horospherical_factor(PadicMatrix.identity(ctx, 2), 2, dec)
    assert res.rounds == 0
