"""
Exponential, logarithm, and Baker-Campbell-Hausdorff on a deep ball
===================================================================

For ||X|| <= p^-2 the series all converge and exp is an isometry onto the
level-2 congruence ball, so round trips can be checked exactly.
"""

import random
from fractions import Fraction

from padlab import GroupSpec, PadicContext, PadicMatrix, bch, exp, log

ctx = PadicContext(3)
spec = GroupSpec.sl(ctx, 2)
rng = random.Random(5)

# a random deep sl2 element: every coefficient has valuation >= 2
x = PadicMatrix.zeros(ctx, 2)
for basis_elt in spec.lie_basis:
    x = x + basis_elt.scale(ctx.from_rational(rng.randint(-80, 80) * 9))
print("X =")
print(x)

g = exp(x)
print("exp(X) =")
print(g)
print("log(exp X) == X at full precision:", log(g).congruent_mod(x, ctx.precision))

# the isometry: distance of exp(X) from the identity equals ||X||
diff = g - PadicMatrix.identity(ctx, 2)
print("||exp X - 1|| =", diff.max_norm(), " ||X|| =", x.max_norm())

# BCH two ways: log(exp x exp y) against the Dynkin commutator series
y = PadicMatrix.from_rationals(ctx, [[0, 9], [0, 0]])
direct = bch(x, y, mode="direct")
dynkin = bch(x, y, mode="dynkin")
print("BCH modes agree mod 3^10:", dynkin.congruent_mod(direct, 10))

# commuting arguments collapse the series to x + y
h = PadicMatrix.from_rationals(ctx, [[9, 0], [0, -9]])
h2 = PadicMatrix.from_rationals(ctx, [[Fraction(18), 0], [0, Fraction(-18)]])
print("commuting inputs give x + y:", bch(h, h2, mode="dynkin").congruent_mod(h + h2, 12))

# the defining property: exp(bch(x, y)) == exp(x) exp(y)
print("exp(z) == exp(x) exp(y):", exp(direct).congruent_mod(exp(x) @ exp(y), 12))
