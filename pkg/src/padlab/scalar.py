"""Exact p-adic scalars with floating valuation.

A nonzero scalar is stored as  x = p^v * u  where v is an integer valuation,
u is a unit kept modulo p^N (N = context precision), and 1 <= known_digits <= N
records how many digits of u are actually certified.  The absolute precision of
x is therefore v + known_digits: we know x modulo p^(v + known_digits) and
nothing beyond.  Zero produced by exact cancellation is a distinguished value
(EXACT ZERO) rather than a tiny unit, so norms and valuations of genuine zeros
are exact.

The arithmetic mirrors floating point: multiplication is exact on units and
keeps the smaller digit count, addition aligns valuations and can only lose
digits when leading digits cancel.  An addition that cancels every jointly
certified digit raises PrecisionExhausted, because the model cannot certify
the result nonzero; the one exception is cancellation of two full-precision
mirror-image representations, which provably sums to zero and returns the
exact zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DivisionByZero, PrecisionExhausted

DEFAULT_PRECISION = 12


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True, slots=True)
class PadicContext:
    """Ambient field Q_p at a fixed working precision.

    Args:
        p: prime.
        precision: number of unit digits carried, N >= 1.  All units live in
            [1, p^N) and certified digit counts never exceed N.
    """

    p: int
    precision: int = DEFAULT_PRECISION
    modulus: int = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not _is_prime(self.p):
            raise ValueError(f"p must be prime, got {self.p}")
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        object.__setattr__(self, "modulus", self.p**self.precision)

    def zero(self) -> "PadicScalar":
        return PadicScalar._raw(self, None, 0, self.precision)

    def one(self) -> "PadicScalar":
        return PadicScalar._raw(self, 0, 1, self.precision)

    def from_rational(self, a, b=1) -> "PadicScalar":
        """Embed the rational a/b exactly (b != 0), with full certified digits."""
        if isinstance(a, Fraction):
            a, b = a.numerator * b, a.denominator
        if b == 0:
            raise DivisionByZero("rational with zero denominator")
        if a == 0:
            return self.zero()
        p, pn = self.p, self.modulus
        va = 0
        while a % p == 0:
            a //= p
            va += 1
        vb = 0
        while b % p == 0:
            b //= p
            vb += 1
        unit = (a % pn) * pow(b % pn, -1, pn) % pn
        return PadicScalar._raw(self, va - vb, unit, self.precision)

    def from_string(self, text: str) -> "PadicScalar":
        """Parse the canonical rational form "a/b" (or a bare integer "a")."""
        s = text.strip()
        if "/" in s:
            num, den = s.split("/", 1)
            return self.from_rational(int(num.strip()), int(den.strip()))
        return self.from_rational(int(s))


class PadicScalar:
    """One p-adic number at floating valuation; see the module docstring."""

    __slots__ = ("ctx", "v", "unit", "digits")

    def __init__(self, ctx: PadicContext, valuation: int, unit: int, digits: int | None = None):
        pn = ctx.modulus
        unit %= pn
        if unit == 0 or unit % ctx.p == 0:
            raise ValueError("unit must be nonzero and prime to p; use ctx.zero() for zero")
        if digits is None:
            digits = ctx.precision
        if not 1 <= digits <= ctx.precision:
            raise ValueError("known digits must lie in [1, precision]")
        self.ctx = ctx
        self.v = valuation
        self.unit = unit
        self.digits = digits

    @classmethod
    def _raw(cls, ctx, v, unit, digits):
        # internal fast path: caller guarantees canonical fields
        self = object.__new__(cls)
        self.ctx = ctx
        self.v = v
        self.unit = unit
        self.digits = digits
        return self

    # ---- predicates and views -------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.v is None

    def valuation(self):
        """v_p(x) as an int; +inf for the exact zero."""
        return math.inf if self.v is None else self.v

    def norm(self) -> Fraction:
        """|x|_p = p^(-v) as an exact Fraction; 0 for the exact zero."""
        if self.v is None:
            return Fraction(0)
        p, v = self.ctx.p, self.v
        return Fraction(1, p**v) if v >= 0 else Fraction(p**-v)

    def abs_precision(self):
        """Largest k such that x is certified modulo p^k (inf for exact zero)."""
        return math.inf if self.v is None else self.v + self.digits

    def as_rational(self) -> Fraction:
        """Canonical rational representative p^v * unit (exact for embedded rationals
        of short digit expansion; otherwise a representative mod p^(v+digits))."""
        if self.v is None:
            return Fraction(0)
        p, v = self.ctx.p, self.v
        return Fraction(self.unit * p**v) if v >= 0 else Fraction(self.unit, p**-v)

    def lift_at(self, abs_prec: int) -> int:
        """Integer representative of x modulo p^abs_prec (requires v >= 0 side
        handled by the caller: the lift is of p^v*unit, so v must be >= 0
        whenever abs_prec > 0)."""
        if self.v is None:
            return 0
        if self.abs_precision() < abs_prec:
            raise PrecisionExhausted(
                f"need {abs_prec} absolute digits, have {self.abs_precision()}"
            )
        if self.v < 0:
            raise ValueError("lift of a non-integral scalar")
        return self.unit * self.ctx.p**self.v % self.ctx.p**abs_prec

    # ---- arithmetic ------------------------------------------------------

    def _check_ctx(self, other: "PadicScalar") -> None:
        if self.ctx != other.ctx:
            raise ValueError("mixed p-adic contexts")

    def __add__(self, other: "PadicScalar") -> "PadicScalar":
        self._check_ctx(other)
        if self.v is None:
            return other
        if other.v is None:
            return self
        ctx = self.ctx
        pn, n = ctx.modulus, ctx.precision
        # exact cancellation: mirror-image full-precision representations
        if (
            self.v == other.v
            and (self.unit + other.unit) % pn == 0
            and self.digits == n
            and other.digits == n
        ):
            return ctx.zero()
        m = self.v if self.v <= other.v else other.v
        cert = min(self.v + self.digits, other.v + other.digits)  # joint absolute precision
        p = ctx.p
        s = (self.unit * p ** (self.v - m) + other.unit * p ** (other.v - m)) % pn
        window = p ** (cert - m)
        if s % window == 0:
            err = PrecisionExhausted(
                f"addition cancelled all {cert - m} certified digits at valuation {m}"
            )
            err.floor = cert  # the sum is O(p^-cert); callers may absorb at >= this
            raise err
        t = 0
        while s % p == 0:
            s //= p
            t += 1
        digits = cert - m - t
        if digits > n:
            digits = n
        return PadicScalar._raw(ctx, m + t, s % pn, digits)

    def __neg__(self) -> "PadicScalar":
        if self.v is None:
            return self
        return PadicScalar._raw(self.ctx, self.v, self.ctx.modulus - self.unit, self.digits)

    def __sub__(self, other: "PadicScalar") -> "PadicScalar":
        return self + (-other)

    def __mul__(self, other: "PadicScalar") -> "PadicScalar":
        self._check_ctx(other)
        if self.v is None:
            return self
        if other.v is None:
            return other
        d = self.digits if self.digits <= other.digits else other.digits
        return PadicScalar._raw(
            self.ctx, self.v + other.v, self.unit * other.unit % self.ctx.modulus, d
        )

    def inverse(self) -> "PadicScalar":
        if self.v is None:
            raise DivisionByZero("inverse of exact zero")
        return PadicScalar._raw(
            self.ctx, -self.v, pow(self.unit, -1, self.ctx.modulus), self.digits
        )

    def __truediv__(self, other: "PadicScalar") -> "PadicScalar":
        return self * other.inverse()

    # ---- comparisons -----------------------------------------------------

    def __eq__(self, other) -> bool:
        # representation equality; for precision-aware tests use congruent_mod
        if not isinstance(other, PadicScalar):
            return NotImplemented
        return (
            self.ctx == other.ctx
            and self.v == other.v
            and self.unit == other.unit
        )

    def __hash__(self) -> int:
        return hash((self.ctx, self.v, self.unit))

    def congruent_mod(self, other: "PadicScalar", k: int) -> bool:
        """Certify x = y (mod p^k).  True/False when decidable at the stored
        precision, PrecisionExhausted when the certified digits cannot tell."""
        self._check_ctx(other)
        if self.v is None and other.v is None:
            return True
        if self.v is None:
            return other.v >= k
        if other.v is None:
            return self.v >= k
        if self.v >= k and other.v >= k:
            return True
        if self.v != other.v:
            return False
        need = k - self.v
        if self.digits < need or other.digits < need:
            raise PrecisionExhausted(
                f"congruence mod p^{k} needs {need} digits at valuation {self.v}"
            )
        return (self.unit - other.unit) % self.ctx.p**need == 0

    # ---- rendering -------------------------------------------------------

    def __repr__(self) -> str:
        if self.v is None:
            return "0 (exact)"
        return f"{self.ctx.p}^{self.v} * {self.unit} ({self.digits} digits)"
