"""Square matrices over Q_p with max-norm geometry.

The matrix norm is ||X|| = max_ij |X_ij|_p, which is submultiplicative and
ultrametric.  Pivoting everywhere is by minimal valuation (the p-adic analogue
of partial pivoting): dividing by a minimal-valuation entry keeps every
elimination multiplier integral, so digit loss never amplifies.

Characteristic polynomials use the Berkowitz algorithm: it is division-free,
so coefficients of exact-rational inputs keep full certified digits.  Root
finding over Q_p combines Newton-polygon segmentation by root valuation,
simple-root Hensel/Newton lifting, and bounded-depth disk subdivision for
residues that collide modulo p.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import (
    NotSplitAtPrecision,
    PrecisionExhausted,
    SingularAtPrecision,
)
from .scalar import PadicContext, PadicScalar


def _add_lenient(a: PadicScalar, b: PadicScalar) -> PadicScalar:
    """Addition that maps full certified cancellation to the exact zero.

    Used only where a rank decision at working precision is being made
    (kernels, module bases): there, "indistinguishable from zero" and "zero"
    force the same decision.  Public arithmetic keeps the raising contract.
    """
    try:
        return a + b
    except PrecisionExhausted:
        return a.ctx.zero()


def _sub_absorbing(a: PadicScalar, b: PadicScalar) -> PadicScalar:
    """Subtraction that zeroes differences certified smaller than p^-N.

    On full cancellation the exception's floor says the true difference is
    O(p^-floor); when that is at or below working resolution the value is
    indistinguishable from zero in every mod-p^N output, so substituting the
    exact zero is sound.  Coarser cancellations still raise.
    """
    try:
        return a - b
    except PrecisionExhausted as err:
        if getattr(err, "floor", -1) >= a.ctx.precision:
            return a.ctx.zero()
        raise


class PadicMatrix:
    """d x d matrix of PadicScalar entries sharing one context."""

    __slots__ = ("ctx", "dim", "rows")

    def __init__(self, ctx: PadicContext, rows):
        self.ctx = ctx
        self.rows = [list(r) for r in rows]
        self.dim = len(self.rows)
        for r in self.rows:
            if len(r) != self.dim:
                raise ValueError("matrix must be square")

    # ---- constructors ----------------------------------------------------

    @classmethod
    def from_rationals(cls, ctx: PadicContext, rows) -> "PadicMatrix":
        """Rows of ints/Fractions/strings ("a/b"), embedded exactly."""
        out = []
        for r in rows:
            out.append(
                [
                    ctx.from_string(x) if isinstance(x, str) else ctx.from_rational(x)
                    for x in r
                ]
            )
        return cls(ctx, out)

    @classmethod
    def identity(cls, ctx: PadicContext, dim: int) -> "PadicMatrix":
        one, zero = ctx.one(), ctx.zero()
        return cls(ctx, [[one if i == j else zero for j in range(dim)] for i in range(dim)])

    @classmethod
    def zeros(cls, ctx: PadicContext, dim: int) -> "PadicMatrix":
        zero = ctx.zero()
        return cls(ctx, [[zero] * dim for _ in range(dim)])

    def copy(self) -> "PadicMatrix":
        return PadicMatrix(self.ctx, [list(r) for r in self.rows])

    # ---- ring operations --------------------------------------------------

    def __add__(self, other: "PadicMatrix") -> "PadicMatrix":
        return PadicMatrix(
            self.ctx,
            [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __sub__(self, other: "PadicMatrix") -> "PadicMatrix":
        return PadicMatrix(
            self.ctx,
            [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
        )

    def __neg__(self) -> "PadicMatrix":
        return PadicMatrix(self.ctx, [[-a for a in r] for r in self.rows])

    def __matmul__(self, other: "PadicMatrix") -> "PadicMatrix":
        n = self.dim
        orows = other.rows
        cols = [[orows[k][j] for k in range(n)] for j in range(n)]
        out = []
        for i in range(n):
            ri = self.rows[i]
            row = []
            for j in range(n):
                cj = cols[j]
                acc = self.ctx.zero()
                for k in range(n):
                    t = ri[k] * cj[k]
                    if not t.is_zero:
                        acc = acc + t
                row.append(acc)
            out.append(row)
        return PadicMatrix(self.ctx, out)

    def scale(self, c: PadicScalar) -> "PadicMatrix":
        return PadicMatrix(self.ctx, [[c * a for a in r] for r in self.rows])

    def transpose(self) -> "PadicMatrix":
        n = self.dim
        return PadicMatrix(self.ctx, [[self.rows[j][i] for j in range(n)] for i in range(n)])

    def trace(self) -> PadicScalar:
        acc = self.ctx.zero()
        for i in range(self.dim):
            acc = acc + self.rows[i][i]
        return acc

    def flat(self) -> list[PadicScalar]:
        """Row-major entry list (the coordinate vector in the E_ij basis)."""
        return [a for r in self.rows for a in r]

    @classmethod
    def from_flat(cls, ctx: PadicContext, dim: int, entries) -> "PadicMatrix":
        entries = list(entries)
        return cls(ctx, [entries[i * dim : (i + 1) * dim] for i in range(dim)])

    # ---- norm and congruence ----------------------------------------------

    def min_valuation(self):
        """min_ij v_p(X_ij); +inf for the zero matrix."""
        best = None
        for r in self.rows:
            for a in r:
                if not a.is_zero and (best is None or a.v < best):
                    best = a.v
        return float("inf") if best is None else best

    def max_norm(self) -> Fraction:
        """||X|| = max |X_ij|_p as an exact Fraction."""
        v = self.min_valuation()
        if v == float("inf"):
            return Fraction(0)
        p = self.ctx.p
        return Fraction(1, p**v) if v >= 0 else Fraction(p ** -v)

    def congruent_mod(self, other: "PadicMatrix", k: int) -> bool:
        """Certified entrywise congruence mod p^k, i.e. ||X - Y|| <= p^(-k)."""
        return all(
            a.congruent_mod(b, k)
            for ra, rb in zip(self.rows, other.rows)
            for a, b in zip(ra, rb)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, PadicMatrix):
            return NotImplemented
        return self.dim == other.dim and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)
        )

    def __repr__(self) -> str:
        body = "; ".join(", ".join(repr(a) for a in r) for r in self.rows)
        return f"PadicMatrix[{body}]"

    # ---- elimination -------------------------------------------------------

    def det(self) -> PadicScalar:
        """Determinant by elimination with minimal-valuation row pivoting.

        Exactly singular input gives the exact zero; cancellation past
        certified digits raises PrecisionExhausted like any other addition.
        """
        n = self.dim
        work = [list(r) for r in self.rows]
        sign = 1
        acc = self.ctx.one()
        for col in range(n):
            piv_row, piv_val = -1, None
            for i in range(col, n):
                a = work[i][col]
                if not a.is_zero and (piv_val is None or a.v < piv_val):
                    piv_row, piv_val = i, a.v
            if piv_row < 0:
                return self.ctx.zero()
            if piv_row != col:
                work[piv_row], work[col] = work[col], work[piv_row]
                sign = -sign
            pivot = work[col][col]
            acc = acc * pivot
            inv = pivot.inverse()
            for i in range(col + 1, n):
                f = work[i][col]
                if f.is_zero:
                    continue
                mult = f * inv
                work[i][col] = self.ctx.zero()
                for j in range(col + 1, n):
                    t = mult * work[col][j]
                    if not t.is_zero:
                        work[i][j] = work[i][j] - t
        return -acc if sign < 0 else acc

    def inverse(self) -> "PadicMatrix":
        """Gauss-Jordan inverse; SingularAtPrecision when no pivot remains."""
        n = self.dim
        work = [list(r) for r in self.rows]
        aug = [list(r) for r in PadicMatrix.identity(self.ctx, n).rows]
        for col in range(n):
            piv_row, piv_val = -1, None
            for i in range(col, n):
                a = work[i][col]
                if not a.is_zero and (piv_val is None or a.v < piv_val):
                    piv_row, piv_val = i, a.v
            if piv_row < 0:
                raise SingularAtPrecision(f"no pivot in column {col}")
            if piv_row != col:
                work[piv_row], work[col] = work[col], work[piv_row]
                aug[piv_row], aug[col] = aug[col], aug[piv_row]
            inv = work[col][col].inverse()
            work[col] = [inv * a for a in work[col]]
            aug[col] = [inv * a for a in aug[col]]
            for i in range(n):
                if i == col:
                    continue
                f = work[i][col]
                if f.is_zero:
                    continue
                for j in range(n):
                    t = f * work[col][j]
                    if not t.is_zero:
                        work[i][j] = _sub_absorbing(work[i][j], t)
                    t = f * aug[col][j]
                    if not t.is_zero:
                        aug[i][j] = _sub_absorbing(aug[i][j], t)
        return PadicMatrix(self.ctx, aug)

    def char_poly(self) -> list[PadicScalar]:
        """det(xI - A) by Berkowitz, ascending: coeffs[k] multiplies x^k."""
        ctx = self.ctx
        n = self.dim
        a = self.rows
        poly = [ctx.one()]  # descending coefficients, leading first
        for r in range(1, n + 1):
            diag = a[r - 1][r - 1]
            row = a[r - 1][: r - 1]
            col = [a[i][r - 1] for i in range(r - 1)]
            # first column of the (r+1) x r Toeplitz factor:
            # [1, -diag, -(R C), -(R M C), ..., -(R M^(r-2) C)]
            t = [ctx.one(), -diag]
            w = col
            while len(t) < r + 1:
                acc = ctx.zero()
                for x, y in zip(row, w):
                    s = x * y
                    if not s.is_zero:
                        acc = acc + s
                t.append(-acc)
                if len(t) == r + 1:
                    break
                w2 = []
                for i in range(r - 1):
                    acc = ctx.zero()
                    for j in range(r - 1):
                        s = a[i][j] * w[j]
                        if not s.is_zero:
                            acc = acc + s
                    w2.append(acc)
                w = w2
            new = []
            for i in range(r + 1):
                acc = ctx.zero()
                lo = max(0, i - (len(t) - 1))
                for j in range(lo, min(i, r - 1) + 1):
                    s = t[i - j] * poly[j]
                    if not s.is_zero:
                        acc = acc + s
                new.append(acc)
            poly = new
        poly.reverse()
        return poly


# ---- polynomial helpers on ascending coefficient lists ----------------------


def poly_eval(coeffs: list[PadicScalar], x: PadicScalar) -> PadicScalar:
    acc = x.ctx.zero()
    for c in reversed(coeffs):
        acc = acc * x
        if not c.is_zero:
            acc = acc + c
    return acc


def _int_poly_eval(coeffs: list[int], x: int, mod: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % mod
    return acc


def _int_poly_derive(coeffs: list[int]) -> list[int]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def _vp(n: int, p: int) -> int:
    v = 0
    while n != 0 and n % p == 0:
        n //= p
        v += 1
    return v


def _synthetic_div(coeffs: list[int], r: int, mod: int) -> tuple[list[int], int]:
    """coeffs(x) = q(x)(x - r) + rem over Z/mod, ascending coefficients."""
    n = len(coeffs) - 1
    if n == 0:
        return [], coeffs[0] % mod
    q = [0] * n
    q[n - 1] = coeffs[n] % mod
    for k in range(n - 1, 0, -1):
        q[k - 1] = (coeffs[k] + r * q[k]) % mod
    rem = (coeffs[0] + r * q[0]) % mod
    return q, rem


def _taylor_shift(coeffs: list[int], r0: int, mod: int) -> list[int]:
    """Coefficients of f(r0 + y), ascending in y, by repeated synthetic division."""
    work = [c % mod for c in coeffs]
    out = []
    while work:
        work, rem = _synthetic_div(work, r0, mod)
        out.append(rem)
    return out


def _newton_slopes(points: list[tuple[int, int]]) -> list[tuple[int, int, Fraction]]:
    """Lower convex hull edges of (i, v_p(c_i)) points: (i_start, i_end, slope)."""
    hull: list[tuple[int, int]] = []
    for pt in points:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the segment hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    return [
        (
            hull[i][0],
            hull[i + 1][0],
            Fraction(hull[i + 1][1] - hull[i][1], hull[i + 1][0] - hull[i][0]),
        )
        for i in range(len(hull) - 1)
    ]


def _simple_lift(coeffs: list[int], r0: int, p: int, m_exp: int) -> int:
    """Newton-lift a simple residue root r0 of an integer polynomial to mod p^m_exp."""
    deriv = _int_poly_derive(coeffs)
    x = r0
    known = 1
    while known < m_exp:
        known = min(2 * known, m_exp)
        mod = p**known
        fx = _int_poly_eval(coeffs, x, mod)
        dfx = _int_poly_eval(deriv, x, mod)
        x = (x - fx * pow(dfx, -1, mod)) % mod
    return x


def _residue_multiplicity(coeffs: list[int], p: int) -> int:
    t = 0
    for c in coeffs[:-1]:
        if c % p == 0:
            t += 1
        else:
            break
    return t


def _newton_candidates(coeffs: list[int], p: int, m_exp: int) -> list[int]:
    """Roots of an integer polynomial in pZ_p by Newton with slack.

    The derivative may be non-unit at the root, so v(f) > 2 v(f') can fail
    from a cold start; seed Newton at every point of pZ_p up to a bounded
    digit depth and keep the distinct roots that lift to the full modulus.
    """
    mod = p**m_exp
    deriv = _int_poly_derive(coeffs)

    def attempt(x: int):
        last = -1
        for _ in range(2 * m_exp + 8):
            fx = _int_poly_eval(coeffs, x, mod)
            if fx == 0:
                return x
            dfx = _int_poly_eval(deriv, x, mod)
            if dfx == 0:
                return None
            e = _vp(dfx, p)
            vf = _vp(fx, p)
            if vf <= 2 * e or vf <= last:
                return None
            last = vf
            x = (x - (fx // p**e) * pow(dfx // p**e, -1, mod)) % mod
        return None

    depth = 1
    while p ** (depth + 1) <= 2048 and depth < m_exp:
        depth += 1
    found: list[int] = []
    for m in range(p ** (depth - 1)):
        x0 = (p * m) % mod
        got = attempt(x0)
        if got is not None and got % p == 0 and got not in found:
            found.append(got)
    return found


def _exact_multiple_probe(shifted: list[int], p: int, m_exp: int):
    """Certify an exact multiple root y* = 0 mod p of a centered polynomial.

    A multiplicity-mu root is a simple-at-slack root of the (mu-1)-th
    derivative; Newton-refine a candidate center there, then demand that the
    first mu Taylor coefficients at it vanish at the full working modulus.
    Because a mu-fold root is only determined up to delta with
    v(c_mu delta^mu) >= m by mod-p^m coefficients, the certified digits are
    (m - v(c_mu)) / mu, not m.  Returns (center, digits, mu) or None.
    """
    mod = p**m_exp
    t = _residue_multiplicity(shifted, p)
    for mu in range(min(t, len(shifted) - 1), 1, -1):
        f_der = list(shifted)
        for _ in range(mu - 1):
            f_der = _int_poly_derive(f_der)
        for center in _newton_candidates(f_der, p, m_exp):
            at_center = _taylor_shift(shifted, center, mod)
            if any(at_center[i] % mod for i in range(mu)):
                continue
            lead_v = _vp(at_center[mu], p) if at_center[mu] % mod else 0
            digits = max(1, (m_exp - lead_v + mu - 1) // mu)
            return center, digits, mu
    return None


def _collision_roots(coeffs: list[int], r0: int, p: int, m_exp: int, depth: int, max_depth: int):
    """Roots in the residue disk r0 + pZ_p when r0 annihilates both the
    polynomial and its derivative mod p: certify an exact multiple root if
    one is there, deflate, and descend into the rest of the disk."""
    mod = p**m_exp
    out = []
    shifted = _taylor_shift(coeffs, r0, mod)
    probe = _exact_multiple_probe(shifted, p, m_exp)
    if probe is not None:
        center, digits, mu = probe
        out.append(((r0 + center) % mod, digits, mu))
        rest = _taylor_shift(shifted, center, mod)[mu:]
        if len(rest) > 1:
            scaled = [c * p**i % mod for i, c in enumerate(rest)]
            content = min((_vp(c, p) for c in scaled if c != 0), default=m_exp)
            if content < m_exp:
                inner = [c // p**content for c in scaled]
                for s, sd, mult in _disk_roots(inner, m_exp - content, p, depth + 1, max_depth):
                    # deflated roots inherit the center's uncertainty
                    out.append(((r0 + center + p * s) % mod, min(m_exp, sd + 1, digits), mult))
        return out
    scaled = [c * p**i % mod for i, c in enumerate(shifted)]
    content = min((_vp(c, p) for c in scaled if c != 0), default=m_exp)
    if content >= m_exp:
        raise NotSplitAtPrecision("polynomial vanishes identically at working precision")
    inner = [c // p**content for c in scaled]
    for s, digits, mult in _disk_roots(inner, m_exp - content, p, depth + 1, max_depth):
        out.append(((r0 + p * s) % mod, min(m_exp, digits + 1), mult))
    return out


def _disk_roots(coeffs: list[int], m_exp: int, p: int, depth: int, max_depth: int):
    """Z_p roots of an integer polynomial certified mod p^m_exp.

    Yields (root mod p^m_exp, certified digits, multiplicity).  depth counts
    disk subdivisions t = r0 + p*s; beyond max_depth a residue cluster is
    declared unsplit.  A block of leading coefficients that vanish at the full
    certified modulus is an exact root at the disk center, with multiplicity
    the block length; off-center multiple roots are certified by
    _exact_multiple_probe inside the collision branch.
    """
    if depth > max_depth:
        raise NotSplitAtPrecision(f"root cluster not separated within depth {max_depth}")
    mod = p**m_exp
    coeffs = [c % mod for c in coeffs]
    out = []
    mu = 0
    while mu < len(coeffs) - 1 and coeffs[mu] == 0:
        mu += 1
    if mu > 0:
        lead_v = _vp(coeffs[mu], p) if coeffs[mu] % mod else 0
        digits = max(1, (m_exp - lead_v + mu - 1) // mu)
        out.append((0, digits, mu))
        coeffs = coeffs[mu:]
    if len(coeffs) <= 1:
        return out
    cbar = [c % p for c in coeffs]
    dbar = [c % p for c in _int_poly_derive(coeffs)]
    for r0 in range(p):
        if _int_poly_eval(cbar, r0, p) != 0:
            continue
        if _int_poly_eval(dbar, r0, p) != 0:
            out.append((_simple_lift(coeffs, r0, p, m_exp), m_exp, 1))
            continue
        out.extend(_collision_roots(coeffs, r0, p, m_exp, depth, max_depth))
    return out


def hensel_roots(
    coeffs: list[PadicScalar], target_digits: int | None = None
) -> list[tuple[PadicScalar, int]]:
    """All Q_p roots of a polynomial, with multiplicities.

    Args:
        coeffs: ascending coefficients, not all zero.
        target_digits: certified digits wanted per root (default: context
            precision; never more than the joint certified precision of the
            coefficients allows).

    Returns:
        List of (root, multiplicity) sorted by valuation then unit, with the
        multiplicities summing to the full degree: a polynomial that does not
        split over Q_p at working precision raises NotSplitAtPrecision, whether
        the obstruction is a fractional Newton slope (ramified factor), a
        rootless residue polynomial (unramified extension), or a residue
        cluster the depth budget cannot separate.
    """
    nonzero = [c for c in coeffs if not c.is_zero]
    if not nonzero:
        raise ValueError("zero polynomial")
    ctx = nonzero[0].ctx
    p = ctx.p
    want = ctx.precision if target_digits is None else target_digits
    lead_zeros = 0
    while coeffs[lead_zeros].is_zero:
        lead_zeros += 1
    work = list(coeffs[lead_zeros:])
    while work and work[-1].is_zero:
        work.pop()
    deg = len(work) - 1
    out: list[tuple[PadicScalar, int]] = []
    if lead_zeros:
        out.append((ctx.zero(), lead_zeros))
    if deg < 1:
        _sort_roots(out)
        return out
    vals = [None if c.is_zero else c.v for c in work]
    units = [0 if c.is_zero else c.unit for c in work]
    certs = [0 if c.is_zero else c.digits for c in work]
    points = [(i, v) for i, v in enumerate(vals) if v is not None]
    max_depth = 2 * ctx.precision
    for _i0, _i1, slope in _newton_slopes(points):
        if slope.denominator != 1:
            raise NotSplitAtPrecision(
                f"Newton slope {slope} is fractional: roots lie in a ramified extension"
            )
        w = -int(slope)
        exps = [vals[i] + w * i for i in range(deg + 1) if vals[i] is not None]
        content = min(exps)
        # joint certified modulus of the scaled integer coefficients
        m_exp = min(
            certs[i] + vals[i] + w * i - content
            for i in range(deg + 1)
            if vals[i] is not None
        )
        if m_exp < 1:
            raise NotSplitAtPrecision("coefficients carry no joint certified digits")
        big = p**m_exp
        ints = []
        for i in range(deg + 1):
            if vals[i] is None:
                ints.append(0)
            else:
                ints.append(units[i] * p ** (vals[i] + w * i - content) % big)
        cbar = [c % p for c in ints]
        dbar = [c % p for c in _int_poly_derive(ints)]
        for r0 in range(1, p):
            if _int_poly_eval(cbar, r0, p) != 0:
                continue
            if _int_poly_eval(dbar, r0, p) != 0:
                x = _simple_lift(ints, r0, p, m_exp)
                d = min(want, m_exp)
                out.append((PadicScalar._raw(ctx, w, x % ctx.modulus, d), 1))
                continue
            for x, xdigits, mult in _collision_roots(ints, r0, p, m_exp, 0, max_depth):
                d = max(1, min(want, xdigits))
                out.append((PadicScalar._raw(ctx, w, x % ctx.modulus, d), mult))
    total = sum(m for _, m in out)
    if total != deg + lead_zeros:
        raise NotSplitAtPrecision(
            f"found {total} of {deg + lead_zeros} roots: an irreducible factor remains"
        )
    _sort_roots(out)
    return out


def _sort_roots(roots: list[tuple[PadicScalar, int]]) -> None:
    roots.sort(key=lambda rm: (rm[0].valuation(), 0 if rm[0].is_zero else rm[0].unit))


# ---- kernels and Z_p module bases -------------------------------------------


def nullspace(m: PadicMatrix) -> list[list[PadicScalar]]:
    """Basis of ker(m) at working precision, content-normalized.

    Entries whose certified digits fully cancel during elimination are treated
    as zero: the kernel at precision is exactly the set of directions the
    certified digits cannot distinguish from null directions.
    """
    ctx = m.ctx
    n = m.dim
    work = [list(r) for r in m.rows]
    pivot_cols: list[int] = []
    pivot_rows: list[int] = []
    used_rows: set[int] = set()
    while True:
        piv, best = None, None
        for i in range(n):
            if i in used_rows:
                continue
            for j in range(n):
                if j in pivot_cols:
                    continue
                a = work[i][j]
                if not a.is_zero and (best is None or a.v < best):
                    piv, best = (i, j), a.v
        if piv is None:
            break
        pi, pj = piv
        used_rows.add(pi)
        pivot_rows.append(pi)
        pivot_cols.append(pj)
        inv = work[pi][pj].inverse()
        work[pi] = [inv * a for a in work[pi]]
        for i in range(n):
            if i == pi:
                continue
            f = work[i][pj]
            if f.is_zero:
                continue
            new_row = []
            for a, b in zip(work[i], work[pi]):
                t = f * b
                new_row.append(a if t.is_zero else _add_lenient(a, -t))
            work[i] = new_row
    basis = []
    for j in range(n):
        if j in pivot_cols:
            continue
        vec = [ctx.zero()] * n
        vec[j] = ctx.one()
        for pr, pc in zip(pivot_rows, pivot_cols):
            a = work[pr][j]
            if not a.is_zero:
                vec[pc] = -a
        basis.append(_content_normalize(vec))
    return basis


def _content_normalize(vec: list[PadicScalar]) -> list[PadicScalar]:
    """Scale a vector by a power of p so its minimal entry valuation is 0."""
    vals = [a.v for a in vec if not a.is_zero]
    if not vals:
        return vec
    shift = min(vals)
    if shift == 0:
        return vec
    ctx = vec[0].ctx
    c = PadicScalar._raw(ctx, -shift, 1, ctx.precision)
    return [c * a for a in vec]


def zp_module_basis(vectors: list[list[PadicScalar]]) -> list[list[PadicScalar]]:
    """Z_p-basis of (Q_p-span of the inputs) cap (integral lattice).

    Full Gauss-Jordan with global minimal-valuation pivoting (ties row-major),
    then each surviving row scaled to content 0.  Minimal pivoting guarantees
    each pivot ends at the minimal valuation of its final row, so after
    scaling the pivots are units: the coordinates of any integral vector of
    the span (its pivot-column entries over the unit pivots) are integral,
    which is the Z_p-basis property.
    """
    if not vectors:
        return []
    width = len(vectors[0])
    if any(len(v) != width for v in vectors):
        raise ValueError("ragged vector list")
    work = [list(v) for v in vectors]
    pivot_cols: list[int] = []
    used_rows: set[int] = set()
    order: list[int] = []
    while True:
        piv, best = None, None
        for i in range(len(work)):
            if i in used_rows:
                continue
            for j in range(width):
                if j in pivot_cols:
                    continue
                a = work[i][j]
                if not a.is_zero and (best is None or a.v < best):
                    piv, best = (i, j), a.v
        if piv is None:
            break
        pi, pj = piv
        used_rows.add(pi)
        order.append(pi)
        pivot_cols.append(pj)
        inv = work[pi][pj].inverse()
        for i in range(len(work)):
            if i == pi:
                continue
            f = work[i][pj]
            if f.is_zero:
                continue
            mult = f * inv
            new_row = []
            for a, b in zip(work[i], work[pi]):
                t = mult * b
                new_row.append(a if t.is_zero else _add_lenient(a, -t))
            work[i] = new_row
    return [_content_normalize(work[i]) for i in order]
