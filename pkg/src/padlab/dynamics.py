"""Horospherical structure of conjugation dynamics on congruence balls.

For a group element a, the adjoint map Ad(a): X -> a X a^-1 acts on the Lie
algebra; when it diagonalizes over Q_p with some eigenvalue off the unit
circle, the algebra splits into stable (|lambda| < 1), neutral (|lambda| = 1)
and unstable (|lambda| > 1) eigenlines.  Everything downstream is bookkeeping
on the valuations nu_i = v_p(lambda_i) of the stable eigenvalues: entropy,
Bowen ball shapes, partition atoms, and the module character all reduce to
the total contraction |nu| = sum nu_i.

The Bowen counting oracle deliberately has two routes.  FACTORED reads counts
off the eigenvalue valuations.  FULL enumerates actual lattice points and
tests window membership by integer conjugation with a itself, never touching
the eigendata, so agreement of the two is a meaningful check.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    BudgetExceeded,
    DomainError,
    LevelTooSmall,
    NoHyperbolicity,
    NotDiagonalizable,
    NotSplitAtPrecision,
)
from .liegroup import (
    GroupSpec,
    _build_coordinate_solver,
    _combination_matches,
    _mat_add_lenient,
    _mat_sub_lenient,
    _solve_coordinates,
    exp,
)
from .matrix import PadicMatrix, hensel_roots, nullspace, zp_module_basis
from .scalar import PadicContext, PadicScalar

ORACLE_POINT_BUDGET = 1 << 25


@dataclass(frozen=True)
class HorosphericalDecomposition:
    """Eigenline data of Ad(a) on a group's algebra.

    basis[i] is an integral, content-0 algebra element spanning an eigenline
    of eigenvalue eigenvalues[i]; classes[i] is "STABLE", "NEUTRAL" or
    "UNSTABLE" by the sign of v_p(eigenvalues[i]); nu[i] is that valuation.
    Lines are sorted by (valuation, unit lift) of the eigenvalue, repeated
    eigenvalues contiguous.  nu_total is the summed stable contraction.
    """

    a: PadicMatrix
    group: GroupSpec
    eigenvalues: tuple
    basis: tuple
    classes: tuple
    nu: tuple
    nu_total: int
    lattice_defect: int
    _solver: tuple

    @property
    def ctx(self) -> PadicContext:
        return self.group.ctx

    def coordinates(self, x: PadicMatrix, verify: bool = False):
        """Coordinates of x in the eigenbasis; None if verify finds x outside."""
        coords = _solve_coordinates(self._solver, x)
        if verify and not _combination_matches(self.basis, coords, x):
            return None
        return coords

    def combination(self, coords) -> PadicMatrix:
        acc = PadicMatrix.zeros(self.ctx, self.a.dim)
        for c, b in zip(coords, self.basis):
            if not c.is_zero:
                acc = _mat_add_lenient(acc, b.scale(c))
        return acc

    def max_exponent(self) -> int:
        """max |v_p(lambda)| over all eigenlines (0 when none are hyperbolic)."""
        return max((abs(v) for v in self.nu), default=0)


@dataclass(frozen=True)
class AdaptedBall:
    """Product of coordinate balls: {X : v_p(coordinate_i) >= levels[i]}."""

    dec: HorosphericalDecomposition
    levels: tuple
    k: int
    n: int

    def contains_algebra(self, x: PadicMatrix) -> bool:
        coords = self.dec.coordinates(x, verify=True)
        if coords is None:
            return False
        for c, lvl in zip(coords, self.levels):
            if not c.is_zero and c.v < lvl:
                return False
        return True

    def contains_group(self, g: PadicMatrix) -> bool:
        from .liegroup import log

        try:
            return self.contains_algebra(log(g))
        except DomainError:
            return False


def decompose(a: PadicMatrix, spec: GroupSpec) -> HorosphericalDecomposition:
    """Diagonalize Ad(a) on spec's algebra and classify its eigenlines.

    Raises NotDiagonalizable when the characteristic polynomial of Ad(a) does
    not split over Q_p at working precision or an eigenspace comes up short,
    NoHyperbolicity when every eigenvalue is a unit, and DomainError when a
    fails to normalize the algebra.
    """
    ctx = spec.ctx
    dim_g = len(spec.lie_basis)
    a_inv = a.inverse()
    cols = []
    for b in spec.lie_basis:
        image = a @ b @ a_inv
        co = spec.algebra_coordinates(image, verify=True)
        if co is None:
            raise DomainError("a does not normalize the algebra")
        cols.append(co)
    ad_mat = PadicMatrix(
        ctx, [[cols[j][i] for j in range(dim_g)] for i in range(dim_g)]
    )
    try:
        roots = hensel_roots(ad_mat.char_poly())
    except NotSplitAtPrecision as err:
        raise NotDiagonalizable(f"adjoint spectrum does not split: {err}") from err

    eigenvalues: list[PadicScalar] = []
    basis: list[PadicMatrix] = []
    classes: list[str] = []
    nu: list[int] = []
    for lam, mult in roots:
        # entries of Ad carry fewer than full digits, so subtracting an exact
        # eigenvalue can cancel every certified digit; the kernel computation
        # treats those as zero at working precision
        shifted = _mat_sub_lenient(ad_mat, PadicMatrix.identity(ctx, dim_g).scale(lam))
        kernel = nullspace(shifted)
        if len(kernel) != mult:
            raise NotDiagonalizable(
                f"eigenvalue with multiplicity {mult} has only "
                f"{len(kernel)} independent eigenvectors"
            )
        flats = []
        for vec in kernel:
            mat = spec.lie_basis[0].scale(vec[0])
            for c, b in zip(vec[1:], spec.lie_basis[1:]):
                if not c.is_zero:
                    mat = _mat_add_lenient(mat, b.scale(c))
            flats.append(mat.flat())
        v_lam = lam.valuation()
        cls = "STABLE" if v_lam > 0 else ("UNSTABLE" if v_lam < 0 else "NEUTRAL")
        for flat in zp_module_basis(flats):
            eigenvalues.append(lam)
            basis.append(PadicMatrix.from_flat(ctx, a.dim, flat))
            classes.append(cls)
            nu.append(int(v_lam))
    if len(basis) != dim_g:
        raise NotDiagonalizable("eigenlines do not span the algebra")
    nu_total = sum(v for v in nu if v > 0)
    if nu_total == 0:
        raise NoHyperbolicity("every adjoint eigenvalue is a p-adic unit")

    solver = _build_coordinate_solver(ctx, [b.flat() for b in basis])
    _, inv = solver
    # the solver picks pivots at globally minimal valuation, so the selected
    # submatrix determinant valuation is the Smith index of the eigenlattice
    # sum inside the full integral lattice; its inverse negates the valuation
    det = inv.det()
    defect = max(0, -int(det.valuation()))
    return HorosphericalDecomposition(
        a=a,
        group=spec,
        eigenvalues=tuple(eigenvalues),
        basis=tuple(basis),
        classes=tuple(classes),
        nu=tuple(nu),
        nu_total=nu_total,
        lattice_defect=defect,
        _solver=solver,
    )


def entropy(dec: HorosphericalDecomposition) -> float:
    """Entropy of the conjugation map for Haar measure: |nu| ln p."""
    return dec.nu_total * math.log(dec.ctx.p)


def mod_character(dec: HorosphericalDecomposition) -> Fraction:
    """Module of the expanding action: p^|nu|."""
    return Fraction(dec.ctx.p**dec.nu_total)


def min_partition_level(dec: HorosphericalDecomposition) -> int:
    """Smallest level whose congruence partition separates the atoms."""
    return dec.nu_total + 2


def _require_ball_level(dec: HorosphericalDecomposition, k: int) -> None:
    least = max(2, dec.max_exponent() + 2)
    if k < least:
        raise LevelTooSmall(f"ball level {k} below the adapted minimum {least}")


def bowen_ball(dec: HorosphericalDecomposition, k: int, n: int) -> AdaptedBall:
    """Adapted ball of the points staying k-close for time 0..n.

    Membership of X for the window means a^l exp(X) a^-l stays in the level-k
    ball for 0 <= l <= n; on the unstable line i that costs n|nu_i| extra
    digits, elsewhere nothing.
    """
    _require_ball_level(dec, k)
    if n < 1:
        raise DomainError("window length must be >= 1")
    levels = tuple(
        k + n * (-v) if cls == "UNSTABLE" else k
        for cls, v in zip(dec.classes, dec.nu)
    )
    return AdaptedBall(dec=dec, levels=levels, k=k, n=n)


def bowen_volume_ratio(dec: HorosphericalDecomposition, n: int) -> Fraction:
    """Haar volume of the length-n Bowen ball relative to length 1."""
    if n < 1:
        raise DomainError("window length must be >= 1")
    return Fraction(1, dec.ctx.p ** ((n - 1) * dec.nu_total))


def _fraction_inverse(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    d = len(mat)
    aug = [row[:] + [Fraction(int(i == j)) for j in range(d)] for i, row in enumerate(mat)]
    for col in range(d):
        piv = next((r for r in range(col, d) if aug[r][col] != 0), None)
        if piv is None:
            raise DomainError("matrix is singular over the rationals")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(d):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[d:] for row in aug]


def _integerize(mat: list[list[Fraction]], p: int) -> tuple[list[list[int]], int]:
    """Write mat = p^-s * M with M integral, minimizing s over p-powers."""
    s = 0
    for row in mat:
        for x in row:
            den = x.denominator
            t = 0
            while den % p == 0:
                den //= p
                t += 1
            if den != 1:
                raise DomainError("entries must have p-power denominators")
            s = max(s, t)
    scaled = [[int(x * p**s) for x in row] for row in mat]
    return scaled, s


def bowen_count_oracle(
    dec: HorosphericalDecomposition, k: int, n: int, level: int, mode: str
) -> "BowenCounts":
    """Count lattice points of successive Bowen windows modulo p^level.

    For window length m the count is #{X in K_k/K_level :
    a^l X a^-l in K_k for 0 <= l < m}; counts are reported for m = 1..n and
    count_n/count_1 must equal the volume ratio p^(-(n-1)|nu|).

    mode FACTORED multiplies per-eigenline digit counts (valid when the
    eigenbasis spans the full integral lattice, lattice_defect == 0).  mode
    FULL enumerates coordinate tuples as numpy integers and conjugates by a
    directly, without the eigendata; it assumes the algebra's standard basis
    splits the entry lattice (true for the sl and gl families) and refuses
    enumerations beyond 2^25 points.
    """
    _require_ball_level(dec, k)
    if n < 1:
        raise DomainError("window length must be >= 1")
    if level <= k + (n - 1) * dec.max_exponent():
        raise LevelTooSmall(
            f"lattice level {level} cannot resolve a length-{n} window at k={k}"
        )
    key = mode.strip().upper()
    if key == "FACTORED":
        return _count_factored(dec, k, n, level)
    if key == "FULL":
        return _count_full(dec, k, n, level)
    raise ValueError(f"unknown oracle mode: {mode!r}")


@dataclass(frozen=True)
class BowenCounts:
    mode: str
    level: int
    counts: tuple
    ratios: tuple


def _count_factored(dec, k, n, level) -> BowenCounts:
    if dec.lattice_defect != 0:
        raise DomainError(
            "factored counting needs an eigenbasis spanning the full lattice"
        )
    p = dec.ctx.p
    counts = []
    for m in range(1, n + 1):
        total = 1
        for cls, v in zip(dec.classes, dec.nu):
            req = k + (m - 1) * (-v) if cls == "UNSTABLE" else k
            total *= p ** max(0, level - req)
        counts.append(total)
    ratios = tuple(Fraction(c, counts[0]) for c in counts)
    return BowenCounts("FACTORED", level, tuple(counts), ratios)


def _oracle_chunks(total: int) -> int:
    threads = os.environ.get("PADLAB_THREADS", "1")
    try:
        t = max(1, int(threads))
    except ValueError:
        t = 1
    # fixed partition per thread count: deterministic merge order either way
    return min(total, max(t, (total + (1 << 18) - 1) >> 18))


def _lift_mod(x: PadicScalar, modulus: int) -> int:
    fr = x.as_rational()
    return int(fr.numerator) * pow(int(fr.denominator), -1, modulus) % modulus


def _count_full(dec, k, n, level) -> BowenCounts:
    ctx = dec.ctx
    p, d = ctx.p, dec.a.dim
    spec = dec.group
    dim_g = len(spec.lie_basis)
    radius = p ** (level - k)
    total = radius**dim_g
    if total > ORACLE_POINT_BUDGET:
        raise BudgetExceeded(
            f"full oracle needs {total} points, budget {ORACLE_POINT_BUDGET}"
        )

    a_frac = [[x.as_rational() for x in row] for row in dec.a.rows]
    a_num, s_a = _integerize(a_frac, p)
    inv_num, s_inv = _integerize(_fraction_inverse(a_frac), p)
    shift = s_a + s_inv
    mod_exp = k + (n - 1) * shift
    if mod_exp > level:
        raise LevelTooSmall(
            f"window conjugation needs p^{mod_exp} resolution, lattice has p^{level}"
        )
    modulus = p**mod_exp
    if modulus > 1 << 20 or d * d * modulus * modulus > 1 << 62:
        raise BudgetExceeded("conjugation modulus too large for 64-bit counting")

    basis_flat = np.array(
        [[_lift_mod(x, modulus) for x in b.flat()] for b in spec.lie_basis],
        dtype=np.int64,
    )  # (dim_g, d*d)
    a_arr = np.array(a_num, dtype=np.int64) % modulus
    inv_arr = np.array(inv_num, dtype=np.int64) % modulus

    counts = np.zeros(n, dtype=np.int64)
    pk = p**k
    n_chunks = _oracle_chunks(total)
    chunk = (total + n_chunks - 1) // n_chunks
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        digits = np.empty((idx.size, dim_g), dtype=np.int64)
        rest = idx.copy()
        for j in range(dim_g):
            digits[:, j] = rest % radius
            rest //= radius
        flat = (digits @ basis_flat) % modulus  # X / p^k, mod p^mod_exp
        x_mat = (flat.reshape(-1, d, d) * pk) % modulus
        alive = np.ones(idx.size, dtype=bool)
        counts[0] += idx.size  # window m=1 is the whole level-k lattice
        z = x_mat
        for m in range(2, n + 1):
            z = np.einsum("ij,njk,kl->nil", a_arr, z, inv_arr) % modulus
            need = p ** (k + (m - 1) * shift)
            alive &= np.all(z % need == 0, axis=(1, 2))
            counts[m - 1] += int(alive.sum())
    out = tuple(int(c) for c in counts)
    ratios = tuple(Fraction(c, out[0]) for c in out)
    return BowenCounts("FULL", level, out, ratios)


def atom_representatives(dec: HorosphericalDecomposition, k: int) -> list[PadicMatrix]:
    """Coset representatives exp(sum_i c_i p^(k - nu_i) u_i) over the stable
    lines, c_i ranging over residues mod p^nu_i: p^|nu| group elements that
    are pairwise distinct modulo the level-k ball."""
    least = min_partition_level(dec)
    if k < least:
        raise LevelTooSmall(f"partition level {k} below the minimum {least}")
    ctx = dec.ctx
    stable = [
        (v, b) for v, b, cls in zip(dec.nu, dec.basis, dec.classes) if cls == "STABLE"
    ]
    reps: list[PadicMatrix] = []
    combos = [[]]
    for v, _ in stable:
        combos = [c + [r] for c in combos for r in range(ctx.p**v)]
    for digits in combos:
        x = PadicMatrix.zeros(ctx, dec.a.dim)
        for (v, b), c in zip(stable, digits):
            if c:
                x = _mat_add_lenient(x, b.scale(ctx.from_rational(c * ctx.p ** (k - v))))
        reps.append(exp(x))
    return reps
