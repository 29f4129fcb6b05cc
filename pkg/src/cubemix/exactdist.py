"""Exact distributions of weight-lumped walks, and their distances.

Started at the origin, the k-flip walk's distribution is a function of
Hamming weight only, so the full 2^n-state chain lumps to an (n+1)-state
birth-death-like chain: from weight w, flipping a k-set that hits the
current support in i places moves to w + k - 2i with hypergeometric
probability.  The same lumping carries the coupling analysis and the
touched-coordinate chain of the (Z/mZ)^n walk.

Exact evolution keeps integer numerators over the common denominator
(step_denominator)^l; Fractions are materialized only at the boundary.
This avoids the per-addition gcd work of Fraction arithmetic, which
dominates runtime for hundreds of steps.  Float kernels are dense numpy
matrices and are intended for walks beyond EXACT_BACKEND_MAX_N.

brute_force_dist evolves the full 2^n-state distribution without any
lumping assumption and exists to certify the lumped chain against direct
enumeration.  sum_{|s|=k} f(x xor s) is accumulated coordinate by
coordinate (an exact regrouping of the naive subset sum), which keeps the
n <= 14 regime tractable at fifty steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .krawtchouk import kraw_integer_table
from .numerics import (
    EXACT_BACKEND_MAX_N,
    binom_row,
    hypergeom_numerators,
    log_binom,
)
from .spectrum import CyclicWalkSpec, WalkSpec


class WeightDistribution:
    """Distribution over Hamming weights 0..n, exact or float backed."""

    __slots__ = ("n", "exact", "nums", "den", "vec")

    def __init__(self, n, *, nums=None, den=None, vec=None):
        self.n = n
        if nums is not None:
            if den is None or den <= 0:
                raise ValueError("exact WeightDistribution needs a positive denominator")
            if len(nums) != n + 1:
                raise ValueError(f"expected {n + 1} entries, got {len(nums)}")
            if sum(nums) != den:
                raise ValueError("exact WeightDistribution does not sum to 1")
            if any(v < 0 for v in nums):
                raise ValueError("negative mass in WeightDistribution")
            self.exact = True
            self.nums = list(nums)
            self.den = den
            self.vec = None
        else:
            v = np.asarray(vec, dtype=float)
            if v.shape != (n + 1,):
                raise ValueError(f"expected shape ({n + 1},), got {v.shape}")
            if abs(float(v.sum()) - 1.0) > 1e-9:
                raise ValueError("float WeightDistribution does not sum to 1")
            self.exact = False
            self.nums = None
            self.den = None
            self.vec = v

    @classmethod
    def delta(cls, n: int, w: int = 0) -> "WeightDistribution":
        nums = [0] * (n + 1)
        nums[w] = 1
        return cls(n, nums=nums, den=1)

    @classmethod
    def binomial(cls, n: int) -> "WeightDistribution":
        """Weight profile of the uniform distribution on {0,1}^n."""
        return cls(n, nums=list(binom_row(n)), den=1 << n)

    @classmethod
    def from_fractions(cls, probs) -> "WeightDistribution":
        probs = [Fraction(p) for p in probs]
        den = math.lcm(*(p.denominator for p in probs))
        return cls(len(probs) - 1, nums=[p.numerator * (den // p.denominator) for p in probs], den=den)

    @classmethod
    def from_floats(cls, vec) -> "WeightDistribution":
        return cls(len(vec) - 1, vec=vec)

    def prob(self, w: int):
        if self.exact:
            return Fraction(self.nums[w], self.den)
        return float(self.vec[w])

    @property
    def probs(self):
        if self.exact:
            return tuple(Fraction(v, self.den) for v in self.nums)
        return self.vec.copy()

    def to_float(self) -> "WeightDistribution":
        if not self.exact:
            return self
        d = float(self.den)
        return WeightDistribution(self.n, vec=[v / d for v in self.nums])


class WeightKernel:
    """Row-stochastic kernel on weights 0..n.

    Exact backend: rows[w] maps target -> integer numerator, all rows over
    the single denominator den.  Float backend: dense (n+1)^2 matrix.
    """

    __slots__ = ("n", "kind", "meta", "exact", "rows", "den", "matrix")

    def __init__(self, n, kind, *, rows=None, den=None, matrix=None, meta=None):
        self.n = n
        self.kind = kind
        self.meta = dict(meta or {})
        if rows is not None:
            if den is None or den <= 0:
                raise ValueError("exact WeightKernel needs a positive denominator")
            for w, row in enumerate(rows):
                if sum(row.values()) != den:
                    raise ValueError(f"kernel row {w} does not sum to 1")
                if any(c < 0 for c in row.values()):
                    raise ValueError(f"negative entry in kernel row {w}")
            self.exact = True
            self.rows = rows
            self.den = den
            self.matrix = None
        else:
            mat = np.asarray(matrix, dtype=float)
            if mat.shape != (n + 1, n + 1):
                raise ValueError(f"expected shape ({n + 1},{n + 1}), got {mat.shape}")
            if not np.allclose(mat.sum(axis=1), 1.0, atol=1e-9):
                raise ValueError("float kernel rows do not sum to 1")
            self.exact = False
            self.rows = None
            self.den = None
            self.matrix = mat

    def row_fractions(self, w: int) -> dict[int, Fraction]:
        if not self.exact:
            raise ValueError("row_fractions is only defined on the exact backend")
        return {t: Fraction(c, self.den) for t, c in self.rows[w].items()}

    def to_float(self) -> "WeightKernel":
        if not self.exact:
            return self
        mat = np.zeros((self.n + 1, self.n + 1))
        d = float(self.den)
        for w, row in enumerate(self.rows):
            for t, c in row.items():
                mat[w, t] = c / d
        return WeightKernel(self.n, self.kind, matrix=mat, meta=self.meta)


def flip_weight_kernel(spec: WalkSpec, exact: bool | None = None) -> WeightKernel:
    """Weight-lumped kernel of the lazy k-flip walk.

    From weight w: hold with probability p, else move to w + k - 2i where i
    is hypergeometric (i of the k flipped coordinates land on the current
    support).
    """
    n, k, p = spec.n, spec.k, spec.p
    if exact is None:
        exact = n <= EXACT_BACKEND_MAX_N
    if exact:
        a, q = p.numerator, p.denominator
        C = math.comb(n, k)
        den = q * C
        rows = []
        for w in range(n + 1):
            row = {w: a * C} if a else {}
            for i, c in hypergeom_numerators(n, w, k).items():
                t = w + k - 2 * i
                row[t] = row.get(t, 0) + (q - a) * c
            rows.append(row)
        return WeightKernel(n, "flip", rows=rows, den=den, meta={"k": k, "p": p})
    pf = float(p)
    mat = np.zeros((n + 1, n + 1))
    logC = log_binom(n, k).log_value
    for w in range(n + 1):
        mat[w, w] += pf
        for i in range(max(0, k - (n - w)), min(w, k) + 1):
            pr = math.exp(
                log_binom(w, i).log_value + log_binom(n - w, k - i).log_value - logC
            )
            mat[w, w + k - 2 * i] += (1.0 - pf) * pr
    return WeightKernel(n, "flip", matrix=mat, meta={"k": k, "p": p})


def evolve(dist: WeightDistribution, kernel: WeightKernel, steps: int) -> WeightDistribution:
    """dist . kernel^steps, in the backend shared by both arguments.

    Mixing backends converts the exact argument down to floats first.
    """
    if steps < 0:
        raise ValueError(f"evolve requires steps >= 0, got {steps}")
    if dist.n != kernel.n:
        raise ValueError(f"size mismatch: distribution n={dist.n}, kernel n={kernel.n}")
    if dist.exact and kernel.exact:
        nums = dist.nums
        den = dist.den
        n = dist.n
        for _ in range(steps):
            new = [0] * (n + 1)
            for w, v in enumerate(nums):
                if v:
                    for t, c in kernel.rows[w].items():
                        new[t] += v * c
            nums = new
            den *= kernel.den
        return WeightDistribution(dist.n, nums=nums, den=den)
    vec = dist.to_float().vec
    mat = kernel.to_float().matrix
    for _ in range(steps):
        vec = vec @ mat
    return WeightDistribution(dist.n, vec=vec)


def _uniform_weight_float(n: int) -> np.ndarray:
    ln2n = n * math.log(2.0)
    return np.array([math.exp(log_binom(n, w).log_value - ln2n) for w in range(n + 1)])


def tv_to_uniform(dist: WeightDistribution):
    """TV distance between the lifted cube distribution and uniform on 2^n.

    The lift places dist(w)/C(n,w) on each configuration of weight w, which
    is the law of the walk started at the origin; the TV reduces to
    (1/2) sum_w |dist(w) - C(n,w)/2^n|.
    """
    n = dist.n
    if dist.exact:
        scale = 1 << n
        mult = binom_row(n)
        s = sum(abs(v * scale - mult[w] * dist.den) for w, v in enumerate(dist.nums))
        return Fraction(s, 2 * dist.den * scale)
    ref = _uniform_weight_float(n)
    return 0.5 * math.fsum(abs(float(v) - r) for v, r in zip(dist.vec, ref))


def l2_to_uniform(dist: WeightDistribution):
    """Chi-square distance |G| sum (P(x) - 1/|G|)^2 of the lifted law."""
    n = dist.n
    mult = binom_row(n)
    if dist.exact:
        scale = 1 << n
        d2 = dist.den * dist.den
        s = sum(Fraction(v * v, mult[w]) for w, v in enumerate(dist.nums) if v)
        return Fraction(scale, 1) * s / d2 - 1
    ln2n = n * math.log(2.0)
    terms = []
    for w, v in enumerate(dist.vec):
        fv = float(v)
        if fv:
            terms.append(fv * fv * math.exp(ln2n - log_binom(n, w).log_value))
    return math.fsum(terms) - 1.0


BRUTE_FORCE_MAX_N = 14


@dataclass(frozen=True)
class FullDistribution:
    """Exact distribution over all 2^n configurations (numerators / den)."""

    n: int
    nums: tuple[int, ...]
    den: int

    def prob(self, x: int) -> Fraction:
        return Fraction(self.nums[x], self.den)

    def weight_marginal(self) -> WeightDistribution:
        marg = [0] * (self.n + 1)
        for x, v in enumerate(self.nums):
            if v:
                marg[x.bit_count()] += v
        return WeightDistribution(self.n, nums=marg, den=self.den)

    def tv_to_uniform(self) -> Fraction:
        scale = 1 << self.n
        s = sum(abs(v * scale - self.den) for v in self.nums)
        return Fraction(s, 2 * self.den * scale)


def brute_force_dist(spec: WalkSpec, l: int) -> FullDistribution:
    """Distribution of the walk after l steps by full-state evolution.

    No weight symmetry is assumed: the step operator is applied to all 2^n
    states.  Guarded to n <= BRUTE_FORCE_MAX_N.
    """
    n, k, p = spec.n, spec.k, spec.p
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute_force_dist is limited to n <= {BRUTE_FORCE_MAX_N}, got n={n}")
    if l < 0:
        raise ValueError(f"brute_force_dist requires l >= 0, got l={l}")
    a, q = p.numerator, p.denominator
    C = math.comb(n, k)
    hold_num = a * C
    move_num = q - a
    N = 1 << n
    nums = [0] * N
    nums[0] = 1
    den = 1
    for _ in range(l):
        flip_sum = _subset_flip_sum(nums, n, k)
        nums = [hold_num * v + move_num * t for v, t in zip(nums, flip_sum)]
        den *= q * C
    return FullDistribution(n, tuple(nums), den)


def brute_force_curve(spec: WalkSpec, lmax: int):
    """Yield (l, FullDistribution) for l = 0..lmax, stepping once per l.

    Same state evolution as brute_force_dist without recomputing the prefix
    for every l; intended for oracle sweeps over whole curves.
    """
    n, k, p = spec.n, spec.k, spec.p
    if n > BRUTE_FORCE_MAX_N:
        raise ValueError(f"brute_force_curve is limited to n <= {BRUTE_FORCE_MAX_N}, got n={n}")
    if lmax < 0:
        raise ValueError(f"brute_force_curve requires lmax >= 0, got {lmax}")
    a, q = p.numerator, p.denominator
    C = math.comb(n, k)
    hold_num = a * C
    move_num = q - a
    nums = [0] * (1 << n)
    nums[0] = 1
    den = 1
    yield 0, FullDistribution(n, tuple(nums), den)
    for l in range(1, lmax + 1):
        flip_sum = _subset_flip_sum(nums, n, k)
        nums = [hold_num * v + move_num * t for v, t in zip(nums, flip_sum)]
        den *= q * C
        yield l, FullDistribution(n, tuple(nums), den)


def _subset_flip_sum(nums: list[int], n: int, k: int) -> list[int]:
    """[sum over |s| = k of nums[x xor s] for each x], exactly.

    Processes coordinates one at a time: after m coordinates, u[j][x] is the
    sum of nums[x xor s] over the C(m,j) subsets s of the first m
    coordinates with |s| = j.  Identical to the naive subset sum, just
    regrouped; the naive version cross-checks this in the tests.
    """
    N = 1 << n
    u = [nums] + [[0] * N for _ in range(k)]
    for m in range(n):
        bit = 1 << m
        for j in range(min(k, m + 1), 0, -1):
            prev = u[j - 1]
            cur = u[j]
            u[j] = [c + prev[x ^ bit] for x, c in enumerate(cur)]
    return u[k]


FULL_MATRIX_MAX_N = 12


def full_transition_matrix(spec: WalkSpec) -> np.ndarray:
    """Dense 2^n x 2^n one-step matrix (floats), for direct diagonalization."""
    n, k = spec.n, spec.k
    if n > FULL_MATRIX_MAX_N:
        raise ValueError(f"full_transition_matrix is limited to n <= {FULL_MATRIX_MAX_N}")
    N = 1 << n
    idx = np.arange(N)
    pc = np.zeros(N, dtype=np.int64)
    x = idx.copy()
    while x.any():
        pc += x & 1
        x >>= 1
    weights = pc[np.bitwise_xor.outer(idx, idx)]
    pf = float(spec.p)
    P = (weights == k) * ((1.0 - pf) / math.comb(n, k))
    np.fill_diagonal(P, P.diagonal() + pf)
    return P


def spectral_dist(spec: WalkSpec, l: int, max_n: int = EXACT_BACKEND_MAX_N) -> WeightDistribution:
    """Exact weight distribution after l steps via character inversion.

    P^l(x) = 2^-n sum_z eigenvalue(|z|)^l (-1)^(z.x); summing characters of
    fixed weight gives integer Krawtchouk coefficients, so the whole
    inversion stays in integer arithmetic.  Exact-only by design: the
    alternating sum cancels catastrophically in floats, and the float
    regime is served by evolve() on the lumped kernel instead.
    """
    n, k, p = spec.n, spec.k, spec.p
    if n > max_n:
        raise ValueError(f"spectral_dist is exact-only and limited to n <= {max_n}, got n={n}")
    if l < 0:
        raise ValueError(f"spectral_dist requires l >= 0, got l={l}")
    a, q = p.numerator, p.denominator
    C = math.comb(n, k)
    kap = kraw_integer_table(n)
    eig_nums = [a * C + (q - a) * kap[k][j] for j in range(n + 1)]
    pw = [e**l for e in eig_nums]
    mult = binom_row(n)
    nums = []
    for w in range(n + 1):
        s = 0
        for j in range(n + 1):
            s += kap[j][w] * pw[j]
        nums.append(mult[w] * s)
    den = (q * C) ** l * (1 << n)
    return WeightDistribution(n, nums=nums, den=den)


def touched_weight_kernel(cspec: CyclicWalkSpec) -> WeightKernel:
    """Count of coordinates ever randomized; upper-triangular, absorbing at n.

    From w touched coordinates a step touches j new ones with probability
    C(n-w,j) C(w,k-j) / C(n,k).
    """
    n, k = cspec.n, cspec.k
    C = math.comb(n, k)
    rows = []
    for w in range(n + 1):
        row = {}
        for j in range(max(0, k - w), min(n - w, k) + 1):
            row[w + j] = math.comb(n - w, j) * math.comb(w, k - j)
        rows.append(row)
    return WeightKernel(n, "touched", rows=rows, den=C, meta={"k": k, "m": cspec.m})


def _touched_profile(cspec: CyclicWalkSpec, l: int) -> WeightDistribution:
    return evolve(WeightDistribution.delta(cspec.n), touched_weight_kernel(cspec), l)


def separation_tail(cspec: CyclicWalkSpec, l: int) -> Fraction:
    """P(some coordinate is still untouched after l steps), exact.

    The first time every coordinate has been randomized is a strong
    stationary time for the (Z/mZ)^n walk, so this tail dominates both
    separation and TV distance.
    """
    prof = _touched_profile(cspec, l)
    return 1 - Fraction(prof.nums[cspec.n], prof.den)


def zmn_exact_tv(cspec: CyclicWalkSpec, l: int) -> Fraction:
    """Exact TV distance to uniform on m^n after l steps.

    Conditioned on the touched set T, the position is uniform on the
    coordinates of T and zero elsewhere, so the law depends on x only
    through |support(x)| and the distance reduces to an (n+1)^2 sum.
    """
    n, m = cspec.n, cspec.m
    prof = _touched_profile(cspec, l)
    q = prof.probs
    mult = binom_row(n)
    unif = Fraction(1, m**n)
    total = Fraction(0)
    for s in range(n + 1):
        # P(x) for any x with support size s
        ps = Fraction(0)
        for w in range(s, n + 1):
            if prof.nums[w]:
                ps += q[w] * Fraction(math.comb(n - s, w - s), mult[w] * m**w)
        total += mult[s] * (m - 1) ** s * abs(ps - unif)
    return total / 2
