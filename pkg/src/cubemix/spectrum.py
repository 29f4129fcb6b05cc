"""Walk specifications and their exact spectra.

Two walks are covered.  The lazy k-flip walk on {0,1}^n holds with
probability p and otherwise flips a uniform k-subset of coordinates; its
convolution operator has eigenvalue p + (1-p) K_j(k) on the weight-j
character level, with multiplicity C(n,j).  The coordinate-randomizing walk
on (Z/mZ)^n picks a uniform k-subset and adds independent uniform digits;
its eigenvalue on a character of support size w is C(n-w,k)/C(n,k)
(independent of m), with multiplicity C(n,w)(m-1)^w.

Exact rational spectra are the default up to EXACT_BACKEND_MAX_N
coordinates; beyond that, bound evaluation switches to log-space floats
with exactly rounded accumulation (math.fsum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .krawtchouk import kraw_eval, kraw_half, kraw_table
from .numerics import EXACT_BACKEND_MAX_N, binom_row, log_binom


@dataclass(frozen=True)
class WalkSpec:
    """Lazy k-flip walk on the n-cube: hold w.p. p, else flip a k-set."""

    n: int
    k: int
    p: Fraction = Fraction(1, 2)

    def __post_init__(self):
        object.__setattr__(self, "p", Fraction(self.p))
        if self.n < 1:
            raise ValueError(f"WalkSpec requires n >= 1, got n={self.n}")
        if not (1 <= self.k <= self.n):
            raise ValueError(f"WalkSpec requires 1 <= k <= n, got k={self.k}, n={self.n}")
        if not (0 <= self.p < 1):
            raise ValueError(f"WalkSpec requires 0 <= p < 1, got p={self.p}")


@dataclass(frozen=True)
class CyclicWalkSpec:
    """k-coordinate-randomizing walk on (Z/mZ)^n."""

    n: int
    m: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"CyclicWalkSpec requires n >= 1, got n={self.n}")
        if self.m < 2:
            raise ValueError(f"CyclicWalkSpec requires m >= 2, got m={self.m}")
        if not (1 <= self.k <= self.n):
            raise ValueError(f"CyclicWalkSpec requires 1 <= k <= n, got k={self.k}")


@dataclass(frozen=True)
class SpectrumRow:
    level: int
    value: Fraction
    multiplicity: int


@dataclass(frozen=True)
class SpectrumTable:
    spec: object
    rows: tuple[SpectrumRow, ...]
    non_ergodic: bool

    def max_nontrivial_magnitude(self) -> Fraction:
        return max(abs(r.value) for r in self.rows if r.level > 0)

    def eigenvalue_multiset(self) -> list[Fraction]:
        out = []
        for r in self.rows:
            out.extend([r.value] * r.multiplicity)
        return out


def cube_eigenvalue(spec: WalkSpec, j: int) -> Fraction:
    """Eigenvalue on character level j, by the defining Krawtchouk sum."""
    return spec.p + (1 - spec.p) * kraw_eval(spec.n, j, spec.k)


def cube_spectrum(spec: WalkSpec) -> SpectrumTable:
    """All n+1 eigenvalue levels with multiplicities C(n,j).

    The non_ergodic flag is set when any nonzero level has |eigenvalue| 1:
    value 1 occurs for even k (the walk is confined to a parity coset) and
    value -1 for p = 0 with k odd (period two).
    """
    n = spec.n
    kt = kraw_table(n, spec.k)
    row_mult = binom_row(n)
    rows = tuple(
        SpectrumRow(j, spec.p + (1 - spec.p) * kt[j], row_mult[j]) for j in range(n + 1)
    )
    non_ergodic = any(abs(r.value) == 1 for r in rows[1:])
    return SpectrumTable(spec, rows, non_ergodic)


def max_nontrivial_eigenvalue_magnitude(spec: WalkSpec) -> Fraction:
    return cube_spectrum(spec).max_nontrivial_magnitude()


def l2_upper_bound(spec: WalkSpec, l: int, exact: bool | None = None):
    """sum_{j>=1} C(n,j) (p + (1-p)K_j(k))^{2l}.

    This dominates 4 TV^2 after l steps (and equals the chi-square distance
    to uniform when the walk is started at a point).  Returns a Fraction in
    the exact regime, a float otherwise.
    """
    if l < 0:
        raise ValueError(f"l2_upper_bound requires l >= 0, got l={l}")
    n = spec.n
    if exact is None:
        exact = n <= EXACT_BACKEND_MAX_N
    mult = binom_row(n)
    if exact:
        kt = kraw_table(n, spec.k)
        total = Fraction(0)
        for j in range(1, n + 1):
            eig = spec.p + (1 - spec.p) * kt[j]
            total += mult[j] * eig ** (2 * l)
        return total
    pf = float(spec.p)
    kt = _kraw_table_float(n, spec.k)
    terms = []
    for j in range(1, n + 1):
        eig = pf + (1.0 - pf) * kt[j]
        if eig == 0.0:
            continue
        terms.append(math.exp(log_binom(n, j).log_value + 2 * l * math.log(abs(eig))))
    return math.fsum(terms)


def _kraw_table_float(n: int, x: int) -> list[float]:
    vals = [1.0, (n - 2 * x) / n]
    for j in range(1, n):
        vals.append(((n - 2 * x) * vals[j] - j * vals[j - 1]) / (n - j))
    return vals


def l2_lower_bound_odd_levels(spec: WalkSpec, l: int) -> Fraction:
    """Odd-level mass surviving after l steps when k = n/2.

    At k = n/2 every odd character level has eigenvalue exactly p, so the
    l2 distance is at least sum_{j odd} C(n,j) p^{2l} = 2^{n-1} p^{2l}.
    The full sum is returned; a sometimes-quoted variant with exponent
    (n-1)/2 - 2l does not match the displayed sum and is not reproduced.
    """
    if spec.n % 2 != 0 or spec.k * 2 != spec.n:
        raise ValueError(
            f"l2_lower_bound_odd_levels requires k = n/2 with n even, got n={spec.n}, k={spec.k}"
        )
    if spec.k % 2 != 1:
        raise ValueError(f"odd-level bound needs odd k = n/2 (n = 2 mod 4), got k={spec.k}")
    return 2 ** (spec.n - 1) * spec.p ** (2 * l)


def zmn_eigenvalue(cspec: CyclicWalkSpec, w: int) -> Fraction:
    """Eigenvalue on characters of support size w; C(n-w,k)/C(n,k), m-free."""
    if not (0 <= w <= cspec.n):
        raise ValueError(f"zmn_eigenvalue domain error: w={w}, n={cspec.n}")
    n, k = cspec.n, cspec.k
    if n - w < k:
        return Fraction(0)
    return Fraction(math.comb(n - w, k), math.comb(n, k))


def zmn_spectrum(cspec: CyclicWalkSpec) -> SpectrumTable:
    n, m = cspec.n, cspec.m
    mult = binom_row(n)
    rows = tuple(
        SpectrumRow(w, zmn_eigenvalue(cspec, w), mult[w] * (m - 1) ** w) for w in range(n + 1)
    )
    return SpectrumTable(cspec, rows, non_ergodic=False)


def zmn_l2_upper_bound(cspec: CyclicWalkSpec, l: int, exact: bool | None = None):
    """sum_{w>=1} C(n,w)(m-1)^w (C(n-w,k)/C(n,k))^{2l}."""
    if l < 0:
        raise ValueError(f"zmn_l2_upper_bound requires l >= 0, got l={l}")
    n, m, k = cspec.n, cspec.m, cspec.k
    if exact is None:
        exact = n <= EXACT_BACKEND_MAX_N
    mult = binom_row(n)
    if exact:
        total = Fraction(0)
        for w in range(1, n + 1):
            eig = zmn_eigenvalue(cspec, w)
            # At l = 0 the zero eigenvalues still contribute 0^0 = 1, and the
            # sum is the full character count m^n - 1.
            if eig or l == 0:
                total += mult[w] * (m - 1) ** w * eig ** (2 * l)
        return total
    logm1 = math.log(m - 1)
    lc = math.log(math.comb(n, k))
    terms = []
    for w in range(1, n + 1):
        lw = log_binom(n, w).log_value + w * logm1
        if n - w >= k:
            le = math.log(math.comb(n - w, k)) - lc
            terms.append(math.exp(lw + 2 * l * le))
        elif l == 0:
            terms.append(math.exp(lw))
    return math.fsum(terms)


@dataclass(frozen=True)
class EigenvalueCertificate:
    """Exact certification that the half-flip spectrum is 3/4-bounded."""

    n: int
    k: int
    max_abs: Fraction
    max_abs_level: int
    bound: Fraction
    bound_holds: bool
    odd_levels_equal_p: bool
    closed_form_matches: bool
    levels_checked: int
    notes: tuple[str, ...] = field(default_factory=tuple)


def verify_eigenvalue_three_quarters(n: int) -> EigenvalueCertificate:
    """Certify max_{j>=1} |1/2 + 1/2 K_j(n/2)| <= 3/4 for n = 2 mod 4.

    Also re-derives every odd level as exactly 1/2 (the Krawtchouk value
    vanishes) and checks the closed form for K_{2i}(n/2) against the
    recurrence table, all in exact rationals.
    """
    if n % 4 != 2:
        raise ValueError(f"verify_eigenvalue_three_quarters requires n = 2 mod 4, got n={n}")
    k = n // 2
    spec = WalkSpec(n, k)
    kt = kraw_table(n, k)
    half = Fraction(1, 2)
    best = Fraction(0)
    best_level = 0
    odd_ok = True
    closed_ok = True
    for j in range(1, n + 1):
        eig = half + half * kt[j]
        if abs(eig) > best:
            best, best_level = abs(eig), j
        if j % 2 == 1 and eig != half:
            odd_ok = False
        if kraw_half(n, j) != kt[j]:
            closed_ok = False
    bound = Fraction(3, 4)
    return EigenvalueCertificate(
        n=n,
        k=k,
        max_abs=best,
        max_abs_level=best_level,
        bound=bound,
        bound_holds=best <= bound,
        odd_levels_equal_p=odd_ok,
        closed_form_matches=closed_ok,
        levels_checked=spec.n,
    )
