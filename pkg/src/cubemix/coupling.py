"""A mismatch-halving coupling for the lazy k-flip walk, with certificates.

Two copies of the walk are driven so that the number of mismatched
coordinates y = |x1 xor x2| never increases on even-y steps and is repaired
in pairs.  Per step the randomness is one fair bit plus (when moving) one
uniform k-subset, consumed in the documented order below; with y odd the
chains instead step independently (two bits, up to two subsets) until parity
is fixed.

Even y, move bit set, subset S drawn, a = |S intersect mismatches|:

  * a > y/2: both chains flip S (no progress, y unchanged);
  * a <= y/2: x1 flips S; x2 flips the matched members of S plus, for each
    mismatched member, a partner mismatched index chosen by scanning upward
    cyclically.  Each such pair repairs two mismatches: y drops by 2a.

The y-process is Markov (transition law depends on y alone), which yields
an exact absorbing (n+1)-state kernel; P(T > l) from it dominates the TV
distance of the walk, and the Monte Carlo simulation of the actual bit
configurations cross-checks it.

The verifiers at the bottom certify, in exact arithmetic, the hypergeometric
pick-probability inequalities that drive the coupling time analysis, and
report every counterexample they find rather than hiding it.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from .exactdist import WeightDistribution, WeightKernel, evolve
from .numerics import binom_row, cmp_with_ln2, hypergeom_numerators
from .spectrum import WalkSpec

MARGINAL_CHECK_MAX_N = 8
EXACT_SOLVE_MAX_N = 64


@dataclass(frozen=True)
class CoupledState:
    """Positions of both chains as n-bit integers; y is cached on build."""

    n: int
    x1: int
    x2: int
    y: int = field(init=False)

    def __post_init__(self):
        if not (0 <= self.x1 < (1 << self.n)) or not (0 <= self.x2 < (1 << self.n)):
            raise ValueError("coupled state out of range")
        object.__setattr__(self, "y", (self.x1 ^ self.x2).bit_count())

    @property
    def coalesced(self) -> bool:
        return self.y == 0


def partner_assignment(n: int, chosen, mismatches) -> dict[int, int]:
    """Pair each chosen mismatched index with a free mismatched index.

    Chosen-and-mismatched indices are processed in increasing order; each
    maps to the first mismatched index that is neither chosen nor already
    assigned, scanning upward from it and wrapping at n.  Requires
    |chosen & mismatches| <= |mismatches| / 2 so the scan always succeeds.
    """
    chosen = frozenset(chosen)
    mismatches = frozenset(mismatches)
    picked = sorted(chosen & mismatches)
    if 2 * len(picked) > len(mismatches):
        raise ValueError(
            f"partner_assignment needs |chosen & mismatches| <= |mismatches|/2, "
            f"got {len(picked)} of {len(mismatches)}"
        )
    taken: set[int] = set()
    out: dict[int, int] = {}
    for i in picked:
        j = (i + 1) % n
        while j in chosen or j not in mismatches or j in taken:
            j = (j + 1) % n
        out[i] = j
        taken.add(j)
    return out


def _even_x2_flipset(n: int, mismask: int, smask: int) -> int:
    """Flip mask applied to x2 when x1 flips smask, for even |mismask|."""
    inter = smask & mismask
    a = inter.bit_count()
    y = mismask.bit_count()
    if 2 * a > y:
        return smask
    # matched members of S flip in both chains; each mismatched member of S
    # is paired with a free mismatched partner flipped in x2 only
    flips = smask & ~mismask
    taken = 0
    i = 0
    rest = inter
    while rest:
        lsb = rest & -rest
        i = lsb.bit_length() - 1
        j = (i + 1) % n
        while True:
            jb = 1 << j
            if (jb & mismask) and not (jb & smask) and not (jb & taken):
                break
            j = (j + 1) % n
        taken |= 1 << j
        rest ^= lsb
    return flips | taken


def coupled_move_even(n: int, k: int, state: CoupledState, hold: bool, smask: int) -> CoupledState:
    """Deterministic even-y coupled move given the randomness outcome."""
    if state.y % 2 != 0:
        raise ValueError("coupled_move_even requires even mismatch count")
    if hold:
        return state
    if smask.bit_count() != k:
        raise ValueError(f"flip set has {smask.bit_count()} bits, expected k={k}")
    t = _even_x2_flipset(n, state.x1 ^ state.x2, smask)
    return CoupledState(n, state.x1 ^ smask, state.x2 ^ t)


def _draw_mask(rng: random.Random, n: int, k: int) -> int:
    mask = 0
    for i in rng.sample(range(n), k):
        mask |= 1 << i
    return mask


def coupled_step(spec: WalkSpec, state: CoupledState, rng: random.Random) -> CoupledState:
    """One coupled transition.

    Randomness order: even y draws one fair bit (1 = hold) and, when moving,
    one uniform k-subset.  Odd y lets each chain take an independent lazy
    step: chain 1's bit, chain 1's subset if moving, then chain 2's bit and
    subset.  Marginally each chain performs the lazy k-flip walk either way.
    """
    n, k = spec.n, spec.k
    if state.y % 2 == 1:
        x1, x2 = state.x1, state.x2
        if not rng.getrandbits(1):
            x1 ^= _draw_mask(rng, n, k)
        if not rng.getrandbits(1):
            x2 ^= _draw_mask(rng, n, k)
        return CoupledState(n, x1, x2)
    hold = bool(rng.getrandbits(1))
    smask = 0 if hold else _draw_mask(rng, n, k)
    return coupled_move_even(n, k, state, hold, smask)


@dataclass(frozen=True)
class MarginalCheckReport:
    n: int
    k: int
    masks_checked: int
    maps_checked: int
    bijective: bool
    marginals_match: bool
    violations: tuple = ()

    @property
    def ok(self) -> bool:
        return self.bijective and self.marginals_match


def marginal_check(n: int, k: int) -> MarginalCheckReport:
    """Exhaustively certify the even-y move preserves both marginals.

    For every even-weight mismatch mask the induced map S -> (x2 flip set)
    must be a bijection on k-subsets; then both one-step marginals equal the
    lazy k-flip kernel exactly.  The mismatch mask determines the map, so
    enumerating masks covers every reachable pair.  Exhaustive, n <= 8.
    """
    if n > MARGINAL_CHECK_MAX_N:
        raise ValueError(f"marginal_check is exhaustive and limited to n <= {MARGINAL_CHECK_MAX_N}")
    if not (1 <= k <= n):
        raise ValueError(f"marginal_check domain error: k={k}, n={n}")
    smasks = [sum(1 << i for i in c) for c in combinations(range(n), k)]
    violations = []
    masks = maps = 0
    for m in range(1 << n):
        if m.bit_count() % 2:
            continue
        masks += 1
        seen: dict[int, int] = {}
        for s in smasks:
            t = _even_x2_flipset(n, m, s)
            maps += 1
            if t in seen:
                violations.append((m, seen[t], s, t))
            else:
                seen[t] = s
        if set(seen) != set(smasks) and len(seen) == len(smasks):
            # bijective onto a different set of masks would silently skew
            # the x2 marginal; record it as a violation too
            violations.append((m, -1, -1, -1))
    ok = not violations
    return MarginalCheckReport(
        n=n,
        k=k,
        masks_checked=masks,
        maps_checked=maps,
        bijective=ok,
        marginals_match=ok,
        violations=tuple(violations[:20]),
    )


def _require_coupling_spec(spec: WalkSpec, op: str) -> None:
    if spec.k % 2 == 0:
        raise ValueError(
            f"{op} requires odd k (even k confines the walk to a parity coset, "
            f"so the chains can never coalesce from odd mismatch counts)"
        )
    if spec.p != Fraction(1, 2):
        raise ValueError(f"{op} is defined for the half-lazy walk (p = 1/2), got p={spec.p}")


def coupling_weight_kernel(spec: WalkSpec) -> WeightKernel:
    """Exact transition kernel of the mismatch count y, absorbing at 0.

    Even y > 0: hold with 1/2, else y -> y - 2a if a <= y/2, no progress
    otherwise.  Odd y: both hold with 1/4; exactly one chain moves with 1/2
    (y -> y + k - 2a); both move with 1/4, which composes two non-lazy flip
    transitions of the mismatch weight.
    """
    _require_coupling_spec(spec, "coupling_weight_kernel")
    n, k = spec.n, spec.k
    C = math.comb(n, k)
    den = 4 * C * C
    rows: list[dict[int, int]] = []
    for y in range(n + 1):
        row: dict[int, int] = {}
        if y == 0:
            row[0] = den
        elif y % 2 == 0:
            row[y] = 2 * C * C
            for a, c in hypergeom_numerators(n, y, k).items():
                t = y - 2 * a if 2 * a <= y else y
                row[t] = row.get(t, 0) + 2 * C * c
        else:
            row[y] = C * C
            one = hypergeom_numerators(n, y, k)
            for a, c in one.items():
                t = y + k - 2 * a
                row[t] = row.get(t, 0) + 2 * C * c
            for a1, c1 in one.items():
                y1 = y + k - 2 * a1
                for a2, c2 in hypergeom_numerators(n, y1, k).items():
                    t = y1 + k - 2 * a2
                    row[t] = row.get(t, 0) + c1 * c2
        rows.append(row)
    return WeightKernel(n, "coupling", rows=rows, den=den, meta={"k": k, "p": spec.p})


def coupling_tail_curve(spec: WalkSpec, lmax: int) -> list[Fraction]:
    """[P(T > l) for l = 0..lmax], exact, x2 started uniform (y0 binomial)."""
    if lmax < 0:
        raise ValueError(f"coupling_tail_curve requires lmax >= 0, got {lmax}")
    kernel = coupling_weight_kernel(spec)
    dist = WeightDistribution.binomial(spec.n)
    out = [1 - dist.prob(0)]
    for _ in range(lmax):
        dist = evolve(dist, kernel, 1)
        out.append(1 - dist.prob(0))
    return out


def coupling_tail_exact(spec: WalkSpec, l: int) -> Fraction:
    return coupling_tail_curve(spec, l)[l]


def expected_coupling_time(spec: WalkSpec, exact: bool | None = None):
    """E[T] from the absorbing y-kernel, y0 binomial.

    Exact rational solve of (I - Q) E = 1 up to EXACT_SOLVE_MAX_N states,
    float linear algebra beyond.  For k > n/2 some even mismatch counts can
    never make progress (every k-set hits more than y/2 mismatches once
    y > 2(n - k)), the binomial start charges them, and E[T] is infinite;
    math.inf is returned in that case.
    """
    _require_coupling_spec(spec, "expected_coupling_time")
    n = spec.n
    if exact is None:
        exact = n <= EXACT_SOLVE_MAX_N
    kernel = coupling_weight_kernel(spec)
    reaches_zero = {0}
    grew = True
    while grew:
        grew = False
        for y in range(1, n + 1):
            if y not in reaches_zero and any(t in reaches_zero for t in kernel.rows[y]):
                reaches_zero.add(y)
                grew = True
    if len(reaches_zero) <= n:
        return math.inf
    if exact:
        a = [[Fraction(0)] * n for _ in range(n)]
        for y in range(1, n + 1):
            a[y - 1][y - 1] += 1
            for t, c in kernel.rows[y].items():
                if t >= 1:
                    a[y - 1][t - 1] -= Fraction(c, kernel.den)
        e = _solve_exact(a, [Fraction(1)] * n)
        init = WeightDistribution.binomial(n)
        return sum(init.prob(y) * e[y - 1] for y in range(1, n + 1))
    mat = kernel.to_float().matrix
    q = mat[1:, 1:]
    e = np.linalg.solve(np.eye(n) - q, np.ones(n))
    init = WeightDistribution.binomial(n).to_float().vec
    return float(init[1:] @ e)


def _solve_exact(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    n = len(a)
    m = [row[:] + [bi] for row, bi in zip(a, b)]
    for col in range(n):
        piv = next(r for r in range(col, n) if m[r][col] != 0)
        m[col], m[piv] = m[piv], m[col]
        inv = 1 / m[col][col]
        m[col] = [v * inv for v in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [vr - f * vc for vr, vc in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


@dataclass(frozen=True)
class CouplingTailReport:
    """Monte Carlo coalescence-time tally.

    survivors[l] counts trials with T > l; trials still apart at max_steps
    are right-censored and counted in survivors throughout, so tail
    estimates at l <= max_steps are unbiased.  mean_time averages
    min(T, max_steps).
    """

    n: int
    k: int
    trials: int
    max_steps: int
    seed: int
    method: str
    survivors: tuple[int, ...]
    censored: int

    def tail(self, l: int) -> float:
        return self.survivors[l] / self.trials

    @property
    def mean_time(self) -> float:
        # sum_{l >= 0} P(T > l), truncated at max_steps
        return sum(self.survivors) / self.trials


def _trial_rng(seed: int, trial: int) -> random.Random:
    digest = hashlib.sha256(f"cubemix-couple:{seed}:{trial}".encode()).digest()
    return random.Random(int.from_bytes(digest, "big"))


def simulate_coupling(spec: WalkSpec, trials: int, max_steps: int, seed: int) -> CouplingTailReport:
    """Monte Carlo on the actual bit configurations.

    x1 starts at the origin, x2 uniform; per-trial generators are derived
    from the seed by SHA-256 of "cubemix-couple:<seed>:<trial>", so results
    are reproducible across platforms and independent across trials.
    """
    _require_coupling_spec(spec, "simulate_coupling")
    if trials < 1 or max_steps < 0:
        raise ValueError(f"simulate_coupling needs trials >= 1, max_steps >= 0")
    n, k = spec.n, spec.k
    counts = [0] * (max_steps + 1)  # counts[l] += 1 when T > l
    censored = 0
    for trial in range(trials):
        rng = _trial_rng(seed, trial)
        state = CoupledState(n, 0, rng.getrandbits(n))
        t = 0
        while t < max_steps and not state.coalesced:
            counts[t] += 1
            state = coupled_step(spec, state, rng)
            t += 1
        if not state.coalesced:
            counts[max_steps] += 1
            censored += 1
    return CouplingTailReport(
        n=n,
        k=k,
        trials=trials,
        max_steps=max_steps,
        seed=seed,
        method="monte-carlo",
        survivors=tuple(counts),
        censored=censored,
    )


# ---------------------------------------------------------------------------
# pick-probability certificates


@dataclass(frozen=True)
class HalfPickRow:
    part: int
    y: int
    prob: Fraction
    ok: bool


@dataclass(frozen=True)
class HalfPickCertificate:
    """Exact sweep of the two pick-probability claims at k = n/2.

    Convention: P(a = i) = C(y,i) C(n-y, n/2-i) / (2 C(n, n/2)); the total
    mass over i is 1/2 and the remaining 1/2 is the lazy hold.  Part 1
    (y >= n/2) asks P(y - n/2 <= a <= y/2) >= 1/4, part 2 (1 <= y <= n/2)
    asks P(y/4 <= a <= y/2) >= 1/4.
    """

    n: int
    rows: tuple[HalfPickRow, ...]
    min_part1: tuple[Fraction, int] | None
    min_part2: tuple[Fraction, int] | None
    min_part2_even: tuple[Fraction, int] | None
    violations: tuple[HalfPickRow, ...]
    notes: tuple[str, ...]

    @property
    def has_violations(self) -> bool:
        return bool(self.violations)


def verify_half_flip_pick_bounds(n: int) -> HalfPickCertificate:
    if n % 4 != 2:
        raise ValueError(f"verify_half_flip_pick_bounds requires n = 2 mod 4, got n={n}")
    h = n // 2
    C = math.comb(n, h)
    quarter = Fraction(1, 4)
    rows = []
    viol = []
    min1 = min2 = min2e = None
    for y in range(n + 1):
        ry = binom_row(y)
        rny = binom_row(n - y)

        def mass(lo: int, hi: int) -> Fraction:
            lo = max(lo, 0, h - (n - y))
            hi = min(hi, y, h)
            s = 0
            for i in range(lo, hi + 1):
                s += ry[i] * rny[h - i]
            return Fraction(s, 2 * C)

        if y >= h:
            p1 = mass(y - h, y // 2)
            row = HalfPickRow(1, y, p1, p1 >= quarter)
            rows.append(row)
            if not row.ok:
                viol.append(row)
            if min1 is None or p1 < min1[0]:
                min1 = (p1, y)
        if 1 <= y <= h:
            p2 = mass(-(-y // 4), y // 2)
            row = HalfPickRow(2, y, p2, p2 >= quarter)
            rows.append(row)
            if not row.ok:
                viol.append(row)
            if min2 is None or p2 < min2[0]:
                min2 = (p2, y)
            if y % 2 == 0 and (min2e is None or p2 < min2e[0]):
                min2e = (p2, y)
    notes = []
    if viol and all(r.y % 2 == 1 for r in viol):
        notes.append(
            "all violations occur at odd y; the coupling applies part 2 on even y only, "
            "where the minimum over this sweep is "
            + (f"{min2e[0]} at y={min2e[1]}" if min2e else "undefined")
        )
    return HalfPickCertificate(
        n=n,
        rows=tuple(rows),
        min_part1=min1,
        min_part2=min2,
        min_part2_even=min2e,
        violations=tuple(viol),
        notes=tuple(notes),
    )


@dataclass(frozen=True)
class PickPartReport:
    part: int
    checked: int
    violations: int
    violation_samples: tuple
    min_value: Fraction | None
    min_witness: tuple | None
    value_kind: str
    note: str = ""


@dataclass(frozen=True)
class PickBoundsCertificate:
    n_max: int
    parts: tuple[int, ...]
    reports: tuple[PickPartReport, ...]
    notes: tuple[str, ...]

    @property
    def has_violations(self) -> bool:
        return any(r.violations for r in self.reports)


_SAMPLE_CAP = 40


def verify_pick_fraction_bounds(n_max: int, parts=tuple(range(1, 10))) -> PickBoundsCertificate:
    """Exact sweep of the nine pick-fraction claims over n <= n_max, k <= n/2.

    a is the overlap of a uniform k-set with a y-set; P(a = i) carries the
    lazy 1/2 as in HalfPickCertificate.  With q = yk/n the claims are,
    for y >= k: (2) P(q/2 <= a <= min(y/2, k)) >= 1/8 when q >= 2,
    (3) P(1 <= a <= min(y/2, k)) >= 1/6 when 1 <= q < 2, (4) the same with
    bound (2 - sqrt 2)/8 when ln2/2 <= q < 1, (5) bound q/8 when
    q < ln2/2; parts 6-9 repeat 2-5 for y < k with upper limit y/2.
    Part 1 certifies unimodality of the overlap pmf by exact ratio
    comparisons and checks the nominal mode threshold against the ratio
    test.  Everything is integer arithmetic; bounds involving sqrt 2 are
    decided by squaring.
    """
    parts = tuple(sorted(set(parts)))
    if any(p < 1 or p > 9 for p in parts):
        raise ValueError(f"parts must lie in 1..9, got {parts}")
    if n_max < 2:
        raise ValueError(f"verify_pick_fraction_bounds requires n_max >= 2, got {n_max}")

    checked = {p: 0 for p in parts}
    nviol = {p: 0 for p in parts}
    samples: dict[int, list] = {p: [] for p in parts}
    min_val: dict[int, Fraction | None] = {p: None for p in parts}
    min_wit: dict[int, tuple | None] = {p: None for p in parts}
    want_sum = [p for p in parts if p != 1]
    want_mode = 1 in parts

    for n in range(2, n_max + 1):
        rown = binom_row(n)
        for k in range(1, n // 2 + 1):
            C = rown[k]
            for y in range(1, n + 1):
                ry = binom_row(y)
                rny = binom_row(n - y)
                if want_mode:
                    checked[1] += 1
                    lo = max(0, k - (n - y))
                    hi = min(y, k)
                    for i in range(lo, hi):
                        inc = (y - i) * (k - i) >= (i + 1) * (n - y - k + i + 1)
                        # nominal threshold (yk - n + y + k)/(n + 1)
                        tnum, tden = y * k - n + y + k, n + 1
                        bad = ((i + 1) * tden <= tnum and not inc) or (
                            i * tden >= tnum
                            and inc
                            and (y - i) * (k - i) != (i + 1) * (n - y - k + i + 1)
                        )
                        if bad:
                            nviol[1] += 1
                            if len(samples[1]) < _SAMPLE_CAP:
                                samples[1].append((n, k, y, i))
                if not want_sum:
                    continue
                q2n = Fraction(y * k, n)
                if q2n >= 2:
                    part = 2
                elif q2n >= 1:
                    part = 3
                elif cmp_with_ln2(2 * q2n) >= 0:
                    part = 4
                else:
                    part = 5
                if y < k:
                    part += 4
                if part not in checked:
                    continue
                checked[part] += 1
                upper = min(y // 2, k)
                lower = -(-(y * k) // (2 * n)) if part in (2, 6) else 1
                s = 0
                for i in range(max(lower, 0, k - (n - y)), min(upper, y, k) + 1):
                    s += ry[i] * rny[k - i]
                prob = Fraction(s, 2 * C)
                if part in (2, 6):
                    ok = 4 * s >= C
                    val = prob
                elif part in (3, 7):
                    ok = 3 * s >= C
                    val = prob
                elif part in (4, 8):
                    t = 2 * C - 4 * s
                    ok = t <= 0 or 2 * C * C >= t * t
                    val = prob
                else:
                    ok = 4 * s * n >= C * y * k
                    val = prob - Fraction(y * k, 8 * n)
                if min_val[part] is None or val < min_val[part]:
                    min_val[part] = val
                    min_wit[part] = (n, k, y)
                if not ok:
                    nviol[part] += 1
                    if len(samples[part]) < _SAMPLE_CAP:
                        samples[part].append((n, k, y, prob))

    reports = []
    odd_only = True
    for p in parts:
        note = ""
        if p == 1:
            note = (
                "nominal mode threshold (y*k - n + y + k)/(n + 1); exact ratio-test "
                "boundary (y*k + y + k - n - 1)/(n + 2); integer arguments are "
                "classified identically whenever the violation count is zero"
            )
        elif nviol[p] and all(w[2] == 1 for w in samples[p]):
            note = "violations occur at y = 1 where the integer range [1, y/2] is empty"
        reports.append(
            PickPartReport(
                part=p,
                checked=checked[p],
                violations=nviol[p],
                violation_samples=tuple(samples[p]),
                min_value=min_val.get(p),
                min_witness=min_wit.get(p),
                value_kind="slack" if p in (5, 9) else "prob",
                note=note,
            )
        )
        if p != 1 and any(w[2] % 2 == 0 for w in samples[p]):
            odd_only = False
    notes = []
    if any(nviol[p] for p in parts if p != 1) and odd_only:
        notes.append("every violation found lies at odd y, outside the coupling's even-y phase")
    return PickBoundsCertificate(n_max=n_max, parts=parts, reports=tuple(reports), notes=tuple(notes))
