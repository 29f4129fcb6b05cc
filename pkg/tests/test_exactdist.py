"""Lumped kernels, exact evolution, and distances, against naive oracles."""

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from cubemix import (
    CyclicWalkSpec,
    WalkSpec,
    WeightDistribution,
    brute_force_curve,
    brute_force_dist,
    evolve,
    flip_weight_kernel,
    full_transition_matrix,
    l2_to_uniform,
    l2_upper_bound,
    separation_tail,
    spectral_dist,
    touched_weight_kernel,
    tv_to_uniform,
    zmn_exact_tv,
    zmn_l2_upper_bound,
)
from cubemix.exactdist import _subset_flip_sum

HALF = Fraction(1, 2)


def test_weight_distribution_constructors():
    d = WeightDistribution.delta(3)
    assert d.probs == (1, 0, 0, 0)
    b = WeightDistribution.binomial(4)
    assert b.probs == (
        Fraction(1, 16),
        Fraction(4, 16),
        Fraction(6, 16),
        Fraction(4, 16),
        Fraction(1, 16),
    )
    f = WeightDistribution.from_fractions([HALF, Fraction(1, 3), Fraction(1, 6)])
    assert f.prob(1) == Fraction(1, 3)
    fl = WeightDistribution.from_floats([0.25, 0.5, 0.25])
    assert not fl.exact
    assert fl.prob(1) == 0.5


def test_weight_distribution_validation():
    with pytest.raises(ValueError):
        WeightDistribution(2, nums=[1, 1, 1], den=2)
    with pytest.raises(ValueError):
        WeightDistribution(2, nums=[3, -1, 0], den=2)
    with pytest.raises(ValueError):
        WeightDistribution(2, nums=[1, 1], den=2)
    with pytest.raises(ValueError):
        WeightDistribution.from_floats([0.5, 0.4])


def test_flip_kernel_frozen_tiny_case():
    kern = flip_weight_kernel(WalkSpec(2, 1))
    assert kern.den == 4
    assert kern.rows[0] == {0: 2, 1: 2}
    assert kern.rows[1] == {1: 2, 2: 1, 0: 1}
    assert kern.rows[2] == {2: 2, 1: 2}
    assert kern.row_fractions(0) == {0: HALF, 1: HALF}


def test_flip_kernel_reversible_for_binomial():
    # The walk is symmetric on the cube, so the lumped kernel satisfies
    # detailed balance with binomial weights.
    for n, k, p in [(5, 2, HALF), (6, 3, Fraction(1, 3)), (7, 4, HALF)]:
        kern = flip_weight_kernel(WalkSpec(n, k, p))
        for w in range(n + 1):
            for t, c in kern.rows[w].items():
                assert math.comb(n, w) * c == math.comb(n, t) * kern.rows[t].get(w, 0)


def test_flip_kernel_float_matches_exact():
    for n, k, p in [(4, 1, HALF), (8, 3, Fraction(1, 4))]:
        spec = WalkSpec(n, k, p)
        exact = flip_weight_kernel(spec, exact=True).to_float().matrix
        approx = flip_weight_kernel(spec, exact=False).matrix
        assert np.allclose(exact, approx, atol=1e-13, rtol=0.0)


def test_evolve_single_step_is_kernel_row():
    kern = flip_weight_kernel(WalkSpec(5, 2))
    for w in range(6):
        out = evolve(WeightDistribution.delta(5, w), kern, 1)
        assert dict(enumerate(out.probs)) == {
            t: kern.row_fractions(w).get(t, Fraction(0)) for t in range(6)
        }


def test_evolve_validation():
    kern = flip_weight_kernel(WalkSpec(3, 1))
    with pytest.raises(ValueError):
        evolve(WeightDistribution.delta(3), kern, -1)
    with pytest.raises(ValueError):
        evolve(WeightDistribution.delta(4), kern, 1)


def test_tv_and_l2_frozen_tiny_case():
    spec = WalkSpec(2, 1)
    d1 = evolve(WeightDistribution.delta(2), flip_weight_kernel(spec), 1)
    assert tv_to_uniform(d1) == Fraction(1, 4)
    assert l2_to_uniform(d1) == HALF
    fd1 = d1.to_float()
    assert tv_to_uniform(fd1) == pytest.approx(0.25, abs=1e-15)
    assert l2_to_uniform(fd1) == pytest.approx(0.5, rel=1e-13)


def test_spectral_evolve_brute_force_agree():
    cases = [
        (2, 1, HALF),
        (4, 1, HALF),
        (5, 2, Fraction(1, 3)),
        (6, 3, HALF),
        (7, 3, Fraction(1, 4)),
    ]
    for n, k, p in cases:
        spec = WalkSpec(n, k, p)
        kern = flip_weight_kernel(spec)
        for l in range(5):
            via_spectrum = spectral_dist(spec, l).probs
            via_kernel = evolve(WeightDistribution.delta(n), kern, l).probs
            via_brute = brute_force_dist(spec, l).weight_marginal().probs
            assert via_spectrum == via_kernel == via_brute


def test_subset_flip_sum_vs_naive_enumeration():
    rng = random.Random(20240817)
    for n in range(1, 7):
        nums = [rng.randrange(1000) for _ in range(1 << n)]
        for k in range(1, n + 1):
            fast = _subset_flip_sum(nums, n, k)
            naive = [0] * (1 << n)
            for combo in itertools.combinations(range(n), k):
                s = 0
                for c in combo:
                    s |= 1 << c
                for x in range(1 << n):
                    naive[x] += nums[x ^ s]
            assert fast == naive


def test_brute_force_matches_dense_matrix_power():
    for n, k, p in [(4, 1, HALF), (4, 3, Fraction(1, 4)), (6, 2, HALF)]:
        spec = WalkSpec(n, k, p)
        P = full_transition_matrix(spec)
        vec = np.zeros(1 << n)
        vec[0] = 1.0
        for l in range(4):
            exact = [float(brute_force_dist(spec, l).prob(x)) for x in range(1 << n)]
            assert np.allclose(vec, exact, atol=1e-13, rtol=0.0)
            vec = vec @ P


def test_brute_force_curve_matches_per_step_calls():
    spec = WalkSpec(5, 2, Fraction(1, 3))
    for l, dist in brute_force_curve(spec, 4):
        ref = brute_force_dist(spec, l)
        assert dist.nums == ref.nums
        assert dist.den == ref.den


def test_brute_force_validation():
    with pytest.raises(ValueError):
        brute_force_dist(WalkSpec(15, 1), 1)
    with pytest.raises(ValueError):
        brute_force_dist(WalkSpec(4, 1), -1)
    with pytest.raises(ValueError):
        list(brute_force_curve(WalkSpec(15, 1), 1))
    with pytest.raises(ValueError):
        spectral_dist(WalkSpec(10, 3), 1, max_n=8)


def test_spectral_dist_large_instance_consistency():
    spec = WalkSpec(54, 27)
    kern = flip_weight_kernel(spec)
    for l in [1, 5, 10]:
        a = spectral_dist(spec, l)
        b = evolve(WeightDistribution.delta(54), kern, l)
        assert a.probs == b.probs
        assert tv_to_uniform(a) == tv_to_uniform(b)


def test_four_tv_squared_at_most_l2():
    spec = WalkSpec(6, 3)
    for l in range(7):
        tv = tv_to_uniform(spectral_dist(spec, l))
        assert 4 * tv * tv <= l2_upper_bound(spec, l)


def test_touched_kernel_structure():
    cspec = CyclicWalkSpec(5, 3, 2)
    kern = touched_weight_kernel(cspec)
    assert kern.den == math.comb(5, 2)
    for w in range(6):
        assert all(t >= w for t in kern.rows[w])
    assert kern.rows[5] == {5: math.comb(5, 2)}


def test_separation_tail_basics():
    cspec = CyclicWalkSpec(4, 3, 2)
    assert separation_tail(cspec, 0) == 1
    values = [separation_tail(cspec, l) for l in range(11)]
    assert all(a >= b for a, b in zip(values, values[1:]))
    assert values[-1] < Fraction(1, 10)


def test_zmn_tv_l0_is_point_mass_distance():
    for n, m, k in [(3, 2, 1), (4, 3, 2), (5, 2, 3)]:
        cspec = CyclicWalkSpec(n, m, k)
        assert zmn_exact_tv(cspec, 0) == 1 - Fraction(1, m**n)


def _naive_zmn_tv(n, m, k, lmax):
    """Exact TV curve by evolving all m^n states, no lumping assumed."""
    states = list(itertools.product(range(m), repeat=n))
    index = {s: i for i, s in enumerate(states)}
    atoms = []
    for combo in itertools.combinations(range(n), k):
        for digits in itertools.product(range(m), repeat=k):
            atoms.append((combo, digits))
    prob = [Fraction(0)] * len(states)
    prob[index[(0,) * n]] = Fraction(1)
    unif = Fraction(1, m**n)
    out = [sum(abs(p - unif) for p in prob) / 2]
    w = Fraction(1, len(atoms))
    for _ in range(lmax):
        nxt = [Fraction(0)] * len(states)
        for i, s in enumerate(states):
            if prob[i]:
                share = prob[i] * w
                for combo, digits in atoms:
                    t = list(s)
                    for c, d in zip(combo, digits):
                        t[c] = d
                    nxt[index[tuple(t)]] += share
        prob = nxt
        out.append(sum(abs(p - unif) for p in prob) / 2)
    return out


def test_zmn_tv_vs_naive_full_state_oracle():
    for n, m, k in [(3, 2, 1), (2, 3, 1), (3, 2, 2), (2, 2, 2)]:
        cspec = CyclicWalkSpec(n, m, k)
        naive = _naive_zmn_tv(n, m, k, 4)
        for l, expected in enumerate(naive):
            assert zmn_exact_tv(cspec, l) == expected


def test_zmn_distance_chain():
    # TV <= separation tail, and 4 TV^2 <= the l2 character bound.
    for n, m, k in [(3, 2, 1), (4, 3, 2), (5, 2, 2)]:
        cspec = CyclicWalkSpec(n, m, k)
        for l in range(7):
            tv = zmn_exact_tv(cspec, l)
            assert tv <= separation_tail(cspec, l)
            assert 4 * tv * tv <= zmn_l2_upper_bound(cspec, l)
