import math
import random
from fractions import Fraction

import pytest

from stakegame import (
    VirtualStakeState,
    check_invariance,
    expected_step,
    incumbent_gap_state,
    longrun_share,
    sampled_win_frequencies,
    selection_probabilities,
    theorem6_counterexample,
    validate_instance,
)


def state(alpha, types, stakes):
    return VirtualStakeState.build(alpha, types, stakes)


class TestSelectionProbabilities:
    def test_half_half(self):
        s = state(Fraction(1, 2), {1: 2, 2: 1}, {1: 1, 2: 1})
        assert selection_probabilities(s) == {1: Fraction(3, 5), 2: Fraction(2, 5)}

    def test_pure_type(self):
        s = state(1, {1: 2, 2: 1}, {1: 7, 2: 1})
        assert selection_probabilities(s) == {1: Fraction(2, 3), 2: Fraction(1, 3)}

    def test_pure_stake(self):
        s = state(0, {1: 9, 2: 9}, {1: 3, 2: 1})
        assert selection_probabilities(s) == {1: Fraction(3, 4), 2: Fraction(1, 4)}

    def test_sums_to_one(self):
        s = state("1/3", {1: 4, 2: 2, 3: 1}, {1: "1/2", 2: 5, 3: 2})
        assert sum(selection_probabilities(s).values()) == 1

    def test_alpha_range_enforced(self):
        with pytest.raises(ValueError):
            state(2, {1: 1}, {1: 1})


class TestExpectedStep:
    def test_worked_example(self):
        s = state(Fraction(1, 2), {1: 2, 2: 1}, {1: 1, 2: 1})
        nxt = expected_step(s)
        assert nxt.stake_dict() == {1: Fraction(8, 5), 2: Fraction(7, 5)}
        assert nxt.total_stakes == s.total_stakes + 1
        assert nxt.total_weight == s.total_weight + Fraction(1, 2)

    def test_pure_type_growth(self):
        s = state(1, {1: 2, 2: 1}, {1: 5, 2: 5})
        nxt = expected_step(s)
        assert nxt.stake_dict()[1] == 5 + Fraction(2, 3)

    def test_probabilities_invariant(self):
        s = state(Fraction(1, 2), {1: 2, 2: 1}, {1: 1, 2: 1})
        w0 = selection_probabilities(s)
        assert selection_probabilities(expected_step(expected_step(s))) == w0


class TestInvariance:
    def test_hundred_steps(self):
        s = state(Fraction(1, 2), {1: 2, 2: 1}, {1: 1, 2: 1})
        assert check_invariance(s, 100).ok

    def test_random_triples(self):
        rng = random.Random(3)
        for _ in range(25):
            n = rng.randint(2, 5)
            s = state(
                Fraction(rng.randint(0, 4), 4),
                {i: rng.randint(1, 9) for i in range(1, n + 1)},
                {i: Fraction(rng.randint(1, 9), rng.randint(1, 3)) for i in range(1, n + 1)},
            )
            assert check_invariance(s, 50).ok

    def test_alpha_one_weight_constant(self):
        s = state(1, {1: 2, 2: 1}, {1: 1, 2: 1})
        nxt = expected_step(s)
        assert nxt.total_weight == s.total_weight

    def test_steps_guard(self):
        s = state(0, {1: 1}, {1: 1})
        with pytest.raises(ValueError):
            check_invariance(s, 0)


class TestLongrun:
    def test_equals_round_one_probabilities(self):
        s = state(Fraction(1, 2), {1: 2, 2: 1}, {1: 1, 2: 1})
        assert longrun_share(s) == selection_probabilities(s)


class TestGapConstruction:
    def test_worked_values(self):
        s = incumbent_gap_state(Fraction(1, 2), {1: 3, 2: 1}, 100)
        assert s.stake_dict() == {1: Fraction(1), 2: Fraction(102)}
        shares = longrun_share(s)
        assert shares[2] > shares[1]

    def test_top_share_decreases_in_m(self):
        previous = None
        for m in (10, 100, 1000):
            s = incumbent_gap_state(Fraction(1, 2), {1: 3, 2: 1}, m)
            top = longrun_share(s)[1]
            if previous is not None:
                assert top < previous
            previous = top

    def test_alpha_one_rejected(self):
        with pytest.raises(ValueError):
            incumbent_gap_state(1, {1: 3, 2: 1}, 10)

    def test_instance_wrapper_valid(self):
        inst, s = theorem6_counterexample(Fraction(1, 2), {1: 3, 2: 1}, 10)
        assert validate_instance(inst).ok
        assert inst.stakes() == s.stake_dict()


class TestSampled:
    def test_frequencies_close_to_probabilities(self):
        # large stakes keep the urn drift far below the sampling tolerance
        s = state(Fraction(1, 2), {1: 2, 2: 1}, {1: 300000, 2: 200000})
        n = 20000
        w = selection_probabilities(s)
        freq = sampled_win_frequencies(s, n, seed=7)
        for pid in w:
            tol = 3 * math.sqrt(float(w[pid] * (1 - w[pid])) / n)
            assert abs(float(freq[pid] - w[pid])) <= tol

    def test_rounds_guard(self):
        s = state(0, {1: 1}, {1: 1})
        with pytest.raises(ValueError):
            sampled_win_frequencies(s, 0, seed=1)
