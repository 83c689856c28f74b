import random
from fractions import Fraction

import pytest

from stakegame import (
    FixedWinner,
    LookaheadHorizonError,
    LookaheadSolver,
    MuAll,
    MuStar,
    brute_force_equilibrium,
    is_harmful,
    lookahead_equilibrium,
    myopic_equilibrium,
    rank,
    recovery_winner_labels,
    suffix_set,
    threshold,
)
from stakegame.equilibrium import PAR, RecoveryWinnerLabel, stage_utility, stage_value

from conftest import make_instance


class TestHarmfulness:
    def test_dominant_stake_is_harmful(self):
        # participating collapses the index to 1 and halves the token value
        inst = make_instance([3, 2, 1], [3, 1, 1])
        verdict = is_harmful(1, frozenset({1, 2, 3}), inst.stakes(), inst, MuStar())
        assert verdict.harmful
        assert verdict.utility_participate == 4
        assert verdict.utility_abstain == 6

    def test_balanced_profile_not_harmful(self, three_player_instance):
        inst = three_player_instance
        verdict = is_harmful(1, frozenset({1, 2, 3}), inst.stakes(), inst, MuStar())
        assert not verdict.harmful

    def test_tie_favors_participation(self):
        # player 2 earns no reward and leaves the index unchanged either way
        inst = make_instance([3, 2], [2, 1])
        stakes = inst.stakes()
        ranking = rank(stakes)
        v = is_harmful(2, suffix_set(ranking, 1), stakes, inst, MuStar())
        assert v.utility_participate == v.utility_abstain
        assert not v.harmful
        strict = is_harmful(
            2, suffix_set(ranking, 1), stakes, inst, MuStar(), tie_participate=False
        )
        assert strict.harmful

    def test_must_be_member(self, three_player_instance):
        inst = three_player_instance
        with pytest.raises(ValueError):
            is_harmful(1, frozenset({2, 3}), inst.stakes(), inst, MuStar())


class TestStageValue:
    def test_empty_set_minimum_level(self, three_player_instance):
        d, v = stage_value(three_player_instance, {}, frozenset())
        assert (d, v) == (1, Fraction(1))

    def test_participants_only(self, three_player_instance):
        inst = three_player_instance
        stakes = {1: Fraction(9), 2: Fraction(1), 3: Fraction(1)}
        d, _ = stage_value(inst, stakes, frozenset({2, 3}))
        assert d == 2  # player 1's stake does not count


class TestMyopicEquilibrium:
    def test_balanced_all_participate(self, three_player_instance):
        inst = three_player_instance
        assert myopic_equilibrium(inst.stakes(), inst, MuStar()) == frozenset({1, 2, 3})

    def test_harmful_top_drops_out(self):
        inst = make_instance([3, 2, 1], [3, 1, 1])
        assert myopic_equilibrium(inst.stakes(), inst, MuStar()) == frozenset({2, 3})

    def test_harmful_without_recovery_stays(self):
        # at (4,2,1) abstention no longer pays: index is 1 either way
        inst = make_instance([3, 2, 1], [4, 2, 1])
        assert myopic_equilibrium(inst.stakes(), inst, MuStar()) == frozenset({1, 2, 3})

    def test_labels_expose_recovery_winner(self):
        inst = make_instance([3, 2, 1], [3, 1, 1])
        labels = recovery_winner_labels(inst.stakes(), inst, MuStar())
        assert labels == {1: RecoveryWinnerLabel(rank=2)}

    def test_par_label_under_strict_ties(self):
        # under the strict tie rule the rewardless top player is tie-harmful,
        # and abstaining offers no better index, so it is told to stay put
        inst = make_instance([1, 2], [2, 1])
        labels = recovery_winner_labels(
            inst.stakes(), inst, MuStar(), tie_participate=False
        )
        assert labels == {1: PAR}
        assert recovery_winner_labels(inst.stakes(), inst, MuStar()) == {}

    def test_par_label_without_candidates(self):
        # an absent fixed winner zeroes every reward; with strict ties all
        # ranks are tie-harmful and even the last rank has no recovery winner
        inst = make_instance([2, 1], [2, 1])
        labels = recovery_winner_labels(
            inst.stakes(), inst, FixedWinner(99), tie_participate=False
        )
        assert labels == {1: PAR, 2: PAR}

    def test_labeling_cost_is_linear_in_harmfulness_checks(self):
        inst = make_instance([5, 4, 3, 2, 1], [6, 5, 4, 3, 3])
        stats = {}
        myopic_equilibrium(inst.stakes(), inst, MuStar(), _stats=stats)
        assert stats["harmful_evals"] == inst.n


class TestLookahead:
    def test_planning_exit_round_five(self):
        # the two larger players sit out so the smallest can catch up
        inst = make_instance([3, 2, 1], [4, 2, 1])
        participants, plans = lookahead_equilibrium(inst.stakes(), inst, MuStar())
        assert participants == frozenset({3})
        assert set(plans) == {1, 2}
        assert plans[2].length == 1
        # player 2 re-enters next round at token value 2
        assert plans[2].terminal_value == 4

    def test_matches_myopic_when_balanced(self, three_player_instance):
        inst = three_player_instance
        participants, plans = lookahead_equilibrium(inst.stakes(), inst, MuStar())
        assert participants == frozenset({1, 2, 3})
        assert plans == {}

    def test_solver_cache_reuse(self):
        inst = make_instance([3, 2, 1], [4, 2, 1])
        solver = LookaheadSolver(inst, MuStar())
        first = solver.solve(inst.stakes())
        assert solver.solve(inst.stakes()) is first

    def test_multi_step_plan_under_equal_shares(self):
        # huge value cliff: the heavy player stays out until the others,
        # paid equal shares, grow enough that her re-entry keeps the index
        from stakegame import TableValue

        vf = TableValue.from_mapping({1: 1, 2: 100, 3: 1000})
        inst = make_instance([3, 2, 1], [10, 1, 1], vf=vf)
        participants, plans = lookahead_equilibrium(
            inst.stakes(), inst, MuAll(), horizon_cap=20
        )
        assert participants == frozenset({2, 3})
        assert plans[1].length > 1

    def test_horizon_error_names_player(self):
        from stakegame import TableValue

        vf = TableValue.from_mapping({1: 1, 2: 100, 3: 1000})
        inst = make_instance([3, 2, 1], [10, 1, 1], vf=vf)
        solver = LookaheadSolver(inst, MuAll(), horizon_cap=3)
        with pytest.raises(LookaheadHorizonError) as err:
            solver.solve(inst.stakes())
        assert err.value.player == 1
        assert err.value.cap == 3

    def test_cap_validation(self, three_player_instance):
        with pytest.raises(ValueError):
            LookaheadSolver(three_player_instance, MuStar(), horizon_cap=0)


class TestThreshold:
    def test_example_threshold_is_one(self, three_player_instance):
        th = threshold(three_player_instance, MuStar(), horizon=10)
        assert th.theta == 1
        assert th.of(1) == 1
        assert th.of(2) is None and th.of(3) is None

    def test_never_harmful_instance(self):
        inst = make_instance([3, 2, 1], [4, 4, 4])
        th = threshold(inst, MuStar(), horizon=3)
        assert th.theta is None


class TestBruteForce:
    def test_agrees_on_examples(self, three_player_instance):
        inst = three_player_instance
        for stakes in ({1: 1, 2: 1, 3: 1}, {1: 3, 2: 1, 3: 1}, {1: 4, 2: 2, 3: 1}):
            stakes = {k: Fraction(v) for k, v in stakes.items()}
            eq = myopic_equilibrium(stakes, inst, MuStar())
            oracle = brute_force_equilibrium(stakes, inst, MuStar())
            assert oracle == [eq]

    def test_lookahead_agreement(self):
        inst = make_instance([3, 2, 1], [4, 2, 1])
        stakes = inst.stakes()
        eq, _ = lookahead_equilibrium(stakes, inst, MuStar())
        oracle = brute_force_equilibrium(stakes, inst, MuStar(), behavior="lookahead")
        assert eq in oracle

    def test_non_aligned_profiles_can_have_extra_equilibria(self):
        # outside the aligned regime the suffix equilibrium is not unique
        inst = make_instance([6, 1, 2, 3], [1, 1, 6, 5])
        oracle = brute_force_equilibrium(inst.stakes(), inst, MuStar())
        assert len(oracle) > 1

    def test_size_guard(self):
        inst = make_instance([1] * 13, [1] * 13)
        with pytest.raises(ValueError):
            brute_force_equilibrium(inst.stakes(), inst, MuStar())


def test_random_oracle_agreement_mu_all():
    rng = random.Random(99)
    for _ in range(50):
        n = rng.randint(2, 4)
        inst = make_instance(
            [rng.randint(1, 6) for _ in range(n)],
            [rng.randint(3, 6) for _ in range(n)],
        )
        policy = MuAll() if rng.random() < 0.5 else MuStar()
        eq = myopic_equilibrium(inst.stakes(), inst, policy)
        assert brute_force_equilibrium(inst.stakes(), inst, policy) == [eq]


def test_stage_utility_costs_subtract():
    inst = make_instance([3, 2], [4, 4], costs=[1, 0])
    with_cost = stage_utility(inst, inst.stakes(), MuStar(), 1, frozenset({1, 2}))
    free = stage_utility(inst, inst.stakes(), MuStar(), 2, frozenset({1, 2}))
    d, v = stage_value(inst, inst.stakes(), frozenset({1, 2}))
    assert with_cost == (4 + 1) * v - 1
    assert free == 4 * v
