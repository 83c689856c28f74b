from fractions import Fraction

import pytest

from stakegame import (
    MuAll,
    MuEll,
    MuStar,
    enumerate_splits,
    is_recovery_sybils,
    make_split,
    max_sybil_gain,
    preferred_recovery_sybils,
    sybil_gain,
    sybil_proofness_condition,
)

from conftest import make_instance


def small_gap_instance(stakes=(3, 1, 1)):
    """Types 3, 5/2, 2: pairwise gaps below 1."""
    return make_instance([Fraction(3), Fraction(5, 2), Fraction(2)], list(stakes))


class TestEnumeration:
    def test_basic_grid(self):
        splits = enumerate_splits(1, {1: Fraction(2)}, {1: Fraction(2)}, 1, 2)
        parts = {s.parts for s in splits}
        assert ((Fraction(2), Fraction(2)),) in parts
        assert ((Fraction(1), Fraction(1)), (Fraction(1), Fraction(1))) in parts

    def test_minimum_type_even_split_present(self):
        # the always-existing witness: tau parts of minimum type, equal stake
        splits = enumerate_splits(1, {1: Fraction(3)}, {1: Fraction(3)}, 1, 3)
        witness = ((Fraction(1), Fraction(1)),) * 3
        assert witness in {s.parts for s in splits}

    def test_unit_owner_identity_only(self):
        splits = enumerate_splits(1, {1: Fraction(1)}, {1: Fraction(1)}, 1, 3)
        assert [s.parts for s in splits] == [((Fraction(1), Fraction(1)),)]

    def test_budgets_respected(self):
        owner_stake, owner_type = Fraction(3), Fraction(5, 2)
        splits = enumerate_splits(
            1, {1: owner_stake}, {1: owner_type}, Fraction(1, 2), 3
        )
        for s in splits:
            assert sum(p[0] for p in s.parts) <= owner_stake
            assert sum(p[1] for p in s.parts) <= owner_type
            assert all(p[1] >= 1 for p in s.parts)

    def test_full_stake_filter(self):
        splits = enumerate_splits(
            1, {1: Fraction(2)}, {1: Fraction(2)}, 1, 2, full_stake=True
        )
        assert all(sum(p[0] for p in s.parts) == 2 for s in splits)

    def test_dedup_up_to_order(self):
        splits = enumerate_splits(1, {1: Fraction(2)}, {1: Fraction(3)}, 1, 2)
        assert len({s.parts for s in splits}) == len(splits)

    def test_limit_guard(self):
        with pytest.raises(ValueError):
            enumerate_splits(
                1, {1: Fraction(6)}, {1: Fraction(6)}, Fraction(1, 8), 5, limit=100
            )

    def test_make_split_validates(self):
        with pytest.raises(ValueError):
            make_split(1, [])
        with pytest.raises(ValueError):
            make_split(1, [(1, Fraction(1, 2))])
        with pytest.raises(ValueError):
            make_split(1, [(0, 1)])


class TestRecoverySplits:
    def test_identity_split_stays_harmful(self):
        inst = small_gap_instance()
        identity = make_split(1, [(3, 3)])
        assert not is_recovery_sybils(identity, inst.stakes(), inst, MuEll())

    def test_even_split_recovers(self):
        inst = small_gap_instance()
        even = make_split(1, [(1, 1), (1, 1), (1, 1)])
        assert is_recovery_sybils(even, inst.stakes(), inst, MuEll())

    def test_preferred_max_type(self):
        # recovering demands shedding at least a unit of stake off the top
        # part, which caps its type at 2 on the quarter grid
        inst = small_gap_instance()
        pref = preferred_recovery_sybils(1, inst.stakes(), inst, MuEll(), Fraction(1, 4), 3)
        assert pref.top_part[1] == 2
        assert is_recovery_sybils(pref, inst.stakes(), inst, MuEll())

    def test_finer_grid_no_worse(self):
        inst = small_gap_instance()
        coarse = preferred_recovery_sybils(1, inst.stakes(), inst, MuEll(), Fraction(1, 2), 3)
        fine = preferred_recovery_sybils(1, inst.stakes(), inst, MuEll(), Fraction(1, 4), 3)
        assert fine.top_part[1] >= coarse.top_part[1]


class TestProofnessCondition:
    def test_small_gaps_satisfied(self):
        inst = small_gap_instance()
        report = sybil_proofness_condition(
            inst, MuEll(), Fraction(1, 4), 3,
            profiles=[{1: Fraction(3), 2: Fraction(1), 3: Fraction(1)}],
        )
        assert report.satisfied
        assert len(report.entries) == 1
        assert report.entries[0].player == 1

    def test_large_gap_violated(self):
        inst = make_instance([5, 2, 1], [3, 1, 1])
        report = sybil_proofness_condition(
            inst, MuEll(), Fraction(1, 4), 3, profiles=[inst.stakes()]
        )
        assert not report.satisfied
        entry = report.violations[0]
        assert entry.player == 1
        assert entry.preferred.top_part[1] > 2

    def test_single_player_vacuous(self):
        inst = make_instance([3], [5])
        report = sybil_proofness_condition(inst, MuEll(), 1, 2)
        assert report.satisfied


class TestGain:
    def test_identity_split_zero(self):
        inst = small_gap_instance(stakes=(1, 1, 1))
        identity = make_split(1, [(1, 3)])
        assert sybil_gain(identity, inst.stakes(), inst, MuEll()) == 0

    def test_all_pay_two_parts_gain_extra_share(self):
        inst = make_instance([3, 2, 1], [1, 1, 1])
        split = make_split(1, [(Fraction(1, 2), Fraction(3, 2)), (Fraction(1, 2), Fraction(3, 2))])
        # two quarter-shares of the budget instead of one third, at value 2
        assert sybil_gain(split, inst.stakes(), inst, MuAll()) == Fraction(1, 3)

    def test_all_pay_positive_gain_found(self):
        inst = make_instance([3, 2, 1], [1, 1, 1])
        gain, _ = max_sybil_gain(1, inst.stakes(), inst, MuAll(), Fraction(1, 4), 3)
        assert gain > 0

    def test_satisfied_condition_caps_gain(self):
        inst = small_gap_instance(stakes=(1, 1, 1))
        for pid in inst.ids:
            gain, _ = max_sybil_gain(pid, inst.stakes(), inst, MuEll(), Fraction(1, 4), 3)
            assert gain <= 0

    def test_mu_star_matches_mu_ell_stage(self):
        inst = small_gap_instance(stakes=(1, 1, 1))
        split = make_split(1, [(Fraction(1, 2), 1), (Fraction(1, 2), 2)])
        a = sybil_gain(split, inst.stakes(), inst, MuEll())
        b = sybil_gain(split, inst.stakes(), inst, MuStar())
        assert a == b
