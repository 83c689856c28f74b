"""Probe identity-splitting incentives under two reward policies.

A player may split their stake and capability across several fake identities.
Under the simulating policy, small capability gaps between players make such
splits unprofitable: to lift the decentralization index the top part must
shed so much weight that a rival overtakes it in the reward order.  Under
the all-pay policy, which shares the budget among all participants, splitting
is always profitable because each extra identity collects an extra share.
"""

from fractions import Fraction

from stakegame import (
    IdentityValue,
    Instance,
    MuAll,
    MuEll,
    Player,
    max_sybil_gain,
    preferred_recovery_sybils,
    sybil_proofness_condition,
)

GRANULARITY = Fraction(1, 4)
MAX_PARTS = 3


def small_gap_instance(stakes):
    players = [
        Player(id=1, type_=Fraction(3)),
        Player(id=2, type_=Fraction(5, 2)),
        Player(id=3, type_=Fraction(2)),
    ]
    return Instance.build(
        players=players,
        initial_stakes=dict(zip((1, 2, 3), stakes)),
        budget=1,
        tau_threshold=Fraction(1, 2),
        value_function=IdentityValue(),
    )


def show_split(split):
    return " + ".join(f"(type {t}, stake {s})" for s, t in split.parts)


def main():
    inst = small_gap_instance((3, 1, 1))
    print("capabilities 3, 5/2, 2 at stakes 3, 1, 1 (player 1 is harmful here)")

    pref = preferred_recovery_sybils(1, inst.stakes(), inst, MuEll(), GRANULARITY, MAX_PARTS)
    print(f"best index-restoring split for player 1: {show_split(pref)}")

    report = sybil_proofness_condition(
        inst, MuEll(), GRANULARITY, MAX_PARTS,
        profiles=[{1: Fraction(3), 2: Fraction(1), 3: Fraction(1)}],
    )
    print(f"splitting-resistance condition satisfied: {report.satisfied}")
    for entry in report.entries:
        print(f"  player {entry.player}: top part type {entry.preferred.top_part[1]}, "
              f"next player in capability order: {entry.next_player}")

    flat = small_gap_instance((1, 1, 1))
    print("\nsame capabilities at equal unit stakes, per-player best grid split:")
    for pid in flat.ids:
        gain, split = max_sybil_gain(pid, flat.stakes(), flat, MuEll(), GRANULARITY, MAX_PARTS)
        print(f"  player {pid} under simulating policy: gain {gain} via {show_split(split)}")

    gain, split = max_sybil_gain(1, flat.stakes(), flat, MuAll(), GRANULARITY, MAX_PARTS)
    print(f"  player 1 under all-pay policy:        gain {gain} via {show_split(split)}")


if __name__ == "__main__":
    main()
