"""Run the three-player benchmark under each reward policy and print the traces.

Three players with capabilities 3, 2, 1 start from equal unit stakes.  The
winner-take-all policy rewards the strongest participant; under myopic play
the strongest player snowballs until the decentralization index collapses to
1 and stays there.  Forward-looking play produces voluntary sit-out rounds
that keep the index oscillating, and the simulating policy reproduces the
same recovery pattern with full participation every round.
"""

from fractions import Fraction

from stakegame import (
    IdentityValue,
    Instance,
    MuEll,
    MuStar,
    Player,
    run,
)


def benchmark_instance():
    players = [
        Player(id=1, type_=Fraction(3)),
        Player(id=2, type_=Fraction(2)),
        Player(id=3, type_=Fraction(1)),
    ]
    return Instance.build(
        players=players,
        initial_stakes={1: 1, 2: 1, 3: 1},
        budget=1,
        tau_threshold=Fraction(1, 2),
        value_function=IdentityValue(),
    )


def print_trace(title, trace):
    print(f"\n{title}")
    print(f"{'round':>5}  {'stakes':<14} {'participants':<14} {'d':>1}  {'v':>2}  winner")
    for rec in trace.records:
        stakes = ",".join(str(s) for _, s in rec.stakes_before)
        part = "{" + ",".join(str(p) for p in sorted(rec.participants)) + "}"
        print(f"{rec.round:>5}  {stakes:<14} {part:<14} {rec.d:>1}  {str(rec.v):>2}  {rec.winner}")


def main():
    inst = benchmark_instance()

    myopic = run(inst, MuStar(), behavior="myopic", rounds=6)
    print_trace("winner-take-all, myopic play (centralizes by round 5):", myopic)

    lookahead = run(inst, MuStar(), behavior="lookahead", rounds=10)
    print_trace("winner-take-all, forward-looking play (index recovers):", lookahead)

    simulating = run(inst, MuEll(), behavior="myopic", rounds=10)
    print_trace("simulating policy (full participation, winners shifted):", simulating)

    print("\nwinners, forward-looking :", [r.winner for r in lookahead.records])
    print("winners, simulating      :", [r.winner for r in simulating.records])


if __name__ == "__main__":
    main()
