"""The virtual-stake policy family: exact invariance and its consequences.

With selection weight ``p_i = alpha * type_i + (1 - alpha) * stake_i`` and
the unit budget paid to the winner, the expected dynamics fix the selection
probabilities at their round-1 values forever: stakes grow by exactly their
own weight, so each round rescales all weights by the same factor.  That
invariance is the reason interpolating between type- and stake-proportional
selection cannot shake off a large incumbent stake; the counterexample
constructor below makes this quantitative.

All of this assumes full participation, as the interpolating policy gives no
abstention incentive to analyze.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from .core import Instance, Player, PlayerId, ScalarLike, scalar


@dataclass(frozen=True)
class VirtualStakeState:
    """Snapshot of the interpolated dynamics: alpha, fixed types, current stakes."""

    alpha: Fraction
    types: Tuple[Tuple[PlayerId, Fraction], ...]
    stakes: Tuple[Tuple[PlayerId, Fraction], ...]

    @staticmethod
    def build(
        alpha: ScalarLike,
        types: Dict[PlayerId, ScalarLike],
        stakes: Dict[PlayerId, ScalarLike],
    ) -> "VirtualStakeState":
        a = scalar(alpha)
        if not 0 <= a <= 1:
            raise ValueError(f"alpha must lie in [0, 1], got {a}")
        if set(types) != set(stakes):
            raise ValueError("types and stakes must cover the same players")
        return VirtualStakeState(
            alpha=a,
            types=tuple(sorted((pid, scalar(t)) for pid, t in types.items())),
            stakes=tuple(sorted((pid, scalar(s)) for pid, s in stakes.items())),
        )

    def type_dict(self) -> Dict[PlayerId, Fraction]:
        return dict(self.types)

    def stake_dict(self) -> Dict[PlayerId, Fraction]:
        return dict(self.stakes)

    def weights(self) -> Dict[PlayerId, Fraction]:
        t = self.type_dict()
        s = self.stake_dict()
        return {pid: self.alpha * t[pid] + (1 - self.alpha) * s[pid] for pid in t}

    @property
    def total_types(self) -> Fraction:
        return sum(t for _, t in self.types)

    @property
    def total_stakes(self) -> Fraction:
        return sum(s for _, s in self.stakes)

    @property
    def total_weight(self) -> Fraction:
        return self.alpha * self.total_types + (1 - self.alpha) * self.total_stakes


def selection_probabilities(state: VirtualStakeState) -> Dict[PlayerId, Fraction]:
    """w_i = p_i / W; exact, sums to 1."""
    total = state.total_weight
    if total <= 0:
        raise ValueError("total virtual stake must be positive")
    return {pid: p / total for pid, p in state.weights().items()}


def expected_step(state: VirtualStakeState) -> VirtualStakeState:
    """One round of expected dynamics: every stake grows by its own probability."""
    probs = selection_probabilities(state)
    stakes = state.stake_dict()
    return VirtualStakeState(
        alpha=state.alpha,
        types=state.types,
        stakes=tuple(sorted((pid, stakes[pid] + probs[pid]) for pid in stakes)),
    )


@dataclass
class InvarianceReport:
    steps: int = 0
    probability_breaks: List[int] = field(default_factory=list)
    stake_recurrence_breaks: List[int] = field(default_factory=list)
    weight_recurrence_breaks: List[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (
            self.probability_breaks
            or self.stake_recurrence_breaks
            or self.weight_recurrence_breaks
        )


def check_invariance(state: VirtualStakeState, steps: int) -> InvarianceReport:
    """Iterate expected dynamics and assert the three exact identities per step.

    Probabilities stay at their initial values; the stake total grows by 1
    per round and the weight total by 1 - alpha.  Everything is compared for
    exact rational equality, so a single break is a real counterexample.
    """
    if steps < 1:
        raise ValueError("need at least one step")
    report = InvarianceReport(steps=steps)
    reference = selection_probabilities(state)
    current = state
    for step in range(1, steps + 1):
        nxt = expected_step(current)
        if selection_probabilities(nxt) != reference:
            report.probability_breaks.append(step)
        if nxt.total_stakes != current.total_stakes + 1:
            report.stake_recurrence_breaks.append(step)
        if nxt.total_weight != current.total_weight + (1 - state.alpha):
            report.weight_recurrence_breaks.append(step)
        current = nxt
    return report


def longrun_share(state: VirtualStakeState) -> Dict[PlayerId, Fraction]:
    """Per-round limiting stake increment of each player.

    By invariance this is just the round-1 probability vector: the stake a
    player accumulates over t rounds tends to sigma_i + t * w_i.
    """
    return selection_probabilities(state)


def incumbent_gap_state(
    alpha: ScalarLike,
    types: Dict[PlayerId, ScalarLike],
    M: ScalarLike,
) -> VirtualStakeState:
    """Initial stakes making the top type's long-run share non-dominant.

    The top-type player starts at stake 1; every other player i starts at
    ``alpha * (type_top - type_i) / (1 - alpha) + M``.  That stake exactly
    compensates the type advantage plus an M-sized head start, so for large M
    the lower types' growth rates exceed the top type's and her stake becomes
    a vanishing fraction of the total.  Requires alpha < 1.
    """
    a = scalar(alpha)
    if not 0 <= a < 1:
        raise ValueError("construction needs alpha in [0, 1)")
    m = scalar(M)
    if m <= 0:
        raise ValueError("M must be positive")
    ts = {pid: scalar(t) for pid, t in types.items()}
    if len(ts) < 2:
        raise ValueError("need at least two players")
    top = max(ts, key=lambda pid: (ts[pid], -pid))
    stakes = {
        pid: Fraction(1) if pid == top else a * (ts[top] - ts[pid]) / (1 - a) + m
        for pid in ts
    }
    return VirtualStakeState.build(a, ts, stakes)


def theorem6_counterexample(
    alpha: ScalarLike,
    types: Dict[PlayerId, ScalarLike],
    M: ScalarLike,
    budget: ScalarLike = 1,
    tau_threshold: ScalarLike = Fraction(1, 2),
    value_function=None,
) -> Tuple[Instance, VirtualStakeState]:
    """A full game instance on the gap construction, plus its dynamics state."""
    from .core import IdentityValue

    state = incumbent_gap_state(alpha, types, M)
    players = tuple(
        Player(id=pid, type_=t) for pid, t in sorted(state.type_dict().items())
    )
    instance = Instance.build(
        players=players,
        initial_stakes=state.stake_dict(),
        budget=budget,
        tau_threshold=tau_threshold,
        value_function=value_function if value_function is not None else IdentityValue(),
    )
    return instance, state


def sampled_win_frequencies(
    state: VirtualStakeState,
    rounds: int,
    seed: int,
) -> Dict[PlayerId, Fraction]:
    """Empirical winner frequencies over sampled rounds with full participation.

    Stakes are updated by the realized unit reward, not the expectation, so
    this is the stochastic process the expected dynamics approximate.  The
    frequencies converge to the round-1 probabilities.
    """
    if rounds < 1:
        raise ValueError("need at least one round")
    rng = random.Random(seed)
    stakes = state.stake_dict()
    wins = {pid: 0 for pid in stakes}
    order = sorted(stakes)
    current = state
    for _ in range(rounds):
        probs = selection_probabilities(current)
        u = Fraction(rng.random())
        running = Fraction(0)
        winner = order[-1]
        for pid in order:
            running += probs[pid]
            if u < running:
                winner = pid
                break
        wins[winner] += 1
        stakes = current.stake_dict()
        stakes[winner] += 1
        current = VirtualStakeState(
            alpha=state.alpha,
            types=state.types,
            stakes=tuple(sorted(stakes.items())),
        )
    return {pid: Fraction(wins[pid], rounds) for pid in wins}
