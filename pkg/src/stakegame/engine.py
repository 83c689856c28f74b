"""Round-by-round simulation of the repeated participation game.

Two run modes:

* ``expected``: winners that are certain are realized; mixed policies grow
  every participant's stake by her exact expected reward.  Fully
  deterministic, no randomness consumed.
* ``sampled``: winners are drawn with a seeded stdlib generator through an
  exact inverse-CDF walk over the participants in rank order.  Rounds whose
  winner distribution is a point mass consume no randomness, so traces stay
  comparable across policies that differ only in degenerate rounds.

Behavior selects the stage solver: ``myopic`` or ``lookahead``.
"""

from __future__ import annotations

import csv
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .core import Instance, PlayerId, RoundRecord, format_scalar
from .equilibrium import LookaheadSolver, myopic_equilibrium, stage_value
from .policies import (
    FixedWinner,
    MuEll,
    MuEllShadow,
    Policy,
    budget_allocation,
    draw_winner,
    expected_rewards,
    point_mass_winner,
    stage_policy,
    winner_distribution,
)


@dataclass
class Trace:
    instance: Instance
    policy: Policy
    behavior: str
    mode: str
    seed: Optional[int]
    records: List[RoundRecord] = field(default_factory=list)

    @property
    def rounds(self) -> int:
        return len(self.records)

    def final_stakes(self) -> Dict[PlayerId, Fraction]:
        if not self.records:
            return self.instance.stakes()
        return dict(self.records[-1].stakes_after)


class Runner:
    """Stateful driver: holds current stakes, advances one round per step."""

    def __init__(
        self,
        instance: Instance,
        policy: Policy,
        behavior: str = "myopic",
        mode: str = "expected",
        seed: Optional[int] = None,
        horizon_cap: int = 50,
    ):
        if behavior not in ("myopic", "lookahead"):
            raise ValueError(f"unknown behavior {behavior!r}")
        if mode not in ("expected", "sampled"):
            raise ValueError(f"unknown mode {mode!r}")
        if mode == "sampled" and seed is None:
            raise ValueError("sampled mode requires a seed")
        self.instance = instance
        self.policy = policy
        self.behavior = behavior
        self.mode = mode
        self.seed = seed
        self.horizon_cap = horizon_cap
        self._rng = random.Random(seed) if mode == "sampled" else None
        self._shadow = MuEllShadow(instance, horizon_cap) if isinstance(policy, MuEll) else None
        # Solver caches are only valid while the stage policy is fixed, so
        # MuEll (a different FixedWinner each round) builds one per step.
        self._solver: Optional[LookaheadSolver] = None
        if behavior == "lookahead" and self._shadow is None:
            self._solver = LookaheadSolver(instance, policy, horizon_cap)
        self.stakes: Dict[PlayerId, Fraction] = instance.stakes()
        self.round = 0
        self.trace = Trace(instance, policy, behavior, mode, seed)

    def _participants(self, stage: Policy) -> frozenset:
        if self.behavior == "myopic":
            return myopic_equilibrium(self.stakes, self.instance, stage)
        solver = self._solver
        if solver is None:
            solver = LookaheadSolver(self.instance, stage, self.horizon_cap)
        return solver.solve(self.stakes)

    def step(self) -> RoundRecord:
        self.round += 1
        stage = stage_policy(self.policy, self._shadow)
        before = tuple(sorted(self.stakes.items()))
        participants = self._participants(stage)
        d, v = stage_value(self.instance, self.stakes, participants)

        winner: Optional[PlayerId] = None
        if isinstance(stage, FixedWinner) and stage.winner not in participants:
            # The designated winner sat the round out; nothing is paid.
            winner = stage.winner
            rewards = {pid: Fraction(0) for pid in self.stakes}
        elif self.mode == "sampled":
            dist = winner_distribution(stage, self.instance, self.stakes, participants)
            winner = point_mass_winner(dist)
            if winner is None:
                u = Fraction(self._rng.random())
                winner = draw_winner(dist, self.stakes, u)
            paid = budget_allocation(stage, self.instance, participants, winner)
            rewards = {pid: paid.get(pid, Fraction(0)) for pid in self.stakes}
        else:
            rewards = expected_rewards(stage, self.instance, self.stakes, participants)
            dist = winner_distribution(stage, self.instance, self.stakes, participants)
            winner = point_mass_winner(dist)

        self.stakes = {pid: self.stakes[pid] + rewards[pid] for pid in self.stakes}
        record = RoundRecord(
            round=self.round,
            stakes_before=before,
            participants=participants,
            d=d,
            v=v,
            winner=winner,
            rewards=tuple(sorted(rewards.items())),
            stakes_after=tuple(sorted(self.stakes.items())),
        )
        self.trace.records.append(record)
        return record

    def run(self, rounds: int) -> Trace:
        for _ in range(rounds):
            self.step()
        return self.trace


def run(
    instance: Instance,
    policy: Policy,
    behavior: str = "myopic",
    rounds: Optional[int] = None,
    mode: str = "expected",
    seed: Optional[int] = None,
    horizon_cap: int = 50,
) -> Trace:
    """Simulate ``rounds`` rounds (default: the instance's horizon)."""
    if rounds is None:
        rounds = instance.horizon
    if rounds is None:
        raise ValueError("no round count: pass rounds= or set the instance horizon")
    runner = Runner(instance, policy, behavior, mode, seed, horizon_cap)
    return runner.run(rounds)


@dataclass
class PropertyReport:
    """Trajectory-level property monitoring over a finished trace.

    ``recovery_violations`` lists ``(round, d_before, d_after)`` triples where
    the full-profile decentralization index dropped during a round in which
    some previously-participating player was excluded (re-entry rounds are
    outside the excluded player's segment).  ``conservation_violations``
    lists rounds whose paid rewards total neither zero nor the budget.
    """

    rounds_checked: int = 0
    exclusion_rounds: int = 0
    recovery_violations: List[Tuple[int, int, int]] = field(default_factory=list)
    conservation_violations: List[int] = field(default_factory=list)

    @property
    def good_recovery(self) -> bool:
        return not self.recovery_violations

    @property
    def ok(self) -> bool:
        return self.good_recovery and not self.conservation_violations


def monitor_properties(trace: Trace) -> PropertyReport:
    """Check recovery monotonicity and budget conservation on a trace."""
    from .measures import tau_decentralization_index

    tau = trace.instance.tau_threshold
    report = PropertyReport()
    excluded: set = set()
    prev_participants: Optional[frozenset] = None
    for rec in trace.records:
        report.rounds_checked += 1
        excluded -= set(rec.participants)
        if prev_participants is not None:
            excluded |= set(prev_participants) - set(rec.participants)
        if excluded:
            report.exclusion_rounds += 1
            d_before = tau_decentralization_index(dict(rec.stakes_before).values(), tau)
            d_after = tau_decentralization_index(dict(rec.stakes_after).values(), tau)
            if d_after < d_before:
                report.recovery_violations.append((rec.round, d_before, d_after))
        paid = sum(dict(rec.rewards).values())
        if paid != 0 and paid != trace.instance.budget:
            report.conservation_violations.append(rec.round)
        prev_participants = rec.participants
    return report


def trace_rows(trace: Trace) -> List[List[str]]:
    """Header plus one row per round; every number rendered as an exact rational."""
    ids = sorted(trace.instance.stakes())
    header = (
        ["round"]
        + [f"stake_{pid}" for pid in ids]
        + ["participants", "d", "v", "winner"]
        + [f"reward_{pid}" for pid in ids]
    )
    rows = [header]
    for rec in trace.records:
        before = dict(rec.stakes_before)
        rewards = dict(rec.rewards)
        rows.append(
            [str(rec.round)]
            + [format_scalar(before[pid]) for pid in ids]
            + [
                ",".join(str(pid) for pid in sorted(rec.participants)),
                str(rec.d),
                format_scalar(rec.v),
                "" if rec.winner is None else str(rec.winner),
            ]
            + [format_scalar(rewards[pid]) for pid in ids]
        )
    return rows


def write_trace(trace: Trace, path: str) -> None:
    """Write a trace as CSV; loads back losslessly because values are rationals."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerows(trace_rows(trace))
