"""Stage-game equilibrium machinery.

Implements, with exact arithmetic throughout:

* harmfulness of a stake profile for a player within a participation set;
* the recovery-winner labeling procedure and the myopic suffix equilibrium;
* the lookahead suffix equilibrium with per-player recovery plans (bounded
  by a horizon cap, failing loudly when the cap is hit);
* per-player participation thresholds along a realized trajectory;
* a brute-force oracle that enumerates arbitrary participant subsets.

Ties in the participate-vs-abstain comparison are broken in favor of
participation by default (uniqueness of the suffix equilibrium depends on
it); pass ``tie_participate=False`` for the strict variant that demands a
positive gain to participate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Dict, List, Optional, Tuple, Union

from .core import Instance, PlayerId, StakeProfile, rank, suffix_set
from .measures import tau_decentralization_index, token_value
from .policies import Policy, expected_budget, expected_rewards

PAR = "par"


def stage_value(instance: Instance, stakes: StakeProfile, participants: frozenset):
    """(d, v) evaluated over the participants' stakes only.

    The empty set is given the minimum level d = 1 by convention; it is
    reachable only through the brute-force oracle's abstention checks.
    """
    if participants:
        d = tau_decentralization_index(
            [stakes[pid] for pid in participants], instance.tau_threshold
        )
    else:
        d = 1
    return d, token_value(d, instance.value_function)


def stage_utility(
    instance: Instance,
    stakes: StakeProfile,
    policy: Policy,
    i: PlayerId,
    participants: frozenset,
) -> Fraction:
    """Myopic stage utility of player i when the participant set is given.

    Participants value their stake plus expected reward at the token value of
    the set, minus their cost; abstainers value their stake at the value the
    set realizes without them.
    """
    _, v = stage_value(instance, stakes, participants)
    if i in participants:
        reward = expected_budget(policy, instance, stakes, i, participants)
        return (stakes[i] + reward) * v - instance.player(i).cost
    return stakes[i] * v


@dataclass(frozen=True)
class HarmfulnessVerdict:
    player: PlayerId
    participants: frozenset
    utility_participate: Fraction
    utility_abstain: Fraction
    harmful: bool


def is_harmful(
    i: PlayerId,
    participants: frozenset,
    stakes: StakeProfile,
    instance: Instance,
    policy: Policy,
    tie_participate: bool = True,
) -> HarmfulnessVerdict:
    """Whether the profile is harmful for i in the given set (i must belong)."""
    if i not in participants:
        raise ValueError(f"player {i} is not in the participation set")
    up = stage_utility(instance, stakes, policy, i, participants)
    ua = stage_utility(instance, stakes, policy, i, participants - {i})
    harmful = up < ua if tie_participate else up <= ua
    return HarmfulnessVerdict(i, participants, up, ua, harmful)


@dataclass(frozen=True)
class RecoveryWinnerLabel:
    rank: int


Label = Union[RecoveryWinnerLabel, str]


def recovery_winner_labels(
    stakes: StakeProfile,
    instance: Instance,
    policy: Policy,
    tie_participate: bool = True,
    _stats: Optional[dict] = None,
) -> Dict[PlayerId, Label]:
    """Label every player for whom her suffix is harmful.

    Scanning ranks from smallest stake upward, a harmful player gets the
    first later rank r that is itself non-harmful (or labeled ``PAR``) as her
    recovery winner, provided abstaining in favor of the suffix at r beats
    participating; otherwise she is labeled ``PAR`` and participates anyway.
    Runs in O(n^2) with exactly one harmfulness evaluation per rank.
    """
    ranking = rank(stakes)
    n = len(ranking)
    harmful_at: Dict[int, bool] = {}
    value_at: Dict[int, Fraction] = {}
    labels: Dict[PlayerId, Label] = {}
    label_by_rank: Dict[int, Label] = {}

    for r in range(n, 0, -1):
        pid = ranking[r - 1]
        suffix = suffix_set(ranking, r)
        verdict = is_harmful(pid, suffix, stakes, instance, policy, tie_participate)
        if _stats is not None:
            _stats["harmful_evals"] = _stats.get("harmful_evals", 0) + 1
        harmful_at[r] = verdict.harmful
        _, value_at[r] = stage_value(instance, stakes, suffix)
        if not verdict.harmful:
            continue
        for r2 in range(r + 1, n + 1):
            if not harmful_at[r2] or label_by_rank.get(r2) == PAR:
                participate_worth = value_at[r] * (
                    stakes[pid] + expected_budget(policy, instance, stakes, pid, suffix)
                )
                abstain_worth = value_at[r2] * stakes[pid]
                label: Label = (
                    RecoveryWinnerLabel(r2) if participate_worth < abstain_worth else PAR
                )
                labels[pid] = label
                label_by_rank[r] = label
                break
        else:
            # No candidate below (possible for rank n under the strict tie
            # rule): the player participates regardless.
            labels[pid] = PAR
            label_by_rank[r] = PAR
    return labels


def myopic_equilibrium(
    stakes: StakeProfile,
    instance: Instance,
    policy: Policy,
    tie_participate: bool = True,
    _stats: Optional[dict] = None,
) -> frozenset:
    """The unique stage equilibrium for myopic players: a suffix of the ranking.

    Scanning ranks from the largest stake downward, returns the suffix of the
    first rank that is either non-harmful there or harmful without a recovery
    winner.
    """
    ranking = rank(stakes)
    labels = recovery_winner_labels(stakes, instance, policy, tie_participate, _stats)
    for r in range(1, len(ranking) + 1):
        pid = ranking[r - 1]
        label = labels.get(pid)
        if label is None or label == PAR:
            return suffix_set(ranking, r)
    raise AssertionError("unreachable: the last rank is never harmful")


@dataclass(frozen=True)
class RecoveryPlan:
    """Planned future stage equilibria for an abstainer, ending at re-entry.

    Each step is ``(offset, participants, expected_stakes)``; the owner
    belongs only to the final step's participant set, whose token value
    prices her stake (``terminal_value``).
    """

    owner: PlayerId
    steps: Tuple[Tuple[int, frozenset, Tuple[Tuple[PlayerId, Fraction], ...]], ...]
    terminal_value: Fraction

    @property
    def length(self) -> int:
        return len(self.steps)


class LookaheadHorizonError(RuntimeError):
    """A recovery plan stayed open past the horizon cap.

    Distinguishes "no plan found within the cap" from the model's "no plan
    exists" (which would value abstention at minus infinity): the solver
    refuses to guess and reports the player instead.
    """

    def __init__(self, player: PlayerId, stakes: StakeProfile, cap: int):
        self.player = player
        self.stakes = dict(stakes)
        self.cap = cap
        super().__init__(
            f"recovery plan for player {player} still open after {cap} rounds "
            f"from profile {dict(stakes)}"
        )


class LookaheadSolver:
    """Suffix equilibrium for players that plan abstention through recovery.

    Participation is judged myopically; abstention is valued by the recovery
    plan: follow the single-shot (myopic) stage equilibria of the expected
    future profiles until the player re-enters, then price her stake at that
    round's token value.  Stake expectations advance by the policy's expected
    rewards.  The plan search is bounded by the horizon cap and fails loudly
    when the cap is hit; completed solves are memoized per stake profile.
    """

    def __init__(
        self,
        instance: Instance,
        policy: Policy,
        horizon_cap: int = 50,
        tie_participate: bool = True,
    ):
        if horizon_cap < 1:
            raise ValueError("horizon cap must be at least 1")
        self.instance = instance
        self.policy = policy
        self.horizon_cap = horizon_cap
        self.tie_participate = tie_participate
        self._cache: Dict[Tuple[Tuple[PlayerId, Fraction], ...], frozenset] = {}

    def _key(self, stakes: StakeProfile) -> Tuple[Tuple[PlayerId, Fraction], ...]:
        return tuple(sorted(stakes.items()))

    def solve(self, stakes: StakeProfile) -> frozenset:
        """Equilibrium participant set at the given profile: a ranking suffix.

        Scanning from the smallest stake upward, the last rank found
        non-harmful in its own suffix wins; the smallest stake is non-harmful
        in all but contrived fixed-winner setups, so a suffix always exists.
        """
        key = self._key(stakes)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        ranking = rank(stakes)
        n = len(ranking)
        chosen = n
        for r in range(n, 0, -1):
            if not self._harmful(ranking[r - 1], ranking, r, stakes):
                chosen = r
        result = suffix_set(ranking, chosen)
        self._cache[key] = result
        return result

    def solve_with_plans(
        self, stakes: StakeProfile
    ) -> Tuple[frozenset, Dict[PlayerId, RecoveryPlan]]:
        """Equilibrium set plus the recovery plan of every excluded player."""
        participants = self.solve(stakes)
        plans: Dict[PlayerId, RecoveryPlan] = {}
        for pid in stakes:
            if pid not in participants:
                plans[pid] = self._recovery(pid, participants, stakes)
        return participants, plans

    def abstention_value(
        self, i: PlayerId, without_i: frozenset, stakes: StakeProfile
    ) -> Fraction:
        """Value of abstaining when the round's other participants are given."""
        return self._recovery(i, without_i, stakes).terminal_value

    def _harmful(
        self,
        i: PlayerId,
        ranking: Tuple[PlayerId, ...],
        r: int,
        stakes: StakeProfile,
    ) -> bool:
        suffix = suffix_set(ranking, r)
        participate = stage_utility(self.instance, stakes, self.policy, i, suffix)
        abstain = self._recovery(i, suffix - {i}, stakes).terminal_value
        if self.tie_participate:
            return participate < abstain
        return participate <= abstain

    def _recovery(
        self,
        i: PlayerId,
        participants_now: frozenset,
        stakes: StakeProfile,
    ) -> RecoveryPlan:
        """Follow future myopic equilibria until i re-enters.

        The first advance uses the hypothesized current-round set; later ones
        use each future round's own equilibrium.
        """
        current = dict(stakes)
        participants = participants_now
        steps: List[Tuple[int, frozenset, Tuple[Tuple[PlayerId, Fraction], ...]]] = []
        for offset in range(1, self.horizon_cap + 1):
            rewards = expected_rewards(self.policy, self.instance, current, participants)
            current = {pid: current[pid] + rewards[pid] for pid in current}
            future = myopic_equilibrium(
                current, self.instance, self.policy, self.tie_participate
            )
            steps.append((offset, future, tuple(sorted(current.items()))))
            if i in future:
                _, v = stage_value(self.instance, current, future)
                return RecoveryPlan(
                    owner=i, steps=tuple(steps), terminal_value=current[i] * v
                )
            participants = future
        raise LookaheadHorizonError(i, stakes, self.horizon_cap)


def lookahead_equilibrium(
    stakes: StakeProfile,
    instance: Instance,
    policy: Policy,
    horizon_cap: int = 50,
    tie_participate: bool = True,
) -> Tuple[frozenset, Dict[PlayerId, RecoveryPlan]]:
    """One-shot convenience wrapper around :class:`LookaheadSolver`."""
    solver = LookaheadSolver(instance, policy, horizon_cap, tie_participate)
    return solver.solve_with_plans(stakes)


@dataclass(frozen=True)
class Threshold:
    """Per-player minimum system value over rounds harmful to that player.

    ``None`` stands for "never harmful on the observed trajectory" (plus
    infinity); the instance threshold is the minimum of the finite entries.
    """

    per_player: Tuple[Tuple[PlayerId, Optional[Fraction]], ...]

    @property
    def theta(self) -> Optional[Fraction]:
        finite = [v for _, v in self.per_player if v is not None]
        return min(finite) if finite else None

    def of(self, pid: PlayerId) -> Optional[Fraction]:
        return dict(self.per_player)[pid]


def threshold(
    instance: Instance,
    policy: Policy,
    horizon: int,
    behavior: str = "myopic",
) -> Threshold:
    """Run the policy for ``horizon`` rounds and collect harmful-round values.

    For each round, each player is tested for harmfulness in her own suffix
    of that round's ranking (myopically); the value recorded is the token
    value of the full stake profile at that round.  Players never harmful get
    the plus-infinity sentinel.
    """
    from . import engine  # local import: engine depends on this module

    mins: Dict[PlayerId, Optional[Fraction]] = {pid: None for pid in instance.stakes()}
    if horizon > 0:
        trace = engine.run(instance, policy, behavior=behavior, rounds=horizon)
        from .policies import FixedWinner, MuEll

        for record in trace.records:
            profile = dict(record.stakes_before)
            ranking = rank(profile)
            stage = policy
            if isinstance(policy, MuEll):
                if record.winner is None:
                    continue
                stage = FixedWinner(record.winner)
            d_full = tau_decentralization_index(profile.values(), instance.tau_threshold)
            v_full = token_value(d_full, instance.value_function)
            for r, pid in enumerate(ranking, start=1):
                verdict = is_harmful(
                    pid, suffix_set(ranking, r), profile, instance, stage
                )
                if verdict.harmful:
                    best = mins[pid]
                    if best is None or v_full < best:
                        mins[pid] = v_full
    return Threshold(per_player=tuple(sorted(mins.items())))


def brute_force_equilibrium(
    stakes: StakeProfile,
    instance: Instance,
    policy: Policy,
    behavior: str = "myopic",
    tie_participate: bool = True,
    horizon_cap: int = 50,
) -> List[frozenset]:
    """Enumerate all participant subsets and return every stage equilibrium.

    A subset is an equilibrium when no member strictly gains by leaving and
    no outsider strictly gains by joining (ties favor participation, so an
    indifferent outsider joins).  For lookahead behavior, abstention on both
    sides is priced by the recovery-plan value.  Exponential; limited to 12
    players.  May evaluate the empty participation set (d = 1 convention).
    """
    ids = sorted(stakes)
    if len(ids) > 12:
        raise ValueError(f"brute force limited to 12 players, got {len(ids)}")
    if behavior not in ("myopic", "lookahead"):
        raise ValueError(f"unknown behavior {behavior!r}")
    solver = (
        LookaheadSolver(instance, policy, horizon_cap, tie_participate)
        if behavior == "lookahead"
        else None
    )

    def abstain_value(i: PlayerId, others: frozenset) -> Fraction:
        if solver is None:
            return stage_utility(instance, stakes, policy, i, others)
        return solver.abstention_value(i, others, stakes)

    equilibria: List[frozenset] = []
    for size in range(0, len(ids) + 1):
        for combo in combinations(ids, size):
            subset = frozenset(combo)
            ok = True
            for i in subset:
                up = stage_utility(instance, stakes, policy, i, subset)
                ua = abstain_value(i, subset - {i})
                if (up < ua) if tie_participate else (up <= ua):
                    ok = False
                    break
            if not ok:
                continue
            for i in ids:
                if i in subset:
                    continue
                joined = subset | {i}
                up = stage_utility(instance, stakes, policy, i, joined)
                ua = abstain_value(i, subset)
                stays_out = (up < ua) if tie_participate else (up <= ua)
                if not stays_out:
                    ok = False
                    break
            if ok:
                equilibria.append(subset)
    return equilibria
