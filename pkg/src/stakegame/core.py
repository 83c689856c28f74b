"""Domain types and exact arithmetic for repeated participation games.

Players hold token stakes that grow through policy rewards.  Every quantity
(stake, type, budget, token value) is an exact :class:`fractions.Fraction`,
so equilibrium comparisons are decided exactly and simulation traces are
reproducible bit-for-bit across platforms.  No epsilon appears anywhere in
the equilibrium logic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple, Union

Scalar = Fraction
ScalarLike = Union[int, str, float, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def scalar(value: ScalarLike) -> Fraction:
    """Convert a number to an exact Fraction.

    Accepts ints, Fractions, and strings like ``"3/2"`` or ``"0.25"``
    (decimal strings convert exactly).  Floats are converted to their exact
    binary value; prefer rational strings in configuration files.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(value, (Fraction, int, str, float)):
        return Fraction(value)
    raise TypeError(f"cannot convert {value!r} to a scalar")


PlayerId = int


@dataclass(frozen=True)
class Player:
    """A participant with a fixed capability (``type_`` >= 1) and per-round cost."""

    id: PlayerId
    type_: Fraction
    cost: Fraction = ZERO


# A stake profile maps player id -> token holdings (exact, >= 0).
StakeProfile = Mapping[PlayerId, Fraction]


def rank(stakes: StakeProfile) -> Tuple[PlayerId, ...]:
    """Player ids in weakly decreasing stake order, equal stakes by ascending id.

    The result is a permutation of the profile's ids; rank 1 is the largest
    stake.  Deterministic: re-ranking the same profile yields the same order.
    """
    if not stakes:
        raise ValueError("cannot rank an empty stake profile")
    return tuple(sorted(stakes, key=lambda pid: (-stakes[pid], pid)))


def suffix_set(ranking: Sequence[PlayerId], start_rank: int) -> frozenset:
    """The participation set of everyone at ``start_rank`` or below (1-based)."""
    if not 1 <= start_rank <= len(ranking):
        raise ValueError(f"start rank {start_rank} out of range 1..{len(ranking)}")
    return frozenset(ranking[start_rank - 1 :])


@dataclass(frozen=True)
class IdentityValue:
    """Token value equal to the decentralization index itself."""

    def __call__(self, d: int) -> Fraction:
        return Fraction(d)


@dataclass(frozen=True)
class AffineValue:
    """Token value ``slope * d + intercept`` with slope >= 0."""

    slope: Fraction
    intercept: Fraction

    def __call__(self, d: int) -> Fraction:
        return self.slope * d + self.intercept


@dataclass(frozen=True)
class TableValue:
    """Token value from an explicit table over decentralization levels."""

    table: Tuple[Tuple[int, Fraction], ...]

    @staticmethod
    def from_mapping(mapping: Mapping[int, ScalarLike]) -> "TableValue":
        return TableValue(tuple(sorted((int(d), scalar(v)) for d, v in mapping.items())))

    def __call__(self, d: int) -> Fraction:
        for level, value in self.table:
            if level == d:
                return value
        raise ValueError(f"value table has no entry for decentralization {d}")


ValueFunction = Union[IdentityValue, AffineValue, TableValue]


@dataclass(frozen=True)
class Instance:
    """Immutable game setup: players, initial stakes, budget, value function.

    ``tau_threshold`` parameterizes the decentralization index (tau = 1/2 is
    the Nakamoto index).  The budget is constant across rounds.
    """

    players: Tuple[Player, ...]
    initial_stakes: Tuple[Tuple[PlayerId, Fraction], ...]
    budget: Fraction
    tau_threshold: Fraction
    value_function: ValueFunction
    horizon: Optional[int] = None

    @staticmethod
    def build(
        players: Sequence[Player],
        initial_stakes: Mapping[PlayerId, ScalarLike],
        budget: ScalarLike,
        tau_threshold: ScalarLike,
        value_function: ValueFunction,
        horizon: Optional[int] = None,
    ) -> "Instance":
        stakes = tuple(sorted((pid, scalar(s)) for pid, s in initial_stakes.items()))
        return Instance(
            players=tuple(players),
            initial_stakes=stakes,
            budget=scalar(budget),
            tau_threshold=scalar(tau_threshold),
            value_function=value_function,
            horizon=horizon,
        )

    @property
    def n(self) -> int:
        return len(self.players)

    @property
    def ids(self) -> Tuple[PlayerId, ...]:
        return tuple(p.id for p in self.players)

    def player(self, pid: PlayerId) -> Player:
        for p in self.players:
            if p.id == pid:
                return p
        raise KeyError(f"no player with id {pid}")

    def types(self) -> Dict[PlayerId, Fraction]:
        return {p.id: p.type_ for p in self.players}

    def stakes(self) -> Dict[PlayerId, Fraction]:
        return dict(self.initial_stakes)


@dataclass(frozen=True)
class GameState:
    """Per-round state: round counter plus the current stake profile.

    States are value-semantic; the engine advances by producing a successor.
    """

    round: int
    stakes: Tuple[Tuple[PlayerId, Fraction], ...]

    @staticmethod
    def initial(instance: Instance) -> "GameState":
        return GameState(round=1, stakes=instance.initial_stakes)

    def stake_dict(self) -> Dict[PlayerId, Fraction]:
        return dict(self.stakes)


@dataclass(frozen=True)
class RoundRecord:
    """One executed round: stakes, participants, index, value, winner, rewards."""

    round: int
    stakes_before: Tuple[Tuple[PlayerId, Fraction], ...]
    participants: frozenset
    d: int
    v: Fraction
    winner: Optional[PlayerId]
    rewards: Tuple[Tuple[PlayerId, Fraction], ...]
    stakes_after: Tuple[Tuple[PlayerId, Fraction], ...]


@dataclass
class ValidationReport:
    errors: List[str] = field(default_factory=list)
    warnings: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors


def validate_instance(instance: Instance) -> ValidationReport:
    """Check an instance against the model's structural requirements.

    Errors: types below 1, non-positive initial stakes, negative costs,
    non-positive budget, a non-monotone value function, or a value table
    that does not cover every reachable decentralization level.  Warnings:
    value/budget alignment violations and boundary equalities at the
    smallest initial stake (the framework's guarantees assume alignment).
    """
    from . import measures  # local import to avoid a module cycle

    report = ValidationReport()
    ids = [p.id for p in instance.players]
    if not ids:
        report.errors.append("instance has no players")
        return report
    if len(set(ids)) != len(ids):
        report.errors.append("player ids are not unique")
    stake_map = instance.stakes()
    for p in instance.players:
        if p.type_ < 1:
            report.errors.append(f"player {p.id}: type {p.type_} is below 1")
        if p.cost < 0:
            report.errors.append(f"player {p.id}: negative cost {p.cost}")
        if p.id not in stake_map:
            report.errors.append(f"player {p.id}: no initial stake")
        elif stake_map[p.id] <= 0:
            report.errors.append(f"player {p.id}: initial stake {stake_map[p.id]} is not positive")
    if instance.budget <= 0:
        report.errors.append(f"budget {instance.budget} is not positive")
    if not 0 < instance.tau_threshold < 1:
        report.errors.append(f"tau threshold {instance.tau_threshold} is not in (0, 1)")

    vf = instance.value_function
    if isinstance(vf, AffineValue) and vf.slope < 0:
        report.errors.append("affine value function has negative slope")
    elif isinstance(vf, TableValue):
        levels = [level for level, _ in vf.table]
        for d in range(1, instance.n + 1):
            if d not in levels:
                report.errors.append(f"value table misses decentralization level {d}")
        values = [value for _, value in vf.table]
        if any(a > b for a, b in zip(values, values[1:])):
            report.errors.append("value table is not non-decreasing")

    if report.errors:
        return report

    positive = [s for s in stake_map.values() if s > 0]
    bound = min(positive) if positive else ONE
    alignment = measures.check_alignment(instance, bound)
    for v1, v2, needed in alignment.violations:
        report.warnings.append(
            f"value/budget misaligned for values {v1} < {v2}: requires stake > {needed}"
        )
    for v1, v2, needed in alignment.boundary:
        report.warnings.append(
            f"value/budget alignment only weak for values {v1} < {v2} at stake {needed}"
        )
    return report


def format_scalar(x: Fraction) -> str:
    """Render a Fraction as ``p/q`` (or a bare integer when q == 1)."""
    return str(x)
