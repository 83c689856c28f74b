"""Scenario files: JSON descriptions of an instance plus a run configuration.

Numbers may be written as rational strings ("3/2"), integers, or decimals;
decimals are converted exactly, so "0.25" means exactly 1/4.  Unknown fields
are rejected rather than ignored, which catches typos in option names.

Three scenarios are built in (the worked three-player setup with strictly
decreasing types and equal initial stakes):

* ``example1-myopic``:    winner-take-all type-favoring policy, myopic play;
* ``example2-lookahead``: the same policy with planning players;
* ``example3-muell``:     the lookahead-simulating policy with myopic play.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Optional

from .core import (
    AffineValue,
    IdentityValue,
    Instance,
    Player,
    TableValue,
    ValueFunction,
    format_scalar,
    scalar,
    validate_instance,
)
from .policies import FixedWinner, MuAll, MuAlpha, MuEll, MuStar, Policy


class ScenarioError(ValueError):
    """A scenario file that does not conform to the schema."""


@dataclass(frozen=True)
class Scenario:
    name: str
    instance: Instance
    policy: Policy
    behavior: str
    rounds: int
    mode: str
    seed: Optional[int]
    horizon_cap: int


def _require(mapping: Dict[str, Any], allowed: set, context: str) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ScenarioError(f"{context}: unknown field(s) {sorted(unknown)}")


def _policy_from_dict(spec: Dict[str, Any]) -> Policy:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ScenarioError("policy: expected an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "mu_alpha":
        _require(spec, {"kind", "alpha"}, "policy mu_alpha")
        if "alpha" not in spec:
            raise ScenarioError("policy mu_alpha: missing 'alpha'")
        return MuAlpha(alpha=scalar(spec["alpha"]))
    if kind == "mu_star":
        _require(spec, {"kind", "epsilon"}, "policy mu_star")
        return MuStar(epsilon=scalar(spec.get("epsilon", 0)))
    if kind == "mu_all":
        _require(spec, {"kind"}, "policy mu_all")
        return MuAll()
    if kind == "mu_ell":
        _require(spec, {"kind", "horizon_cap"}, "policy mu_ell")
        return MuEll(horizon_cap=int(spec.get("horizon_cap", 50)))
    if kind == "fixed_winner":
        _require(spec, {"kind", "winner"}, "policy fixed_winner")
        return FixedWinner(winner=int(spec["winner"]))
    raise ScenarioError(f"policy: unknown kind {kind!r}")


def _policy_to_dict(policy: Policy) -> Dict[str, Any]:
    if isinstance(policy, MuAlpha):
        return {"kind": "mu_alpha", "alpha": format_scalar(policy.alpha)}
    if isinstance(policy, MuStar):
        out: Dict[str, Any] = {"kind": "mu_star"}
        if policy.epsilon:
            out["epsilon"] = format_scalar(policy.epsilon)
        return out
    if isinstance(policy, MuAll):
        return {"kind": "mu_all"}
    if isinstance(policy, MuEll):
        return {"kind": "mu_ell", "horizon_cap": policy.horizon_cap}
    if isinstance(policy, FixedWinner):
        return {"kind": "fixed_winner", "winner": policy.winner}
    raise ScenarioError(f"unknown policy {policy!r}")


def _value_from_dict(spec: Dict[str, Any]) -> ValueFunction:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ScenarioError("value_function: expected an object with a 'kind' field")
    kind = spec["kind"]
    if kind == "identity":
        _require(spec, {"kind"}, "value_function identity")
        return IdentityValue()
    if kind == "affine":
        _require(spec, {"kind", "slope", "intercept"}, "value_function affine")
        return AffineValue(slope=scalar(spec["slope"]), intercept=scalar(spec["intercept"]))
    if kind == "table":
        _require(spec, {"kind", "values"}, "value_function table")
        values = spec.get("values")
        if not isinstance(values, dict):
            raise ScenarioError("value_function table: 'values' must map level -> value")
        return TableValue.from_mapping({int(k): scalar(v) for k, v in values.items()})
    raise ScenarioError(f"value_function: unknown kind {kind!r}")


def _value_to_dict(vf: ValueFunction) -> Dict[str, Any]:
    if isinstance(vf, IdentityValue):
        return {"kind": "identity"}
    if isinstance(vf, AffineValue):
        return {
            "kind": "affine",
            "slope": format_scalar(vf.slope),
            "intercept": format_scalar(vf.intercept),
        }
    if isinstance(vf, TableValue):
        return {
            "kind": "table",
            "values": {str(level): format_scalar(v) for level, v in vf.table},
        }
    raise ScenarioError(f"unknown value function {vf!r}")


_TOP_FIELDS = {
    "name",
    "players",
    "policy",
    "behavior",
    "tau_threshold",
    "value_function",
    "budget",
    "rounds",
    "mode",
    "seed",
    "horizon_cap",
}


def parse_scenario(data: Dict[str, Any], name: str = "scenario") -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("top level must be an object")
    _require(data, _TOP_FIELDS, "scenario")
    for key in ("players", "policy", "budget", "tau_threshold", "rounds"):
        if key not in data:
            raise ScenarioError(f"scenario: missing required field {key!r}")

    players = []
    stakes = {}
    if not isinstance(data["players"], list) or not data["players"]:
        raise ScenarioError("players: expected a non-empty list")
    for idx, entry in enumerate(data["players"]):
        if not isinstance(entry, dict):
            raise ScenarioError(f"players[{idx}]: expected an object")
        _require(entry, {"id", "type", "stake", "cost"}, f"players[{idx}]")
        for key in ("id", "type", "stake"):
            if key not in entry:
                raise ScenarioError(f"players[{idx}]: missing {key!r}")
        pid = int(entry["id"])
        players.append(Player(id=pid, type_=scalar(entry["type"]), cost=scalar(entry.get("cost", 0))))
        stakes[pid] = scalar(entry["stake"])

    behavior = data.get("behavior", "myopic")
    if behavior not in ("myopic", "lookahead"):
        raise ScenarioError(f"behavior: expected 'myopic' or 'lookahead', got {behavior!r}")
    mode = data.get("mode", "expected")
    if mode not in ("expected", "sampled"):
        raise ScenarioError(f"mode: expected 'expected' or 'sampled', got {mode!r}")
    seed = data.get("seed")
    if mode == "sampled" and seed is None:
        raise ScenarioError("mode 'sampled' requires a seed")
    if seed is not None:
        seed = int(seed)
    rounds = int(data["rounds"])
    if rounds < 1:
        raise ScenarioError(f"rounds: must be >= 1, got {rounds}")

    vf_spec = data.get("value_function", {"kind": "identity"})
    instance = Instance.build(
        players=players,
        initial_stakes=stakes,
        budget=scalar(data["budget"]),
        tau_threshold=scalar(data["tau_threshold"]),
        value_function=_value_from_dict(vf_spec),
        horizon=rounds,
    )
    report = validate_instance(instance)
    if not report.ok:
        raise ScenarioError("invalid instance: " + "; ".join(report.errors))

    return Scenario(
        name=str(data.get("name", name)),
        instance=instance,
        policy=_policy_from_dict(data["policy"]),
        behavior=behavior,
        rounds=rounds,
        mode=mode,
        seed=seed,
        horizon_cap=int(data.get("horizon_cap", 50)),
    )


def scenario_to_dict(scenario: Scenario) -> Dict[str, Any]:
    instance = scenario.instance
    stakes = instance.stakes()
    out: Dict[str, Any] = {
        "name": scenario.name,
        "players": [
            {
                "id": p.id,
                "type": format_scalar(p.type_),
                "stake": format_scalar(stakes[p.id]),
                "cost": format_scalar(p.cost),
            }
            for p in instance.players
        ],
        "policy": _policy_to_dict(scenario.policy),
        "behavior": scenario.behavior,
        "tau_threshold": format_scalar(instance.tau_threshold),
        "value_function": _value_to_dict(instance.value_function),
        "budget": format_scalar(instance.budget),
        "rounds": scenario.rounds,
        "mode": scenario.mode,
        "horizon_cap": scenario.horizon_cap,
    }
    if scenario.seed is not None:
        out["seed"] = scenario.seed
    return out


def load_scenario(path: str) -> Scenario:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}")
    return parse_scenario(data, name=path)


def save_scenario(scenario: Scenario, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(scenario_to_dict(scenario), fh, indent=2)
        fh.write("\n")


def _base_players():
    return [
        Player(id=1, type_=Fraction(3)),
        Player(id=2, type_=Fraction(2)),
        Player(id=3, type_=Fraction(1)),
    ]


def _base_instance(rounds: int) -> Instance:
    return Instance.build(
        players=_base_players(),
        initial_stakes={1: 1, 2: 1, 3: 1},
        budget=1,
        tau_threshold=Fraction(1, 2),
        value_function=IdentityValue(),
        horizon=rounds,
    )


def builtin_scenario(name: str) -> Scenario:
    if name == "example1-myopic":
        return Scenario(
            name=name,
            instance=_base_instance(5),
            policy=MuStar(),
            behavior="myopic",
            rounds=5,
            mode="expected",
            seed=None,
            horizon_cap=50,
        )
    if name == "example2-lookahead":
        return Scenario(
            name=name,
            instance=_base_instance(10),
            policy=MuStar(),
            behavior="lookahead",
            rounds=10,
            mode="expected",
            seed=None,
            horizon_cap=50,
        )
    if name == "example3-muell":
        return Scenario(
            name=name,
            instance=_base_instance(10),
            policy=MuEll(),
            behavior="myopic",
            rounds=10,
            mode="expected",
            seed=None,
            horizon_cap=50,
        )
    raise ScenarioError(
        f"unknown builtin scenario {name!r}; "
        "available: example1-myopic, example2-lookahead, example3-muell"
    )


BUILTIN_SCENARIOS = ("example1-myopic", "example2-lookahead", "example3-muell")
