"""Scenario files: YAML documents describing one election.

Grammar (every key optional unless marked)::

    candidates: [a, b, c]            # required; labels without > = , or spaces
    mode: strict | weak              # default strict
    constitution: qmr | qmr2 | qmr3 | classical-mr   # default qmr
    cycle_policy: error | all_equal  # classical-mr only; default error
    seed: <int>                      # default 0
    samples: <int>                   # default 0 (exact distribution only)
    voters:                          # exactly one of voters / joint
      - order: a>b>c                 # a single basis state
      - amplitudes: {a>b>c: 1}       # pure state; values "re", "re+imi" or numbers
      - weights: {a>b>c: 0.5, c>b>a: 0.5}        # diagonal mixed state
      - tactic: pure_vote
        coefficients: {b>a>c: 0.7071, a>c>b: 0.7071}
    joint:
      amplitudes: {"a>b>c, c>b>a": 0.7071, "c>b>a, a>b>c": 0.7071}
      # or
      tactic: opposition_pair | party_line | w_analog
      coefficients: {...}            # opposition_pair, party_line
      members: 3                     # party_line, w_analog
      preferred: a>b>c               # w_analog
      other: c>b>a                   # w_analog

Amplitudes and weights that are not normalized are rescaled with a warning.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from . import quantum as q
from .constitutions import CONSTITUTIONS, Profile
from .prefs import CandidateSet, PreferenceBasis, PreferenceError, enumerate_basis, parse_order
from .tactics import build_opposition_pair, build_party_line, build_pure_vote, build_w_analog

_TOP_KEYS = {"candidates", "mode", "constitution", "cycle_policy", "seed", "samples", "voters", "joint"}


class ScenarioError(ValueError):
    pass


def parse_complex(value: Any) -> complex:
    """Parse ``0.7071``, ``-0.7071``, ``0+1i``, ``1i``, ``-i`` or a YAML number."""
    if isinstance(value, bool):
        raise ScenarioError(f"not an amplitude: {value!r}")
    if isinstance(value, (int, float)):
        return complex(value)
    if not isinstance(value, str):
        raise ScenarioError(f"not an amplitude: {value!r}")
    text = re.sub(r"\s+", "", value)
    if "j" in text.lower():
        raise ScenarioError(f"cannot parse amplitude {value!r}; write the imaginary unit as i")
    if text.endswith("i"):
        text = text[:-1] + "j"
    if "i" in text:
        raise ScenarioError(f"cannot parse amplitude {value!r}")
    try:
        return complex(text)
    except ValueError:
        raise ScenarioError(f"cannot parse amplitude {value!r}") from None


@dataclass
class Scenario:
    basis: PreferenceBasis
    profile: Profile
    constitution: str = "qmr"
    cycle_policy: str = "error"
    seed: int = 0
    samples: int = 0
    source: str = "<memory>"


def _order_map(basis: PreferenceBasis, raw: Any, what: str, parse=parse_complex) -> dict[str, Any]:
    if not isinstance(raw, dict) or not raw:
        raise ScenarioError(f"{what} must be a non-empty mapping of order -> value")
    out = {}
    for key, value in raw.items():
        try:
            order = parse_order(str(key), basis.candidates)
        except PreferenceError as exc:
            raise ScenarioError(f"{what}: {exc}") from None
        out[basis.labels[basis.index(order)]] = parse(value)
    return out


def _voter_state(basis: PreferenceBasis, spec: Any, k: int) -> q.State:
    where = f"voter {k + 1}"
    if isinstance(spec, str):
        spec = {"order": spec}
    if not isinstance(spec, dict):
        raise ScenarioError(f"{where}: expected a mapping")
    kinds = [key for key in ("order", "amplitudes", "weights", "tactic") if key in spec]
    if len(kinds) != 1:
        raise ScenarioError(f"{where}: give exactly one of order / amplitudes / weights / tactic")
    kind = kinds[0]
    try:
        if kind == "order":
            return q.ket(basis.dim, basis.index(parse_order(str(spec["order"]), basis.candidates)))
        if kind == "amplitudes":
            return build_pure_vote(basis, _order_map(basis, spec["amplitudes"], where))
        if kind == "weights":
            w = _order_map(basis, spec["weights"], where, parse=_parse_weight)
            vec = np.zeros(basis.dim)
            for label, p in w.items():
                vec[basis.index(label)] = p
            if vec.sum() <= 0:
                raise ScenarioError(f"{where}: weights sum to zero")
            return q.DensityOperator.diagonal(vec / vec.sum())
        if spec["tactic"] != "pure_vote":
            raise ScenarioError(f"{where}: only the pure_vote tactic applies to a single voter")
        return build_pure_vote(basis, _order_map(basis, spec.get("coefficients"), where))
    except (PreferenceError, q.StateError) as exc:
        raise ScenarioError(f"{where}: {exc}") from None


def _parse_weight(value: Any) -> float:
    w = parse_complex(value)
    if w.imag != 0 or w.real < 0:
        raise ScenarioError(f"weights must be non-negative reals, got {value!r}")
    return w.real


def _joint_state(basis: PreferenceBasis, spec: Any) -> q.StateVector:
    if not isinstance(spec, dict):
        raise ScenarioError("joint: expected a mapping")
    try:
        if "amplitudes" in spec:
            raw = spec["amplitudes"]
            if not isinstance(raw, dict) or not raw:
                raise ScenarioError("joint.amplitudes must be a non-empty mapping")
            terms = []
            for key, value in raw.items():
                idx = tuple(basis.index(parse_order(part, basis.candidates)) for part in str(key).split(","))
                terms.append((idx, parse_complex(value)))
            n = len(terms[0][0])
            if any(len(t[0]) != n for t in terms):
                raise ScenarioError("joint.amplitudes: every term must list the same number of voters")
            amps = np.zeros(basis.dim**n, dtype=complex)
            for idx, c in terms:
                amps[q.encode_joint(idx, basis.dim)] += c
            return q.StateVector(amps, basis.dim, n, normalized=False).normalize()
        tactic = spec.get("tactic")
        if tactic == "opposition_pair":
            return build_opposition_pair(basis, _order_map(basis, spec.get("coefficients"), "joint"))
        if tactic == "party_line":
            return build_party_line(basis, _order_map(basis, spec.get("coefficients"), "joint"), int(spec.get("members", 3)))
        if tactic == "w_analog":
            return build_w_analog(basis, str(spec["preferred"]), str(spec["other"]), int(spec.get("members", 3)))
    except (PreferenceError, q.StateError, KeyError) as exc:
        raise ScenarioError(f"joint: {exc}") from None
    raise ScenarioError(f"joint: unknown tactic {spec.get('tactic')!r}")


def scenario_from_dict(doc: Any, source: str = "<memory>") -> Scenario:
    if not isinstance(doc, dict):
        raise ScenarioError("scenario must be a mapping")
    unknown = set(doc) - _TOP_KEYS
    if unknown:
        raise ScenarioError(f"unknown scenario keys: {sorted(unknown)}")
    if "candidates" not in doc:
        raise ScenarioError("scenario needs 'candidates'")
    try:
        candidates = CandidateSet(tuple(str(c) for c in doc["candidates"]))
        basis = enumerate_basis(candidates, doc.get("mode", "strict"))
    except (PreferenceError, ValueError, TypeError) as exc:
        raise ScenarioError(str(exc)) from None
    constitution = doc.get("constitution", "qmr")
    if constitution not in CONSTITUTIONS:
        raise ScenarioError(f"unknown constitution {constitution!r}; expected one of {sorted(CONSTITUTIONS)}")
    policy = doc.get("cycle_policy", "error")
    if policy not in ("error", "all_equal"):
        raise ScenarioError(f"unknown cycle_policy {policy!r}")
    if ("voters" in doc) == ("joint" in doc):
        raise ScenarioError("give exactly one of 'voters' and 'joint'")
    if "voters" in doc:
        voters = doc["voters"]
        if not isinstance(voters, list) or not voters:
            raise ScenarioError("'voters' must be a non-empty list")
        profile = Profile(basis, tuple(_voter_state(basis, v, k) for k, v in enumerate(voters)))
    else:
        profile = Profile(basis, joint=_joint_state(basis, doc["joint"]))
    try:
        seed, samples = int(doc.get("seed", 0)), int(doc.get("samples", 0))
    except (TypeError, ValueError):
        raise ScenarioError("seed and samples must be integers") from None
    if samples < 0:
        raise ScenarioError("samples must be >= 0")
    return Scenario(basis, profile, constitution, policy, seed, samples, source)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        doc = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ScenarioError(f"{path}: invalid YAML: {exc}") from None
    except OSError as exc:
        raise ScenarioError(f"{path}: {exc}") from None
    return scenario_from_dict(doc, str(path))
