"""Attack vector generation for adversarial agents.

Every generated vector has all entries strictly of one sign, and
generation is a pure function of (seed, agent id, iteration), so replays
are bit-identical regardless of call order.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

KINDS = ("zero", "constant", "uniform")
_KIND_ALIASES = {"uniform-random-per-iteration": "uniform"}
SIGNS = ("positive", "negative")


@dataclass(frozen=True)
class AttackPolicy:
    """Rule producing one perturbation vector per adversary per iteration.

    ``value`` (constant kind) holds strictly positive magnitudes; the
    sign mode decides whether the emitted vector is all-positive or
    all-negative.  ``low``/``high`` bound the per-entry magnitude for
    the uniform kind.
    """

    kind: str
    sign: str = "positive"
    low: float = 0.0
    high: float = 0.0
    value: np.ndarray | None = None
    seed: int = 0

    def __post_init__(self):
        kind = _KIND_ALIASES.get(self.kind, self.kind)
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise ValueError(f"unknown attack kind {self.kind!r}")
        if self.sign not in SIGNS:
            raise ValueError(f"sign must be one of {SIGNS}, got {self.sign!r}")
        if not (0 <= self.low <= self.high):
            raise ValueError(f"need 0 <= low <= high, got ({self.low}, {self.high})")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if kind == "constant":
            if self.value is None:
                raise ValueError("constant attack requires a value vector")
            value = np.atleast_1d(np.asarray(self.value, dtype=float))
            if not np.all(value > 0):
                raise ValueError("constant attack magnitudes must be strictly positive")
            object.__setattr__(self, "value", value)


def attack_vector(policy: AttackPolicy, agent: int, k: int, p: int) -> np.ndarray:
    """Attack vector e(k) for one adversary at one iteration."""
    if p < 1:
        raise ValueError(f"dimension must be >= 1, got {p}")
    sgn = 1.0 if policy.sign == "positive" else -1.0
    if policy.kind == "zero":
        return np.zeros(p)
    if policy.kind == "constant":
        if policy.value.shape[0] != p:
            raise ValueError(
                f"constant attack has dimension {policy.value.shape[0]}, expected {p}"
            )
        return sgn * policy.value.copy()
    # uniform: keyed stream, independent of evaluation order
    rng = np.random.default_rng(np.random.SeedSequence((policy.seed, agent, k)))
    draw = policy.low + (policy.high - policy.low) * rng.random(p)
    return sgn * draw


def max_attack_norm(policy: AttackPolicy, p: int) -> float:
    """Time-uniform upper bound on ||e(k)|| over all agents and iterations."""
    if policy.kind == "zero":
        return 0.0
    if policy.kind == "constant":
        return float(np.linalg.norm(policy.value))
    return policy.high * float(np.sqrt(p))


def reseed(policy: AttackPolicy, run_seed: int) -> AttackPolicy:
    """Derive a per-run copy of the policy with an independent stream."""
    derived = int(np.random.SeedSequence((policy.seed, run_seed)).generate_state(1)[0])
    return replace(policy, seed=derived)
