"""Synchronous simulation of the quantized distributed subgradient protocol.

Each round: every agent broadcasts (honest agents send their quantized
iterate, adversaries their full-precision one), then every agent mixes
the received values, takes a subgradient step, adversaries add their
perturbation, and the result is projected back onto the feasible set.

A single run is sequential and fully deterministic given its seed; runs
share no mutable state, so seed sweeps may execute concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import adversary as adv
from .adversary import AttackPolicy
from .objective import FeasibleSet, suite_subgrad_bound
from .quantizer import UniformQuantizer

# Tolerance of the mean-iterate bookkeeping identity; it is an exact
# algebraic consequence of the update, so only rounding noise is allowed.
MEAN_RECURSION_TOL = 1e-10

HONEST = "honest"
ADVERSARIAL = "adversarial"


class RoleError(ValueError):
    """Agent role and attached policy/quantizer are inconsistent."""


class BoundViolationError(RuntimeError):
    """Strict mode: an empirical invariant check failed during a run."""


@dataclass(frozen=True)
class AgentSpec:
    """Fixed per-agent configuration: role plus its comm/attack behavior."""

    id: int
    role: str
    quantizer: UniformQuantizer | None = None
    attack: AttackPolicy | None = None

    def __post_init__(self):
        if self.role not in (HONEST, ADVERSARIAL):
            raise RoleError(f"unknown role {self.role!r} for agent {self.id}")
        if self.role == HONEST and self.attack is not None:
            raise RoleError(f"honest agent {self.id} cannot carry an attack policy")
        if self.role == ADVERSARIAL and self.attack is None:
            raise RoleError(f"adversarial agent {self.id} needs an attack policy")


@dataclass(frozen=True)
class IterationTrace:
    """Everything the bound checks consume, recorded at one iteration.

    ``x_bar``/``err_*`` describe the state entering iteration k;
    ``x_bar_next`` the state after the update.  ``delta_mean`` is the
    signed mean quantization error, ``delta_bar`` the mean of per-agent
    error magnitudes.  ``saturated`` marks agents whose broadcast input
    fell outside the quantizer range this round.
    """

    k: int
    x_bar: np.ndarray
    x_bar_next: np.ndarray
    x_bar_honest: np.ndarray
    err_all: float
    err_honest: float
    per_agent_err: np.ndarray
    grad_mean: np.ndarray
    delta_mean: np.ndarray
    delta_bar: float
    xi_bar: np.ndarray
    xi_bar_norm: float
    mean_attack: np.ndarray
    attack_norms: np.ndarray
    saturated: np.ndarray
    saturation_count: int
    lemma1_rhs: float
    lemma1_ok: bool


@dataclass(frozen=True)
class RunResult:
    traces: list
    final_iterates: np.ndarray
    x_star: np.ndarray
    final_err_all: float
    final_err_honest: float
    honest_ids: tuple
    adversary_ids: tuple
    subgrad_bound: float
    alpha: float

    @property
    def lemma1_violations(self) -> list:
        """Iterations where the projection-error bound failed."""
        return [t.k for t in self.traces if not t.lemma1_ok]

    @property
    def unsaturated_lemma1_violations(self) -> list:
        """Bound failures at rounds with no quantizer saturation at all."""
        return [
            t.k
            for t in self.traces
            if not t.lemma1_ok and t.saturation_count == 0
        ]


def broadcast_phase(iterates: np.ndarray, specs, adversary_quantizes: bool = False):
    """Per-agent broadcast values and quantizer saturation flags.

    Honest agents send their quantized iterate (or the iterate itself in
    exact-communication mode); adversaries send full precision unless
    ``adversary_quantizes`` is set.
    """
    n = iterates.shape[0]
    buffer = np.empty_like(iterates)
    saturated = np.zeros(n, dtype=bool)
    for spec in specs:
        x = iterates[spec.id]
        quantize = spec.quantizer is not None and (
            spec.role == HONEST or adversary_quantizes
        )
        if quantize:
            buffer[spec.id] = spec.quantizer.quantize(x)
            saturated[spec.id] = spec.quantizer.saturates(x)
        else:
            buffer[spec.id] = x
    return buffer, saturated


def matrix_form_update(
    weights: np.ndarray,
    iterates: np.ndarray,
    broadcasts: np.ndarray,
    gradients: np.ndarray,
    alpha: float,
) -> np.ndarray:
    """Pre-projection update H = W X + (I - W)(X - Q) - alpha G."""
    mixing = weights @ broadcasts
    return iterates - broadcasts + mixing - alpha * gradients


def local_updates(topology, iterates, broadcasts, gradients, alpha) -> np.ndarray:
    """Per-agent form of the same update, for cross-checking the matrix form."""
    n = iterates.shape[0]
    h = np.empty_like(iterates)
    w = topology.weights
    for i in range(n):
        mix = w[i, i] * broadcasts[i]
        for j in topology.neighbor_sets[i]:
            mix = mix + w[i, j] * broadcasts[j]
        h[i] = iterates[i] - broadcasts[i] + mix - alpha * gradients[i]
    return h


def step(
    k: int,
    iterates: np.ndarray,
    broadcasts: np.ndarray,
    saturated: np.ndarray,
    specs,
    weights: np.ndarray,
    objectives,
    feasible: FeasibleSet,
    alpha: float,
    x_star: np.ndarray,
    subgrad_bound: float,
):
    """Advance the network one round; returns (next iterates, trace)."""
    n, p = iterates.shape
    gradients = np.stack([objectives[i].subgradient(iterates[i]) for i in range(n)])

    attacks = np.zeros_like(iterates)
    attack_norms = np.zeros(n)
    for spec in specs:
        if spec.role == ADVERSARIAL:
            e = adv.attack_vector(spec.attack, spec.id, k, p)
            attacks[spec.id] = e
            attack_norms[spec.id] = np.linalg.norm(e)

    h = matrix_form_update(weights, iterates, broadcasts, gradients, alpha) + attacks
    xi = np.stack([feasible.projection_error(h[i]) for i in range(n)])
    next_iterates = h - xi

    honest = np.array([spec.role == HONEST for spec in specs])
    deltas = iterates - broadcasts
    delta_bar = float(np.mean(np.linalg.norm(deltas, axis=1)))
    xi_bar = xi.mean(axis=0)
    xi_bar_norm = float(np.linalg.norm(xi_bar))
    lemma1_rhs = (
        math.sqrt(8.0) * delta_bar + math.sqrt(2.0) * subgrad_bound * alpha / n
    )

    x_bar = iterates.mean(axis=0)
    trace = IterationTrace(
        k=k,
        x_bar=x_bar,
        x_bar_next=next_iterates.mean(axis=0),
        x_bar_honest=iterates[honest].mean(axis=0),
        err_all=float(np.linalg.norm(x_bar - x_star)),
        err_honest=float(np.linalg.norm(iterates[honest].mean(axis=0) - x_star)),
        per_agent_err=np.linalg.norm(iterates - x_star, axis=1),
        grad_mean=gradients.mean(axis=0),
        delta_mean=deltas.mean(axis=0),
        delta_bar=delta_bar,
        xi_bar=xi_bar,
        xi_bar_norm=xi_bar_norm,
        mean_attack=attacks.mean(axis=0),
        attack_norms=attack_norms,
        saturated=saturated.copy(),
        saturation_count=int(saturated.sum()),
        lemma1_rhs=lemma1_rhs,
        lemma1_ok=xi_bar_norm <= lemma1_rhs + 1e-12,
    )
    return next_iterates, trace


def mean_recursion_residual(trace: IterationTrace, alpha: float) -> float:
    """Deviation from the exact mean-iterate bookkeeping identity.

    x_bar(k+1) = x_bar(k) - alpha * mean(g) - xi_bar(k) + mean(e); holds
    up to rounding for every run because the mixing matrix is doubly
    stochastic.
    """
    predicted = (
        trace.x_bar - alpha * trace.grad_mean - trace.xi_bar + trace.mean_attack
    )
    return float(np.max(np.abs(predicted - trace.x_bar_next)))


def initial_iterates(
    n: int, feasible: FeasibleSet, seed: int, explicit=None
) -> np.ndarray:
    """Starting points: explicit per-agent values, or uniform draws in the box."""
    if explicit is not None:
        x0 = np.asarray(explicit, dtype=float)
        if x0.shape != (n, feasible.dimension):
            raise ValueError(
                f"explicit init has shape {x0.shape}, expected {(n, feasible.dimension)}"
            )
        for row in x0:
            if not feasible.contains(row):
                raise ValueError("explicit initial point outside the feasible set")
        return x0.copy()
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    return np.stack([feasible.sample(rng) for _ in range(n)])


def run(
    specs,
    topology,
    objectives,
    feasible: FeasibleSet,
    alpha: float,
    iterations: int,
    x_star: np.ndarray,
    seed: int = 0,
    explicit_init=None,
    adversary_quantizes: bool = False,
    strict: bool = False,
) -> RunResult:
    """Execute a full deterministic run of ``iterations`` rounds.

    In strict mode a projection-error bound violation at a round with no
    quantizer saturation raises :class:`BoundViolationError` after the
    run completes (the trace is attached for inspection).
    """
    if iterations < 1:
        raise ValueError(f"need at least one iteration, got {iterations}")
    n = topology.n
    if len(specs) != n or len(objectives) != n:
        raise ValueError("specs/objectives length must match the agent count")
    if alpha <= 0:
        raise ValueError(f"step size must be positive, got {alpha}")
    if not any(s.role == HONEST for s in specs):
        raise RoleError("at least one honest agent is required")

    subgrad_bound = suite_subgrad_bound(objectives)
    per_run_specs = []
    for spec in specs:
        if spec.attack is not None:
            spec = AgentSpec(
                id=spec.id,
                role=spec.role,
                quantizer=spec.quantizer,
                attack=adv.reseed(spec.attack, seed),
            )
        per_run_specs.append(spec)

    iterates = initial_iterates(n, feasible, seed, explicit_init)
    traces = []
    for k in range(iterations):
        broadcasts, saturated = broadcast_phase(
            iterates, per_run_specs, adversary_quantizes
        )
        iterates, trace = step(
            k,
            iterates,
            broadcasts,
            saturated,
            per_run_specs,
            topology.weights,
            objectives,
            feasible,
            alpha,
            x_star,
            subgrad_bound,
        )
        residual = mean_recursion_residual(trace, alpha)
        if residual > MEAN_RECURSION_TOL:
            raise BoundViolationError(
                f"mean-iterate bookkeeping identity off by {residual} at k={k}"
            )
        traces.append(trace)

    honest = tuple(s.id for s in per_run_specs if s.role == HONEST)
    adversaries = tuple(s.id for s in per_run_specs if s.role == ADVERSARIAL)
    final_all = iterates.mean(axis=0)
    final_honest = iterates[list(honest)].mean(axis=0)
    result = RunResult(
        traces=traces,
        final_iterates=iterates,
        x_star=x_star,
        final_err_all=float(np.linalg.norm(final_all - x_star)),
        final_err_honest=float(np.linalg.norm(final_honest - x_star)),
        honest_ids=honest,
        adversary_ids=adversaries,
        subgrad_bound=subgrad_bound,
        alpha=alpha,
    )
    if strict and result.unsaturated_lemma1_violations:
        ks = result.unsaturated_lemma1_violations
        raise BoundViolationError(
            f"projection-error bound violated at unsaturated rounds {ks[:10]}"
            + ("..." if len(ks) > 10 else "")
        )
    return result
