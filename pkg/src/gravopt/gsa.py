"""Gravitational search optimizer.

Candidate solutions are particles whose normalized masses reflect their
relative fitness. Every iteration each particle is pulled toward the
current elite set with a force proportional to the product of the two
masses and inversely proportional to their Euclidean distance (distance,
not distance squared: the first power empirically searches better). A
global force scale decays over the run, shifting the swarm from
exploration to exploitation.

Reference for the algorithm family: Rashedi, Nezamabadi-pour, Saryazdi,
"GSA: a gravitational search algorithm", Information Sciences 179 (2009).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels
from .errors import ConfigError, DimensionError, EvaluationError, RunAbortedError
from .objectives import MemoizedObjective, memoize
from .space import ParamVector, SearchSpace, decode, sample_uniform

MINIMIZE = "minimize"
MAXIMIZE = "maximize"
_SCHEDULES = ("linear", "power")


def _check_sense(sense):
    if sense not in (MINIMIZE, MAXIMIZE):
        raise ConfigError(f"sense must be '{MINIMIZE}' or '{MAXIMIZE}', got {sense!r}")


@dataclass(frozen=True)
class Particle:
    """Snapshot of one swarm member."""

    position: tuple[float, ...]
    velocity: tuple[float, ...]
    fitness: float
    mass: float


@dataclass(frozen=True)
class GsaConfig:
    """Algorithm parameters.

    The defaults mirror a stock hyperparameter-tuning setup: 30 particles,
    15 iterations, linear force decay, elite set shrinking to one.
    """

    population: int = 30
    max_iterations: int = 15
    g0: float = 30.0
    tau: float = 1e-12
    g_schedule: str = "linear"
    beta: float = 0.5
    t0_gravity: float = 1.0
    kbest_final: int = 1
    sense: str = MINIMIZE
    seed: int = 0

    def __post_init__(self):
        if self.population < 1:
            raise ConfigError(f"population must be >= 1, got {self.population}")
        if self.max_iterations < 1:
            raise ConfigError(f"max_iterations must be >= 1, got {self.max_iterations}")
        if not (self.g0 > 0):
            raise ConfigError(f"g0 must be positive, got {self.g0}")
        if not (self.tau > 0):
            raise ConfigError(f"tau must be positive, got {self.tau}")
        if self.g_schedule not in _SCHEDULES:
            raise ConfigError(
                f"g_schedule must be one of {_SCHEDULES}, got {self.g_schedule!r}"
            )
        if self.g_schedule == "power" and not (0 < self.beta < 1):
            raise ConfigError(f"power schedule requires 0 < beta < 1, got {self.beta}")
        if not (self.t0_gravity > 0):
            raise ConfigError(f"t0_gravity must be positive, got {self.t0_gravity}")
        if not (1 <= self.kbest_final <= self.population):
            raise ConfigError(
                f"kbest_final must be in [1, population], got {self.kbest_final}"
            )
        _check_sense(self.sense)
        if self.seed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.seed}")


@dataclass(frozen=True)
class IterationRecord:
    """One history row: global best so far plus the iteration's settings."""

    t: int
    g: float
    best_fitness: float
    worst_fitness: float
    best_position: tuple[float, ...]
    kbest: int


@dataclass(frozen=True)
class RunResult:
    best_params: ParamVector
    best_fitness: float
    history: tuple[IterationRecord, ...] = field(repr=False)
    evaluations: int


def gravitational_constant_linear(g0: float, t: int, t_max: int) -> float:
    """Force scale decaying linearly from g0 at t=0 to exactly 0 at t=t_max."""
    if t_max == 0:
        raise ConfigError("t_max must be positive")
    if not (g0 > 0):
        raise ConfigError(f"g0 must be positive, got {g0}")
    if not (0 <= t <= t_max):
        raise ConfigError(f"t must be in [0, {t_max}], got {t}")
    return g0 * (1.0 - t / t_max)


def gravitational_constant_power(g_t0: float, t0: float, t: float, beta: float) -> float:
    """Force scale decaying as (t0/t)**beta; equals g_t0 at t=t0."""
    if not (0 < beta < 1):
        raise ConfigError(f"beta must be in (0, 1), got {beta}")
    if not (t0 > 0):
        raise ConfigError(f"t0 must be positive, got {t0}")
    if not (g_t0 > 0):
        raise ConfigError(f"g_t0 must be positive, got {g_t0}")
    if t < t0:
        raise ConfigError(f"t must be >= t0={t0}, got {t}")
    return g_t0 * (t0 / t) ** beta


def best_worst(fitnesses, sense: str = MINIMIZE) -> tuple[float, float]:
    """Extremes of a fitness list, oriented by the optimization sense."""
    _check_sense(sense)
    f = np.asarray(fitnesses, dtype=float)
    if f.size == 0:
        raise ConfigError("fitness list must be non-empty")
    if not np.all(np.isfinite(f)):
        raise EvaluationError("non-finite fitness value")
    lo, hi = float(f.min()), float(f.max())
    return (lo, hi) if sense == MINIMIZE else (hi, lo)


def compute_masses(fitnesses, sense: str = MINIMIZE) -> np.ndarray:
    """Normalized masses: 1 for the best fitness, 0 for the worst, summing
    to one. When every fitness ties, all masses are 1/N."""
    f = np.asarray(fitnesses, dtype=float)
    best, worst = best_worst(f, sense)
    if best == worst:
        return np.full(f.size, 1.0 / f.size)
    m = (f - worst) / (best - worst)
    return m / np.sum(m)


def kbest_size(t: int, t_max: int, population: int, kbest_final: int) -> int:
    """Elite-set size: linear decay from the full population at t=0 to
    kbest_final at t=t_max, rounded to nearest."""
    frac = t / t_max if t_max > 0 else 1.0
    raw = population - (population - kbest_final) * frac
    k = int(math.floor(raw + 0.5))
    return min(max(k, kbest_final), population)


def kbest_members(fitnesses, kbest: int, sense: str = MINIMIZE) -> np.ndarray:
    """Indices of the kbest best-fitness particles, ascending, ties broken
    by index."""
    f = np.asarray(fitnesses, dtype=float)
    keys = f if sense == MINIMIZE else -f
    order = np.argsort(keys, kind="stable")[:kbest]
    return np.sort(order).astype(np.int64)


def pairwise_force(g, mass_passive_i, mass_active_j, pos_i, pos_j, tau) -> np.ndarray:
    """Pull of particle j on particle i, componentwise.

    Magnitude g * Mp_i * Ma_j / (R + tau) along the displacement to j,
    where R is the Euclidean distance and tau guards the R = 0 case.
    """
    pos_i = np.asarray(pos_i, dtype=float)
    pos_j = np.asarray(pos_j, dtype=float)
    if pos_i.shape != pos_j.shape or pos_i.ndim != 1:
        raise DimensionError(
            f"positions must be vectors of equal length, got {pos_i.shape} and {pos_j.shape}"
        )
    diff = pos_j - pos_i
    dist = math.sqrt(float(np.dot(diff, diff)))
    coef = g * mass_passive_i * mass_active_j / (dist + tau)
    return coef * diff


def total_force(positions, fitnesses, masses, g, kbest, tau, rng,
                sense: str = MINIMIZE) -> np.ndarray:
    """Randomly weighted sum of elite pulls on every particle.

    One uniform weight is drawn per (particle, attractor, dimension) as a
    single (n, kbest, d) block in row-major order, the attractor axis
    enumerating the elite set in ascending particle index; entries whose
    attractor is the particle itself are drawn but unused.
    """
    positions = np.ascontiguousarray(positions, dtype=float)
    n, d = positions.shape
    masses = np.ascontiguousarray(masses, dtype=float)
    members = kbest_members(fitnesses, kbest, sense) if kbest > 0 else np.empty(0, np.int64)
    rand = rng.random((n, members.size, d))
    out = np.zeros((n, d))
    if members.size:
        kernels.accumulate_forces(positions, masses, members, float(g), float(tau),
                                  np.ascontiguousarray(rand), out)
    return out


def step_kinematics(positions, velocities, forces, masses, tau, rng,
                    space: SearchSpace):
    """Advance the swarm one step in place.

    Acceleration is force over mass (tau substitutes for an exactly-zero
    mass); new velocity is a per-(particle, dimension) uniform draw times
    the old velocity plus the acceleration; positions move by the new
    velocity and saturate at the bounds.
    """
    n, d = positions.shape
    rand = rng.random((n, d))
    kernels.apply_kinematics(positions, velocities, forces,
                             np.ascontiguousarray(masses, dtype=float),
                             float(tau), rand, space.lowers, space.uppers)
    return positions, velocities


def _better(a: float, b: float, sense: str) -> bool:
    return a < b if sense == MINIMIZE else a > b


def run(space: SearchSpace, objective, config: GsaConfig, parallelism: int = 1,
        on_iteration: Optional[Callable] = None) -> RunResult:
    """Execute the full search loop and return the best decoded solution.

    Starts from uniform positions with zero velocities, then repeats:
    evaluate, rank, recompute the force scale and masses, accumulate elite
    forces, and move, until the iteration budget is spent. Fitnesses are
    memoized on the decoded assignment, so positions that round to the same
    parameters cost one evaluation. All random draws happen on the
    sequential path, which makes results independent of ``parallelism``.

    ``on_iteration(record, particles)`` is called after each move with the
    history row and post-move particle snapshots.
    """
    sense = config.sense
    if getattr(objective, "sense", sense) != sense:
        raise ConfigError(
            f"objective sense {objective.sense!r} does not match config sense {sense!r}"
        )
    memo = objective if isinstance(objective, MemoizedObjective) else memoize(objective)

    rng = np.random.default_rng(config.seed)
    n, t_max = config.population, config.max_iterations
    positions = np.vstack([sample_uniform(space, rng) for _ in range(n)])
    velocities = np.zeros_like(positions)

    best_fitness = None
    best_params = None
    best_position = None
    history: list[IterationRecord] = []

    for t in range(t_max):
        params_list = [decode(space, positions[i]) for i in range(n)]
        try:
            fitnesses = np.asarray(
                memo.evaluate_many(params_list, max_workers=parallelism), dtype=float
            )
        except EvaluationError as exc:
            partial = RunResult(best_params, best_fitness, tuple(history),
                                memo.evaluations)
            raise RunAbortedError(f"evaluation failed at iteration {t}: {exc}",
                                  result=partial) from exc

        _, iter_worst = best_worst(fitnesses, sense)
        idx = int(np.argmin(fitnesses) if sense == MINIMIZE else np.argmax(fitnesses))
        if best_fitness is None or _better(float(fitnesses[idx]), best_fitness, sense):
            best_fitness = float(fitnesses[idx])
            best_params = params_list[idx]
            best_position = positions[idx].copy()

        if config.g_schedule == "linear":
            g = gravitational_constant_linear(config.g0, t, t_max)
        else:
            g = gravitational_constant_power(config.g0, config.t0_gravity,
                                             config.t0_gravity + t, config.beta)
        masses = compute_masses(fitnesses, sense)
        k = kbest_size(t, t_max, n, config.kbest_final)
        forces = total_force(positions, fitnesses, masses, g, k, config.tau, rng, sense)
        step_kinematics(positions, velocities, forces, masses, config.tau, rng, space)

        record = IterationRecord(
            t=t,
            g=g,
            best_fitness=best_fitness,
            worst_fitness=float(iter_worst),
            best_position=tuple(float(x) for x in best_position),
            kbest=k,
        )
        history.append(record)
        if on_iteration is not None:
            particles = [
                Particle(
                    position=tuple(float(x) for x in positions[i]),
                    velocity=tuple(float(x) for x in velocities[i]),
                    fitness=float(fitnesses[i]),
                    mass=float(masses[i]),
                )
                for i in range(n)
            ]
            on_iteration(record, particles)

    return RunResult(best_params, best_fitness, tuple(history), memo.evaluations)
