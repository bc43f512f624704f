"""Black-box fitness interface, benchmark functions, and evaluation plumbing.

An objective is anything with ``name``, ``sense``, and ``evaluate(params)``.
``memoize`` wraps one with a cache keyed on the decoded assignment plus a
retry/penalty policy, and keeps an audit record of every call.
"""

from __future__ import annotations

import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConfigError, EvaluationError
from .space import Dimension, ParamVector, SearchSpace, CONTINUOUS


@dataclass(frozen=True)
class Objective:
    name: str
    sense: str
    evaluate: Callable[[ParamVector], float]


@dataclass(frozen=True)
class EvalRecord:
    """Audit entry for one logical evaluation."""

    params: ParamVector
    fitness: float
    duration: float
    cache_hit: bool
    attempt: int


@dataclass(frozen=True)
class FailurePolicy:
    """What to do when an evaluation fails.

    After ``retries`` extra attempts a failure either raises (strict) or is
    assigned a penalty: the worst finite fitness seen so far pushed further
    by ``penalty_margin``, or ``penalty_default`` when nothing finite has
    been observed yet. Penalizing keeps mass computation finite so one
    crashed evaluation cannot kill a long search.
    """

    retries: int = 1
    penalty_margin: float = 1.0
    penalty_default: float = 1e6
    strict: bool = False

    def __post_init__(self):
        if self.retries < 0:
            raise ConfigError(f"retries must be >= 0, got {self.retries}")
        if not (self.penalty_margin > 0):
            raise ConfigError(f"penalty_margin must be positive, got {self.penalty_margin}")


class MemoizedObjective:
    """Caching, retrying, penalty-assigning wrapper around an objective.

    The cache key is the decoded parameter tuple: exact on integers, bit
    equality on floats. Concurrent callers are safe; cache insertion is
    serialized. ``evaluations`` counts underlying calls only, cache hits
    excluded.
    """

    def __init__(self, objective, policy: Optional[FailurePolicy] = None):
        self._inner = objective
        self.policy = policy or FailurePolicy()
        self.name = objective.name
        self.sense = objective.sense
        self._cache: dict = {}
        self._lock = threading.Lock()
        self._observed: list[float] = []
        self.records: list[EvalRecord] = []
        self.evaluations = 0
        self.cache_hits = 0

    def _attempt(self, params):
        """Run the inner objective with retries.

        Returns (fitness, attempts, duration) on success or
        (None, attempts, duration) once attempts are exhausted.
        """
        start = time.perf_counter()
        last_error = None
        for attempt in range(1, self.policy.retries + 2):
            try:
                fitness = float(self._inner.evaluate(params))
                if not np.isfinite(fitness):
                    raise EvaluationError(f"non-finite fitness {fitness!r}")
                return fitness, attempt, time.perf_counter() - start
            except EvaluationError as exc:
                last_error = exc
        if self.policy.strict:
            raise EvaluationError(
                f"evaluation of {params.as_dict()} failed after "
                f"{self.policy.retries + 1} attempts: {last_error}"
            )
        return None, self.policy.retries + 1, time.perf_counter() - start

    def _penalty(self) -> float:
        with self._lock:
            observed = list(self._observed)
        if not observed:
            base = self.policy.penalty_default
            return base if self.sense == "minimize" else -base
        if self.sense == "minimize":
            return max(observed) + self.policy.penalty_margin
        return min(observed) - self.policy.penalty_margin

    def evaluate(self, params: ParamVector) -> float:
        key = params.key()
        with self._lock:
            if key in self._cache:
                self.cache_hits += 1
                fitness = self._cache[key]
                self.records.append(EvalRecord(params, fitness, 0.0, True, 1))
                return fitness
        fitness, attempt, duration = self._attempt(params)
        penalized = fitness is None
        if penalized:
            fitness = self._penalty()
        with self._lock:
            self._cache[key] = fitness
            if not penalized:
                self._observed.append(fitness)
            self.evaluations += 1
            self.records.append(EvalRecord(params, fitness, duration, False, attempt))
        return fitness

    def evaluate_many(self, params_list, max_workers: int = 1) -> list[float]:
        """Evaluate a batch, deduplicated on the cache key.

        Repeated keys inside the batch cost one underlying call, and
        penalties are assigned only after the whole batch has finished, so
        the outcome is identical whether the pending evaluations run
        serially or on ``max_workers`` threads.
        """
        keys = [p.key() for p in params_list]
        pending: list = []
        seen: dict = {}
        with self._lock:
            for params, key in zip(params_list, keys):
                if key not in self._cache and key not in seen:
                    seen[key] = True
                    pending.append((params, key))

        if pending:
            if max_workers > 1 and len(pending) > 1:
                with ThreadPoolExecutor(max_workers=max_workers) as pool:
                    outcomes = list(pool.map(lambda pk: self._attempt(pk[0]), pending))
            else:
                outcomes = [self._attempt(params) for params, _ in pending]

            with self._lock:
                for fitness, _, _ in outcomes:
                    if fitness is not None:
                        self._observed.append(fitness)
            for (params, key), (fitness, attempt, duration) in zip(pending, outcomes):
                if fitness is None:
                    fitness = self._penalty()
                with self._lock:
                    self._cache[key] = fitness
                    self.evaluations += 1
                    self.records.append(
                        EvalRecord(params, fitness, duration, False, attempt)
                    )

        out = []
        fresh = {key for _, key in pending}
        with self._lock:
            for params, key in zip(params_list, keys):
                fitness = self._cache[key]
                if key in fresh:
                    fresh.discard(key)  # first occurrence was the underlying call
                else:
                    self.cache_hits += 1
                    self.records.append(EvalRecord(params, fitness, 0.0, True, 1))
                out.append(fitness)
        return out


def memoize(objective, policy: Optional[FailurePolicy] = None) -> MemoizedObjective:
    """Wrap an objective with the caching/retry/penalty layer."""
    return MemoizedObjective(objective, policy)


# --- analytic benchmark functions -----------------------------------------

def sphere(x) -> float:
    """Sum of squares; minimum 0 at the origin."""
    x = np.asarray(x, dtype=float)
    return float(np.dot(x, x))


def rastrigin(x) -> float:
    """Highly multimodal; minimum 0 at the origin."""
    x = np.asarray(x, dtype=float)
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def rosenbrock(x) -> float:
    """Curved narrow valley; minimum 0 at (1, ..., 1)."""
    x = np.asarray(x, dtype=float)
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


BENCHMARKS = {
    "sphere": (sphere, (-5.12, 5.12)),
    "rastrigin": (rastrigin, (-5.12, 5.12)),
    "rosenbrock": (rosenbrock, (-2.048, 2.048)),
}


def benchmark_space(name: str, dims: int, lower: float = None, upper: float = None) -> SearchSpace:
    """Continuous box named x0..x{d-1} with the function's stock bounds."""
    if name not in BENCHMARKS:
        raise ConfigError(f"unknown benchmark function {name!r}")
    lo, hi = BENCHMARKS[name][1]
    lo = lo if lower is None else lower
    hi = hi if upper is None else upper
    return SearchSpace(tuple(Dimension(f"x{i}", CONTINUOUS, lo, hi) for i in range(dims)))


def benchmark_objective(name: str) -> Objective:
    if name not in BENCHMARKS:
        raise ConfigError(f"unknown benchmark function {name!r}")
    fn = BENCHMARKS[name][0]

    def evaluate(params: ParamVector) -> float:
        return fn(np.array([v for _, v in params.values], dtype=float))

    return Objective(name=name, sense="minimize", evaluate=evaluate)


# --- neural-network building blocks ----------------------------------------

def sigmoid(z):
    """Logistic squash into (0, 1), stable for large |z|; preserves shape."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out if out.ndim else float(out)


def relu(z):
    """max(0, z); preserves shape."""
    z = np.asarray(z, dtype=float)
    out = np.maximum(0.0, z)
    return out if out.ndim else float(out)


def step_decay_lr(lr0: float, epoch: int, drop: float, period: int) -> float:
    """Learning rate multiplied by ``drop`` once per ``period`` epochs."""
    if epoch < 0:
        raise ConfigError(f"epoch must be >= 0, got {epoch}")
    if period < 1:
        raise ConfigError(f"period must be >= 1, got {period}")
    if not (0 < drop <= 1):
        raise ConfigError(f"drop must be in (0, 1], got {drop}")
    return lr0 * drop ** (epoch // period)
