"""Bounded mixed integer/continuous search spaces.

The optimizer moves particles through a continuous box; integer dimensions
are only discretized when a position is decoded into a named parameter
assignment for evaluation. Keeping the underlying position continuous keeps
velocities meaningful across iterations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Union

import numpy as np

from .errors import ConfigError, DimensionError

CONTINUOUS = "continuous"
INTEGER = "integer"

_KINDS = (CONTINUOUS, INTEGER)


def round_half_away(x: float) -> int:
    """Round to the nearest integer, halves away from zero."""
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


@dataclass(frozen=True)
class Dimension:
    """One bounded axis of the search space."""

    name: str
    kind: str
    lower: float
    upper: float

    def __post_init__(self):
        if not self.name or not self.name.isidentifier():
            raise ConfigError(f"dimension name must be an identifier, got {self.name!r}")
        if self.kind not in _KINDS:
            raise ConfigError(f"dimension kind must be one of {_KINDS}, got {self.kind!r}")
        if not (self.lower < self.upper):
            raise ConfigError(
                f"dimension {self.name!r} requires lower < upper, got [{self.lower}, {self.upper}]"
            )
        if self.kind == INTEGER:
            if not (float(self.lower).is_integer() and float(self.upper).is_integer()):
                raise ConfigError(
                    f"integer dimension {self.name!r} requires whole-number bounds"
                )


@dataclass(frozen=True)
class SearchSpace:
    """Ordered, named, bounded dimensions."""

    dims: tuple[Dimension, ...]

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(self.dims))
        if not self.dims:
            raise ConfigError("search space needs at least one dimension")
        names = [d.name for d in self.dims]
        if len(set(names)) != len(names):
            raise ConfigError(f"dimension names must be unique, got {names}")

    @property
    def dimension(self) -> int:
        return len(self.dims)

    @cached_property
    def lowers(self) -> np.ndarray:
        return np.array([d.lower for d in self.dims], dtype=float)

    @cached_property
    def uppers(self) -> np.ndarray:
        return np.array([d.upper for d in self.dims], dtype=float)

    def _check_length(self, position) -> np.ndarray:
        position = np.asarray(position, dtype=float)
        if position.shape != (self.dimension,):
            raise DimensionError(
                f"expected a vector of length {self.dimension}, got shape {position.shape}"
            )
        return position


@dataclass(frozen=True)
class ParamVector:
    """A decoded assignment: one (name, value) pair per dimension, in order.

    Integer dimensions carry Python ints, continuous ones floats, so the
    pairs tuple doubles as an exact cache key.
    """

    values: tuple[tuple[str, Union[int, float]], ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(tuple(v) for v in self.values))

    def __getitem__(self, name: str):
        for key, value in self.values:
            if key == name:
                return value
        raise KeyError(name)

    def as_dict(self) -> dict:
        return dict(self.values)

    def key(self) -> tuple:
        return self.values


def sample_uniform(space: SearchSpace, rng: np.random.Generator) -> np.ndarray:
    """Draw one position uniformly inside the box, one draw per dimension."""
    return rng.uniform(space.lowers, space.uppers)


def clamp(space: SearchSpace, position) -> np.ndarray:
    """Saturate each coordinate into its dimension's [lower, upper]."""
    position = space._check_length(position)
    return np.clip(position, space.lowers, space.uppers)


def decode(space: SearchSpace, position) -> ParamVector:
    """Map a continuous position to a named assignment.

    Continuous dimensions pass through; integer dimensions round half away
    from zero and re-clamp so the result always satisfies the bounds.
    """
    position = space._check_length(position)
    pairs = []
    for dim, x in zip(space.dims, position):
        if dim.kind == INTEGER:
            v = round_half_away(float(x))
            v = min(max(v, int(dim.lower)), int(dim.upper))
        else:
            v = min(max(float(x), dim.lower), dim.upper)
        pairs.append((dim.name, v))
    return ParamVector(tuple(pairs))


def encode(space: SearchSpace, params: ParamVector) -> np.ndarray:
    """Map a decoded assignment back to a position vector."""
    if len(params.values) != space.dimension:
        raise DimensionError(
            f"expected {space.dimension} values, got {len(params.values)}"
        )
    out = np.empty(space.dimension, dtype=float)
    for i, (dim, (name, value)) in enumerate(zip(space.dims, params.values)):
        if name != dim.name:
            raise ConfigError(f"parameter {name!r} does not match dimension {dim.name!r}")
        out[i] = float(value)
    return out


def validate_params(space: SearchSpace, params: ParamVector) -> None:
    """Raise ConfigError unless params satisfies every dimension's contract."""
    if len(params.values) != space.dimension:
        raise DimensionError(
            f"expected {space.dimension} values, got {len(params.values)}"
        )
    for dim, (name, value) in zip(space.dims, params.values):
        if name != dim.name:
            raise ConfigError(f"parameter {name!r} does not match dimension {dim.name!r}")
        if not (dim.lower <= value <= dim.upper):
            raise ConfigError(
                f"{name}={value} outside [{dim.lower}, {dim.upper}]"
            )
        if dim.kind == INTEGER and not float(value).is_integer():
            raise ConfigError(f"{name}={value} must be a whole number")


def default_hyperparameter_space() -> SearchSpace:
    """The stock three-dimensional tuning space: batch size, dropout rate,
    and hidden-layer width."""
    return SearchSpace(
        (
            Dimension("batch_size", INTEGER, 1, 64),
            Dimension("dropout_rate", CONTINUOUS, 0.1, 0.9),
            Dimension("neurons", INTEGER, 50, 500),
        )
    )
