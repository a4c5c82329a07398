"""Weight generators and the steady-state / mass-deletion experiments.

Both experiments compare the expected lookup depth of the incrementally
maintained tree against an optimal Huffman tree over the same weights.
Randomness comes from :func:`numpy.random.default_rng` (PCG64) seeded with
the config's seed, so a config reproduces its rows bit for bit.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InvariantError
from .oracle import optimal_expected_length
from .tree import MutableCategorical

RATIO_SLACK = 1e-9


class WeightDistribution(str, enum.Enum):
    UNIFORM = "uniform"
    EXPONENTIAL = "exponential"
    RESONANCE = "resonance"


def _transform(dist: WeightDistribution, u):
    # inverse-CDF map from a uniform draw in [0, 1)
    if dist is WeightDistribution.UNIFORM:
        return u
    if dist is WeightDistribution.EXPONENTIAL:
        return -np.log1p(-u)
    if dist is WeightDistribution.RESONANCE:
        return np.where(u < 0.01, 1000.0, 1.0)
    raise ConfigError(f"unknown distribution {dist!r}")


def gen_weight(dist, rng: np.random.Generator) -> float:
    """One positive weight drawn from ``dist``.

    Uniform draws lie in (0, 1), exponential draws have density exp(-x) and
    resonance draws are 1 with probability 0.99 and 1000 otherwise. The
    measure-zero draw of exactly 0 is rejected and redrawn.
    """
    dist = WeightDistribution(dist)
    while True:
        w = float(_transform(dist, rng.random()))
        if w > 0.0:
            return w


def gen_weights(dist, rng: np.random.Generator, size: int) -> np.ndarray:
    dist = WeightDistribution(dist)
    w = np.asarray(_transform(dist, rng.random(size)), dtype=np.float64)
    bad = np.flatnonzero(w <= 0.0)
    for i in bad:
        w[i] = gen_weight(dist, rng)
    return w


class _Uniforms:
    """Buffered scalar draws from a generator; scalar ``rng.random()`` calls
    dominate the driver loop otherwise."""

    def __init__(self, rng: np.random.Generator, block: int = 1 << 14):
        self.rng = rng
        self.block = block
        self.buf = rng.random(block).tolist()
        self.pos = 0

    def __call__(self) -> float:
        if self.pos == self.block:
            self.buf = self.rng.random(self.block).tolist()
            self.pos = 0
        u = self.buf[self.pos]
        self.pos += 1
        return u


def _weight_source(dist: WeightDistribution, uniform: _Uniforms):
    if dist is WeightDistribution.UNIFORM:
        def draw():
            u = uniform()
            while u == 0.0:
                u = uniform()
            return u
    elif dist is WeightDistribution.EXPONENTIAL:
        def draw():
            u = uniform()
            while u == 0.0:
                u = uniform()
            return -math.log1p(-u)
    else:
        def draw():
            return 1000.0 if uniform() < 0.01 else 1.0
    return draw


def _check_count(name, value, minimum=1):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < minimum:
        raise ConfigError(f"{name} must be an integer >= {minimum}, got {value!r}")


@dataclass(frozen=True)
class SteadyStateConfig:
    """Random add/delete/modify mix; defaults are a 10x reduced desk scale."""

    n_categories: int = 10_000
    burn_in_ops: int = 25_000
    measured_ops: int = 25_000
    measure_every: int = 500
    dist: WeightDistribution = WeightDistribution.UNIFORM
    rotations: bool = False
    seed: int = 1

    @classmethod
    def full_scale(cls, **overrides) -> SteadyStateConfig:
        base = dict(n_categories=100_000, burn_in_ops=250_000, measured_ops=250_000,
                    measure_every=500)
        base.update(overrides)
        return cls(**base)

    def __post_init__(self):
        try:
            object.__setattr__(self, "dist", WeightDistribution(self.dist))
        except ValueError:
            raise ConfigError(f"unknown distribution {self.dist!r}") from None
        _check_count("n_categories", self.n_categories)
        _check_count("burn_in_ops", self.burn_in_ops, minimum=0)
        _check_count("measured_ops", self.measured_ops)
        _check_count("measure_every", self.measure_every)
        if self.measure_every > self.measured_ops:
            raise ConfigError("measure_every must not exceed measured_ops")
        _check_count("seed", self.seed, minimum=0)


@dataclass(frozen=True)
class DeletionConfig:
    initial_categories: int = 1_000_000
    final_categories: int = 1024
    dist: WeightDistribution = WeightDistribution.UNIFORM
    rotations: bool = False
    seed: int = 1

    def __post_init__(self):
        try:
            object.__setattr__(self, "dist", WeightDistribution(self.dist))
        except ValueError:
            raise ConfigError(f"unknown distribution {self.dist!r}") from None
        _check_count("initial_categories", self.initial_categories)
        _check_count("final_categories", self.final_categories)
        if self.final_categories >= self.initial_categories:
            raise ConfigError("final_categories must be below initial_categories")
        _check_count("seed", self.seed, minimum=0)


@dataclass(frozen=True)
class MeasurementRow:
    op_index: int
    n: int
    e_l: float
    e_opt: float
    ratio: float


def measure(dist: MutableCategorical, op_index: int) -> MeasurementRow:
    """Compare the tree's E[L] with the optimal Huffman E[L] on its weights."""
    e_l = dist.expected_path_length()
    e_opt = optimal_expected_length(dist.weights())
    if e_opt == 0.0:
        ratio = 1.0 if e_l == 0.0 else math.inf
    else:
        ratio = e_l / e_opt
    if ratio < 1.0 - RATIO_SLACK:
        raise InvariantError(f"tree beats the optimal Huffman tree: ratio {ratio!r}")
    return MeasurementRow(op_index, len(dist), e_l, e_opt, ratio)


@dataclass
class SteadyStateResult:
    config: SteadyStateConfig
    rows: list[MeasurementRow] = field(default_factory=list)
    adds: int = 0
    deletes: int = 0
    modifies: int = 0

    def _mean(self, attr):
        return math.fsum(getattr(r, attr) for r in self.rows) / len(self.rows)

    @property
    def mean_e_l(self) -> float:
        return self._mean("e_l")

    @property
    def mean_e_opt(self) -> float:
        return self._mean("e_opt")

    @property
    def mean_ratio(self) -> float:
        return self._mean("ratio")


class _KeyPool:
    """Present keys with O(1) uniform choice and removal."""

    def __init__(self, keys):
        self.keys = list(keys)
        self.next_key = len(self.keys)

    def fresh(self) -> int:
        k = self.next_key
        self.next_key += 1
        self.keys.append(k)
        return k

    def pick(self, u: float) -> int:
        return self.keys[int(u * len(self.keys))]

    def pop(self, u: float) -> int:
        keys = self.keys
        i = int(u * len(keys))
        k = keys[i]
        last = keys.pop()
        if i < len(keys):
            keys[i] = last
        return k


def _populate(n: int, dist: WeightDistribution, rotations: bool, rng) -> MutableCategorical:
    tree = MutableCategorical(rotations=rotations, capacity=2 * n)
    for key, w in enumerate(gen_weights(dist, rng, n).tolist()):
        tree.add(key, w)
    return tree


def run_steady_state(config: SteadyStateConfig) -> SteadyStateResult:
    """Mutate a populated tree with a uniform add/delete/modify mix.

    After ``burn_in_ops`` unmeasured operations, a row is recorded after
    every ``measure_every``-th of the ``measured_ops`` operations. Targets
    of delete and modify are uniform over present keys; a delete that would
    empty the tree is redrawn.
    """
    rng = np.random.default_rng(config.seed)
    tree = _populate(config.n_categories, config.dist, config.rotations, rng)
    pool = _KeyPool(range(config.n_categories))
    uniform = _Uniforms(rng)
    weight = _weight_source(config.dist, uniform)
    result = SteadyStateResult(config)
    add, delete, modify = tree.add, tree.delete, tree.modify

    total = config.burn_in_ops + config.measured_ops
    every = config.measure_every
    for step in range(1, total + 1):
        while True:
            r = uniform()
            if r < 1.0 / 3.0:
                add(pool.fresh(), weight())
                result.adds += 1
            elif r < 2.0 / 3.0:
                if len(pool.keys) == 1:
                    continue
                delete(pool.pop(uniform()))
                result.deletes += 1
            else:
                modify(pool.pick(uniform()), weight())
                result.modifies += 1
            break
        measured = step - config.burn_in_ops
        if measured > 0 and measured % every == 0:
            result.rows.append(measure(tree, measured))

    problems = tree.validate()
    if problems:
        raise InvariantError("; ".join(problems[:5]))
    return result


def run_deletion(config: DeletionConfig) -> MeasurementRow:
    """Populate a tree, then delete uniformly random keys down to
    ``final_categories`` and measure once."""
    rng = np.random.default_rng(config.seed)
    tree = _populate(config.initial_categories, config.dist, config.rotations, rng)
    pool = _KeyPool(range(config.initial_categories))
    uniform = _Uniforms(rng)
    delete = tree.delete
    for _ in range(config.initial_categories - config.final_categories):
        delete(pool.pop(uniform()))
    problems = tree.validate()
    if problems:
        raise InvariantError("; ".join(problems[:5]))
    return measure(tree, config.initial_categories - config.final_categories)
