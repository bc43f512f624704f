import numpy as np
import pytest

from gravopt.errors import ConfigError, DimensionError
from gravopt.space import (
    CONTINUOUS,
    INTEGER,
    Dimension,
    ParamVector,
    SearchSpace,
    clamp,
    decode,
    encode,
    round_half_away,
    sample_uniform,
    validate_params,
)


def test_dimension_rejects_inverted_bounds():
    with pytest.raises(ConfigError):
        Dimension("x", CONTINUOUS, 1.0, 1.0)
    with pytest.raises(ConfigError):
        Dimension("x", CONTINUOUS, 2.0, 1.0)


def test_integer_dimension_requires_whole_bounds():
    with pytest.raises(ConfigError):
        Dimension("n", INTEGER, 0.5, 10)
    Dimension("n", INTEGER, 0, 10)


def test_space_rejects_duplicate_names_and_empty():
    with pytest.raises(ConfigError):
        SearchSpace((Dimension("a", CONTINUOUS, 0, 1), Dimension("a", CONTINUOUS, 0, 1)))
    with pytest.raises(ConfigError):
        SearchSpace(())


def test_sample_degenerate_width_stays_contained():
    eps = 1e-9
    space = SearchSpace((Dimension("x", CONTINUOUS, 0.0, eps),))
    rng = np.random.default_rng(0)
    for _ in range(100):
        (x,) = sample_uniform(space, rng)
        assert 0.0 <= x <= eps


def test_sample_within_tuning_bounds_any_seed(tune_space):
    for seed in (0, 1, 12345):
        rng = np.random.default_rng(seed)
        p = sample_uniform(tune_space, rng)
        assert p.shape == (3,)
        assert 1 <= p[0] <= 64
        assert 0.1 <= p[1] <= 0.9
        assert 50 <= p[2] <= 500


def test_sample_is_deterministic_per_seed(tune_space):
    a = sample_uniform(tune_space, np.random.default_rng(7))
    b = sample_uniform(tune_space, np.random.default_rng(7))
    assert np.array_equal(a, b)


def test_clamp_saturates_upper(tune_space):
    out = clamp(tune_space, [70, 0.5, 100])
    assert out.tolist() == [64, 0.5, 100]


def test_clamp_identity_inside(tune_space):
    out = clamp(tune_space, [10.5, 0.25, 333.0])
    assert out.tolist() == [10.5, 0.25, 333.0]


def test_clamp_saturates_both_ends(tune_space):
    out = clamp(tune_space, [-3, 0.05, 9000])
    assert out.tolist() == [1, 0.1, 500]


def test_clamp_rejects_wrong_length(tune_space):
    with pytest.raises(DimensionError):
        clamp(tune_space, [1.0, 2.0])


def test_decode_known_assignment(tune_space):
    params = decode(tune_space, [8.0, 0.1, 110.0])
    assert params.as_dict() == {"batch_size": 8, "dropout_rate": 0.1, "neurons": 110}
    assert isinstance(params["batch_size"], int)
    assert isinstance(params["dropout_rate"], float)


def test_decode_rounds_half_away(tune_space):
    params = decode(tune_space, [7.5, 0.5, 110.2])
    assert params.as_dict() == {"batch_size": 8, "dropout_rate": 0.5, "neurons": 110}


def test_decode_boundary_passthrough(tune_space):
    params = decode(tune_space, [64.0, 0.9, 500.0])
    assert params.as_dict() == {"batch_size": 64, "dropout_rate": 0.9, "neurons": 500}


def test_decode_rejects_wrong_length(tune_space):
    with pytest.raises(DimensionError):
        decode(tune_space, [1.0])


def test_round_half_away_negative():
    assert round_half_away(-2.5) == -3
    assert round_half_away(2.5) == 3
    assert round_half_away(-2.4) == -2


def test_decode_after_clamp_never_errors(tune_space):
    rng = np.random.default_rng(42)
    for _ in range(500):
        raw = rng.uniform(-1e4, 1e4, size=3)
        params = decode(tune_space, clamp(tune_space, raw))
        validate_params(tune_space, params)


def test_decode_idempotent_on_own_image(tune_space):
    rng = np.random.default_rng(3)
    for _ in range(200):
        raw = clamp(tune_space, rng.uniform(-100, 1000, size=3))
        once = decode(tune_space, raw)
        again = decode(tune_space, encode(tune_space, once))
        assert once == again


def test_clamp_idempotent(tune_space):
    rng = np.random.default_rng(5)
    for _ in range(200):
        raw = rng.uniform(-1e3, 1e3, size=3)
        once = clamp(tune_space, raw)
        assert np.array_equal(once, clamp(tune_space, once))


def test_sampling_covers_both_halves_of_every_dimension(tune_space):
    rng = np.random.default_rng(11)
    draws = np.vstack([sample_uniform(tune_space, rng) for _ in range(10_000)])
    mid = (tune_space.lowers + tune_space.uppers) / 2.0
    for j in range(tune_space.dimension):
        frac_low = np.mean(draws[:, j] < mid[j])
        assert 0.4 < frac_low < 0.6


def test_param_vector_lookup_and_key():
    pv = ParamVector((("a", 1), ("b", 2.5)))
    assert pv["a"] == 1
    assert pv.key() == (("a", 1), ("b", 2.5))
    with pytest.raises(KeyError):
        pv["missing"]
