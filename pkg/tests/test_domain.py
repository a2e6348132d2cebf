import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conelaw.domain import (
    BATCH_SIZE,
    ClosedInterval,
    OrthantCone,
    Region,
    SampleConfig,
    kerr_newman_region,
    membership,
    orthant,
    sample_pairs_additive,
    sample_region,
)
from conelaw.errors import ContractError, RegionTooThinError


def test_orthant_membership_examples():
    cone = Region(OrthantCone(2, (-1, 1)))
    assert membership(cone, (-1, 2))
    assert not membership(cone, (0, 2))
    assert not membership(cone, (1, 2))


def test_kerr_newman_membership():
    kn = kerr_newman_region(0.0)
    assert membership(kn, (1, 0.5))
    assert not membership(kn, (1, 2))
    # boundary M^2 = J/M is excluded
    assert not membership(kn, (1, 1))


def test_membership_dimension_mismatch():
    with pytest.raises(ContractError):
        membership(orthant(2), (1.0, 2.0, 3.0))


def test_nonfinite_points_are_not_members():
    assert not membership(orthant(1), (np.inf,))
    assert not membership(orthant(1), (np.nan,))


@pytest.mark.parametrize("signs", [(0, 1), (1,), (2, 1)])
def test_bad_signs(signs):
    with pytest.raises(ContractError):
        OrthantCone(2, signs)


@pytest.mark.parametrize("kwargs", [
    {"coord_range": (0.0, 1.0)},
    {"coord_range": (2.0, 1.0)},
    {"count": -1},
    {"seed": -1},
    {"scale_distribution": "Gaussian"},
])
def test_sample_config_contract(kwargs):
    with pytest.raises(ContractError):
        SampleConfig(**kwargs)


def test_sample_config_round_trip():
    cfg = SampleConfig(7, 123, (0.5, 2.0), "Uniform")
    assert SampleConfig.from_dict(cfg.to_dict()) == cfg


def test_sample_empty():
    assert sample_region(orthant(3), SampleConfig(count=0)).shape == (0, 3)
    x1, x2 = sample_pairs_additive(orthant(2), SampleConfig(count=0))
    assert len(x1) == len(x2) == 0


def test_sample_reproducible():
    cfg = SampleConfig(seed=42, count=1000, coord_range=(1e-6, 1e6))
    a = sample_region(orthant(1), cfg)
    b = sample_region(orthant(1), cfg)
    assert a.shape == (1000, 1)
    assert np.all(a > 0)
    assert a.tobytes() == b.tobytes()


def test_prefix_property_across_batches():
    small = sample_region(orthant(2), SampleConfig(1, 100))
    large = sample_region(orthant(2), SampleConfig(1, BATCH_SIZE + 500))
    assert np.array_equal(small, large[:100])


def test_streams_are_independent():
    cfg = SampleConfig(0, 50)
    assert not np.array_equal(sample_region(orthant(1), cfg, stream=0), sample_region(orthant(1), cfg, stream=2))


def test_uniform_distribution_in_range():
    pts = sample_region(orthant(2, (1, -1)), SampleConfig(0, 500, (1.0, 3.0), "Uniform"))
    assert np.all((pts[:, 0] >= 1) & (pts[:, 0] <= 3))
    assert np.all((pts[:, 1] <= -1) & (pts[:, 1] >= -3))


def test_kerr_newman_samples_are_members():
    pts = sample_region(kerr_newman_region(0.0), SampleConfig(0, 100))
    M, J = pts[:, 0], pts[:, 1]
    assert len(pts) == 100
    assert np.all(M**2 > J)


def test_too_thin_region():
    sliver = Region(OrthantCone(1), lambda p: np.abs(p[:, 0] - 1.0) < 1e-9)
    with pytest.raises(RegionTooThinError):
        sample_region(sliver, SampleConfig(0, 10))


def test_pairs_have_member_sums():
    for region in (orthant(2, (-1, 1)), kerr_newman_region(0.0), kerr_newman_region(0.5)):
        x1, x2 = sample_pairs_additive(region, SampleConfig(3, 1000))
        assert len(x1) == 1000
        assert region.contains(x1).all() and region.contains(x2).all() and region.contains(x1 + x2).all()


def test_kerr_newman_sum_example():
    kn = kerr_newman_region(0.0)
    assert membership(kn, np.add((1, 0.5), (1, 0.5)))


def test_pairs_restricted_range_small_sum_regime():
    # with coordinates in (0, 2/c) for c = 1, some sums stay at or below 2
    x1, x2 = sample_pairs_additive(orthant(1), SampleConfig(0, 2000, (1e-3, 2.0)))
    assert np.any(x1 + x2 <= 2.0)


def test_kerr_newman_not_downward_closed():
    kn = kerr_newman_region(0.0)
    assert membership(kn, (1, 0.9))
    assert not membership(kn, (0.5, 0.45))
    pts = sample_region(kn, SampleConfig(0, 1000))
    assert not kn.contains(0.5 * pts).all()


def test_closed_interval():
    iv = ClosedInterval()
    assert membership(iv, (0.0,)) and membership(iv, (1.0,))
    assert not membership(iv, (1.5,))
    pts = sample_region(iv, SampleConfig(0, 2000))
    assert np.any(pts == 1.0) and np.any(pts == 0.0)
    assert not iv.is_cone and not iv.satisfies_assumption_a


def test_describe():
    assert orthant(2, (-1, 1)).describe() == {"dimension": 2, "axis_signs": [-1, 1], "constraint": None}
    assert kerr_newman_region().describe()["constraint"].startswith("kerr-newman")


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), d=st.integers(1, 4), signs_seed=st.integers(0, 15),
       lam=st.sampled_from([0.5, 1.0, 2.0, 10.0]))
def test_cone_scaling_and_additive_closure(seed, d, signs_seed, lam):
    signs = tuple(-1 if (signs_seed >> i) & 1 else 1 for i in range(d))
    cone = orthant(d, signs)
    pts = sample_region(cone, SampleConfig(seed, 200))
    assert cone.contains(lam * pts).all()
    assert cone.contains(pts + pts[::-1]).all()


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32))
def test_kerr_newman_additive_closure(seed):
    kn = kerr_newman_region(0.0)
    a = sample_region(kn, SampleConfig(seed, 300))
    b = sample_region(kn, SampleConfig(seed, 300), stream=5)
    assert kn.contains(a + b).all()
