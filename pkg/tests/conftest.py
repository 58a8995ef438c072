import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kleincount import (
    EnumConfig,
    Rect,
    enumerate_orbit,
    ideal_triangle_filter,
    period_extend,
    strip_apollonian_spec,
)


@pytest.fixture(scope="session")
def strip_spec():
    return strip_apollonian_spec()


@pytest.fixture(scope="session")
def strip_small(strip_spec):
    """Curvature <= 100 in the fundamental strip window."""
    cfg = EnumConfig(max_curvature=101, window=Rect(-1, 0, 1, 2))
    return enumerate_orbit(strip_spec, cfg)


@pytest.fixture(scope="session")
def strip_mid(strip_spec):
    """Curvature < 2^10 over the strip window (cheap general-purpose set)."""
    cfg = EnumConfig(max_curvature=2 ** 10, window=Rect(-1, 0, 1, 2))
    return enumerate_orbit(strip_spec, cfg)


@pytest.fixture(scope="session")
def strip_14(strip_spec):
    """The deep run behind the growth-exponent and dimension checks."""
    cfg = EnumConfig(max_curvature=2 ** 14, window=Rect(-1, 0, 1, 2))
    return enumerate_orbit(strip_spec, cfg)


@pytest.fixture(scope="session")
def strip_13_wide(strip_spec):
    """Window padded by the dilation radius, for the sandwich comparison."""
    cfg = EnumConfig(max_curvature=2 ** 13, window=Rect(-1.06, 0.13, 1.06, 1.87))
    return enumerate_orbit(strip_spec, cfg)


@pytest.fixture(scope="session")
def strip_14_tall(strip_spec):
    """Two vertical periods of the packing, for the equidistribution ratio."""
    cfg = EnumConfig(max_curvature=2 ** 14, window=Rect(-1, 0, 1, 4))
    return enumerate_orbit(strip_spec, cfg)


@pytest.fixture(scope="session")
def triangle_deep(strip_spec):
    """Triangle packing deep enough for area thresholds down to 2^-16:
    curvature < 2^16 and period extension to height ~600, with translated
    circles of area below 2^-17 pruned (they can never enter those counts)."""
    cfg = EnumConfig(max_curvature=2 ** 16, window=Rect(-1, 0, 1, 2))
    S = enumerate_orbit(strip_spec, cfg)
    F = ideal_triangle_filter(S)
    X = period_extend(F, 300, prune_below_area=2.0 ** -17)
    return ideal_triangle_filter(X)


@pytest.fixture(scope="session")
def triangle_smallish(strip_spec):
    """A lighter triangle set for threshold-boundary unit tests."""
    cfg = EnumConfig(max_curvature=2 ** 8, window=Rect(-1, 0, 1, 2))
    S = enumerate_orbit(strip_spec, cfg)
    F = ideal_triangle_filter(S)
    X = period_extend(F, 60, prune_below_area=2.0 ** -9)
    return ideal_triangle_filter(X)
