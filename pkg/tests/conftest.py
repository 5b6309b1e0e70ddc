import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from symprod import canonicalize, from_values

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

coords = st.floats(min_value=-100.0, max_value=100.0, allow_nan=False, allow_infinity=False)


def line_sets(max_points: int = 5):
    return st.lists(coords, min_size=1, max_size=max_points).map(from_values)


def plane_sets(max_points: int = 4):
    return st.lists(
        st.tuples(coords, coords), min_size=1, max_size=max_points
    ).map(lambda pts: canonicalize(pts, 2))
