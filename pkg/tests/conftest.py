import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from jbstar.models import ModelDescriptor as D, build_model

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

MATRIX_MODELS = [
    D.full(1), D.full(2), D.full(3), D.symmetric(2), D.symmetric(3),
    D.direct_sum(D.full(2), D.symmetric(2), D.full(1)),
]
CIRCLE_MODELS = [D.circle(D.full(1), 64), D.circle(D.symmetric(2), 64), D.circle(D.full(2), 32)]
ALL_MODELS = MATRIX_MODELS + CIRCLE_MODELS

seeds = st.integers(0, 2**32 - 1)


def model_id(d):
    if d.kind == "circle_function":
        return f"circle[{model_id(d.fiber)},N={d.N}]"
    if d.kind == "direct_sum":
        return "sum[" + ",".join(model_id(p) for p in d.parts) + "]"
    return f"{d.kind.split('_')[0]}{d.n}"


@pytest.fixture(params=ALL_MODELS, ids=model_id)
def model(request):
    return build_model(request.param)


@pytest.fixture(params=MATRIX_MODELS, ids=model_id)
def matrix_model(request):
    return build_model(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
