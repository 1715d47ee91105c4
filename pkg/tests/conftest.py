import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def f12():
    from siegel_lab.acceptance import eigenform

    return eigenform(12)


@pytest.fixture(scope="session")
def f32():
    from siegel_lab.acceptance import eigenform

    return eigenform(32)


@pytest.fixture(scope="session")
def f18():
    from siegel_lab.acceptance import eigenform

    return eigenform(18)


@pytest.fixture(scope="session")
def lift_ctxs():
    from siegel_lab.acceptance import lift_contexts

    return lift_contexts()


@pytest.fixture(scope="session")
def showcase():
    from siegel_lab.acceptance import showcase_forms

    return showcase_forms()
