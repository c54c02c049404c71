import pytest

from dehazer.data import make_dataset
from dehazer.model import preset_config
from dehazer.prior import DcpParams
from dehazer.training import TrainPlan


@pytest.fixture(scope="package")
def tiny_dataset():
    return make_dataset(4, 2, 16, seed=0, dcp=DcpParams(guided_radius=4))


@pytest.fixture
def tiny_config():
    return preset_config("EDN-GTM", base_width=4, depth=2)


@pytest.fixture
def tiny_plan(tiny_config):
    return TrainPlan(config=tiny_config, iterations=3, batch=2, lr_g=1e-3, lr_d=1e-3)
