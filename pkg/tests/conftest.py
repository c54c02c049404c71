import os

import pytest

from dehazer import GlobalConfiguration


@pytest.fixture(autouse=True)
def global_configuration(monkeypatch):
    scale = os.environ.get("DEHAZER_SCALE", "toy")
    with monkeypatch.context() as ctx:
        ctx.setattr(GlobalConfiguration, "SCALE", scale)
        yield GlobalConfiguration
