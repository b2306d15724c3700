import logging

import pytest

from sll.core.config import settings

from .utils import chain_network, collider_network, independent_data, sample


@pytest.fixture(autouse=True)
def quiet_logs():
    logging.getLogger("sll").setLevel(logging.ERROR)
    yield


@pytest.fixture
def collider_bn():
    return collider_network()


@pytest.fixture
def chain_bn():
    return chain_network()


@pytest.fixture
def collider_data(collider_bn):
    return sample(collider_bn, 5000, seed=7)


@pytest.fixture
def chain_data(chain_bn):
    return sample(chain_bn, 3000, seed=11)


@pytest.fixture
def independent4():
    return independent_data(4, 2000, seed=3)


@pytest.fixture
def verify_deltas(monkeypatch):
    monkeypatch.setattr(settings, "verify_deltas", True)
