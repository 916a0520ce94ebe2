# ----------------------------------------------------------------------------
# Copyright 2026 The augraph Authors
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ----------------------------------------------------------------------------
import pytest

from augraph.frontends.fer.cam import methods
from augraph.frontends.fer.model import ModelConfig, init_model
from augraph.frontends.fer.synth import SynthConfig, generate


def pytest_addoption(parser):
    parser.addoption("--run-acceptance", action="store_true", default=False,
                     help="run the end-to-end training trend tests (minutes)")


def pytest_configure(config):
    config.addinivalue_line("markers",
                            "acceptance: end-to-end trend test, needs --run-acceptance")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-acceptance"):
        return
    skip = pytest.mark.skip(reason="needs --run-acceptance")
    for item in items:
        if "acceptance" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="module", params=list(methods))
def cam_method(request):
    yield request.param


@pytest.fixture(scope="session")
def small_synth():
    """
    A 32x32 synthetic split with six samples per class.
    """
    return generate(SynthConfig(samples_per_class=6, image_size=(32, 32), seed=3,
                                split=(0.5, 0.0, 0.5)))


@pytest.fixture
def small_model_config():
    return ModelConfig(input_size=(32, 32, 1),
                       stages=((4, 1, True), (6, 1, True), (8, 1, False)),
                       classes=6, seed=1)


@pytest.fixture
def small_model(small_model_config):
    return init_model(small_model_config)
