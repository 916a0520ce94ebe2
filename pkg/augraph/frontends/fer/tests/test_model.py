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
"""
The five-stage classifier: shapes, initialization, attention and checkpoints.
"""
import os

import h5py
import numpy as np
import pytest

import augraph as ag
from augraph.frontends.fer.model import ModelConfig, attention_at_layer, check_layer, \
    forward, forward_from, forward_record, init_model, layer_attention, load_model, \
    predict, read_checkpoint_attrs, save_model
from augraph.util.errors import ConfigurationError, DataError, DimensionError, ParameterError
from augraph.util.utils import RandomTensorGenerator

rng = RandomTensorGenerator(0, np.float64)


def image32():
    return rng.uniform(0, 1, (32, 32))


def test_default_config_shapes():
    state = init_model(ModelConfig())
    assert [s[0] for s in state.feature_shapes] == [8, 16, 32, 64, 64]
    assert [state.layer_shape(l) for l in range(1, 6)] == \
        [(64, 64), (32, 32), (16, 16), (8, 8), (4, 4)]
    assert state.head_weights.shape == (6, 64)
    assert state.cfg.attention_layer == 5


def test_forward_shapes(small_model):
    result = forward_record(small_model, image32())
    assert result.logits.shape == (6,)
    assert [f.shape for f in result.features] == [(4, 32, 32), (6, 16, 16), (8, 8, 8)]
    assert [f.shape for f in result.pre_features] == [(4, 32, 32), (6, 16, 16), (8, 8, 8)]
    assert small_model.last_forward is result
    for f in result.features:
        assert f.data.min() >= 0.


def test_forward_accepts_channel_first(small_model):
    image = image32()
    logits, _ = forward(small_model, image, record=False)
    again, _ = forward(small_model, image[np.newaxis], record=False)
    np.testing.assert_array_equal(logits.data, again.data)


def test_forward_rejects_wrong_size(small_model):
    with pytest.raises(DimensionError) as e:
        forward(small_model, np.zeros((30, 32)))
    assert e.value.axis == 'H'
    with pytest.raises(DimensionError):
        forward(small_model, np.zeros((2, 32, 32)))


def test_initialization(small_model_config):
    first = init_model(small_model_config).parameter_values()
    second = init_model(small_model_config).parameter_values()
    assert list(first) == list(second)
    for name in first:
        np.testing.assert_array_equal(first[name], second[name])
        if name.endswith('/b'):
            assert not first[name].any()
    other = ModelConfig.from_dict(dict(small_model_config.to_dict(), seed=2))
    third = init_model(other).parameter_values()
    assert not np.array_equal(first['stage1/conv1/W'], third['stage1/conv1/W'])
    limit = np.sqrt(6. / 9.)
    assert np.abs(first['stage1/conv1/W']).max() <= limit


def test_parameter_names(small_model):
    assert list(small_model.parameters) == [
        'stage1/conv1/W', 'stage1/conv1/b', 'stage2/conv1/W', 'stage2/conv1/b',
        'stage3/conv1/W', 'stage3/conv1/b', 'head/W', 'head/b']


def test_flatten_head():
    cfg = ModelConfig(input_size=(32, 32, 1), stages=((4, 1, True), (5, 1, False)),
                      head='flatten-linear', classes=3)
    state = init_model(cfg)
    assert state.head_weights.shape == (3, 5 * 16 * 16)
    logits, _ = forward(state, image32())
    assert logits.shape == (3,)


def test_two_convolutions_per_stage():
    cfg = ModelConfig(input_size=(32, 32, 1), stages=((3, 2, True), (4, 1, False)),
                      classes=2)
    state = init_model(cfg)
    assert 'stage1/conv2/W' in state.parameters
    assert state.parameters['stage1/conv2/W'].shape == (3, 3, 3, 3)


@pytest.mark.parametrize('kwargs', [
    dict(classes=1),
    dict(head='mlp'),
    dict(attention_layer=6),
    dict(attention_layer=0),
    dict(kernel=2),
    dict(attention_source='middle'),
    dict(stages=()),
    dict(stages=((0, 1, True),)),
    dict(input_size=(8, 8, 1)),
])
def test_config_errors(kwargs):
    with pytest.raises(ConfigurationError):
        ModelConfig(**kwargs)


def test_config_round_trip(small_model_config):
    assert ModelConfig.from_dict(small_model_config.to_dict()) == small_model_config
    with pytest.raises(ConfigurationError):
        ModelConfig.from_dict(dict(small_model_config.to_dict(), depth=3))


def test_check_layer():
    assert check_layer(3, 5) == 3
    for bad in (0, 6, True):
        with pytest.raises(ParameterError):
            check_layer(bad, 5)


def test_attention_is_channel_mean(small_model):
    result = forward_record(small_model, image32())
    for l in (1, 2, 3):
        t = attention_at_layer(result.features, l)
        np.testing.assert_allclose(t.data, result.features[l - 1].data.mean(axis=0),
                                   rtol=1e-15)
    np.testing.assert_array_equal(layer_attention(small_model, result).data,
                                  attention_at_layer(result.features, 3).data)
    with pytest.raises(ParameterError):
        attention_at_layer(result.features, 4)


def test_pre_activation_attention_source():
    cfg = ModelConfig(input_size=(32, 32, 1), stages=((4, 1, True), (4, 1, False)),
                      classes=2, attention_source='pre')
    state = init_model(cfg)
    result = forward_record(state, image32())
    np.testing.assert_array_equal(layer_attention(state, result, 1).data,
                                  ag.channel_mean(result.pre_features[0]).data)
    assert result.pre_features[0].data.min() < 0.


def test_forward_from_resumes_the_pass(small_model):
    result = forward_record(small_model, image32())
    for l in (1, 2, 3):
        logits = forward_from(small_model, result.features[l - 1], l)
        np.testing.assert_allclose(logits.data, result.logits.data, rtol=1e-12)


def test_predict_does_not_record(small_model):
    image = image32()
    logits, _ = forward(small_model, image)
    before = small_model.last_forward
    assert predict(small_model, image) == int(np.argmax(logits.data))
    assert small_model.last_forward is before


def test_predict_ties_go_to_lowest_index():
    cfg = ModelConfig(input_size=(32, 32, 1), stages=((2, 1, False),), classes=4)
    state = init_model(cfg)
    state.parameters['head/W'].assign(np.zeros((4, 2)))
    state.parameters['head/b'].assign([0., 1., 1., 0.5])
    assert predict(state, image32()) == 1


def test_checkpoint_round_trip(small_model, tmpdir):
    path = os.path.join(str(tmpdir), 'run', 'model.h5')
    save_model(small_model, path, {'lambda': 1.0})
    loaded = load_model(path)
    assert loaded.cfg == small_model.cfg
    for name, p in small_model.parameters.items():
        np.testing.assert_array_equal(loaded.parameters[name].data, p.data)
    image = image32()
    np.testing.assert_array_equal(forward(loaded, image)[0].data,
                                  forward(small_model, image)[0].data)
    cfg, train = read_checkpoint_attrs(path)
    assert cfg == small_model.cfg and train == {'lambda': 1.0}


def test_checkpoint_errors(small_model, tmpdir):
    with pytest.raises(DataError):
        load_model(os.path.join(str(tmpdir), 'missing.h5'))
    path = os.path.join(str(tmpdir), 'model.h5')
    save_model(small_model, path)
    assert read_checkpoint_attrs(path)[1] is None
    with h5py.File(path, 'a') as f:
        f.attrs['format_version'] = 99
    with pytest.raises(ConfigurationError):
        load_model(path)


def test_checkpoint_missing_parameter(small_model, tmpdir):
    path = os.path.join(str(tmpdir), 'model.h5')
    save_model(small_model, path)
    with h5py.File(path, 'a') as f:
        del f['head/b']
    with pytest.raises(ConfigurationError) as e:
        load_model(path)
    assert 'head/b' in str(e.value)
