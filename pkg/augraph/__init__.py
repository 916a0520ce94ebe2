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

from augraph.op_graph.op_graph import Tensor, TensorOp, add, as_ops, as_tensor, \
    backward, constant, default_dtype, deriv, divide, flatten, linear, mean, multiply, \
    negative, relu, reshape, softmax_cross_entropy, subtract, sum, variable, zero_grad
from augraph.op_graph.convolution import convolution, conv2d
from augraph.op_graph.pooling import pooling, maxpool2d, global_avg_pool
from augraph.op_graph.attention import channel_mean, cosine_sim_map
from augraph.util.threadstate import no_record, recording, is_recording
from augraph.util.derivative_check import grad_check

__all__ = [
    'Tensor',
    'TensorOp',
    'add',
    'as_ops',
    'as_tensor',
    'backward',
    'channel_mean',
    'constant',
    'conv2d',
    'convolution',
    'cosine_sim_map',
    'default_dtype',
    'deriv',
    'divide',
    'flatten',
    'global_avg_pool',
    'grad_check',
    'is_recording',
    'linear',
    'maxpool2d',
    'mean',
    'multiply',
    'negative',
    'no_record',
    'pooling',
    'recording',
    'relu',
    'reshape',
    'softmax_cross_entropy',
    'subtract',
    'sum',
    'variable',
    'zero_grad',
]
