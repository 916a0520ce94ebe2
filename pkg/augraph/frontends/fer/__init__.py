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

# commonly used names of the expression recognition frontend.
from augraph.frontends.fer.argparser import AugraphArgparser
from augraph.frontends.fer.arrayiterator import ArrayIterator
from augraph.frontends.fer.callbacks import CallbackContainer, CallbackPhase, \
    make_default_callbacks
from augraph.frontends.fer.dataset import Dataset, Sample, load_dataset, save_dataset
from augraph.frontends.fer.initializer import ConstantInit, FanInUniformInit
from augraph.frontends.fer.layer import Activation, Conv2D, Flatten, GlobalAvgPool, Linear, \
    Pool2D, Sequential
from augraph.frontends.fer.model import ModelConfig, ModelState, attention_at_layer, forward, \
    forward_record, init_model, load_model, predict, save_model
from augraph.frontends.fer.optimizer import GradientDescentMomentum
from augraph.frontends.fer.cam import extract, gradcam, gradcam_pp, layercam
from augraph.frontends.fer.metrics import MetricsReport, att_cos, cam_cos, evaluate, \
    per_class_average_maps
from augraph.frontends.fer.synth import SynthConfig, generate
from augraph.frontends.fer.trainer import TrainConfig, TrainLog, fit, joint_loss, train_step
