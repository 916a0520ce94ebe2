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
from setuptools import setup, find_packages
setup(
    name="augraph",
    version="0.1.0",
    description="Facial expression recognition with action-unit aligned attention",
    packages=find_packages(exclude=["tests"]),
    package_data={"augraph.facs": ["data/*.txt"]},
    install_requires=[
        "numpy",
        "scipy",
        "cachetools",
        "decorator",
        "tqdm",
        "h5py",
        "ConfigArgParse",
    ],
    entry_points={
        "console_scripts": ["augraph=augraph.frontends.fer.cli:main"],
    },
    author='The augraph Authors',
    license='License :: Apache 2.0',
)
