# Copyright 2018 Google LLC
# Copyright 2026 The rime-bench Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
import setuptools


here = os.path.abspath(os.path.dirname(__file__))

info = {}
with open(os.path.join(here, 'rime_bench', '__version__.py')) as f:
    exec(f.read(), info)


with open(os.path.join(here, 'README.md'), 'r') as fh:
    long_description = fh.read()


install_requires = [
    'numpy>=1.20',
    'scipy>=1.7',
    'absl-py>=0.12',
    'jinja2>=2.10',
    'progressbar2>=3.38.0',
    'PyYAML>=5.1',
]


test_requires = [
    'nox',
    'pytest>=6.2',
]


extras = {
    'test': test_requires
}


setuptools.setup(
    name='rime-bench',

    version=info['__version__'],

    description=('RIME and MRIME-CD metaheuristics with a reproducible '
                 'benchmarking harness'),
    long_description=long_description,
    long_description_content_type='text/markdown',

    author='rime-bench Authors',

    packages=setuptools.find_packages(exclude=['examples', 'examples.*']),
    package_data={
        'rime_bench.problems': ['data/*.json'],
        'rime_bench.harness': ['templates/*.txt'],
        'rime_bench.crash_handling': ['template/*.txt'],
    },
    include_package_data=True,
    install_requires=install_requires,
    extras_require=extras,
    python_requires='>=3.8',

    license='Apache 2.0',
    keywords='metaheuristic optimization benchmark rime',

    classifiers=[
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3.9',
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: Apache Software License',
        'Operating System :: Unix',
        'Topic :: Scientific/Engineering :: Mathematics',
    ],

    entry_points={
        'console_scripts': [
            'rime-bench = rime_bench.rime_bench:main']
    },
)
