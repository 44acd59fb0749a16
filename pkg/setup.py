#!/usr/bin/env python

import fracosc

from setuptools import setup, find_packages
import sys

assert sys.version_info[0] == 3, "We require Python > 3"

setup(
    name='fracosc',
    version=fracosc.__VERSION__,
    description=(
        'Fractional calculus on power series and sampled functions, and the '
        'geometry of the k-order fractional osculator bundle: sprays, '
        'nonlinear and metrical connections, Euler-Lagrange operators.'
    ),
    long_description=open('README.rst').read(),
    keywords=['fractional calculus', 'differential geometry', 'lagrangian mechanics'],
    packages=find_packages(exclude=['tests', 'tests.*']),
    py_modules=['cli'],
    package_data={
        'fracosc': ['config_common.yaml', 'run_config_schema.json'],
    },
    classifiers=[
        'License :: OSI Approved :: LGPL License',
        'Operating System :: OS Independent',
        'Programming Language :: Python :: 3',
        'Development Status :: Beta',
        'Intended Audience :: Science/Research',
    ],
    entry_points={
        'console_scripts': [
            'fracosc = cli:main'
        ],
    },
    install_requires=open('requirements.txt').read().split(),
    setup_requires=['pytest-runner'],
    tests_require=['pytest', 'hypothesis'],
    include_package_data=True,
)
