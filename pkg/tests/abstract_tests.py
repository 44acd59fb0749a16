import os
import unittest

import numpy as np

from fracosc import Config


RUNS_FOLDER = os.path.join(os.path.dirname(os.path.dirname(os.path.realpath(__file__))), "runs")


class AFracOscTest(unittest.TestCase):
    """ Loads the package defaults overlaid with tests/config_test.yaml """

    def setUp(self):
        Config.load()
        Config.load("../tests/config_test.yaml")

    def tearDown(self):
        Config.reset()

    def set_convention(self, name, value):
        Config.data["numerics"]["conventions"][name] = value

    def rng(self, seed=0):
        return np.random.default_rng(seed)

    def run_file(self, name):
        return os.path.join(RUNS_FOLDER, name)
