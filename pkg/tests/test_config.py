import logging
import os
import tempfile
import unittest
from unittest import mock

from fracosc import Config, set_global_logger
from tests.abstract_tests import AFracOscTest


class TestConfig(AFracOscTest):

    def test_overlay(self):
        assert Config.get("numerics", "residual_nodes") == 17
        assert Config.get("numerics", "exponent_tolerance") == 1e-9
        assert Config.get("logs", "level") == "DEBUG"

    def test_defaults(self):
        assert Config.get("numerics", "not_there", 5) == 5
        assert Config.get("numerics", "not_there", default="x") == "x"
        with self.assertRaises(KeyError):
            Config.get("numerics", "not_there")
        with self.assertRaises(KeyError):
            Config.get("numerics", "not_there", 5, default=6)

    def test_settings_file(self):
        with tempfile.TemporaryDirectory() as folder:
            path = os.path.join(folder, "settings.yaml")
            with open(path, "w") as fh:
                fh.write("numerics:\n    conventions:\n        dual_relation: literal\n")
            with mock.patch.dict(os.environ, {"FracOscSettings": path}):
                Config.load()
        assert Config.get("numerics", "conventions", "dual_relation") == "literal"
        assert Config.get("numerics", "conventions", "liouville_weights") == "ladder"
        assert Config.source.endswith("settings.yaml")

    def test_copy(self):
        copy = Config.get_config()
        copy["numerics"]["residual_nodes"] = 3
        assert Config.get("numerics", "residual_nodes") == 17

    def test_reset(self):
        Config.reset()
        with self.assertRaises(Exception):
            Config.get_config()
        assert Config.get("numerics", "residual_nodes", 33) == 33

    def test_logger(self):
        logger = logging.getLogger("fracosc.test")
        handlers = set_global_logger(logger)
        assert all(h.level == logging.DEBUG for h in handlers)
        assert logger.handlers == handlers


if __name__ == "__main__":
    unittest.main()
