"""
YAML run configurations for the command line, validated against
:file:`run_config_schema.json`.
"""
import io
import json
import os
from dataclasses import dataclass, field

import jsonschema
import numpy as np
import yaml

from .exceptions import ConfigError
from .output import config_digest

RUN_CONFIG_SCHEMA = None

DEFAULT_TOLERANCE = 1e-8


def get_schema():
    global RUN_CONFIG_SCHEMA
    if not RUN_CONFIG_SCHEMA:
        schema_file = os.path.join(
            os.path.dirname(os.path.realpath(__file__)),
            "run_config_schema.json"
        )
        RUN_CONFIG_SCHEMA = json.loads(io.open(schema_file).read())
    return RUN_CONFIG_SCHEMA


def validate_run_config(data):
    """
    Validates a parsed run configuration.

    :raises ConfigError: for empty documents and schema violations
    """
    if not data:
        raise ConfigError("run configuration is empty")
    try:
        jsonschema.validate(data, get_schema())
    except jsonschema.ValidationError as e:
        location = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError("invalid run configuration at {0}: {1}".format(location, e.message))


def load_run_config(path):
    """
    Reads and validates a run configuration file.

    :rtype: RunConfig
    """
    try:
        with io.open(path, "r", encoding="utf-8") as ymlfile:
            text = ymlfile.read()
    except OSError as e:
        raise ConfigError("cannot read run configuration {0}: {1}".format(path, e))
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError("run configuration {0} is not valid YAML: {1}".format(path, e))
    validate_run_config(data)
    return RunConfig(data)


@dataclass
class RunConfig:
    """ Validated run configuration with typed accessors """
    data: dict
    digest: str = field(init=False)

    def __post_init__(self):
        self.digest = config_digest(self.data)

    @property
    def alpha(self):
        return float(self.data["bundle"]["alpha"])

    @property
    def k(self):
        return int(self.data["bundle"]["k"])

    @property
    def n(self):
        return int(self.data["bundle"]["n"])

    @property
    def seed(self):
        return int(self.data.get("seed", 0))

    @property
    def tolerance(self):
        return float(self.data.get("check", {}).get("tolerance", DEFAULT_TOLERANCE))

    @property
    def output_path(self):
        return self.data.get("output", {}).get("path")

    def section(self, name):
        if name not in self.data:
            raise ConfigError("run configuration has no '{0}' section".format(name))
        return self.data[name]

    def nodes(self):
        from .fracnum import residual_nodes
        return residual_nodes(self.data.get("grid", {}).get("nodes"))

    def jet_samples(self, order):
        """ Seeded jet points of the given order """
        from .oscbundle import JetPoint

        grid = self.data.get("grid", {})
        rng = np.random.default_rng(self.seed)
        return [JetPoint.random(rng, self.n, order, grid.get("low", 0.1), grid.get("high", 2.0))
                for _ in range(int(grid.get("samples", 20)))]

    def point(self):
        """ Jet point of ``connection.point`` or the first seeded sample """
        from .oscbundle import JetPoint

        point = self.data.get("connection", {}).get("point")
        if point is None:
            return self.jet_samples(self.k)[0]
        jet = JetPoint(point["x"], point["y"])
        if jet.n != self.n or jet.k != self.k:
            raise ConfigError("connection point does not fit n={0}, k={1}".format(self.n, self.k))
        return jet

    def curve(self):
        from .lagrange import ExtremalCurve

        curve = self.data.get("curve")
        if curve is None:
            return None
        if len(curve) != self.n:
            raise ConfigError("curve has {0} coordinates, bundle has n={1}".format(len(curve), self.n))
        return ExtremalCurve(tuple(curve))

    def lagrangians(self):
        """
        The fractional and classical Lagrangians with the expected operator field.

        :return: (frac or None, classical or None, expected tuple or None)
        """
        from .expr import Polynomial
        from .lagrange import FracLagrangian, ThirdOrderExample

        section = self.section("lagrangian")
        if "example" in section:
            example = section["example"]
            if self.n != 1 or self.k != 3:
                raise ConfigError("the third-order example needs n=1 and k=3")
            built = ThirdOrderExample(
                c=float(example.get("c", 1.0)),
                gamma=float(example.get("gamma", 2.0)),
                a=tuple(float(v) for v in example.get("a", (1.0, 1.0, 1.0))),
                alpha=self.alpha)
            if example.get("reading") == "literal":
                return built.literal_lagrangian(), built.literal_classical_lagrangian(), (built.expected(),)
            return built.fractional_lagrangian(), built.classical_lagrangian(), (built.expected(),)

        def build(name):
            if name not in section:
                return None
            return FracLagrangian(self.n, self.k, self.alpha, section[name])

        expected = section.get("expected")
        if expected is not None:
            if len(expected) != self.n:
                raise ConfigError("expected field needs {0} components".format(self.n))
            expected = tuple(Polynomial.from_expr(e) for e in expected)
        return build("frac"), build("classical"), expected

    def metric(self):
        from .oscbundle import MetricField

        if "metric" not in self.data:
            return None
        return MetricField(self.n, self.k, self.data["metric"])

    def spray(self):
        from .oscbundle import FracSpray

        return FracSpray(self.n, self.k, self.alpha, tuple(self.section("spray")))

    def riemann(self):
        from .lagrange import RiemannStructure

        return RiemannStructure(self.n, self.alpha, self.section("riemann"))

    def finsler(self):
        from .lagrange import FinslerStructure

        section = self.section("finsler")
        return FinslerStructure(self.n, self.alpha, section.get("F"), section.get("F2"))

    def lagrange(self):
        from .lagrange import FracLagrangian

        return FracLagrangian(self.n, 1, self.alpha, self.section("lagrange"))

    def fode(self):
        from .fracnum import FodeProblem

        section = self.section("fode")
        return FodeProblem(
            alpha=float(section.get("alpha", self.alpha)),
            rhs=list(section["rhs"]),
            x0=list(section["x0"]),
            t_end=float(section["t_end"]),
            h=float(section["h"]))

    def fode_reference(self):
        from .expr import parse

        reference = self.data.get("fode", {}).get("reference")
        if reference is None:
            return None
        return [parse(e) for e in reference]
