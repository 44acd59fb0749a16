#!/usr/bin/env python3
import functools
import json
import logging
import sys

import click
import numpy as np

from fracosc import Config
from fracosc.exceptions import (
    FracOscException, UsageException, DomainError, ResidualAssertionError
)
from fracosc.expr import parse, check_variables, evaluate
from fracosc.fracseries import FracSeries, frac_derive, evaluate as evaluate_series, evaluate_mirrored
from fracosc.fracnum import SampledFunction, Side, gl_derivative, l1_derivative, solve_fode
from fracosc.output import Header, config_digest, csv_text, json_text, write
from fracosc.run_config import load_run_config


class FracOscGroup(click.Group):
    """
    Click group whose usage errors exit with 1 and whose commands may
    return their exit code.
    """

    def main(self, *args, **kwargs):
        kwargs["standalone_mode"] = False
        try:
            rv = super().main(*args, **kwargs)
        except click.ClickException as e:
            e.show()
            sys.exit(UsageException.exit_code)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(UsageException.exit_code)
        sys.exit(rv if isinstance(rv, int) else 0)


def exits_on_failure(f):
    """ Maps package exceptions to their exit codes """
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except FracOscException as e:
            click.echo("{0}: {1}".format(type(e).__name__, e), err=True)
            sys.exit(e.exit_code)
    return wrapper


def assert_below(label, value, tolerance):
    if not value <= tolerance:
        raise ResidualAssertionError(
            "{0} {1:.3e} exceeds tolerance {2:.3e}".format(label, value, tolerance), magnitude=value)


@click.group(cls=FracOscGroup)
@click.option("--log-level", default=None, help="overrides logs.level of the configuration")
def main(log_level):
    if log_level:
        logging.getLogger().setLevel(log_level.upper())


def _grid(text):
    try:
        a, b, h = (float(v) for v in text.split(":"))
    except ValueError:
        raise UsageException("grid must read a:b:h, got '{0}'".format(text))
    if not b > a or not h > 0:
        raise UsageException("grid needs b > a and h > 0")
    return a, b, h


@main.command()
@click.option("--alpha", type=float, required=True)
@click.option("--expr", "expression", help="expression in t")
@click.option("--series", help="JSON array of [coefficient, exponent] pairs")
@click.option("--grid", default="0:1:0.001", show_default=True, help="a:b:h")
@click.option("--scheme", type=click.Choice(["gl", "l1", "exact"]), default="gl", show_default=True)
@click.option("--side", type=click.Choice(["left", "right"]), default="left", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@exits_on_failure
def deriv(alpha, expression, series, grid, scheme, side, out):
    """
    Fractional derivative of a function of t on a grid.

    Series, and expressions under the exact scheme, are read in powers of
    t - a for the left side and of b - t for the right side.
    """
    if (expression is None) == (series is None):
        raise UsageException("give exactly one of --expr and --series")
    a, b, h = _grid(grid)
    if not 0 < alpha <= 1:
        raise DomainError("alpha must lie in (0, 1], got {0}".format(alpha))
    count = int(round((b - a) / h)) + 1
    t = a + h * np.arange(count)

    parsed = None
    if series is not None:
        exact = FracSeries.from_json(series, a)
    else:
        parsed = parse(expression)
        check_variables(parsed, 0, allow_t=True)
        exact = FracSeries.from_expr(parsed, a) if scheme == "exact" else None

    def read(f):
        if side == "left":
            return evaluate_series(f, t)
        return evaluate_mirrored(f, t, b)

    if exact is not None:
        values = read(exact)
    else:
        values = np.ones_like(t) * evaluate(parsed, {"t": t})

    if scheme == "exact":
        derived = read(frac_derive(exact, alpha))
    else:
        method = gl_derivative if scheme == "gl" else l1_derivative
        derived = method(SampledFunction(a, h, values), alpha,
                         Side.Left if side == "left" else Side.Right).values

    digest = config_digest({"alpha": alpha, "expr": expression, "series": series,
                            "grid": grid, "scheme": scheme, "side": side})
    logging.getLogger(__name__).info("deriv with scheme {0} on {1} nodes".format(scheme, count))
    text = csv_text(Header(alpha, 1, 1, digest), ["t", "f", "dalpha_f"],
                    np.column_stack([t, values, derived]))
    write(text, out, click.echo)


def _el_rows(cfg, frac, classical, expected):
    """ Residual table over the curve nodes or over seeded jet samples """
    columns = ["site"]
    blocks = []
    for name, lag, fractional in (("frac", frac, True), ("classical", classical, False)):
        if lag is None:
            continue
        from fracosc.lagrange import el_operator
        operators = el_operator(lag, fractional)
        if expected is not None:
            operators = tuple(op - e for op, e in zip(operators, expected))
        columns += ["{0}_{1}".format(name, i + 1) for i in range(cfg.n)]
        blocks.append(operators)
    if not blocks:
        raise UsageException("the lagrangian section defines no Lagrangian")

    curve = cfg.curve()
    if curve is not None:
        from fracosc.lagrange import sample_operators
        nodes = cfg.nodes()
        columns[0] = "t"
        lag = frac or classical
        values = [nodes] + [row for ops in blocks for row in sample_operators(ops, lag, curve, nodes)]
        return columns, np.column_stack(values)

    rows = []
    for index, point in enumerate(cfg.jet_samples(cfg.k + 1)):
        env = point.environment()
        rows.append([index] + [op.evaluate(env) for ops in blocks for op in ops])
    return columns, np.array(rows)


@main.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--assert", "check", is_flag=True, help="exit 3 when a residual exceeds the tolerance")
@click.option("--tolerance", type=float, default=None, help="overrides check.tolerance")
@exits_on_failure
def el(config, out, check, tolerance):
    """ Euler-Lagrange residuals of the configured Lagrangians """
    cfg = load_run_config(config)
    frac, classical, expected = cfg.lagrangians()
    logging.getLogger(__name__).info("Euler-Lagrange residuals for {0}".format(config))
    columns, rows = _el_rows(cfg, frac, classical, expected)
    text = csv_text(Header(cfg.alpha, cfg.k, cfg.n, cfg.digest), columns, rows)
    write(text, out or cfg.output_path, click.echo)
    if check:
        worst = float(np.max(np.abs(rows[:, 1:]))) if rows.size else 0.0
        assert_below("largest Euler-Lagrange residual", worst, tolerance or cfg.tolerance)


def _dual_coefficients(cfg):
    from fracosc.oscbundle import spray_to_dual, primal_to_dual, zero_primal
    from fracosc.lagrange import prolong_riemann, prolong_finsler, prolong_lagrange

    source = cfg.data.get("connection", {}).get("source", "none")
    if source == "spray":
        return spray_to_dual(cfg.spray())
    if source == "riemann":
        return prolong_riemann(cfg.riemann(), cfg.k)
    if source == "finsler":
        return prolong_finsler(cfg.finsler(), cfg.k)
    if source == "lagrange":
        return prolong_lagrange(cfg.lagrange(), cfg.k)
    return primal_to_dual(zero_primal(cfg.n, cfg.k, cfg.alpha))


def _connection_report(cfg):
    from fracosc.oscbundle import (
        dual_to_primal, pairing_residual, metrical_connection, metricity_residual,
        sasaki_lift, spray_property_residual, tangent_structure_matrix, spray_to_dual
    )
    from fracosc.lagrange import riemann_spray

    dual = _dual_coefficients(cfg)
    primal = dual_to_primal(dual)
    point = cfg.point()
    nilpotent = np.linalg.matrix_power(tangent_structure_matrix(cfg.n, cfg.k), cfg.k + 1)
    checks = {
        "nilpotency": float(np.max(np.abs(nilpotent))),
        "pairing": pairing_residual(dual, point),
    }
    source = cfg.data["connection"]["source"]
    if source == "spray":
        checks["spray_property"] = spray_property_residual(cfg.spray(), cfg.jet_samples(cfg.k))
    if source == "riemann" and cfg.n == 1:
        checks["dual_route"] = dual.max_difference(spray_to_dual(riemann_spray(cfg.riemann(), cfg.k)))
    report = {
        "dual": dual.to_json(),
        "primal": primal.to_json(),
        "point": point.as_table(),
        "dual_at_point": dual.at(point),
    }
    metric = cfg.metric()
    if metric is not None:
        report["metrical_connection"] = metrical_connection(metric, primal, point).to_json()
        report["sasaki_lift"] = sasaki_lift(metric, dual, point)
        checks["metricity"] = metricity_residual(metric, primal, point)
    report["checks"] = checks
    return report


@main.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--assert", "check", is_flag=True, help="exit 3 when a self-check exceeds the tolerance")
@click.option("--tolerance", type=float, default=None, help="overrides check.tolerance")
@exits_on_failure
def connection(config, out, check, tolerance):
    """ Nonlinear and metrical connection coefficients with self-checks """
    cfg = load_run_config(config)
    if "connection" not in cfg.data:
        raise UsageException("run configuration has no 'connection' section")
    logging.getLogger(__name__).info("connection coefficients for {0}".format(config))
    report = _connection_report(cfg)
    write(json_text(Header(cfg.alpha, cfg.k, cfg.n, cfg.digest), report), out or cfg.output_path, click.echo)
    if check:
        for name, value in sorted(report["checks"].items()):
            assert_below("{0} residual".format(name), value, tolerance or cfg.tolerance)


@main.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.option("--assert", "check", is_flag=True, help="exit 3 when the final state misses fode.reference")
@click.option("--tolerance", type=float, default=None, help="overrides check.tolerance")
@exits_on_failure
def solve(config, out, check, tolerance):
    """ Solves D^alpha x = X(t, x) by the predictor-corrector scheme """
    cfg = load_run_config(config)
    problem = cfg.fode()
    reference = cfg.fode_reference()
    logging.getLogger(__name__).info("solving {0} on {1} steps".format(
        config, int(round(problem.t_end / problem.h))))
    trajectory = solve_fode(problem)
    columns = ["t"] + ["x{0}".format(i + 1) for i in range(problem.n)]
    text = csv_text(Header(problem.alpha, cfg.k, problem.n, cfg.digest), columns,
                    np.column_stack([trajectory.t, trajectory.x]))
    write(text, out or cfg.output_path, click.echo)
    if check and reference is not None:
        t_end = float(trajectory.t[-1])
        expected = np.array([evaluate(e, {"t": t_end}) for e in reference])
        assert_below("final state error", float(np.max(np.abs(trajectory.final - expected))),
                     tolerance or cfg.tolerance)


@main.command(name="config")
def show_config():
    """ Prints the merged package configuration """
    click.echo(json.dumps(Config.get_config(), sort_keys=True, indent=2))


if __name__ == "__main__":
    main()
