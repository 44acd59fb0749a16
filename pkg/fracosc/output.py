"""
CSV and JSON writers. Every file starts with the tool version, alpha, k, n
and the SHA-256 of the run configuration, and contains nothing that
depends on the time or the machine.
"""
import hashlib
import io
import json
from dataclasses import dataclass

import numpy as np

from . import __VERSION__


def config_digest(data):
    """ SHA-256 of the canonical JSON form of a configuration """
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class Header:
    alpha: float
    k: int
    n: int
    config_sha256: str

    def lines(self):
        return [
            "fracosc {0}".format(__VERSION__),
            "alpha={0!r}".format(float(self.alpha)),
            "k={0}".format(self.k),
            "n={0}".format(self.n),
            "config_sha256={0}".format(self.config_sha256),
        ]

    def as_dict(self):
        return {
            "tool": "fracosc",
            "version": __VERSION__,
            "alpha": float(self.alpha),
            "k": self.k,
            "n": self.n,
            "config_sha256": self.config_sha256,
        }


def csv_text(header, columns, rows):
    """
    CSV with ``#`` comment lines for the header and the column names.

    :param rows: 2-d array-like of numbers
    """
    stream = io.StringIO()
    lines = header.lines() + [",".join(columns)]
    np.savetxt(stream, np.atleast_2d(np.asarray(rows, dtype=float)), delimiter=",",
               fmt="%.17g", header="\n".join(lines), comments="# ")
    return stream.getvalue()


def _plain(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


def json_text(header, payload):
    document = {"header": header.as_dict()}
    document.update(_plain(payload))
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def write(text, path=None, echo=None):
    """ Writes to ``path``, or hands the text to ``echo`` when no path is given """
    if path is None:
        echo(text, nl=False)
        return
    with io.open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
