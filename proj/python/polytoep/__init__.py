"""Toeplitz operators with matrix Laurent-polynomial symbols on the polydisc."""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import run_job as _run_job

__version__ = "0.1.0"


def run(subcommand, inputs=(), **options):
    """Run a CLI subcommand and return (exit_code, report dict)."""
    code, text = _run_job(subcommand, list(inputs), **options)
    return code, _json.loads(text)
