"""Simulation of CTRW stochastic integrals and their scaling limits, with
Skorokhod J1/M1 diagnostics. The heavy lifting is done by the C++ extension."""

import json as _json

from ._ctrwlim import *  # noqa: F401,F403
from ._ctrwlim import _report_json

__all__ = [name for name in dir() if not name.startswith("_")] + ["convergence_report"]


def convergence_report(
    alpha=2.0,
    beta=1.0,
    n=(256, 1024, 4096),
    f="const:c=1",
    horizon=1.0,
    samples=10000,
    seed=0,
    probe_times=(0.25, 0.5, 1.0),
    deltas=(0.2, 0.1, 0.05, 0.02),
    modulus_paths=200,
    limit_samples=10000,
    limit_step=1.0 / 1024,
    jobs=1,
):
    """Ensemble convergence report as a dict (same layout as the CLI's JSON)."""
    text = _report_json(
        alpha, beta, list(n), f, horizon, samples, seed, list(probe_times), list(deltas),
        modulus_paths, limit_samples, limit_step, jobs,
    )
    return _json.loads(text)
