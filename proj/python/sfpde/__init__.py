"""Verification laboratory for singular first-order PDEs t*u_t = F(t, x, u, u_x)."""

import json

from . import _core
from ._core import (
    DomainError,
    EvalError,
    IndeterminateError,
    ParseError,
    ResonanceError,
    SeriesError,
    diff,
    eval_expr,
    gallery_ids,
    normalize,
    run_cli,
    trace_field,
)

__all__ = [
    "DomainError",
    "EvalError",
    "IndeterminateError",
    "ParseError",
    "ResonanceError",
    "SeriesError",
    "audit",
    "build_solution",
    "classify",
    "diff",
    "eval_expr",
    "gallery_ids",
    "gallery_run",
    "normalize",
    "run_cli",
    "trace_field",
]


def classify(rhs, euler_form=False, T0=0.5, R0=0.1, tol=1e-9):
    """Case split of t*u_t = rhs as a dict (schema classify-v1)."""
    return json.loads(_core.classify_json(rhs, euler_form, T0, R0, tol))


def build_solution(rhs, M=6, N=6, T0=0.5, R0=0.1):
    """Truncated formal series solution as a dict (schema series-v1) with its residual."""
    return json.loads(_core.series_json(rhs, M, N, T0, R0))


def audit(u, sector=None):
    """Disc audit of the candidate u(t, x), or a sector audit when sector=(theta, R)."""
    return json.loads(_core.audit_json(u, sector))


def gallery_run(entry_id):
    """Runs one catalogue entry and returns its report."""
    return json.loads(_core.gallery_json(entry_id))["reports"][0]
