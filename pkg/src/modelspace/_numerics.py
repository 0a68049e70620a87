"""Shared numerical helpers: Richardson extrapolation and differencing."""

from __future__ import annotations

import numpy as np

__all__ = ["richardson", "central_difference", "directional_derivative", "DEFAULT_SCHEDULE"]

# t-schedule used by all numeric limits t -> 0.
DEFAULT_SCHEDULE = 0.5 ** np.arange(3, 13)


def richardson(values, ratio=2.0, return_error=False):
    """Extrapolate a sequence f(t_k) -> L, t_{k+1} = t_k / ratio, to t = 0.

    Assumes an expansion L + a1 t + a2 t^2 + ...; builds the full
    elimination table and returns the last entry, together with the
    difference of the final two extrapolants as an error estimate.
    """
    level = [np.asarray(v, dtype=float) for v in values]
    if len(level) < 2:
        out = level[0]
        return (out, np.inf) if return_error else out
    m = 1
    prev_tail = level[-1]
    while len(level) > 1:
        prev_tail = level[-1]
        factor = ratio ** m
        level = [
            (factor * level[i + 1] - level[i]) / (factor - 1.0)
            for i in range(len(level) - 1)
        ]
        m += 1
    best = level[0]
    # change introduced by the final elimination step
    err = float(np.max(np.abs(best - prev_tail)))
    return (best, err) if return_error else best


def central_difference(f, t0=0.0, order=1, base_step=1e-3, levels=4):
    """Derivative of f at t0 by central differences + Richardson in h^2.

    ``f`` may return arrays.  ``order`` 1 or 2.
    """
    vals = []
    for k in range(levels):
        h = base_step / 2.0 ** k
        if order == 1:
            vals.append((np.asarray(f(t0 + h)) - np.asarray(f(t0 - h))) / (2 * h))
        else:
            vals.append(
                (np.asarray(f(t0 + h)) - 2 * np.asarray(f(t0)) + np.asarray(f(t0 - h)))
                / h**2
            )
    # the error expansion is in h^2: one elimination level per halving is
    # ratio 4 in the richardson table
    return richardson(vals, ratio=4.0)


def directional_derivative(field, x, v, h=None):
    """Componentwise directional derivative of ``field`` at x along v."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    if h is None:
        h = 1e-5 * (1.0 + np.linalg.norm(x))
    return (np.asarray(field(x + h * v)) - np.asarray(field(x - h * v))) / (2 * h)
