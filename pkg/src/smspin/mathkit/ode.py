"""Classical fixed-step Runge-Kutta integration for linear matrix ODEs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class ODEState:
    time: float
    value: np.ndarray


class NonFiniteStateError(FloatingPointError):
    pass


def ode_integrate(rhs: Callable[[float, np.ndarray], np.ndarray], y0, t_end: float, steps: int,
                  t0: float = 0.0) -> list[ODEState]:
    """Integrate y' = rhs(t, y) with RK4; returns the states at every step.

    ``rhs`` may be a generator G(t) (a callable returning a matrix when given
    only t is not supported; pass ``linear(G)`` for that).
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    y = np.array(y0, dtype=complex)
    h = (t_end - t0) / steps
    out = [ODEState(t0, y.copy())]
    t = t0
    for n in range(steps):
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t = t0 + (n + 1) * h
        if not np.all(np.isfinite(y)):
            raise NonFiniteStateError(f"non-finite state at t={t}")
        out.append(ODEState(t, y.copy()))
    return out


def linear(gen: Callable[[float], np.ndarray]) -> Callable[[float, np.ndarray], np.ndarray]:
    """Right-hand side y' = gen(t) @ y."""
    return lambda t, y: gen(t) @ y


def integrate_final(rhs, y0, t_end: float, steps: int, t0: float = 0.0) -> np.ndarray:
    return ode_integrate(rhs, y0, t_end, steps, t0)[-1].value
