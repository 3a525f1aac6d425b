"""Angles on the unit sphere from data vectors, and the inverse cascade.

A real vector of dimension d maps to d-1 polar angles; a complex vector
additionally carries d accumulated phase angles.  The encoders consume these
angles one mixing gate at a time, so the i-th angle only ever needs the
norm of the tail x_{i+1}..x_d.  Degenerate tails resolve to angle 0 (both
arguments of the two-argument arctangent zero means the angle is free; zero
is the frozen choice, likewise the argument of a zero complex entry).
"""

import math

import numpy as np


def angles_from_real(x) -> np.ndarray:
    """Polar angles of a real vector, length d-1.

    The first d-2 angles lie in [0, pi] (their sine is a tail norm); the
    last is the full-range plane angle of (x_{d-1}, x_d).
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ValueError("expected a 1-d vector")
    d = x.size
    if d < 2:
        return np.zeros(0)
    # suffix[i] = norm of x[i:]
    suffix = np.sqrt(np.cumsum(x[::-1] ** 2)[::-1])
    thetas = np.zeros(d - 1)
    for i in range(d - 2):
        tail = suffix[i + 1]
        thetas[i] = 0.0 if tail == 0.0 and x[i] == 0.0 else np.arctan2(tail, x[i])
    last = np.arctan2(x[d - 1], x[d - 2])
    thetas[d - 2] = 0.0 if x[d - 1] == 0.0 and x[d - 2] == 0.0 else last
    return thetas


def real_from_angles(thetas, norm: float = 1.0) -> np.ndarray:
    """Vector with the given polar angles and Euclidean norm."""
    thetas = np.asarray(thetas, dtype=float)
    d = thetas.size + 1
    x = np.zeros(d)
    running = norm
    for i in range(d - 1):
        x[i] = running * np.cos(thetas[i])
        running *= np.sin(thetas[i])
    x[d - 1] = running
    return x


def angles_from_complex(x) -> tuple[np.ndarray, np.ndarray]:
    """Polar angles (length d-1) and accumulated phases (length d).

    The polar angles are those of the magnitude vector.  Phases accumulate:
    the i-th one is the raw argument of x_i plus the sum of all earlier
    phases, so that consuming them gate by gate telescopes back to the raw
    arguments.  The raw recursion doubles the running sum at every step,
    which overflows double precision near a hundred components, so both the
    phase and the running sum are reduced mod 2*pi into [-pi, pi]; the
    reduction is exact and leaves every e^(i*phi) unchanged.
    """
    x = np.asarray(x, dtype=complex)
    if x.ndim != 1:
        raise ValueError("expected a 1-d vector")
    thetas = angles_from_real(np.abs(x))
    raw = np.where(x == 0, 0.0, np.angle(x))
    phis = np.zeros(x.size)
    acc = 0.0
    for i in range(x.size):
        phis[i] = math.remainder(raw[i] + acc, math.tau)
        acc = math.remainder(acc + phis[i], math.tau)
    return thetas, phis


def complex_from_angles(thetas, phis, norm: float = 1.0) -> np.ndarray:
    """Vector with the given polar angles, accumulated phases, and norm."""
    phis = np.asarray(phis, dtype=float)
    mags = real_from_angles(thetas, norm)
    if phis.size != mags.size:
        raise ValueError("need one phase per component")
    raw = np.zeros(mags.size)
    acc = 0.0
    for i in range(mags.size):
        raw[i] = math.remainder(phis[i] - acc, math.tau)
        acc = math.remainder(acc + phis[i], math.tau)
    return mags * np.exp(1j * raw)
