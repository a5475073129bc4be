"""Shared test utilities.

Piecewise-linear (PL) exact norms: a nodal vector is interpreted as the
continuous piecewise-linear interpolant, and its L1/L2/L4/H1/sup norms are
integrated segment-exactly.  The interval embedding inequalities hold
rigorously for such interpolants, which makes slack >= 0 a mathematical
fact rather than a quadrature accident.
"""

import numpy as np


def pl_l2_sq(vals: np.ndarray, h: float) -> float:
    a = vals[:-1]
    b = vals[1:]
    return float(np.sum(h * (a * a + a * b + b * b) / 3.0))


def pl_l1(vals: np.ndarray, h: float) -> float:
    a = vals[:-1]
    b = vals[1:]
    same = a * b >= 0.0
    seg = np.where(
        same,
        0.5 * h * (np.abs(a) + np.abs(b)),
        0.5 * h * (a * a + b * b) / np.maximum(np.abs(a) + np.abs(b), 1e-300),
    )
    return float(np.sum(seg))


def pl_l4_4(vals: np.ndarray, h: float) -> float:
    a = vals[:-1]
    b = vals[1:]
    return float(
        np.sum(h * (a**4 + a**3 * b + a**2 * b**2 + a * b**3 + b**4) / 5.0)
    )


def pl_h1_sq(vals: np.ndarray, h: float) -> float:
    d = np.diff(vals)
    return float(np.sum(d * d / h))


def pl_sup(vals: np.ndarray) -> float:
    return float(np.max(np.abs(vals)))


def trig_field(rng, x, n_modes=4, cosines=True, sines=True):
    """Random trigonometric polynomial with its analytic derivative."""
    val = np.zeros_like(x)
    der = np.zeros_like(x)
    for k in range(n_modes + 1):
        if cosines:
            a = rng.uniform(-1.0, 1.0)
            val += a * np.cos(k * np.pi * x)
            der += -a * k * np.pi * np.sin(k * np.pi * x)
        if sines and k > 0:
            b = rng.uniform(-1.0, 1.0)
            val += b * np.sin(k * np.pi * x)
            der += b * k * np.pi * np.cos(k * np.pi * x)
    return val, der
