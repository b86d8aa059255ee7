"""Spin-1/2 conventions, the singlet pair, and exact Bell quantities.

All measurement orientations live in one fixed plane, so eigenstates
carry real amplitudes: up(t) = (cos t/2, sin t/2), down(t) =
(-sin t/2, cos t/2).  Angles are radians, normalized to [0, 2*pi).
"""

from __future__ import annotations

import enum
import math

import numpy as np

_TWO_PI = 2.0 * math.pi


class SpinValue(enum.IntEnum):
    UP = 0
    DOWN = 1

    @property
    def sign(self) -> int:
        return 1 if self is SpinValue.UP else -1

    @property
    def label(self) -> str:
        return "up" if self is SpinValue.UP else "down"


def wrap_angle(theta: float) -> float:
    """Normalize an angle to [0, 2*pi)."""
    t = math.fmod(float(theta), _TWO_PI)
    if t < 0.0:
        t += _TWO_PI
    return 0.0 if t == _TWO_PI else t


def spin_eigenstates(theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal (up, down) pair along orientation ``theta``."""
    t = wrap_angle(theta)
    c, s = math.cos(t / 2.0), math.sin(t / 2.0)
    up = np.array([c, s], dtype=complex)
    down = np.array([-s, c], dtype=complex)
    return up, down


def sgm_projectors(theta: float) -> tuple[np.ndarray, np.ndarray]:
    """Rank-1 projectors onto the two magnet exits; they sum to identity."""
    up, down = spin_eigenstates(theta)
    return np.outer(up, up.conj()), np.outer(down, down.conj())


def singlet() -> np.ndarray:
    """Total-spin-zero pair in the z (x) z basis: (|ud> - |du>)/sqrt 2."""
    return np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2.0)


def rotation(theta: float) -> np.ndarray:
    """In-plane rotation taking the z frame to the ``theta`` frame."""
    t = wrap_angle(theta)
    c, s = math.cos(t / 2.0), math.sin(t / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def joint_value_probabilities(a: float, b: float) -> np.ndarray:
    """Born weights of the four joint outcomes (uu, ud, du, dd) for the
    singlet measured along a and b, by explicit projection.

    amps[va, vb] = <va(a), vb(b)|singlet>, evaluated for all four
    outcomes in one contraction over the eigenbases.
    """
    pair = singlet().reshape(2, 2)
    basis_a = np.column_stack(spin_eigenstates(a))
    basis_b = np.column_stack(spin_eigenstates(b))
    amps = basis_a.conj().T @ pair @ basis_b.conj()
    return (np.abs(amps) ** 2).reshape(-1)


def correlation_exact(a: float, b: float) -> float:
    """Joint-value expectation for the singlet at orientations a and b.

    Enumerates the four joint outcomes by projecting the singlet onto
    each eigenstate pair, then forms sum of (+-1)(+-1) P(s, s').  The
    closed form is -cos(a - b); tests check the two routes agree.
    """
    probs = joint_value_probabilities(a, b)
    expectation = 0.0
    for va in SpinValue:
        for vb in SpinValue:
            expectation += va.sign * vb.sign * float(probs[2 * va + vb])
    return expectation


def chsh_value(a: float, a2: float, b: float, b2: float) -> float:
    """Four-correlation Bell quantity for settings (a, a2) x (b, b2).

    S = E(a,b) - E(a,b2) + E(a2,b) + E(a2,b2).  Any local deterministic
    value assignment keeps |S| <= 2; the singlet reaches |S| = 2*sqrt 2.
    """
    return (
        correlation_exact(a, b)
        - correlation_exact(a, b2)
        + correlation_exact(a2, b)
        + correlation_exact(a2, b2)
    )
