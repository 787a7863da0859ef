"""Quaternion arithmetic.

A quaternion is q0 + i q1 + j q2 + k q3 with real binary64 coefficients and
the unit rules i^2 = j^2 = k^2 = -1, ij = -ji = k, jk = -kj = i, ki = -ik = j.
The scalar :class:`Quaternion` rejects non-finite coefficients at construction;
the array helpers at the bottom operate on (..., 4) float arrays without
per-element checks and are the workhorses for sampled fields.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Quaternion",
    "ONE",
    "I",
    "J",
    "K",
    "mul",
    "conj",
    "modulus",
    "inverse",
    "qmul",
    "qconj",
    "qmodulus",
]


@dataclass(frozen=True)
class Quaternion:
    """One quaternion value; immutable, finite by construction."""

    q0: float = 0.0
    q1: float = 0.0
    q2: float = 0.0
    q3: float = 0.0

    def __post_init__(self) -> None:
        for name in ("q0", "q1", "q2", "q3"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"non-finite quaternion coefficient {name}={v!r}")
            object.__setattr__(self, name, v)

    @classmethod
    def real(cls, value: float) -> "Quaternion":
        return cls(float(value), 0.0, 0.0, 0.0)

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        a = np.asarray(a, dtype=float)
        if a.shape != (4,):
            raise ValueError(f"expected 4 components, got shape {a.shape}")
        return cls(a[0], a[1], a[2], a[3])

    def to_array(self) -> np.ndarray:
        return np.array([self.q0, self.q1, self.q2, self.q3])

    @property
    def is_real(self) -> bool:
        return self.q1 == 0.0 and self.q2 == 0.0 and self.q3 == 0.0

    def __add__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.q0 + other.q0, self.q1 + other.q1,
                          self.q2 + other.q2, self.q3 + other.q3)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        return Quaternion(self.q0 - other.q0, self.q1 - other.q1,
                          self.q2 - other.q2, self.q3 - other.q3)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.q0, -self.q1, -self.q2, -self.q3)

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        # real scalars commute with everything
        return self.scale(other)

    def scale(self, c: float) -> "Quaternion":
        c = float(c)
        return Quaternion(c * self.q0, c * self.q1, c * self.q2, c * self.q3)


ONE = Quaternion(1.0, 0.0, 0.0, 0.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product p q (non-commutative, associative).

    Raises ValueError if the result overflows to a non-finite value.
    """
    r0 = p.q0 * q.q0 - p.q1 * q.q1 - p.q2 * q.q2 - p.q3 * q.q3
    r1 = p.q0 * q.q1 + p.q1 * q.q0 + p.q2 * q.q3 - p.q3 * q.q2
    r2 = p.q0 * q.q2 - p.q1 * q.q3 + p.q2 * q.q0 + p.q3 * q.q1
    r3 = p.q0 * q.q3 + p.q1 * q.q2 - p.q2 * q.q1 + p.q3 * q.q0
    if not (math.isfinite(r0) and math.isfinite(r1)
            and math.isfinite(r2) and math.isfinite(r3)):
        raise ValueError("non-finite result")
    return Quaternion(r0, r1, r2, r3)


def conj(q: Quaternion) -> Quaternion:
    """Conjugate (q0, -q1, -q2, -q3)."""
    return Quaternion(q.q0, -q.q1, -q.q2, -q.q3)


def modulus(q: Quaternion) -> float:
    """Euclidean modulus sqrt(q0^2 + q1^2 + q2^2 + q3^2); multiplicative."""
    return math.sqrt(q.q0 * q.q0 + q.q1 * q.q1 + q.q2 * q.q2 + q.q3 * q.q3)


def inverse(q: Quaternion) -> Quaternion:
    """Multiplicative inverse conj(q) / |q|^2."""
    n2 = q.q0 * q.q0 + q.q1 * q.q1 + q.q2 * q.q2 + q.q3 * q.q3
    if n2 == 0.0:
        raise ZeroDivisionError("division by zero quaternion")
    return Quaternion(q.q0 / n2, -q.q1 / n2, -q.q2 / n2, -q.q3 / n2)


# ---------------------------------------------------------------------------
# array layer: quaternions as (..., 4) float arrays


def qmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Hamilton product of quaternion arrays, broadcasting over leading axes."""
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack([
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    ], axis=-1)


def qconj(a: np.ndarray) -> np.ndarray:
    out = np.array(a, copy=True)
    out[..., 1:] = -out[..., 1:]
    return out


def qmodulus(a: np.ndarray) -> np.ndarray:
    """Pointwise modulus; shape = a.shape[:-1]."""
    return np.sqrt(np.einsum("...c,...c->...", a, a))
