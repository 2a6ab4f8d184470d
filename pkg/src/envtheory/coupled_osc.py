"""Two coupled one-dimensional oscillators.

Quantizes H = (p1^2/mu_a + p2^2/mu_b + k_a x1^2 + k_b x2^2 + k_c x1 x2)/2
through the normal-mode constants (A, B) and the geometric mean mass
mu = sqrt(mu_a mu_b):

    E(n, n') = sqrt(A/mu) (n + 1/2) + sqrt(B/mu) (n' + 1/2).

(A, B) are the eigenvalues of the symmetric matrix [[a, k_c/2], [k_c/2, b]]
with a = sqrt(mu_b/mu_a) k_a and b = sqrt(mu_a/mu_b) k_b; the A root is the
one that goes over into a when the coupling is switched off, so n counts the
x1-dominant mode.  The closed form below is valid for mu_a != mu_b.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InputError, UnstableModeError

__all__ = ["OscPair", "normal_modes", "level"]

# Branch thresholds.  The constants are continuous across both branch
# boundaries; the cutoffs only avoid 0/0 in the eps evaluation.
_KC_ZERO = 1e-13
_EPS_ZERO = 1e-12


@dataclass(frozen=True)
class OscPair:
    """Masses and stiffnesses of the coupled pair; k_c may have any sign."""

    mu_a: float
    mu_b: float
    k_a: float
    k_b: float
    k_c: float = 0.0

    def __post_init__(self) -> None:
        if self.mu_a <= 0.0 or self.mu_b <= 0.0:
            raise InputError("effective masses must be positive")


def normal_modes(pair: OscPair) -> tuple[float, float, float]:
    """Return (A, B, mu) for the pair.

    A or B may come out non-positive for an unstable quadratic form; callers
    decide whether that is an error.
    """
    mu = math.sqrt(pair.mu_a * pair.mu_b)
    ratio = math.sqrt(pair.mu_b / pair.mu_a)
    a = ratio * pair.k_a
    b = pair.k_b / ratio
    k_c = pair.k_c
    if abs(k_c) < _KC_ZERO * max(abs(pair.k_a), abs(pair.k_b)):
        return a, b, mu
    eps = (b - a) / k_c
    if abs(eps) < _EPS_ZERO:
        w = 1.0
    else:
        w = math.copysign(1.0, eps) * math.sqrt(1.0 + eps * eps) - eps
    return a - 0.5 * k_c * w, b + 0.5 * k_c * w, mu


def level(pair: OscPair, n: int, n_prime: int) -> float:
    """Energy of the level with n quanta in the A mode and n' in the B mode."""
    if n < 0 or n_prime < 0:
        raise InputError("oscillator quantum numbers must be non-negative")
    A, B, mu = normal_modes(pair)
    if A < 0.0 or B < 0.0:
        raise UnstableModeError(f"negative normal-mode constant (A={A}, B={B})")
    return math.sqrt(A / mu) * (n + 0.5) + math.sqrt(B / mu) * (n_prime + 0.5)
