"""Leading-order descriptors g(x) ~ C x^p (log 1/x)^q (log log 1/x)^s as x -> 0."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import reduce

import numpy as np


@dataclass(frozen=True)
class AsymptoticExponent:
    p: float
    q: float = 0.0
    s: float = 0.0
    C: float = 1.0

    def __post_init__(self):
        for name in ("p", "q", "s", "C"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.C <= 0:
            raise ValueError("C must be positive")

    @property
    def key(self):
        # Larger key = larger function near 0.
        return (-self.p, self.q, self.s)

    def log_value(self, u):
        """log of the leading term at x = exp(-u) (u > 1)."""
        u = np.asarray(u, dtype=float)
        return (math.log(self.C) - self.p * u + self.q * np.log(u)
                + self.s * np.log(np.log(u)))

    def __mul__(self, other: AsymptoticExponent) -> AsymptoticExponent:
        return AsymptoticExponent(self.p + other.p, self.q + other.q,
                                  self.s + other.s, self.C * other.C)

    def __pow__(self, r: float) -> AsymptoticExponent:
        return AsymptoticExponent(self.p * r, self.q * r, self.s * r, self.C ** r)

    def scale(self, factor: float) -> AsymptoticExponent:
        return replace(self, C=self.C * factor)

    def times_power(self, k: float) -> AsymptoticExponent:
        """Multiply by x**k."""
        return replace(self, p=self.p + k)

    def compose_power(self, kappa: float) -> AsymptoticExponent:
        """Descriptor of x -> g(x**kappa)."""
        return AsymptoticExponent(kappa * self.p, self.q, self.s, self.C * kappa ** self.q)

    def same_order(self, other: AsymptoticExponent) -> bool:
        return all(math.isclose(a, b, rel_tol=0, abs_tol=1e-12)
                   for a, b in zip(self.key, other.key))

    def integral_converges(self) -> bool:
        """Whether the integral of g over (0, 1] converges at 0."""
        tol = 1e-12
        p1 = self.p + 1.0
        if p1 > tol:
            return True
        if p1 < -tol:
            return False
        if self.q < -1.0 - tol:
            return True
        if self.q > -1.0 + tol:
            return False
        return self.s < -1.0 - tol


def add(*terms):
    """Descriptor of a sum of nonnegative functions; ``None`` terms vanish near 0."""
    live = [t for t in terms if t is not None]
    if not live:
        return None

    def pick(a, b):
        if a.same_order(b):
            return a.scale(1.0 + b.C / a.C)
        return a if a.key > b.key else b

    return reduce(pick, live)


def minimum(a, b):
    """Descriptor of min(f, g); ``None`` stands for +inf here."""
    if a is None:
        return b
    if b is None:
        return a
    if a.same_order(b):
        return a if a.C <= b.C else b
    return a if a.key < b.key else b
