"""Derived functionals of a jump measure: V, U, W, A+-, rho_kappa, U_+ and m_T.

All evaluation happens in log-argument form: ``log_functional(m, kind, u)``
returns log F(exp(-u)) so that the integral tests can probe x = e^-500 and
beyond.  ``eval_functional`` is the plain-x convenience wrapper.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._logmath import as_u
from .asymptotics import AsymptoticExponent, add
from .errors import DomainError, UnsupportedFunctional
from .measures import JumpMeasure

TAGS = ("V", "U", "W_side", "A_plus", "A_minus", "rho_kappa", "U_plus", "m_T")
NONINCREASING = frozenset({"rho_kappa"})


@dataclass(frozen=True)
class FunctionalKind:
    tag: str
    side: str | None = None
    kappa: float | None = None

    def __post_init__(self):
        if self.tag not in TAGS:
            raise DomainError(f"unknown functional {self.tag!r}")
        if (self.kappa is not None) != (self.tag == "rho_kappa"):
            raise DomainError("kappa is required for rho_kappa and only for it")
        if self.tag == "W_side" and self.side not in ("positive", "negative"):
            raise DomainError("W_side needs side='positive' or 'negative'")

    @classmethod
    def parse(cls, tag, side=None, kappa=None):
        return cls(tag, side if tag == "W_side" else None,
                   kappa if tag == "rho_kappa" else None)

    @property
    def label(self):
        if self.tag == "W_side":
            return f"W_{self.side}"
        if self.tag == "rho_kappa":
            return f"rho_{self.kappa!r}"
        return self.tag


V = FunctionalKind("V")
U = FunctionalKind("U")
A_PLUS = FunctionalKind("A_plus")
A_MINUS = FunctionalKind("A_minus")
U_PLUS = FunctionalKind("U_plus")
M_T = FunctionalKind("m_T")


def W(side="positive"):
    return FunctionalKind("W_side", side=side)


def RHO(kappa):
    return FunctionalKind("rho_kappa", kappa=kappa)


def log_functional(m: JumpMeasure, k: FunctionalKind, u):
    """log F(exp(-u)) for u >= 0 (vectorised)."""
    u = np.asarray(u, dtype=float)
    if np.any(u < 0):
        raise DomainError("u = log(1/x) must be nonnegative")
    plus, minus = m.plus, m.minus
    with np.errstate(divide="ignore", invalid="ignore"):
        if k.tag == "V":
            return np.logaddexp(plus.log_second_below(u), minus.log_second_below(u))
        if k.tag == "U":
            v = np.logaddexp(plus.log_second_below(u), minus.log_second_below(u))
            tails = np.logaddexp(plus.log_tail(u), minus.log_tail(u))
            return np.logaddexp(v, -2.0 * u + tails)
        if k.tag == "W_side":
            return m.side(k.side).log_W(u)
        if k.tag in ("A_plus", "m_T"):
            return plus.log_A(u)
        if k.tag == "A_minus":
            return minus.log_A(u)
        if k.tag == "rho_kappa":
            return plus.log_rho(u, k.kappa)
        if k.tag == "U_plus":
            return plus.log_U_plus(u)
    raise UnsupportedFunctional(k.tag)


def eval_functional(m: JumpMeasure, k: FunctionalKind, x):
    """Value of the functional at x in (0, 1]."""
    u = as_u(x)
    with np.errstate(under="ignore"):
        return np.exp(log_functional(m, k, u))[()]


def asymptotic_of(m: JumpMeasure, k: FunctionalKind) -> AsymptoticExponent | None:
    """Leading behaviour as x -> 0; ``None`` if the functional vanishes near 0."""
    plus, minus = m.plus, m.minus
    if k.tag == "V":
        return add(plus.asym("V"), minus.asym("V"))
    if k.tag == "U":
        tails = add(plus.asym("tail"), minus.asym("tail"))
        return add(plus.asym("V"), minus.asym("V"), tails and tails.times_power(2.0))
    if k.tag == "W_side":
        return m.side(k.side).asym("W")
    if k.tag in ("A_plus", "m_T"):
        return plus.asym("A")
    if k.tag == "A_minus":
        return minus.asym("A")
    if k.tag == "rho_kappa":
        return plus.asym("rho", k.kappa)
    if k.tag == "U_plus":
        return plus.asym("U_plus")
    raise UnsupportedFunctional(k.tag)


def geometric_grid(n=50, x_min=1e-12, x_max=1.0):
    return np.geomspace(x_min, x_max, n)
