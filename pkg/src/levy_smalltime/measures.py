"""Lévy process specifications and parametric jump-measure families on [-1, 1].

A jump measure is handled as two one-sided measures on (0, 1]: ``plus``
(the restriction of the measure to the positive axis) and ``minus`` (the
mirror image of the negative part).  Every one-sided measure answers the
same question, the partial power moment

    M_beta(lo, hi) = integral over lo < z <= hi of z**beta dPi(z),

in log form with ``lo = exp(-u1)`` and ``hi = exp(-u0)``.  Tails, truncated
second moments, A, W, U_+ and rho_kappa are all combinations of these
moments (see :mod:`levy_smalltime.functionals`).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy.optimize import brentq

from ._logmath import GL16_NODES, GL16_WEIGHTS, as_u, log_power_integral, logsubexp
from .asymptotics import AsymptoticExponent, add
from .errors import BvRequired, DomainError, SamplingUnsupported, UnsupportedFunctional

E = math.e


# --------------------------------------------------------------------------
# one-sided measures
# --------------------------------------------------------------------------


class Side:
    """A measure on (0, 1]; subclasses supply moments and asymptotics."""

    atoms: tuple = ()
    finite = True
    bv = True
    index = 0.0
    samplable = True

    def log_moment(self, beta, u0, u1):
        raise NotImplementedError

    def log_density(self, u):
        """log of the density of the absolutely continuous part at x = exp(-u)."""
        return np.full(np.shape(u), -np.inf)

    def moment_above_asym(self, beta):
        """Descriptor of x -> M_beta(x, 1); None when it vanishes near 0."""
        raise NotImplementedError

    def moment_below_asym(self, beta):
        """Descriptor of x -> M_beta(0, x); None when it vanishes near 0."""
        raise NotImplementedError

    def density_asym(self):
        return None

    def continuous(self) -> Side:
        """The absolutely continuous part (atoms removed)."""
        return self

    @property
    def is_zero(self) -> bool:
        return False

    # -- derived quantities, all in log form, vectorised over u ----------

    def log_tail(self, u):
        return self.log_moment(0.0, 0.0, u)

    def log_second_below(self, u):
        return self.log_moment(2.0, u, np.inf)

    def log_first_above(self, u):
        return self.log_moment(1.0, 0.0, u)

    def log_first_below(self, u):
        if not self.bv:
            raise BvRequired("first moment near 0 is infinite for this measure")
        return self.log_moment(1.0, u, np.inf)

    def log_A(self, u):
        u = np.asarray(u, dtype=float)
        return np.logaddexp(self.log_first_below(u), -u + self.log_tail(u))

    def log_W(self, u):
        u = np.asarray(u, dtype=float)
        return np.logaddexp(self.log_second_below(u), -u + self.log_first_above(u))

    def log_U_plus(self, u):
        u = np.asarray(u, dtype=float)
        return np.logaddexp(self.log_second_below(u), -2.0 * u + self.log_tail(u))

    def log_rho(self, u, kappa):
        u = np.asarray(u, dtype=float)
        return logsubexp(self.log_moment(1.0 / kappa, 0.0, u), -u / kappa + self.log_tail(u))

    def asym(self, kind, kappa=None):
        if kind == "tail":
            return self.moment_above_asym(0.0)
        if kind == "V":
            return self.moment_below_asym(2.0)
        if kind == "first_above":
            return self.moment_above_asym(1.0)
        if kind == "density":
            return self.density_asym()
        if kind == "A":
            if not self.bv:
                raise BvRequired("A(x) is infinite for a measure that is not bv")
            tail = self.moment_above_asym(0.0)
            return add(self.moment_below_asym(1.0), tail and tail.times_power(1.0))
        if kind == "W":
            first = self.moment_above_asym(1.0)
            return add(self.moment_below_asym(2.0), first and first.times_power(1.0))
        if kind == "U_plus":
            tail = self.moment_above_asym(0.0)
            return add(self.moment_below_asym(2.0), tail and tail.times_power(2.0))
        if kind == "rho":
            big = self.moment_above_asym(1.0 / kappa)
            tail = self.moment_above_asym(0.0)
            if big is None:
                return None
            small = tail.times_power(1.0 / kappa) if tail is not None else None
            if small is not None and big.same_order(small):
                return big.scale(1.0 - small.C / big.C)
            return big
        raise UnsupportedFunctional(kind)

    # -- sampling --------------------------------------------------------

    def inverse_tail(self, y):
        """x with tail(x) = y for the continuous part (y in (0, tail(b)])."""
        raise SamplingUnsupported(f"{type(self).__name__} cannot be sampled")


class ZeroSide(Side):
    def log_moment(self, beta, u0, u1):
        return np.full(np.broadcast(np.asarray(u0), np.asarray(u1)).shape, -np.inf)[()]

    def moment_above_asym(self, beta):
        return None

    def moment_below_asym(self, beta):
        return None

    @property
    def is_zero(self):
        return True

    def log_W(self, u):
        return np.full(np.shape(u), -np.inf)[()]


@dataclass(frozen=True, eq=False)
class StableSide(Side):
    """Density c * x**(-1-alpha) on (0, 1]."""

    c: float
    alpha: float

    def __post_init__(self):
        object.__setattr__(self, "finite", False)
        object.__setattr__(self, "bv", self.alpha < 1.0)
        object.__setattr__(self, "index", self.alpha)

    def log_moment(self, beta, u0, u1):
        return math.log(self.c) + log_power_integral(beta - self.alpha, u0, u1)

    def log_density(self, u):
        return math.log(self.c) + (1.0 + self.alpha) * np.asarray(u, dtype=float)

    def density_asym(self):
        return AsymptoticExponent(-1.0 - self.alpha, C=self.c)

    def moment_above_asym(self, beta):
        e = beta - self.alpha
        if e > 0:
            return AsymptoticExponent(0.0, C=self.c / e)
        if e == 0:
            return AsymptoticExponent(0.0, q=1.0, C=self.c)
        return AsymptoticExponent(e, C=self.c / -e)

    def moment_below_asym(self, beta):
        e = beta - self.alpha
        if e <= 0:
            raise BvRequired(f"moment of order {beta} diverges at 0")
        return AsymptoticExponent(e, C=self.c / e)

    def inverse_tail(self, y):
        return (1.0 + self.alpha * np.asarray(y) / self.c) ** (-1.0 / self.alpha)


@dataclass(frozen=True, eq=False)
class AtomSide(Side):
    """Finitely many atoms (location in (0, 1], mass > 0)."""

    atoms: tuple

    def log_moment(self, beta, u0, u1):
        u0 = np.asarray(u0, dtype=float)
        u1 = np.asarray(u1, dtype=float)
        total = np.zeros(np.broadcast(u0, u1).shape)
        for loc, mass in self.atoms:
            w = -math.log(loc)
            total = total + np.where((u0 <= w) & (w < u1), mass * loc ** beta, 0.0)
        with np.errstate(divide="ignore"):
            return np.log(total)[()]

    def moment_above_asym(self, beta):
        return AsymptoticExponent(0.0, C=sum(m * loc ** beta for loc, m in self.atoms))

    def moment_below_asym(self, beta):
        return None

    def continuous(self):
        return ZeroSide()


@lru_cache(maxsize=64)
def _loglog_table(k, n_pieces):
    """Cumulative log integral of exp(k w)/(2 w log^2 w) from e, on a 0.5 grid."""
    h = 0.5
    grid = E + h * np.arange(n_pieces + 1)
    cum = np.logaddexp.accumulate(_loglog_piece(k, grid[:-1], grid[1:]))
    return grid, np.concatenate([[-np.inf], cum])


def _loglog_integrand(k, w):
    return k * w - np.log(2.0 * w) - 2.0 * np.log(np.log(w))


def _loglog_piece(k, a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    half = 0.5 * (b - a)
    w = 0.5 * (a + b)[..., None] + half[..., None] * GL16_NODES
    with np.errstate(divide="ignore"):
        vals = _loglog_integrand(k, w) + np.log(GL16_WEIGHTS) + np.log(half)[..., None]
        m = np.max(vals, axis=-1, keepdims=True)
        out = (m + np.log(np.sum(np.exp(vals - m), axis=-1, keepdims=True)))[..., 0]
    return np.where(b > a, out, -np.inf)


def _loglog_cumulative(k, w):
    """log of the integral of exp(k w)/(2 w log^2 w) over [e, w], k > 0."""
    w = np.maximum(np.asarray(w, dtype=float), E)
    need = int(np.ceil((np.max(w) - E) / 0.5)) + 1
    n_pieces = 1 << max(6, need.bit_length())
    grid, cum = _loglog_table(k, n_pieces)
    idx = np.minimum(((w - E) / 0.5).astype(int), n_pieces - 1)
    return np.logaddexp(cum[idx], _loglog_piece(k, grid[idx], w))


def _loglog_upper(k, a):
    """log of the integral over [a, inf) of exp(k w)/(2 w log^2 w), k < 0."""
    a = np.maximum(np.asarray(a, dtype=float), E)
    width = min(1.0, 1.0 / -k)
    n = int(np.ceil(60.0 / (-k * width)))
    starts = a[..., None] + width * np.arange(n)
    pieces = _loglog_piece(k, starts, starts + width)
    m = np.max(pieces, axis=-1, keepdims=True)
    return (m + np.log(np.sum(np.exp(pieces - m), axis=-1, keepdims=True)))[..., 0]


class LogLogSide(Side):
    """Half of the symmetric measure whose V(x) equals 1/log log(1/x) below e**-e.

    In u-coordinates the measure has density exp(2w)/(2 w log^2 w) on
    [e, inf); no mass lies above x = e**-e.
    """

    finite = False
    bv = False
    index = 2.0

    def log_moment(self, beta, u0, u1):
        u0 = np.maximum(np.asarray(u0, dtype=float), E)
        u1 = np.maximum(np.asarray(u1, dtype=float), E)
        u0, u1 = np.broadcast_arrays(u0, u1)
        k = 2.0 - beta
        with np.errstate(divide="ignore", invalid="ignore"):
            if k == 0.0:
                lo = np.where(np.isinf(u1), 0.0, 1.0 / (2.0 * np.log(u1)))
                out = np.log(1.0 / (2.0 * np.log(u0)) - lo)
            elif k > 0.0:
                if np.any(np.isinf(u1)):
                    return np.full(u0.shape, np.inf)[()]
                out = logsubexp(_loglog_cumulative(k, u1), _loglog_cumulative(k, u0))
            else:
                upper_b = np.where(np.isinf(u1), -np.inf,
                                   _loglog_upper(k, np.where(np.isinf(u1), E, u1)))
                out = logsubexp(_loglog_upper(k, u0), upper_b)
        return np.where(u1 > u0, out, -np.inf)[()]

    def log_density(self, u):
        u = np.asarray(u, dtype=float)
        with np.errstate(invalid="ignore", divide="ignore"):
            val = 3.0 * u - math.log(2.0) - np.log(u) - 2.0 * np.log(np.log(u))
        return np.where(u >= E, val, -np.inf)[()]

    def density_asym(self):
        return AsymptoticExponent(-3.0, -1.0, -2.0, 0.5)

    def moment_above_asym(self, beta):
        k = 2.0 - beta
        if k > 0:
            return AsymptoticExponent(-k, -1.0, -2.0, 1.0 / (2.0 * k))
        total = float(np.exp(self.log_moment(beta, 0.0, np.inf)))
        return AsymptoticExponent(0.0, C=total)

    def moment_below_asym(self, beta):
        k = 2.0 - beta
        if k > 0:
            raise BvRequired(f"moment of order {beta} diverges at 0")
        if k == 0:
            return AsymptoticExponent(0.0, 0.0, -1.0, 0.5)
        return AsymptoticExponent(-k, -1.0, -2.0, 1.0 / (2.0 * -k))

    def inverse_tail(self, y):
        y = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.empty_like(y)
        for i, target in enumerate(np.log(y)):
            hi = E + 1.0
            while self.log_tail(hi) < target:
                hi *= 2.0
            u = brentq(lambda v: float(self.log_tail(v)) - target, E, hi, xtol=1e-13)
            out[i] = math.exp(-u)
        return out


@dataclass(frozen=True, eq=False)
class WCriticalSide(Side):
    """One-sided measure described only through W(y) = y^e (c log log 1/y)^(-(1-k)/k)."""

    kappa: float
    c: float

    finite = False
    bv = False
    samplable = False

    @property
    def index(self):
        return 1.0 / self.kappa

    @property
    def _e(self):
        return (2.0 * self.kappa - 1.0) / self.kappa

    def log_W(self, u):
        u = np.asarray(u, dtype=float)
        loglog = np.log(np.maximum(np.log(np.maximum(u, 1.0)), 1.0))
        expo = (1.0 - self.kappa) / self.kappa
        return (-self._e * u - expo * (math.log(self.c) + loglog))[()]

    def asym(self, kind, kappa=None):
        if kind != "W":
            raise UnsupportedFunctional(f"WProfileCritical supplies only W, not {kind}")
        expo = (1.0 - self.kappa) / self.kappa
        return AsymptoticExponent(self._e, 0.0, -expo, self.c ** -expo)

    def log_moment(self, beta, u0, u1):
        raise UnsupportedFunctional("WProfileCritical supplies only W")

    def moment_above_asym(self, beta):
        raise UnsupportedFunctional("WProfileCritical supplies only W")

    moment_below_asym = moment_above_asym


class SumSide(Side):
    def __init__(self, parts):
        self.parts = tuple(p for p in parts if not p.is_zero)
        self.atoms = tuple(a for p in self.parts for a in p.atoms)
        self.finite = all(p.finite for p in self.parts)
        self.bv = all(p.bv for p in self.parts)
        self.index = max((p.index for p in self.parts), default=0.0)
        self.samplable = all(p.samplable for p in self.parts)

    @property
    def is_zero(self):
        return not self.parts

    def _combine(self, method, *args):
        out = None
        for p in self.parts:
            val = getattr(p, method)(*args)
            out = val if out is None else np.logaddexp(out, val)
        if out is None:
            if method == "log_moment":
                return ZeroSide().log_moment(*args)
            return np.full(np.shape(args[0]), -np.inf)[()]
        return out

    def log_moment(self, beta, u0, u1):
        return self._combine("log_moment", beta, u0, u1)

    def log_density(self, u):
        return self._combine("log_density", u)

    def log_W(self, u):
        return self._combine("log_W", u)

    def asym(self, kind, kappa=None):
        if kind == "rho":
            return super().asym(kind, kappa)
        return add(*(p.asym(kind, kappa) for p in self.parts))

    def moment_above_asym(self, beta):
        return add(*(p.moment_above_asym(beta) for p in self.parts))

    def moment_below_asym(self, beta):
        return add(*(p.moment_below_asym(beta) for p in self.parts))

    def density_asym(self):
        return add(*(p.density_asym() for p in self.parts))

    def continuous(self):
        return SumSide([p.continuous() for p in self.parts])

    def inverse_tail(self, y):
        # Only reached for a single continuous part; the simulator splits sums.
        if len(self.parts) != 1:
            raise SamplingUnsupported("inverse tail of a sum; sample the parts instead")
        return self.parts[0].inverse_tail(y)


# --------------------------------------------------------------------------
# public families
# --------------------------------------------------------------------------


class JumpMeasure:
    """Base class of the jump-measure families."""

    family = ""

    @property
    def plus(self) -> Side:
        raise NotImplementedError

    @property
    def minus(self) -> Side:
        raise NotImplementedError

    def side(self, which: str) -> Side:
        if which == "positive":
            return self.plus
        if which == "negative":
            return self.minus
        raise DomainError(f"side must be 'positive' or 'negative', got {which!r}")

    @property
    def is_finite(self) -> bool:
        return self.plus.finite and self.minus.finite

    @property
    def samplable(self) -> bool:
        return self.plus.samplable and self.minus.samplable

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class StableLike(JumpMeasure):
    """Density c_plus x^(-1-alpha) on (0, 1] and c_minus |x|^(-1-alpha) on [-1, 0)."""

    c_plus: float
    c_minus: float
    alpha: float
    family = "StableLike"

    def __post_init__(self):
        if self.c_plus < 0 or self.c_minus < 0:
            raise DomainError("c_plus and c_minus must be nonnegative")
        if not 0.0 < self.alpha < 2.0:
            raise DomainError("alpha must lie in (0, 2)")

    @property
    def plus(self):
        return StableSide(self.c_plus, self.alpha) if self.c_plus > 0 else ZeroSide()

    @property
    def minus(self):
        return StableSide(self.c_minus, self.alpha) if self.c_minus > 0 else ZeroSide()

    def to_dict(self):
        return {"family": self.family, "c_plus": self.c_plus, "c_minus": self.c_minus,
                "alpha": self.alpha}


@dataclass(frozen=True)
class CompoundPoissonAtoms(JumpMeasure):
    atoms: tuple
    family = "CompoundPoissonAtoms"

    def __post_init__(self):
        atoms = tuple((float(loc), float(mass)) for loc, mass in self.atoms)
        for loc, mass in atoms:
            if loc == 0.0 or abs(loc) > 1.0:
                raise DomainError(f"atom location {loc} outside [-1, 1] \\ {{0}}")
            if not mass > 0.0:
                raise DomainError(f"atom mass {mass} must be positive")
        object.__setattr__(self, "atoms", atoms)

    def _side(self, sign):
        atoms = tuple((sign * loc, m) for loc, m in self.atoms if sign * loc > 0)
        return AtomSide(atoms) if atoms else ZeroSide()

    @property
    def plus(self):
        return self._side(1.0)

    @property
    def minus(self):
        return self._side(-1.0)

    def to_dict(self):
        return {"family": self.family, "atoms": [list(a) for a in self.atoms]}


@dataclass(frozen=True)
class VProfileLogLog(JumpMeasure):
    """Symmetric measure with V(x) = 1/log log(1/x) for x <= e**-e."""

    family = "VProfileLogLog"

    @property
    def plus(self):
        return LogLogSide()

    @property
    def minus(self):
        return LogLogSide()

    def to_dict(self):
        return {"family": self.family}


@dataclass(frozen=True)
class WProfileCritical(JumpMeasure):
    """Spectrally negative measure given through its W profile (integral tests only)."""

    kappa: float
    c: float
    family = "WProfileCritical"

    def __post_init__(self):
        if not 0.5 < self.kappa < 1.0:
            raise DomainError("kappa must lie in (1/2, 1)")
        if not self.c > 0:
            raise DomainError("c must be positive")

    @property
    def plus(self):
        return ZeroSide()

    @property
    def minus(self):
        return WCriticalSide(self.kappa, self.c)

    def to_dict(self):
        return {"family": self.family, "kappa": self.kappa, "c": self.c}


@dataclass(frozen=True)
class NegativeOf(JumpMeasure):
    """Sign-reversed measure (the jump measure of -X)."""

    inner: JumpMeasure
    family = "NegativeOf"

    @property
    def plus(self):
        return self.inner.minus

    @property
    def minus(self):
        return self.inner.plus

    def to_dict(self):
        return {"family": self.family, "inner": self.inner.to_dict()}


@dataclass(frozen=True)
class SumOf(JumpMeasure):
    """Sum of measures, e.g. two one-sided stable-like parts with distinct exponents."""

    parts: tuple
    family = "SumOf"

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if not self.parts:
            raise DomainError("SumOf needs at least one part")

    @property
    def plus(self):
        return SumSide([p.plus for p in self.parts])

    @property
    def minus(self):
        return SumSide([p.minus for p in self.parts])

    def to_dict(self):
        return {"family": self.family, "parts": [p.to_dict() for p in self.parts]}


def two_sided_stable(alpha_plus, alpha_minus, c_plus=1.0, c_minus=1.0) -> SumOf:
    """Stable-like measure with different exponents on each side."""
    return SumOf((StableLike(c_plus, 0.0, alpha_plus), StableLike(0.0, c_minus, alpha_minus)))


@dataclass(frozen=True)
class LevyProcessSpec:
    gamma: float
    sigma2: float
    jump: JumpMeasure = field(default_factory=lambda: CompoundPoissonAtoms(()))

    def __post_init__(self):
        if self.sigma2 < 0:
            raise DomainError("sigma2 must be nonnegative")

    def negated(self) -> LevyProcessSpec:
        """Specification of -X."""
        return LevyProcessSpec(-self.gamma, self.sigma2, NegativeOf(self.jump))

    def to_dict(self):
        return {"gamma": self.gamma, "sigma2": self.sigma2, "jump": self.jump.to_dict()}


# --------------------------------------------------------------------------
# operations
# --------------------------------------------------------------------------


def _tail(side: Side, x):
    u = as_u(x)
    with np.errstate(divide="ignore"):
        return np.exp(side.log_tail(u))[()]


def tail_plus(m: JumpMeasure, x):
    """Pi((x, inf)) for x in (0, 1]."""
    return _tail(m.plus, x)


def tail_minus(m: JumpMeasure, x):
    """Pi((-inf, -x)) for x in (0, 1]."""
    return _tail(m.minus, x)


def is_bv(m: JumpMeasure) -> bool:
    return m.plus.bv and m.minus.bv


def first_moment(side: Side) -> float:
    """Integral of z over (0, 1] (finite only for bv sides)."""
    return float(np.exp(side.log_first_below(0.0)))


def drift_delta(s: LevyProcessSpec) -> float:
    """delta = gamma - integral of x dPi over [-1, 1]."""
    if not is_bv(s.jump):
        raise BvRequired("drift is only defined when the jump part is bv")
    return s.gamma - (first_moment(s.jump.plus) - first_moment(s.jump.minus))


def bg_index(m: JumpMeasure) -> float:
    """Blumenthal-Getoor upper index."""
    return max(m.plus.index, m.minus.index)


def centered_gamma(m: JumpMeasure) -> float:
    """The gamma that gives zero drift for a bv measure."""
    if not is_bv(m):
        raise BvRequired("drift is only defined when the jump part is bv")
    return first_moment(m.plus) - first_moment(m.minus)


# --------------------------------------------------------------------------
# JSON
# --------------------------------------------------------------------------


def measure_from_dict(d: dict) -> JumpMeasure:
    try:
        family = d["family"]
        if family == "StableLike":
            return StableLike(float(d["c_plus"]), float(d["c_minus"]), float(d["alpha"]))
        if family == "CompoundPoissonAtoms":
            return CompoundPoissonAtoms(tuple(tuple(a) for a in d["atoms"]))
        if family == "VProfileLogLog":
            return VProfileLogLog()
        if family == "WProfileCritical":
            return WProfileCritical(float(d["kappa"]), float(d["c"]))
        if family == "NegativeOf":
            return NegativeOf(measure_from_dict(d["inner"]))
        if family == "SumOf":
            return SumOf(tuple(measure_from_dict(p) for p in d["parts"]))
    except KeyError as exc:
        raise DomainError(f"missing field: {exc.args[0]}") from None
    raise DomainError(f"unknown family: {family!r}")


def spec_from_dict(d: dict) -> LevyProcessSpec:
    if "family" in d:
        return LevyProcessSpec(0.0, 0.0, measure_from_dict(d))
    try:
        return LevyProcessSpec(float(d.get("gamma", 0.0)), float(d.get("sigma2", 0.0)),
                               measure_from_dict(d["jump"]))
    except KeyError:
        raise DomainError("missing field: jump") from None


def load_spec(path) -> LevyProcessSpec:
    return spec_from_dict(json.loads(Path(path).read_text()))


def load_measure(path) -> JumpMeasure:
    d = json.loads(Path(path).read_text())
    return measure_from_dict(d["jump"] if "jump" in d else d)
