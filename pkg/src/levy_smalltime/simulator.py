"""Monte Carlo sampling of X on the geometric grid t_n = r^n.

Each interval (t_{n+1}, t_n] is simulated with its own truncation level
b_n = cutoff_scale * r^(n/2): jumps above b_n are drawn exactly (Poisson
count, inverse-tail sizes) and compensated, jumps below b_n are either
dropped or replaced by a centred normal with the matching variance.  Atoms
are always drawn exactly.  The remainder on (0, t_N] uses b_N.

Results are evidence about trends only.  An almost-sure limsup is a
statement about t -> 0 and no finite grid can reproduce it.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from .errors import SamplingUnsupported, SimulationError
from .measures import AtomSide, LevyProcessSpec, Side, SumSide, ZeroSide

DISCLAIMER = ("evidence-only: trend statistics on a finite grid cannot establish "
              "almost-sure limsup values; use the integral tests for verdicts")
GROWING_RATIO = 2.0
BOUNDED_RATIO = 1.2
_SEED_MASK = (1 << 64) - 1


@dataclass(frozen=True)
class SimConfig:
    r: float = 0.5
    N: int = 20
    paths: int = 100
    seed: int = 0
    cutoff_scale: float = 1.0
    gaussian_refinement: bool = True

    def __post_init__(self):
        if not 0.0 < self.r < 1.0:
            raise ValueError("r must lie in (0, 1)")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError("N must be an integer >= 1")
        if self.N * math.log(1.0 / self.r) > 700.0:
            raise ValueError("r^N underflows; need N*log(1/r) <= 700")
        if int(self.paths) != self.paths or self.paths < 1:
            raise ValueError("paths must be an integer >= 1")
        if not self.cutoff_scale > 0:
            raise ValueError("cutoff_scale must be positive")

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class PathGrid:
    n: np.ndarray
    log_t: np.ndarray
    x: np.ndarray
    seed_used: tuple
    config: SimConfig

    @property
    def t(self):
        return np.exp(self.log_t)

    @property
    def values(self):
        return [(int(n), float(t), float(x)) for n, t, x in zip(self.n, self.t, self.x)]


@dataclass(frozen=True)
class TrendReport:
    kappa: float
    mode: str
    depth: np.ndarray
    t: np.ndarray
    median_stat: np.ndarray
    q75_stat: np.ndarray
    growth_ratio: float
    verdict: str
    config: SimConfig
    disclaimer: str = DISCLAIMER

    def rows(self):
        return [(int(d), float(t), float(m), float(q)) for d, t, m, q in
                zip(self.depth, self.t, self.median_stat, self.q75_stat)]

    def to_dict(self):
        return {"kappa": self.kappa, "mode": self.mode, "growth_ratio": self.growth_ratio,
                "verdict": self.verdict, "disclaimer": self.disclaimer,
                "config": self.config.to_dict(),
                "statistics": [{"depth": d, "t": t, "median_stat": m, "q75_stat": q}
                               for d, t, m, q in self.rows()]}


# --------------------------------------------------------------------------
# sampling
# --------------------------------------------------------------------------


def _leaves(side: Side):
    """Continuous one-sided pieces that need inverse-tail sampling."""
    if isinstance(side, SumSide):
        return [leaf for p in side.parts for leaf in _leaves(p)]
    if isinstance(side, (AtomSide, ZeroSide)) or side.is_zero:
        return []
    return [side]


class _Plan:
    """Per-spec quantities reused at every level."""

    def __init__(self, s: LevyProcessSpec, refine: bool):
        if not s.jump.samplable:
            raise SamplingUnsupported(f"{s.jump.family} cannot be sampled")
        self.gamma = s.gamma
        self.sigma = math.sqrt(s.sigma2)
        self.refine = refine
        self._cache = {}
        self.sides = []
        for sign, side in ((1.0, s.jump.plus), (-1.0, s.jump.minus)):
            self.sides.append((sign, _leaves(side), side.continuous(), tuple(side.atoms)))

    def _consts(self, dt, b):
        key = (dt, b)
        if key not in self._cache:
            u_b = -math.log(b) if b < 1.0 else 0.0
            drift = self.gamma * dt
            var = self.sigma ** 2 * dt
            big = []
            for sign, leaves, cont, atoms in self.sides:
                for leaf in leaves:
                    if u_b > 0.0:
                        tail = float(np.exp(leaf.log_tail(u_b)))
                        big.append((sign, leaf, tail))
                        drift -= sign * dt * float(np.exp(leaf.log_first_above(u_b)))
                if self.refine and not cont.is_zero:
                    var += dt * float(np.exp(cont.log_second_below(u_b)))
                for loc, mass in atoms:
                    drift -= sign * loc * dt * mass
            self._cache[key] = (drift, big, math.sqrt(var))
        return self._cache[key]

    def level(self, rng, dt, b):
        """Increment of X over an interval of length dt with cutoff b."""
        drift, big, sd = self._consts(dt, b)
        inc = drift
        for sign, leaf, tail in big:
            count = rng.poisson(dt * tail)
            if count:
                inc += sign * float(np.sum(leaf.inverse_tail(rng.uniform(0.0, tail, size=count))))
        for sign, _, _, atoms in self.sides:
            for loc, mass in atoms:
                inc += sign * loc * rng.poisson(dt * mass)
        if sd > 0.0:
            inc += sd * rng.standard_normal()
        return inc


def _rng(seed: int, path_index: int, level: int):
    bitgen = np.random.Philox(key=np.array([seed & _SEED_MASK, path_index], dtype=np.uint64),
                              counter=np.array([0, 0, level, 0], dtype=np.uint64))
    return np.random.Generator(bitgen)


def _sample(plan: _Plan, cfg: SimConfig, path_index: int) -> PathGrid:
    N, r = cfg.N, cfg.r
    log_r = math.log(r)
    n = np.arange(N + 1)
    log_t = n * log_r
    x = np.empty(N + 1)
    b_N = min(cfg.cutoff_scale * r ** (N / 2.0), 1.0)
    x[N] = plan.level(_rng(cfg.seed, path_index, N), math.exp(log_t[N]), b_N)
    for k in range(N - 1, -1, -1):
        dt = math.exp(log_t[k]) - math.exp(log_t[k + 1])
        b = min(cfg.cutoff_scale * r ** (k / 2.0), 1.0)
        x[k] = x[k + 1] + plan.level(_rng(cfg.seed, path_index, k), dt, b)
        if not math.isfinite(x[k]):
            raise SimulationError(f"non-finite value at level {k} on path {path_index}")
    if not math.isfinite(x[N]):
        raise SimulationError(f"non-finite remainder on path {path_index}")
    return PathGrid(n, log_t, x, (cfg.seed, path_index), cfg)


def sample_path_grid(s: LevyProcessSpec, cfg: SimConfig, path_index: int) -> PathGrid:
    """One path of X at t_n = r^n, n = 0..N."""
    return _sample(_Plan(s, cfg.gaussian_refinement), cfg, path_index)


def _threads():
    try:
        return max(1, int(os.environ.get("LEVY_SMALLTIME_THREADS", "1")))
    except ValueError:
        return 1


def sample_paths(s: LevyProcessSpec, cfg: SimConfig):
    """All cfg.paths paths, ordered by path index."""
    plan = _Plan(s, cfg.gaussian_refinement)

    def one(i):
        return _sample(plan, cfg, i)

    workers = min(_threads(), cfg.paths)
    if workers == 1:
        return [one(i) for i in range(cfg.paths)]
    with ThreadPoolExecutor(workers) as pool:
        return list(pool.map(one, range(cfg.paths)))


def trend_statistic(s: LevyProcessSpec, cfg: SimConfig, kappa: float,
                    mode: str = "absolute", grids=None) -> TrendReport:
    """Running max of S_n = X_{t_n}/t_n^kappa (or |X|) summarised over paths."""
    if mode not in ("signed", "absolute"):
        raise ValueError("mode must be 'signed' or 'absolute'")
    grids = sample_paths(s, cfg) if grids is None else grids
    x = np.array([g.x for g in grids])
    log_t = grids[0].log_t
    scaled = (np.abs(x) if mode == "absolute" else x) * np.exp(-kappa * log_t)
    running = np.maximum.accumulate(scaled, axis=1)
    median = np.median(running, axis=0)
    q75 = np.quantile(running, 0.75, axis=0)
    N = cfg.N
    top, mid = median[N], median[N // 2]
    if top <= 0.0:
        # A nonpositive running max cannot be growing.
        ratio = 0.0
    elif mid <= 0.0:
        ratio = math.inf
    else:
        ratio = float(top / mid)
    if ratio >= GROWING_RATIO:
        verdict = "growing"
    elif ratio <= BOUNDED_RATIO:
        verdict = "bounded"
    else:
        verdict = "inconclusive"
    return TrendReport(kappa, mode, grids[0].n.copy(), np.exp(log_t), median, q75,
                       ratio, verdict, cfg)
