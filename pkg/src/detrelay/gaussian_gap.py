"""Constant-gap comparisons for the Gaussian relay channel and diamond network.

Channel gains are stored as magnitudes ``|h|``; all formulas use ``|h|**2``
with unit transmit and noise power. Rates are in bits per complex symbol.

* Single relay: decode-forward is within 1 bit of the cut-set bound.
* Diamond: partial decode-forward is within 2 bits of the (relaxed)
  cut-set bound, via the intermediate rate ``R*`` with
  ``0 <= R* - R_PDF <= 1`` and ``R* >= C_bar - 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from detrelay.channels import bc_weak_rate, log2_1p
from detrelay.errors import DomainError

__all__ = [
    "GAP_TOL",
    "GaussianRelay",
    "GaussianDiamond",
    "GapReport",
    "DiamondReport",
    "det_relay_capacity",
    "relay_df_rate",
    "relay_cutset_bound",
    "relay_gap",
    "relay_gap_sweep",
    "det_diamond_capacity",
    "diamond_region_contains",
    "diamond_pdf_rate",
    "diamond_rstar",
    "diamond_alpha_star",
    "diamond_cutset_bound",
    "diamond_gap",
    "random_diamonds",
    "random_gains_db",
    "db_to_magnitude",
    "golden_section_max",
]

GAP_TOL = 1e-9
# slack on region membership tests, in bits
_REGION_TOL = 1e-12
_RHO_TOL = 1e-12
_ALPHA_GRID = 1000
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _magnitude(x: float, name: str) -> float:
    x = float(x)
    if not (math.isfinite(x) and x >= 0):
        raise DomainError(f"{name} must be a finite nonnegative magnitude, got {x}")
    return x


def db_to_magnitude(db: float) -> float:
    """``|h|`` such that ``|h|**2`` is ``db`` decibels."""
    return math.sqrt(10.0 ** (db / 10.0))


@dataclass(frozen=True)
class GaussianRelay:
    h_sd: float
    h_sr: float
    h_rd: float

    def __post_init__(self):
        for name in ("h_sd", "h_sr", "h_rd"):
            object.__setattr__(self, name, _magnitude(getattr(self, name), name))

    @classmethod
    def from_db(cls, sd_db: float, sr_db: float, rd_db: float) -> "GaussianRelay":
        return cls(db_to_magnitude(sd_db), db_to_magnitude(sr_db), db_to_magnitude(rd_db))

    @classmethod
    def from_power(cls, sd: float, sr: float, rd: float) -> "GaussianRelay":
        return cls(math.sqrt(sd), math.sqrt(sr), math.sqrt(rd))


@dataclass(frozen=True)
class GaussianDiamond:
    """Two-relay diamond. Construction relabels relays so ``|h_sa1| >= |h_sa2|``;
    ``swapped`` records whether that happened."""

    h_sa1: float
    h_sa2: float
    h_a1d: float
    h_a2d: float
    swapped: bool = False

    def __post_init__(self):
        for name in ("h_sa1", "h_sa2", "h_a1d", "h_a2d"):
            object.__setattr__(self, name, _magnitude(getattr(self, name), name))
        if self.h_sa2 > self.h_sa1:
            sa1, sa2, a1d, a2d = self.h_sa1, self.h_sa2, self.h_a1d, self.h_a2d
            object.__setattr__(self, "h_sa1", sa2)
            object.__setattr__(self, "h_sa2", sa1)
            object.__setattr__(self, "h_a1d", a2d)
            object.__setattr__(self, "h_a2d", a1d)
            object.__setattr__(self, "swapped", not self.swapped)

    @classmethod
    def from_db(cls, sa1_db, sa2_db, a1d_db, a2d_db) -> "GaussianDiamond":
        return cls(*(db_to_magnitude(x) for x in (sa1_db, sa2_db, a1d_db, a2d_db)))

    @classmethod
    def from_power(cls, sa1, sa2, a1d, a2d) -> "GaussianDiamond":
        return cls(*(math.sqrt(x) for x in (sa1, sa2, a1d, a2d)))

    @property
    def powers(self) -> tuple[float, float, float, float]:
        return (self.h_sa1**2, self.h_sa2**2, self.h_a1d**2, self.h_a2d**2)


@dataclass(frozen=True)
class GapReport:
    achievable: float
    upper_bound: float
    gap: float
    argmax: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.gap < -GAP_TOL:
            raise AssertionError(
                f"achievable rate {self.achievable} exceeds upper bound {self.upper_bound}"
            )


@dataclass(frozen=True)
class DiamondReport(GapReport):
    """Diamond gap with the intermediate rate ``r_star`` exposed."""

    r_star: float = 0.0
    swapped: bool = False


# ---------------------------------------------------------------------------
# Single relay
# ---------------------------------------------------------------------------


def det_relay_capacity(n_sr: int, n_sd: int, n_rd: int) -> int:
    return n_sd + min(max(n_sr - n_sd, 0), max(n_rd - n_sd, 0))


def relay_df_rate(ch: GaussianRelay) -> float:
    """Best of direct transmission and block-Markov decode-forward.

    When ``|h_sr| <= |h_sd|`` the direct branch always wins the max.
    """
    sd, sr, rd = ch.h_sd**2, ch.h_sr**2, ch.h_rd**2
    direct = log2_1p(sd)
    df = min(log2_1p(sr), log2_1p(sd + rd))
    return max(direct, df)


def relay_cutset_bound(ch: GaussianRelay) -> tuple[float, float]:
    """Cut-set bound and the maximizing source/relay correlation ``rho``.

    On ``[0, 1]`` the broadcast-cut term falls and the MAC-cut term rises
    with ``rho``, so the optimum is ``rho = 0`` or their crossing, found by
    bisection. Negative ``rho`` never helps.
    """
    sd, sr, rd = ch.h_sd**2, ch.h_sr**2, ch.h_rd**2
    c = ch.h_sd * ch.h_rd
    bc = sd + sr
    mac0 = sd + rd
    if bc <= mac0 or c == 0.0:
        return min(log2_1p(bc), log2_1p(mac0)), 0.0

    # sign of (broadcast term - MAC term) on the linear scale
    def excess(rho):
        return (1.0 - rho * rho) * bc - (mac0 + 2.0 * rho * c)

    lo, hi = 0.0, 1.0
    while hi - lo > _RHO_TOL:
        mid = 0.5 * (lo + hi)
        if excess(mid) >= 0.0:
            lo = mid
        else:
            hi = mid
    # at lo the MAC term is the smaller one
    return log2_1p(mac0 + 2.0 * lo * c), lo


def relay_gap(ch: GaussianRelay) -> GapReport:
    achievable = relay_df_rate(ch)
    bound, rho = relay_cutset_bound(ch)
    return GapReport(achievable, bound, bound - achievable, {"rho": rho})


def relay_gap_sweep(
    sd_db: float, lo_db: float, hi_db: float, step_db: float
) -> Iterator[tuple[float, float, float]]:
    """Yield ``(sr_db, rd_db, gap)`` over a square grid, row-major with ``sr`` outer.

    ``sr_db`` and ``rd_db`` are relative to the direct link ``sd_db``.
    """
    if not step_db > 0:
        raise DomainError(f"step must be positive, got {step_db}")
    if hi_db < lo_db:
        raise DomainError(f"empty range [{lo_db}, {hi_db}]")
    count = int(math.floor((hi_db - lo_db) / step_db + 1e-9)) + 1
    axis = [lo_db + i * step_db for i in range(count)]
    for sr in axis:
        for rd in axis:
            ch = GaussianRelay.from_db(sd_db, sd_db + sr, sd_db + rd)
            yield sr, rd, relay_gap(ch).gap


# ---------------------------------------------------------------------------
# Diamond
# ---------------------------------------------------------------------------


def det_diamond_capacity(n_sa1: int, n_sa2: int, n_a1d: int, n_a2d: int) -> int:
    return min(max(n_sa1, n_sa2), max(n_a1d, n_a2d), n_sa1 + n_a2d, n_sa2 + n_a1d)


def _caps(ch: GaussianDiamond):
    g1, g2, a1, a2 = ch.powers
    return g1, g2, log2_1p(a1), log2_1p(a2), log2_1p(a1 + a2)


def diamond_region_contains(ch: GaussianDiamond, alpha: float, p) -> bool:
    """Membership of ``p`` in the BC/MAC intersection at power split ``alpha``."""
    if not 0.0 <= alpha <= 1.0:
        raise DomainError(f"alpha must lie in [0, 1], got {alpha}")
    g1, g2, m1, m2, msum = _caps(ch)
    r1, r2 = p.r1, p.r2
    t = _REGION_TOL
    return (
        r1 <= log2_1p(alpha * g1) + t
        and r2 <= bc_weak_rate(alpha, g2) + t
        and r1 <= m1 + t
        and r2 <= m2 + t
        and r1 + r2 <= msum + t
    )


def _pdf_objective(ch: GaussianDiamond) -> Callable[[float], float]:
    g1, g2, m1, m2, msum = _caps(ch)

    def f(alpha: float) -> float:
        b1 = log2_1p(alpha * g1)
        b2 = bc_weak_rate(alpha, g2)
        return min(min(b1, m1) + min(b2, m2), msum)

    return f


def golden_section_max(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12) -> tuple[float, float]:
    """Maximize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x))``."""
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    best = max((a, f(a)), (b, f(b)), (c, fc), (d, fd), key=lambda t: t[1])
    return best


def _kink_alphas(ch: GaussianDiamond) -> list[float]:
    """Power splits where a BC cap meets the matching MAC cap."""
    g1, g2, m1, m2, _ = _caps(ch)
    out = []
    if g1 > 0:
        out.append(math.expm1(m1 * math.log(2.0)) / g1)
    if g2 > 0:
        out.append(math.expm1((log2_1p(g2) - m2) * math.log(2.0)) / g2)
    return [min(1.0, max(0.0, a)) for a in out]


def diamond_pdf_rate(ch: GaussianDiamond) -> tuple[float, float]:
    """Partial decode-forward sum rate maximized over the BC power split.

    A 1e-3 grid brackets the maximum, golden-section search refines it, and
    the points where a BC cap meets its MAC cap are checked as well since
    the objective is piecewise smooth with its peak at such a kink.
    """
    f = _pdf_objective(ch)
    g1, g2, m1, m2, msum = _caps(ch)
    grid = np.linspace(0.0, 1.0, _ALPHA_GRID + 1)
    b1 = np.log1p(grid * g1) / math.log(2.0)
    b2 = log2_1p(g2) - np.log1p(grid * g2) / math.log(2.0)
    values = np.minimum(np.minimum(b1, m1) + np.minimum(b2, m2), msum)
    k = int(np.argmax(values))
    lo = float(grid[max(k - 1, 0)])
    hi = float(grid[min(k + 1, _ALPHA_GRID)])
    best_alpha, best = golden_section_max(f, lo, hi)
    for a in _kink_alphas(ch) + [float(grid[k])]:
        v = f(a)
        if v > best:
            best_alpha, best = a, v
    return best, best_alpha


def diamond_rstar(ch: GaussianDiamond) -> float:
    """Max of ``R1 + R2`` over the relaxed region.

    The constraints are ``R1 <= m1``, ``R2 <= min(m2, log(1+|h_sa2|^2))`` and
    ``R1 + R2 <= min(log(1+|h_sa1|^2), msum)``, so the sum is capped by the
    box corner and by the sum constraint.
    """
    g1, g2, m1, m2, msum = _caps(ch)
    return min(m1 + min(m2, log2_1p(g2)), log2_1p(g1), msum)


def diamond_alpha_star(ch: GaussianDiamond, r2_star: float) -> float:
    """Power split giving the weak relay exactly ``r2_star - 1`` bits."""
    g2 = ch.h_sa2**2
    if r2_star < 1.0:
        raise DomainError(f"r2_star must be >= 1, got {r2_star}")
    if r2_star > log2_1p(g2) + _REGION_TOL:
        raise DomainError(f"r2_star={r2_star} exceeds the weak link capacity {log2_1p(g2)}")
    t = 2.0 ** (r2_star - 1.0)
    alpha = (1.0 + g2 - t) / (t * g2)
    return min(1.0, max(0.0, alpha))


def diamond_cutset_bound(ch: GaussianDiamond) -> float:
    g1, g2, a1, a2 = ch.powers
    return min(
        log2_1p(g1 + g2),
        log2_1p((ch.h_a1d + ch.h_a2d) ** 2),
        log2_1p(g1) + log2_1p(a2),
        log2_1p(g2) + log2_1p(a1),
    )


def diamond_gap(ch: GaussianDiamond) -> DiamondReport:
    r_pdf, alpha = diamond_pdf_rate(ch)
    r_star = diamond_rstar(ch)
    c_bar = diamond_cutset_bound(ch)
    return DiamondReport(
        achievable=r_pdf,
        upper_bound=c_bar,
        gap=c_bar - r_pdf,
        argmax={"alpha": alpha},
        r_star=r_star,
        swapped=ch.swapped,
    )


def random_gains_db(count: int, seed: int, lo_db: float = -20.0, hi_db: float = 60.0) -> list[tuple[float, ...]]:
    """``count`` rows of four gains in dB, uniform on ``[lo_db, hi_db]``.

    Draws come from the raw ``PCG64(seed)`` stream so they do not depend on
    numpy's distribution code.
    """
    raw = np.random.PCG64(seed).random_raw(4 * count)
    # top 53 bits of each raw word -> uniform double in [0, 1)
    u = (raw >> np.uint64(11)).astype(np.float64) * 2.0**-53
    dbs = lo_db + (hi_db - lo_db) * u.reshape(count, 4)
    return [tuple(row) for row in dbs.tolist()]


def random_diamonds(count: int, seed: int, lo_db: float = -20.0, hi_db: float = 60.0) -> list[GaussianDiamond]:
    """Diamonds with each ``|h|**2`` drawn log-uniformly in ``[lo_db, hi_db]``."""
    return [GaussianDiamond.from_db(*row) for row in random_gains_db(count, seed, lo_db, hi_db)]
