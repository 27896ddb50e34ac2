"""Elementary channels: point-to-point, two-user MAC and two-user BC.

Each channel has a deterministic (integer level) form and a Gaussian form.
Logs are base 2 and rates are bits per complex channel use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from detrelay.errors import DomainError

__all__ = [
    "TOL",
    "SnrDb",
    "RatePoint",
    "det_level_count",
    "awgn_capacity",
    "det_mac_region_contains",
    "gauss_mac_region_contains",
    "det_bc_region_contains",
    "gauss_bc_region_contains",
    "bc_weak_rate",
    "within_one_bit_check",
    "det_mac_corners",
    "det_bc_corners",
    "gauss_mac_boundary",
    "gauss_bc_boundary",
]

# slack on floating-point region boundaries, in bits
TOL = 1e-12

_LN2 = math.log(2.0)


def log2_1p(x: float) -> float:
    """``log2(1 + x)``, accurate for small ``x``."""
    return math.log1p(x) / _LN2


@dataclass(frozen=True)
class SnrDb:
    value: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError(f"SNR must be finite, got {self.value} dB")

    def linear(self) -> float:
        return 10.0 ** (self.value / 10.0)

    @classmethod
    def from_linear(cls, snr: float) -> "SnrDb":
        if not snr > 0:
            raise DomainError(f"linear SNR must be positive, got {snr}")
        return cls(10.0 * math.log10(snr))


@dataclass(frozen=True)
class RatePoint:
    r1: float
    r2: float

    def __post_init__(self):
        if not (self.r1 >= 0 and self.r2 >= 0):
            raise DomainError(f"rates must be nonnegative, got ({self.r1}, {self.r2})")


def _linear(snr) -> float:
    return snr.linear() if isinstance(snr, SnrDb) else float(snr)


def det_level_count(snr) -> int:
    """Number of signal levels above noise: ``max(0, ceil(log2 SNR))``.

    Accepts an ``SnrDb`` or a linear SNR.
    """
    s = _linear(snr)
    if s <= 1.0:
        return 0
    # snap values that are a power of two up to rounding noise
    x = math.log2(s)
    n = round(x)
    if abs(x - n) < 1e-12:
        return int(n)
    return int(math.ceil(x))


def awgn_capacity(snr) -> float:
    return log2_1p(_linear(snr))


def _check_order(n1, n2):
    if n2 > n1:
        raise DomainError(
            f"label users so that user 1 is the stronger one (got n1={n1} < n2={n2}); swap them"
        )


def det_mac_region_contains(n1: int, n2: int, p: RatePoint) -> bool:
    """``R2 <= n2`` and ``R1 + R2 <= n1`` with ``n2 <= n1``."""
    _check_order(n1, n2)
    return p.r2 <= n2 and p.r1 + p.r2 <= n1


def gauss_mac_region_contains(snr1, snr2, p: RatePoint) -> bool:
    s1, s2 = _linear(snr1), _linear(snr2)
    return (
        p.r1 <= log2_1p(s1) + TOL
        and p.r2 <= log2_1p(s2) + TOL
        and p.r1 + p.r2 <= log2_1p(s1 + s2) + TOL
    )


def det_bc_region_contains(n1: int, n2: int, p: RatePoint) -> bool:
    """Weak user 2 is served on the top ``n2`` levels, the strong user on the rest.

    Any split of the top levels works, so the region is ``R2 <= n2`` and
    ``R1 + R2 <= n1``.
    """
    _check_order(n1, n2)
    return p.r2 <= n2 and p.r1 + p.r2 <= n1


def bc_weak_rate(alpha: float, snr_weak: float) -> float:
    """Weak-user rate when a fraction ``alpha`` of power goes to the strong user.

    ``log2(1 + (1-alpha) s / (alpha s + 1)) = log2(1 + s) - log2(1 + alpha s)``.
    """
    return log2_1p(snr_weak) - log2_1p(alpha * snr_weak)


def _alpha_for_weak_rate(r2: float, snr_weak: float) -> float:
    """Largest ``alpha`` in [0, 1] giving the weak user at least ``r2``; -1 if none."""
    if r2 <= TOL:
        return 1.0
    if r2 > log2_1p(snr_weak) + TOL:
        return -1.0
    # (1 + s) / (1 + alpha s) = 2**r2
    alpha = math.expm1(log2_1p(snr_weak) * _LN2 - r2 * _LN2) / snr_weak
    return min(1.0, max(0.0, alpha))


def gauss_bc_region_contains(snr1, snr2, p: RatePoint) -> bool:
    """Degraded Gaussian BC with superposition coding, user 2 the weak one."""
    s1, s2 = _linear(snr1), _linear(snr2)
    if s2 > s1:
        raise DomainError(
            f"label users so that user 1 is the stronger one (got SNR1={s1} < SNR2={s2}); swap them"
        )
    alpha = _alpha_for_weak_rate(p.r2, s2)
    if alpha < 0:
        return False
    return p.r1 <= log2_1p(alpha * s1) + TOL


def within_one_bit_check(det_point: RatePoint, gaussian_region_membership: Callable[[RatePoint], bool]) -> bool:
    """Test the witness ``((r1-1)+, (r2-1)+)`` against a Gaussian region predicate."""
    witness = RatePoint(max(det_point.r1 - 1.0, 0.0), max(det_point.r2 - 1.0, 0.0))
    return bool(gaussian_region_membership(witness))


def det_mac_corners(n1: int, n2: int) -> list[tuple[int, int]]:
    """Vertices of the deterministic MAC region on the rate axes, counter-clockwise from ``(0, n2)``."""
    _check_order(n1, n2)
    pts = [(0, n2), (n1 - n2, n2), (n1, 0)]
    return list(dict.fromkeys(pts))


def det_bc_corners(n1: int, n2: int) -> list[tuple[int, int]]:
    _check_order(n1, n2)
    pts = [(0, n2), (n1 - n2, n2), (n1, 0)]
    return list(dict.fromkeys(pts))


def gauss_mac_boundary(snr1, snr2, samples: int = 64) -> list[tuple[float, float]]:
    """Points on the dominant face of the Gaussian MAC region.

    The face joins the two successive-decoding corners; ``t`` in [0, 1]
    interpolates between them.
    """
    s1, s2 = _linear(snr1), _linear(snr2)
    c1, c2, cs = log2_1p(s1), log2_1p(s2), log2_1p(s1 + s2)
    a = (cs - c2, c2)
    b = (c1, cs - c1)
    out = []
    for k in range(samples):
        t = k / (samples - 1) if samples > 1 else 0.0
        out.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
    return out


def gauss_bc_boundary(snr1, snr2, samples: int = 64) -> list[tuple[float, float]]:
    """Boundary of the Gaussian BC region at evenly spaced power splits ``alpha``."""
    s1, s2 = _linear(snr1), _linear(snr2)
    if s2 > s1:
        raise DomainError("label users so that user 1 is the stronger one; swap them")
    out = []
    for k in range(samples):
        alpha = k / (samples - 1) if samples > 1 else 0.0
        out.append((log2_1p(alpha * s1), bc_weak_rate(alpha, s2)))
    return out
