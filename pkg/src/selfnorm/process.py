"""Partial sums, p-norms, and the interpolated self-normalized process.

The central object is Y_{n,p}(t) = S_[nt]/V_{n,p} + (nt - [nt]) X_{[nt]+1}/V_{n,p}
on [0,1], the continuous piecewise-linear interpolation of the normalized
partial sums, with the convention that the interpolation term vanishes at
t = 1. Heavy-tailed summands force two numerical choices here: prefix sums
are compensated for long samples (cancellation between huge opposite-sign
terms), and p-norms are computed max-rescaled (naive power sums overflow).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSampleError, ParameterDomainError
from .families import SampleBatch

__all__ = [
    "PartialSumPath",
    "PNorm",
    "ProcessPath",
    "EKFunctionals",
    "partial_sums",
    "p_norm",
    "y_at",
    "y_path",
    "ek_functionals",
]

_COMPENSATE_FROM = 100_000
_BLOCK = 2048


@dataclass(frozen=True, eq=False)
class PartialSumPath:
    """Prefix sums S_0..S_n with S_0 = 0."""

    sums: np.ndarray

    @property
    def n(self) -> int:
        return len(self.sums) - 1


@dataclass(frozen=True)
class PNorm:
    """V_{n,p} = (sum |X_i|^p)^(1/p), with its p-th power kept alongside.

    value_p is the power sum itself, carried separately because downstream
    statistics use V and V^p interchangeably and recomputing value**p would
    lose precision.
    """

    p: float
    value: float
    value_p: float


def _compensated_cumsum(x: np.ndarray) -> np.ndarray:
    # blockwise vector cumsum; the running carry across blocks is accumulated
    # with a Neumaier correction so long alternating-sign sums stay exact
    out = np.empty(x.size)
    carry = 0.0
    comp = 0.0
    for start in range(0, x.size, _BLOCK):
        seg = np.cumsum(x[start:start + _BLOCK])
        out[start:start + seg.size] = seg + (carry + comp)
        total = seg[-1]
        t = carry + total
        if abs(carry) >= abs(total):
            comp += (carry - t) + total
        else:
            comp += (total - t) + carry
        carry = t
    return out


def partial_sums(batch: SampleBatch) -> PartialSumPath:
    """Left-to-right prefix sums of the sample, S_0 = 0 prepended."""
    x = np.asarray(batch.values, dtype=float)
    if x.size == 0:
        raise ParameterDomainError("cannot build partial sums of an empty batch")
    sums = np.empty(x.size + 1)
    sums[0] = 0.0
    if x.size >= _COMPENSATE_FROM:
        sums[1:] = _compensated_cumsum(x)
    else:
        np.cumsum(x, out=sums[1:])
    return PartialSumPath(sums=sums)


def _rescaled_power_sum(x: np.ndarray, p: float) -> tuple[float, float]:
    """(max |x|, sum (|x|/max)^p); the building block of every norm here."""
    ax = np.abs(x)
    m = float(ax.max())
    if m == 0.0:
        return 0.0, 0.0
    return m, float(((ax / m) ** p).sum())


def _pow_or_inf(base: float, expo: float) -> float:
    # Python ** raises OverflowError past float range; IEEE inf is the right
    # degradation for norms of extreme heavy-tail draws
    try:
        return base**expo
    except OverflowError:
        return float("inf")


def p_norm(batch: SampleBatch, p: float) -> PNorm:
    """V_{n,p} via max-rescaling: V = M (sum (|X_i|/M)^p)^(1/p), M = max|X_i|."""
    p = float(p)
    if not 0 < p <= 2:
        raise ParameterDomainError(f"p must lie in (0, 2], got {p}")
    x = np.asarray(batch.values, dtype=float)
    if x.size == 0:
        raise ParameterDomainError("cannot take the p-norm of an empty batch")
    m, s = _rescaled_power_sum(x, p)
    if m == 0.0:
        # all-zero sample: flagged degenerate value, callers that need V > 0 raise
        return PNorm(p=p, value=0.0, value_p=0.0)
    return PNorm(p=p, value=m * _pow_or_inf(s, 1.0 / p), value_p=_pow_or_inf(m, p) * s)


@dataclass(frozen=True, eq=False)
class ProcessPath:
    """The interpolated process Y_{n,p} for one sample, evaluable on [0,1]."""

    batch: SampleBatch
    p: float
    sums: np.ndarray = field(init=False, repr=False)
    vnp: PNorm = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "sums", partial_sums(self.batch).sums)
        object.__setattr__(self, "vnp", p_norm(self.batch, self.p))
        if self.vnp.value == 0.0:
            raise DegenerateSampleError("all-zero sample: Y_{n,p} undefined (V = 0)")

    @property
    def n(self) -> int:
        return self.batch.n


def y_at(path: ProcessPath, t: float) -> float:
    """Evaluate Y_{n,p}(t) = S_[nt]/V + (nt - [nt]) X_{[nt]+1}/V.

    At t = 1 the interpolation term is zero by convention, so y_at(1) is the
    endpoint S_n/V exactly.
    """
    t = float(t)
    if not 0.0 <= t <= 1.0:
        raise ParameterDomainError(f"t must lie in [0, 1], got {t}")
    n = path.n
    nt = n * t
    k = min(int(nt), n)
    frac = nt - k
    v = path.vnp.value
    if k >= n:
        return float(path.sums[n] / v)
    return float((path.sums[k] + frac * path.batch.values[k]) / v)


def y_path(path: ProcessPath, grid) -> np.ndarray:
    """Vectorized y_at over an increasing grid in [0, 1]."""
    tg = np.asarray(grid, dtype=float)
    if tg.size == 0:
        raise ParameterDomainError("empty evaluation grid")
    if np.any(tg < 0.0) or np.any(tg > 1.0):
        raise ParameterDomainError("grid points must lie in [0, 1]")
    if np.any(np.diff(tg) <= 0):
        raise ParameterDomainError("grid must be strictly increasing")
    n = path.n
    nt = n * tg
    ks = np.minimum(nt.astype(int), n)
    frac = nt - ks
    xpad = np.concatenate([path.batch.values, [0.0]])  # t = 1 contributes no step
    return (path.sums[ks] + frac * xpad[ks]) / path.vnp.value


@dataclass(frozen=True)
class EKFunctionals:
    """The four path functionals paired with the Brownian limit laws G1..G4."""

    max_sn: float
    max_abs_sn: float
    mean_sq: float
    mean_abs: float


def ek_functionals(batch: SampleBatch, p: float) -> EKFunctionals:
    """max, max-abs, mean-square and mean-abs of S_k/V_{n,p} over k = 1..n."""
    v = p_norm(batch, p)
    if v.value == 0.0:
        raise DegenerateSampleError("all-zero sample: functionals undefined (V = 0)")
    s = partial_sums(batch).sums[1:] / v.value
    a = np.abs(s)
    return EKFunctionals(
        max_sn=float(s.max()),
        max_abs_sn=float(a.max()),
        mean_sq=float(np.mean(s * s)),
        mean_abs=float(a.mean()),
    )
