"""Ground-truth machinery: achieving witnesses, random joints, hull search.

Nothing here trusts the envelope formulas. The witnesses realize the
boundary by construction, the Monte Carlo verifier samples joints
uniformly and counts violations, and the brute-force functions rebuild
the hull boundary from two-point mixtures of raw curve samples. Two-point
mixtures suffice: a planar convex-hull boundary point at a fixed first
coordinate is a convex combination of at most two extreme points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import bounds, curves
from .measures import JointDist
from .simplex import DomainError, ProbVector, make_peaked, make_stepped, make_uniform

_CHUNK = 1 << 14  # verifier work unit; sub-seeded so worker count is irrelevant


@dataclass(frozen=True)
class VerifyReport:
    """Outcome of a Monte Carlo envelope sweep (violations at 1e-9 slack)."""

    samples: int
    violations_lower: int
    violations_upper: int
    max_excess: float
    seed: int


def witness_min(n: int, h: float) -> JointDist:
    """Two-outcome joint achieving the lower envelope at entropy h exactly.

    Mixes the uniform-on-m and uniform-on-(m+1) rows (as stepped vectors)
    with the weight that lands the conditional entropy on h.
    """
    if n < 2:
        raise DomainError(f"n={n} must be >= 2")
    lnn = math.log(n)
    if not (-1e-9 <= h <= lnn + 1e-9):
        raise DomainError(f"h={h!r} outside [0, ln {n}]")
    h = min(max(h, 0.0), lnn)
    m = int(math.floor(math.exp(h) + 1e-9))
    if m >= n:
        return JointDist(py=ProbVector((1.0,)), rows=(make_uniform(n),))
    lam = (math.log(m + 1) - h) / (math.log(m + 1) - math.log(m))
    lam = min(max(lam, 0.0), 1.0)
    rows = (make_stepped(n, 1.0 / m), make_stepped(n, 1.0 / (m + 1)))
    return JointDist(py=ProbVector((lam, 1.0 - lam)), rows=rows)


def witness_max(n: int, alpha: float, h: float) -> JointDist:
    """Joint achieving the upper envelope at entropy h exactly.

    A single peaked row below the tangency entropy; past it, the tangency
    row mixed with the uniform row.
    """
    ts = curves.tangent_point(n, alpha)
    lnn = math.log(n)
    if not (-1e-9 <= h <= lnn + 1e-9):
        raise DomainError(f"h={h!r} outside [0, ln {n}]")
    h = min(max(h, 0.0), lnn)
    if h <= ts.h:
        row = make_peaked(n, curves.inv_entropy_peaked(n, h))
        return JointDist(py=ProbVector((1.0,)), rows=(row,))
    lam = (lnn - h) / (lnn - ts.h)
    return JointDist(
        py=ProbVector((lam, 1.0 - lam)),
        rows=(make_peaked(n, ts.p), make_uniform(n)),
    )


def _sample_simplex(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """Uniform points on the simplex via normalized exponential spacings."""
    e = rng.standard_exponential(size=(count, dim))
    return e / e.sum(axis=1, keepdims=True)


def random_joint(n: int, y_size: int, seed: int) -> JointDist:
    """One joint with uniform-on-the-simplex marginal and rows; seed-determined."""
    if n < 2 or y_size < 1:
        raise DomainError(f"need n >= 2 and y_size >= 1, got n={n}, y_size={y_size}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    py = _sample_simplex(rng, 1, y_size)[0]
    rows = _sample_simplex(rng, y_size, n)
    return JointDist(
        py=ProbVector(tuple(py.tolist())),
        rows=tuple(ProbVector(tuple(r.tolist())) for r in rows),
    )


def sample_joint_batch(
    n: int, y_size: int, count: int, seed: int, chunk_index: int = 0
) -> tuple[np.ndarray, np.ndarray]:
    """Batch of joints as arrays: marginals (count, y) and rows (count, y, n)."""
    rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index,)))
    py = _sample_simplex(rng, count, y_size)
    rows = rng.standard_exponential(size=(count, y_size, n))
    rows /= rows.sum(axis=2, keepdims=True)
    return py, rows


def _row_entropy(rows: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(rows > 0.0, rows * np.log(rows), 0.0)
    return -t.sum(axis=-1)


def _row_norm(rows: np.ndarray, alpha: float) -> np.ndarray:
    if alpha == math.inf:
        return rows.max(axis=-1)
    return np.power(rows, alpha).sum(axis=-1) ** (1.0 / alpha)


def verify_envelope(n: int, alpha: float, samples: int, seed: int, y_size: int = 4) -> VerifyReport:
    """Sample random joints and count envelope violations at tolerance 1e-9.

    The upper envelope is checked only where it exists for (n, alpha).
    Work is cut into fixed chunks with sub-seeds derived from (seed, chunk),
    so the report does not depend on how chunks are scheduled.
    """
    if samples < 1:
        raise DomainError(f"samples={samples} must be >= 1")
    check_upper = bounds.has_upper_envelope(n, alpha)
    bad_lo = 0
    bad_up = 0
    max_excess = 0.0
    done = 0
    chunk_index = 0
    while done < samples:
        count = min(_CHUNK, samples - done)
        py, rows = sample_joint_batch(n, y_size, count, seed, chunk_index)
        h = (py * _row_entropy(rows)).sum(axis=1)
        norm = (py * _row_norm(rows, alpha)).sum(axis=1)
        h = np.clip(h, 0.0, math.log(n))
        lo = bounds._envelope_lower_vec(n, alpha, h)
        excess_lo = lo - norm
        bad_lo += int((excess_lo > 1e-9).sum())
        max_excess = max(max_excess, float(excess_lo.max()))
        if check_upper:
            up = bounds._envelope_upper_vec(n, alpha, h)
            excess_up = norm - up
            bad_up += int((excess_up > 1e-9).sum())
            max_excess = max(max_excess, float(excess_up.max()))
        done += count
        chunk_index += 1
    return VerifyReport(
        samples=samples,
        violations_lower=bad_lo,
        violations_upper=bad_up,
        max_excess=max_excess,
        seed=seed,
    )


def verify_sandwich(n: int, alpha: float, samples: int, seed: int) -> VerifyReport:
    """Sample single distributions and check the unconditional norm sandwich.

    For each sampled point, the stepped-curve norm at its entropy must not
    exceed its alpha-norm, and the peaked-curve norm must not fall below it
    (tolerance 1e-9). Chunked and sub-seeded like verify_envelope.
    """
    if samples < 1:
        raise DomainError(f"samples={samples} must be >= 1")
    bad_lo = 0
    bad_up = 0
    max_excess = 0.0
    done = 0
    chunk_index = 0
    while done < samples:
        count = min(_CHUNK, samples - done)
        rng = np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(chunk_index,)))
        pts = _sample_simplex(rng, count, n)
        h = np.clip(_row_entropy(pts), 0.0, math.log(n))
        x = _row_norm(pts, alpha)
        lo = bounds._norm_stepped_vec(n, bounds._inv_entropy_stepped_vec(n, h), alpha)
        hi = bounds._norm_peaked_vec(n, bounds._inv_entropy_peaked_vec(n, h), alpha)
        excess_lo = lo - x
        excess_up = x - hi
        bad_lo += int((excess_lo > 1e-9).sum())
        bad_up += int((excess_up > 1e-9).sum())
        max_excess = max(max_excess, float(excess_lo.max()), float(excess_up.max()))
        done += count
        chunk_index += 1
    return VerifyReport(
        samples=samples,
        violations_lower=bad_lo,
        violations_upper=bad_up,
        max_excess=max_excess,
        seed=seed,
    )


@lru_cache(maxsize=64)
def _peaked_samples(n: int, alpha: float, grid_size: int) -> tuple[np.ndarray, np.ndarray]:
    # i/G is exact for power-of-two G, so halved grids are exact subsets
    t = np.arange(grid_size + 1, dtype=np.float64) / grid_size
    p = t * (1.0 / n)
    return bounds._entropy_peaked_vec(n, p), bounds._norm_peaked_vec(n, p, alpha)


@lru_cache(maxsize=64)
def _stepped_samples(n: int, alpha: float, grid_size: int) -> tuple[np.ndarray, np.ndarray]:
    t = np.arange(grid_size + 1, dtype=np.float64) / grid_size
    p = 1.0 / n + t * (1.0 - 1.0 / n)
    h = np.empty_like(p)
    ns = np.empty_like(p)
    for i, x in enumerate(p):
        h[i] = curves.entropy_stepped(n, float(x))
        ns[i] = curves.norm_stepped(n, float(x), alpha)
    return h, ns


def _mixture_extreme(h_pts: np.ndarray, n_pts: np.ndarray, h: float, want_max: bool) -> float:
    """Best two-point mixture value at abscissa h over the sampled curve."""
    # float noise can leave the sampled curve a few ulp short of [0, ln n]
    h = min(max(h, float(h_pts.min())), float(h_pts.max()))
    left = h_pts <= h
    right = h_pts >= h
    hl, nl = h_pts[left], n_pts[left]
    hr, nr = h_pts[right], n_pts[right]
    span = hr[None, :] - hl[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = (hr[None, :] - h) / span
        vals = lam * nl[:, None] + (1.0 - lam) * nr[None, :]
    ok = span > 0.0
    best = float(np.max(np.where(ok, vals, -np.inf))) if want_max else float(
        np.min(np.where(ok, vals, np.inf))
    )
    exact = h_pts == h
    if exact.any():
        hit = n_pts[exact]
        cand = float(hit.max() if want_max else hit.min())
        best = max(best, cand) if want_max else min(best, cand)
    return best


def brute_force_upper(n: int, alpha: float, h: float, grid_size: int) -> float:
    """Hull upper boundary at h from two-point mixtures of peaked-curve samples.

    Converges to the upper envelope from below as the grid refines; with
    power-of-two sizes a coarser grid's candidates are a subset of a finer
    grid's, so refinement is monotone.
    """
    if grid_size < 16:
        raise DomainError(f"grid_size={grid_size} must be >= 16")
    lnn = math.log(n)
    if not (-1e-9 <= h <= lnn + 1e-9):
        raise DomainError(f"h={h!r} outside [0, ln {n}]")
    h = min(max(h, 0.0), lnn)
    hs, ns = _peaked_samples(n, float(alpha), grid_size)
    return _mixture_extreme(hs, ns, h, want_max=True)


def brute_force_lower(n: int, alpha: float, h: float, grid_size: int) -> float:
    """Hull lower boundary at h from two-point mixtures of stepped-curve samples."""
    if grid_size < 16:
        raise DomainError(f"grid_size={grid_size} must be >= 16")
    lnn = math.log(n)
    if not (-1e-9 <= h <= lnn + 1e-9):
        raise DomainError(f"h={h!r} outside [0, ln {n}]")
    h = min(max(h, 0.0), lnn)
    hs, ns = _stepped_samples(n, float(alpha), grid_size)
    return _mixture_extreme(hs, ns, h, want_max=False)
