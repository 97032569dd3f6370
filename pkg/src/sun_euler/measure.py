"""Haar measure in Euler coordinates: densities, volumes and sampling."""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import kernels
from .algebra import epsilon
from .errors import DomainError, ShapeError
from .group import EulerCoordinates, SpecialUnitary, coordinate_layout, slot_ranges

DEFAULT_CHUNK = 1 << 16


def threads_from_env() -> int:
    """Worker count from ``SUN_EULER_THREADS`` (default: all cores)."""
    value = os.environ.get("SUN_EULER_THREADS")
    if value:
        return max(1, int(value))
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# densities

def base_density(n: int, theta, phi) -> float:
    """Density of the coset coordinates (theta_a, phi_a) of SU(n), N = n - 1:

        2 cos(phi_N) sin(phi_N)**(2N-1) * prod_{a<N} sin(phi_a) cos(phi_a)**(2a-1)

    It does not depend on theta; the argument is only checked for length.
    """
    if n < 3:
        raise DomainError(f"base_density needs n >= 3, got {n}")
    N = n - 1
    if len(theta) != N or len(phi) != N:
        raise ShapeError(f"SU({n}) base angles need length {N}, got {len(theta)} and {len(phi)}")
    return _level_density(np.asarray(phi, dtype=np.float64))


def _level_density(phi: np.ndarray) -> float:
    N = len(phi)
    v = 2.0 * math.cos(phi[-1]) * math.sin(phi[-1]) ** (2 * N - 1)
    for a in range(1, N):
        v *= math.sin(phi[a - 1]) * math.cos(phi[a - 1]) ** (2 * a - 1)
    return v


@lru_cache(maxsize=None)
def _density_program(n: int):
    sin_slots, sin_pows, cos_slots, cos_pows = [], [], [], []
    const = 1.0
    offset = 0
    size = n
    while size > 2:
        m = size - 1
        for a in range(1, m + 1):
            slot = offset + 2 * a - 1
            if a == m:
                sin_slots.append(slot)
                sin_pows.append(2 * m - 1)
                cos_slots.append(slot)
                cos_pows.append(1)
            else:
                sin_slots.append(slot)
                sin_pows.append(1)
                cos_slots.append(slot)
                cos_pows.append(2 * a - 1)
        const *= 2.0 / epsilon(m + 1)
        offset += 2 * m
        size = m
    # SU(2): sin(2 theta) = 2 sin(theta) cos(theta)
    sin_slots.append(offset + 1)
    sin_pows.append(1)
    cos_slots.append(offset + 1)
    cos_pows.append(1)
    const *= 2.0
    return (np.array(sin_slots, dtype=np.int_), np.array(sin_pows, dtype=np.float64),
            np.array(cos_slots, dtype=np.int_), np.array(cos_pows, dtype=np.float64), const)


def full_density_batch(n: int, angles: np.ndarray) -> np.ndarray:
    """Haar density for a (batch, n*n - 1) array of layout-ordered angles."""
    angles = np.ascontiguousarray(np.atleast_2d(angles), dtype=np.float64)
    if angles.shape[1] != n * n - 1:
        raise ShapeError(f"SU({n}) needs {n * n - 1} angles per row, got {angles.shape[1]}")
    ss, sp, cs, cp, const = _density_program(n)
    return kernels.density_terms(angles, ss, sp, cs, cp, const)


def full_density(coords: EulerCoordinates) -> float:
    """Product of the level densities, the fiber factors 1/eps_{m+1} and the
    SU(2) factor sin(2 theta)."""
    v = 1.0
    c = coords
    while c.n > 2:
        v *= _level_density(c.base_phi) / epsilon(c.n)
        c = c.sub()
    return v * math.sin(2.0 * c.angles[1])


def base_box(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Ranges of the 2N coset angles, ordered theta_1, phi_1, ..., theta_N, phi_N."""
    low, high = slot_ranges(n)
    k = 2 if n == 2 else 2 * (n - 1)
    return low[:k], high[:k]


def base_density_batch(n: int, base_angles: np.ndarray) -> np.ndarray:
    base_angles = np.atleast_2d(np.asarray(base_angles, dtype=np.float64))
    phi = base_angles[:, 1::2]
    N = phi.shape[1]
    v = 2.0 * np.cos(phi[:, -1]) * np.sin(phi[:, -1]) ** (2 * N - 1)
    for a in range(1, N):
        v = v * np.sin(phi[:, a - 1]) * np.cos(phi[:, a - 1]) ** (2 * a - 1)
    return v


# ---------------------------------------------------------------------------
# volumes

def log_volume_closed_form(n: int) -> float:
    """log Vol(SU(n)) for the metric 1/2 Tr(AB), from Vol(SU(2)) = 2 pi^2 and

        Vol(SU(k+1)) = Vol(SU(k)) * 2 pi^(k+1) / k! * sqrt((k+1) / (2k)).
    """
    if n < 2:
        raise DomainError(f"volume needs n >= 2, got {n}")
    lv = math.log(2.0) + 2.0 * math.log(math.pi)
    for k in range(2, n):
        lv += (math.log(2.0) + (k + 1) * math.log(math.pi) - math.lgamma(k + 1)
               + 0.5 * math.log((k + 1) / (2.0 * k)))
    return lv


def volume_closed_form(n: int) -> float:
    return math.exp(log_volume_closed_form(n))


def volume_unitary(k: int) -> float:
    """Vol(U(k)) = Vol(SU(k)) * 2 pi sqrt(k (k+1) / 2) / k, using U(k) = (SU(k) x U(1)) / Z_k."""
    if k == 1:
        return 2.0 * math.pi
    return volume_closed_form(k) * 2.0 * math.pi / (k * epsilon(k + 1))


def volume_from_fibration(n: int) -> float:
    """Vol(SU(n)) = Vol(U(N)) * pi^N / N!, N = n - 1."""
    N = n - 1
    return volume_unitary(N) * math.pi ** N / math.factorial(N)


@dataclass(frozen=True)
class VolumeEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int


def _chunk_stats(fn, low, high, count, seed_seq):
    rng = np.random.Generator(np.random.Philox(seed_seq))
    x = rng.uniform(low, high, size=(count, len(low)))
    v = fn(x)
    mean = float(np.mean(v))
    m2 = float(np.sum((v - mean) ** 2))
    return count, mean, m2


def mc_integrate(fn, low, high, samples: int, seed: int = 0,
                 chunk_size: int = DEFAULT_CHUNK, threads: int | None = None) -> VolumeEstimate:
    """Integrate ``fn`` (vectorized over rows) over a box by uniform sampling.

    Chunk ``i`` draws from substream ``i`` of ``SeedSequence(seed)``; chunk
    statistics are merged in chunk order, so the result depends only on
    (seed, samples, chunk_size).
    """
    if samples < 1:
        raise DomainError("Monte Carlo integration needs samples >= 1")
    low = np.asarray(low, dtype=np.float64)
    high = np.asarray(high, dtype=np.float64)
    box = float(np.prod(high - low))
    nchunks = -(-samples // chunk_size)
    counts = [chunk_size] * (nchunks - 1) + [samples - chunk_size * (nchunks - 1)]
    streams = np.random.SeedSequence(seed).spawn(nchunks)
    threads = threads or threads_from_env()
    jobs = [(fn, low, high, c, s) for c, s in zip(counts, streams)]
    if threads > 1 and nchunks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            stats = list(pool.map(lambda j: _chunk_stats(*j), jobs))
    else:
        stats = [_chunk_stats(*j) for j in jobs]

    total, mean, m2 = 0, 0.0, 0.0
    for cnt, mu, sq in stats:
        new_total = total + cnt
        delta = mu - mean
        mean += delta * cnt / new_total
        m2 += sq + delta * delta * total * cnt / new_total
        total = new_total
    if total > 1:
        stderr = math.sqrt(m2 / (total - 1)) / math.sqrt(total) * box
    else:
        stderr = 0.0
    return VolumeEstimate(mean=mean * box, stderr=stderr, samples=total, seed=seed)


def volume_monte_carlo(n: int, samples: int, seed: int = 0,
                       chunk_size: int = DEFAULT_CHUNK, threads: int | None = None) -> VolumeEstimate:
    """Vol(SU(n)) as box volume times the mean of full_density over the range box."""
    low, high = slot_ranges(n)
    return mc_integrate(lambda x: full_density_batch(n, x), low, high, samples, seed,
                        chunk_size, threads)


def base_volume_monte_carlo(n: int, samples: int, seed: int = 0,
                            chunk_size: int = DEFAULT_CHUNK, threads: int | None = None) -> VolumeEstimate:
    """Integral of base_density over the coset-angle box; equals pi^N / N!."""
    low, high = base_box(n)
    return mc_integrate(lambda x: base_density_batch(n, x), low, high, samples, seed,
                        chunk_size, threads)


# ---------------------------------------------------------------------------
# sampling

def phi_inner_from_uniform(u, a: int):
    """Inverse CDF of the density ~ sin(phi) cos(phi)**(2a-1) on [0, pi/2]."""
    return np.arccos((1.0 - np.asarray(u)) ** (1.0 / (2 * a)))


def phi_top_from_uniform(u, N: int):
    """Inverse CDF of the density ~ cos(phi) sin(phi)**(2N-1) on [0, pi/2]."""
    return np.arcsin(np.asarray(u) ** (1.0 / (2 * N)))


def su2_theta_from_uniform(u):
    """Inverse CDF of the density sin(2 theta) on [0, pi/2]."""
    return 0.5 * np.arccos(1.0 - 2.0 * np.asarray(u))


def phi_inner_cdf(phi, a: int):
    return 1.0 - np.cos(phi) ** (2 * a)


def phi_top_cdf(phi, N: int):
    return np.sin(phi) ** (2 * N)


def su2_theta_cdf(theta):
    return 0.5 * (1.0 - np.cos(2.0 * theta))


@lru_cache(maxsize=None)
def slot_marginals(n: int) -> tuple:
    """Per-slot marginal law of the Haar measure, in layout order.

    Entries are ``("uniform", low, high)``, ``("phi_inner", a)``,
    ``("phi_top", N)`` or ``("su2_theta",)``.
    """
    out = []
    for slot in coordinate_layout(n):
        name = slot.name
        if name == "su2.theta":
            out.append(("su2_theta",))
        elif ".phi" in name and name.startswith("L"):
            level = int(name[1 : name.index(".")])
            a = int(name.split("phi")[1])
            out.append(("phi_top", level) if a == level else ("phi_inner", a))
        else:
            out.append(("uniform", slot.low, slot.high))
    return tuple(out)


def marginal_cdf(law: tuple):
    kind = law[0]
    if kind == "uniform":
        lo, hi = law[1], law[2]
        return lambda x: np.clip((np.asarray(x) - lo) / (hi - lo), 0.0, 1.0)
    if kind == "phi_inner":
        return lambda x: phi_inner_cdf(x, law[1])
    if kind == "phi_top":
        return lambda x: phi_top_cdf(x, law[1])
    return su2_theta_cdf


def sample_haar_angles(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """(count, n*n - 1) array of Haar-distributed Euler angles."""
    u = rng.random((count, n * n - 1))
    out = np.empty_like(u)
    for j, law in enumerate(slot_marginals(n)):
        kind = law[0]
        if kind == "uniform":
            out[:, j] = law[1] + (law[2] - law[1]) * u[:, j]
        elif kind == "phi_inner":
            out[:, j] = phi_inner_from_uniform(u[:, j], law[1])
        elif kind == "phi_top":
            out[:, j] = phi_top_from_uniform(u[:, j], law[1])
        else:
            out[:, j] = su2_theta_from_uniform(u[:, j])
    return out


def sample_haar(n: int, rng: np.random.Generator) -> EulerCoordinates:
    return EulerCoordinates(n, sample_haar_angles(n, 1, rng)[0])


# ---------------------------------------------------------------------------
# independent oracle

def qr_haar_batch(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """Haar SU(n) matrices from QR of complex Ginibre matrices."""
    z = (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    q = q * (d / np.abs(d))[:, None, :]
    det = np.linalg.det(q)
    return q * np.exp(-1j * np.angle(det) / n)[:, None, None]


def qr_haar_oracle(n: int, rng: np.random.Generator) -> SpecialUnitary:
    return SpecialUnitary(n, qr_haar_batch(n, 1, rng)[0])
