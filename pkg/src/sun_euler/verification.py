"""Invariant suites run by ``sun-euler verify`` and the acceptance tests."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from . import geometry, measure
from .algebra import build_basis, verify_identities
from .group import (
    EulerCoordinates,
    build_elements,
    coordinate_layout,
    current_jacobian,
    random_coordinates,
    tangent_rank,
)

SUITES = ("commutators", "measure", "metric", "haar", "volume")
INTERIOR_MARGIN = 0.05


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status}  {self.name:<58} {self.value:.3e}  (tol {self.tolerance:.1e})"


def _le(name: str, value: float, tol: float) -> Check:
    return Check(name, float(value), tol, bool(value <= tol))


def _ge(name: str, value: float, tol: float) -> Check:
    """Passes when ``value`` is at least ``tol`` (used for p-values)."""
    return Check(name, float(value), tol, bool(value >= tol))


# ---------------------------------------------------------------------------
# statistics shared with the acceptance tests

def basis_orthonormality_error(n: int) -> float:
    g = build_basis(n).generators
    gram = np.einsum("aij,bji->ab", g, g)
    herm = np.max(np.abs(g - np.conj(np.transpose(g, (0, 2, 1)))))
    trace = np.max(np.abs(np.einsum("aii->a", g)))
    return float(max(np.max(np.abs(gram - 2 * np.eye(len(g)))), herm, trace))


def trace_moment(mats: np.ndarray) -> tuple[float, float]:
    """Mean of |Tr U|^2 and its standard error."""
    t = np.abs(np.trace(mats, axis1=1, axis2=2)) ** 2
    return float(t.mean()), float(t.std(ddof=1) / math.sqrt(len(t)))


def first_spacing(mats: np.ndarray) -> np.ndarray:
    """Gap between the two smallest eigenphases in [-pi, pi), one per matrix,
    so that the entries are independent."""
    ph = np.sort(np.angle(np.linalg.eigvals(mats)), axis=1)
    return ph[:, 1] - ph[:, 0]


def spacing_chi2(a: np.ndarray, b: np.ndarray, bins: int = 20) -> float:
    """p-value of a chi-square homogeneity test on equal-probability bins."""
    edges = np.quantile(np.concatenate([a, b]), np.linspace(0.0, 1.0, bins + 1))
    edges[0], edges[-1] = -np.inf, np.inf
    ca, _ = np.histogram(a, edges)
    cb, _ = np.histogram(b, edges)
    return float(stats.chi2_contingency(np.vstack([ca, cb]))[1])


def marginal_ks(n: int, angles: np.ndarray) -> list[tuple[str, float, float]]:
    """(slot, KS statistic, p-value) of every angle column against its analytic CDF."""
    out = []
    for j, (slot, law) in enumerate(zip(coordinate_layout(n), measure.slot_marginals(n))):
        res = stats.kstest(angles[:, j], measure.marginal_cdf(law))
        out.append((slot.name, float(res.statistic), float(res.pvalue)))
    return out


def haar_comparison(n: int, count: int, seed: int) -> dict:
    """Compare the Euler sampler with the QR oracle on |Tr U|^2 and spacings."""
    rng_euler, rng_qr = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))
    euler = build_elements(n, measure.sample_haar_angles(n, count, rng_euler))
    oracle = measure.qr_haar_batch(n, count, rng_qr)
    ma, sa = trace_moment(euler)
    mb, sb = trace_moment(oracle)
    return {
        "trace_euler": ma,
        "trace_oracle": mb,
        "trace_z": abs(ma - mb) / math.hypot(sa, sb),
        "spacing_p": spacing_chi2(first_spacing(euler), first_spacing(oracle)),
    }


def interior_points(n: int, count: int, seed: int) -> list[EulerCoordinates]:
    rng = np.random.default_rng(seed)
    return [EulerCoordinates(n, random_coordinates(n, rng, INTERIOR_MARGIN)) for _ in range(count)]


# ---------------------------------------------------------------------------
# suites

def suite_commutators(n: int, samples: int, seed: int) -> list[Check]:
    checks = [_le(f"basis orthonormality su({n})", basis_orthonormality_error(n), 1e-12)]
    if n >= 3:
        checks += [_le(name, dev, 1e-12) for name, dev in verify_identities(n)]
    return checks


def suite_measure(n: int, samples: int, seed: int) -> list[Check]:
    checks = []
    pts = interior_points(n, 10, seed)
    basis = build_basis(n)
    rel = 0.0
    for c in pts:
        det = abs(np.linalg.det(current_jacobian(basis, c)))
        rel = max(rel, abs(det / measure.full_density(c) - 1.0))
    checks.append(_le("full_density vs |det current Jacobian| (rel)", rel, 1e-6))
    rng = np.random.default_rng(seed)
    ang = random_coordinates(n, rng, 0.0, size=1000)
    checks.append(_ge("full_density >= 0 on the range box",
                      float(np.min(measure.full_density_batch(n, ang))), 0.0))
    if n >= 3:
        N = n - 1
        spread = 0.0
        for c in pts:
            ref = measure.base_density(n, c.base_theta, c.base_phi)
            other = measure.base_density(n, rng.uniform(0, 2 * math.pi, N), c.base_phi)
            spread = max(spread, abs(ref - other))
        checks.append(_le("base_density independent of theta", spread, 0.0))
        est = measure.base_volume_monte_carlo(n, samples, seed)
        want = math.pi ** N / math.factorial(N)
        checks.append(_le(f"MC base volume vs pi^{N}/{N}! (sigmas)",
                          abs(est.mean - want) / est.stderr, 3.0))
    return checks


def suite_metric(n: int, samples: int, seed: int) -> list[Check]:
    basis = build_basis(n)
    count = max(1, min(samples, 20))
    pts = interior_points(n, count, seed)
    dev = max(geometry.verify_metric_equality(basis, c) for c in pts)
    checks = [_le("base metric vs pulled-back Fubini-Study", dev, 1e-6)]
    rel = max(abs(geometry.vielbein(basis, c).density() / geometry.measure_closed_form(c) - 1.0)
              for c in pts)
    checks.append(_le("vielbein determinant vs closed form (rel)", rel, 1e-6))
    if n >= 3:
        xdev = max(float(np.max(np.abs(geometry.x_n(basis, c)
                                       - geometry.x_n_closed_form(c.base_theta, c.base_phi))))
                   for c in pts)
        checks.append(_le("X_N vs recursion", xdev, 1e-8))
    return checks


def suite_haar(n: int, samples: int, seed: int) -> list[Check]:
    rng = np.random.default_rng(seed)
    angles = measure.sample_haar_angles(n, samples, rng)
    checks = [_ge(f"KS {name} (p-value)", p, 0.01) for name, _, p in marginal_ks(n, angles)]
    cmp = haar_comparison(n, samples, seed + 1)
    checks.append(_le("E|Tr U|^2 Euler vs QR (combined sigmas)", cmp["trace_z"], 3.0))
    checks.append(_ge("eigenphase spacing chi2 (p-value)", cmp["spacing_p"], 0.01))
    ranks = [tangent_rank(build_basis(n), c) for c in interior_points(n, 5, seed)]
    checks.append(_le("tangent rank deficit", n * n - 1 - min(ranks), 0))
    return checks


def suite_volume(n: int, samples: int, seed: int) -> list[Check]:
    est = measure.volume_monte_carlo(n, samples, seed)
    closed = measure.volume_closed_form(n)
    checks = [_le("MC volume vs closed form (sigmas)", abs(est.mean - closed) / est.stderr, 3.0)]
    fib = measure.volume_from_fibration(n)
    checks.append(_le("closed form vs Vol(U(N)) pi^N/N! (rel)", abs(fib / closed - 1.0), 1e-10))
    return checks


_SUITES = {
    "commutators": suite_commutators,
    "measure": suite_measure,
    "metric": suite_metric,
    "haar": suite_haar,
    "volume": suite_volume,
}


def run_suite(name: str, n: int, samples: int = 100_000, seed: int = 0) -> list[Check]:
    return _SUITES[name](n, samples, seed)
