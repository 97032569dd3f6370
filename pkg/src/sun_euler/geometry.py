"""Geometry of the fibration SU(N+1) -> CP^N with fiber U(N).

Derivatives of the coset representative ``h`` are central finite differences.
Base coordinates are ordered X = (theta_1, phi_1, ..., theta_N, phi_N); for
SU(2) they are the Euler angles (phi, theta) of ``h = e^{i phi s3} e^{i theta s2}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .algebra import GellMannBasis, epsilon
from .errors import DomainError, ShapeError
from .group import EulerCoordinates, base_program
from .measure import _level_density

DEFAULT_STEP = 1e-5
BOUNDARY_FLAG = 1e-3


@dataclass(frozen=True)
class AlgebraValuedForm:
    """Hermitian coefficient matrices J_c of dX^c, shape (2N, n, n)."""

    components: np.ndarray
    degenerate: bool = False


@dataclass(frozen=True)
class VielbeinFrame:
    """Frame components E[l, c] = 1/2 Tr(J_c lambda_{N^2 + l - 1})."""

    matrix: np.ndarray

    @property
    def N(self) -> int:
        return self.matrix.shape[0] // 2

    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    def density(self) -> float:
        """Determinant with the orientation sign (-1)**(N+1) removed, so that it
        is positive in the interior of the range box."""
        return (-1) ** (self.N + 1) * self.det()


@dataclass(frozen=True)
class MetricTensor:
    components: np.ndarray
    degenerate: bool = False

    @property
    def dim(self) -> int:
        return self.components.shape[0]

    def asymmetry(self) -> float:
        g = self.components
        return float(np.max(np.abs(g - g.T)))

    def min_eigenvalue(self) -> float:
        g = self.components
        return float(np.min(np.linalg.eigvalsh(0.5 * (g + g.T))))


@dataclass(frozen=True)
class FSPoint:
    """Trigonometric coordinates (xi, omega_mu, psi_i) on CP^N."""

    xi: float
    omega: np.ndarray
    psi: np.ndarray

    @property
    def N(self) -> int:
        return len(self.psi)

    @property
    def r(self) -> np.ndarray:
        return r_vector(self.omega)


# ---------------------------------------------------------------------------
# currents and frames

def _level(coords: EulerCoordinates) -> int:
    return coords.n - 1


def _base_angles(coords: EulerCoordinates) -> np.ndarray:
    return coords.angles[: 2 * _level(coords)]


def _near_boundary(coords: EulerCoordinates) -> bool:
    phi = coords.base_phi
    return bool(np.any(phi < BOUNDARY_FLAG) or np.any(phi > math.pi / 2 - BOUNDARY_FLAG))


def _currents(n: int, program: np.ndarray, angles: np.ndarray, ncoords: int,
              step: float) -> np.ndarray:
    """-i h^-1 dh/dX^c for the first ``ncoords`` angles, by central differences."""
    k = ncoords
    shifted = np.repeat(angles[None, :], 2 * k + 1, axis=0)
    idx = np.arange(k)
    shifted[1 + idx, idx] += step
    shifted[1 + k + idx, idx] -= step
    h = kernels.apply_program(np.ascontiguousarray(program),
                              np.ascontiguousarray(shifted), n)
    hinv = h[0].conj().T
    dh = (h[1 : k + 1] - h[k + 1 :]) / (2.0 * step)
    return -1j * np.einsum("ij,cjk->cik", hinv, dh)


def left_current(basis: GellMannBasis, coords: EulerCoordinates,
                 step: float = DEFAULT_STEP) -> AlgebraValuedForm:
    if step <= 0:
        raise DomainError("step must be positive")
    if basis.n != coords.n:
        raise ShapeError(f"basis is su({basis.n}) but coordinates are for SU({coords.n})")
    N = _level(coords)
    j = _currents(coords.n, base_program(coords.n), coords.angles, 2 * N, step)
    return AlgebraValuedForm(j, degenerate=_near_boundary(coords))


def _frame(basis: GellMannBasis, coords: EulerCoordinates, step: float) -> np.ndarray:
    N = _level(coords)
    j = left_current(basis, coords, step).components
    rows = basis.generators[N * N - 1 : N * N - 1 + 2 * N]
    return 0.5 * np.einsum("cij,lji->lc", j, rows).real


def vielbein(basis: GellMannBasis, coords: EulerCoordinates, step: float = DEFAULT_STEP,
             richardson: bool = False) -> VielbeinFrame:
    """Frame of the base space; ``richardson`` combines steps h and h/2."""
    e = _frame(basis, coords, step)
    if richardson:
        e = (4.0 * _frame(basis, coords, step / 2) - e) / 3.0
    return VielbeinFrame(e)


def base_metric(basis: GellMannBasis, coords: EulerCoordinates, step: float = DEFAULT_STEP,
                richardson: bool = True) -> MetricTensor:
    """Induced metric E^T E on the base, in X coordinates."""
    e = vielbein(basis, coords, step, richardson).matrix
    return MetricTensor(e.T @ e, degenerate=_near_boundary(coords))


def measure_closed_form(coords: EulerCoordinates) -> float:
    """Closed-form coset density for the top level of ``coords``."""
    return _level_density(coords.base_phi)


# ---------------------------------------------------------------------------
# Fubini-Study side

def r_vector(omega) -> np.ndarray:
    """Point on the positive orthant of S^{N-1} from N - 1 angles:

    R_1 = sin w_{N-1}, R_k = sin w_{N-k} prod_{i<k} cos w_{N-i}, R_N = prod cos w_{N-i}.
    """
    omega = np.asarray(omega, dtype=np.float64)
    N = len(omega) + 1
    r = np.empty(N)
    p = 1.0
    for k in range(1, N):
        w = omega[N - k - 1]
        r[k - 1] = math.sin(w) * p
        p *= math.cos(w)
    r[N - 1] = p
    return r


def r_vector_jacobian(omega) -> np.ndarray:
    """dR_k / d omega_mu, shape (N, N-1)."""
    omega = np.asarray(omega, dtype=np.float64)
    N = len(omega) + 1
    jac = np.zeros((N, N - 1))
    s = np.sin(omega)
    c = np.cos(omega)
    for k in range(1, N + 1):
        # factors of R_k by angle index (0-based into omega)
        factors = {N - i - 1: ("cos", c[N - i - 1]) for i in range(1, k)}
        if k < N:
            factors[N - k - 1] = ("sin", s[N - k - 1])
        for mu in factors:
            prod = 1.0
            for nu, (kind, val) in factors.items():
                if nu == mu:
                    prod *= c[nu] if kind == "sin" else -s[nu]
                else:
                    prod *= val
            jac[k - 1, mu] = prod
    return jac


def sphere_metric_recursive(omega) -> np.ndarray:
    """Round metric on the orthant as the diagonal recursion
    S_N = d w_{N-1}^2 + cos^2 w_{N-1} S_{N-1}, with S_1 = 0."""
    omega = np.asarray(omega, dtype=np.float64)
    N = len(omega) + 1
    g = np.zeros((N - 1, N - 1))
    scale = 1.0
    for j in range(N - 1, 0, -1):
        g[j - 1, j - 1] = scale
        scale *= math.cos(omega[j - 1]) ** 2
    return g


def fubini_study_metric(point: FSPoint) -> MetricTensor:
    """ds^2 = dxi^2 + sin^2 xi [dR.dR + sum R_i^2 dpsi_i^2] - sin^4 xi [sum R_i^2 dpsi_i]^2

    in coordinates ordered (xi, omega_1..omega_{N-1}, psi_1..psi_N).
    """
    N = point.N
    r2 = point.r ** 2
    dr = r_vector_jacobian(point.omega)
    s2 = math.sin(point.xi) ** 2
    g = np.zeros((2 * N, 2 * N))
    g[0, 0] = 1.0
    g[1:N, 1:N] = s2 * dr.T @ dr
    g[N:, N:] = s2 * np.diag(r2) - s2 * s2 * np.outer(r2, r2)
    degenerate = point.xi <= 0.0 or point.xi >= math.pi / 2
    return MetricTensor(g, degenerate=bool(degenerate))


def theta_tilde_matrix(N: int) -> np.ndarray:
    """Integer matrix T with theta_tilde = T @ theta (both 0-based vectors).

    theta_tilde_N = theta_N, theta_tilde_{N-k} = theta_{N-k} + theta_tilde_{N-k+1}
    down to index 3, then theta_tilde_1 = theta_1 + theta_2 + theta_tilde_3 and
    theta_tilde_2 = theta_2 - theta_1 + theta_tilde_3 (theta_tilde_3 = 0 for N = 2).
    """
    if N < 2:
        raise DomainError("theta_tilde needs N >= 2")
    t = np.zeros((N, N))
    t3 = np.zeros(N)
    if N >= 3:
        t[N - 1, N - 1] = 1.0
        for k in range(1, N - 2):
            t[N - k - 1] = t[N - k]
            t[N - k - 1, N - k - 1] += 1.0
        t3 = t[2].copy()
    t[0] = t3
    t[0, 0] += 1.0
    t[0, 1] += 1.0
    t[1] = t3
    t[1, 0] -= 1.0
    t[1, 1] += 1.0
    return t


def theta_from_tilde(tilde) -> np.ndarray:
    """Inverse of the affine map theta -> theta_tilde, from the forward relations."""
    tilde = np.asarray(tilde, dtype=np.float64)
    N = len(tilde)
    theta = np.zeros(N)
    t3 = tilde[2] if N >= 3 else 0.0
    if N >= 3:
        theta[N - 1] = tilde[N - 1]
        for k in range(1, N - 2):
            theta[N - k - 1] = tilde[N - k - 1] - tilde[N - k]
    # theta_1 + theta_2 = tt_1 - tt_3, theta_1 - theta_2 = tt_3 - tt_2
    plus = tilde[0] - t3
    minus = t3 - tilde[1]
    theta[0] = 0.5 * (plus + minus)
    theta[1] = 0.5 * (plus - minus)
    return theta


def coordinate_jacobian(N: int) -> np.ndarray:
    """d(xi, omega, psi) / d(theta_1, phi_1, ..., theta_N, phi_N)."""
    a = np.zeros((2 * N, 2 * N))
    a[0, 2 * N - 1] = 1.0
    if N == 1:
        # Hopf case: psi = 2 * (SU(2) phi)
        a[1, 0] = 2.0
        return a
    for mu in range(1, N):
        a[mu, 2 * mu - 1] = 1.0
    t = theta_tilde_matrix(N)
    for i in range(1, N + 1):
        a[N + i - 1, 0::2] = t[N - i]
    return a


def coordinate_map(coords: EulerCoordinates) -> FSPoint:
    """xi = phi_N, omega_mu = phi_mu, psi_i = theta_tilde_{N-i+1}."""
    N = _level(coords)
    theta = np.asarray(coords.base_theta)
    phi = np.asarray(coords.base_phi)
    if N == 1:
        return FSPoint(float(phi[0]), np.zeros(0), np.array([2.0 * theta[0]]))
    tilde = theta_tilde_matrix(N) @ theta
    return FSPoint(float(phi[-1]), phi[:-1].copy(), tilde[::-1].copy())


def pulled_back_fubini_study(coords: EulerCoordinates) -> MetricTensor:
    a = coordinate_jacobian(_level(coords))
    fs = fubini_study_metric(coordinate_map(coords))
    return MetricTensor(a.T @ fs.components @ a, degenerate=fs.degenerate)


def verify_metric_equality(basis: GellMannBasis, coords: EulerCoordinates,
                           step: float = DEFAULT_STEP) -> float:
    """Max |base_metric - pulled-back Fubini-Study| over all components."""
    g = base_metric(basis, coords, step).components
    f = pulled_back_fubini_study(coords).components
    return float(np.max(np.abs(g - f)))


# ---------------------------------------------------------------------------
# the one-form X_N

def x_n(basis: GellMannBasis, coords: EulerCoordinates, step: float = DEFAULT_STEP) -> np.ndarray:
    """Components of X_N = 1/2 sum_{a=2}^N Tr[J_{h_N} eps_a lambda_{a^2-1}], N = n - 1.

    h_N is built from the first N - 1 coset pairs of the top level.  The result
    has length 2N in X order; the (theta_N, phi_N) entries are zero.
    """
    n = coords.n
    N = n - 1
    if N < 2:
        raise DomainError("X_N needs n >= 3")
    angles = coords.angles
    program = base_program(n)[: 2 * (N - 1)]
    j = _currents(n, program, angles, 2 * (N - 1), step)
    op = sum(epsilon(a) * basis[a * a - 1] for a in range(2, N + 1))
    out = np.zeros(2 * N)
    out[: 2 * (N - 1)] = 0.5 * np.einsum("cij,ji->c", j, op).real
    return out


def x_n_closed_form(theta, phi) -> np.ndarray:
    """X_N from the unrolled recursion, with X_2 = cos(2 phi_1) d theta_1.

    ``theta`` and ``phi`` are the N coset angles; returns 2N components.
    """
    phi = np.asarray(phi, dtype=np.float64)
    N = len(phi)
    out = np.zeros(2 * N)
    if N < 2:
        raise DomainError("X_N needs N >= 2")
    # X_2 = cos(2 phi_1) dtheta_1;  X_k = cos^2 phi_{k-1} (dtheta_{k-1} + X_{k-1})
    out[0] = math.cos(2 * phi[0])
    for k in range(3, N + 1):
        out[2 * (k - 2)] += 1.0
        out *= math.cos(phi[k - 2]) ** 2
    return out
