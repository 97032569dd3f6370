"""Euler coordinates on SU(n) and assembly of group elements.

An element of SU(N+1) is written as a coset representative ``h`` depending on
2N base angles (theta_a, phi_a), times an embedded U(N) = SU(N) x U(1) fiber
element.  The SU(N) factor recurses down to the SU(2) triple (phi, theta, psi).

Flat layout for SU(n), level m = n - 1::

    theta_1, phi_1, ..., theta_m, phi_m, <layout of SU(m)>, omega_m
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from ._fallback import DIAG, ROT
from .algebra import GellMannBasis, build_basis, classify
from .errors import DomainError, PreconditionError, ShapeError, ValidationError

TWO_PI = 2.0 * math.pi


class Slot(NamedTuple):
    name: str
    low: float
    high: float


def coordinate_layout(n: int) -> list[Slot]:
    """Ordered angle slots of SU(n) with their ranges."""
    if n < 2:
        raise DomainError(f"SU(n) requires n >= 2, got {n}")
    if n == 2:
        return [
            Slot("su2.phi", 0.0, math.pi),
            Slot("su2.theta", 0.0, math.pi / 2),
            Slot("su2.psi", 0.0, TWO_PI),
        ]
    m = n - 1
    slots = []
    for a in range(1, m + 1):
        slots.append(Slot(f"L{m}.theta{a}", 0.0, math.pi if a == 1 else TWO_PI))
        slots.append(Slot(f"L{m}.phi{a}", 0.0, math.pi / 2))
    slots.extend(coordinate_layout(m))
    slots.append(Slot(f"L{m}.omega", 0.0, TWO_PI / m))
    return slots


@lru_cache(maxsize=None)
def _ranges(n: int) -> tuple[np.ndarray, np.ndarray]:
    slots = coordinate_layout(n)
    low = np.array([s.low for s in slots])
    high = np.array([s.high for s in slots])
    low.setflags(write=False)
    high.setflags(write=False)
    return low, high


def slot_ranges(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Arrays of lower and upper bounds in layout order."""
    return _ranges(n)


class Level(NamedTuple):
    m: int
    theta: tuple
    phi: tuple
    omega: float


@dataclass(frozen=True)
class EulerCoordinates:
    """Angles of one SU(n) element, stored flat in layout order."""

    n: int
    angles: np.ndarray

    def __post_init__(self):
        a = np.array(self.angles, dtype=np.float64).reshape(-1)
        if self.n < 2:
            raise DomainError(f"SU(n) requires n >= 2, got {self.n}")
        if a.size != self.n * self.n - 1:
            raise ShapeError(f"SU({self.n}) needs {self.n * self.n - 1} angles, got {a.size}")
        a.setflags(write=False)
        object.__setattr__(self, "angles", a)

    @classmethod
    def zeros(cls, n: int) -> "EulerCoordinates":
        return cls(n, np.zeros(n * n - 1))

    @property
    def base_theta(self) -> np.ndarray:
        """theta_1..theta_m of the top level (for n = 2: the SU(2) phi)."""
        if self.n == 2:
            return self.angles[0:1]
        return self.angles[0 : 2 * (self.n - 1) : 2]

    @property
    def base_phi(self) -> np.ndarray:
        if self.n == 2:
            return self.angles[1:2]
        return self.angles[1 : 2 * (self.n - 1) : 2]

    @property
    def omega(self) -> float:
        if self.n == 2:
            raise AttributeError("SU(2) has no fiber phase")
        return float(self.angles[-1])

    def sub(self) -> "EulerCoordinates":
        """Coordinates of the embedded SU(n-1) factor."""
        if self.n == 2:
            raise DomainError("SU(2) has no sub-level")
        m = self.n - 1
        return EulerCoordinates(m, self.angles[2 * m : 2 * m + m * m - 1])

    @property
    def levels(self) -> list[Level]:
        out = []
        c = self
        while c.n > 2:
            out.append(Level(c.n - 1, tuple(c.base_theta), tuple(c.base_phi), c.omega))
            c = c.sub()
        return out

    @property
    def su2(self) -> tuple[float, float, float]:
        c = self
        while c.n > 2:
            c = c.sub()
        return tuple(float(v) for v in c.angles)

    def with_angles(self, angles) -> "EulerCoordinates":
        return EulerCoordinates(self.n, angles)


def validate_coordinates(coords: EulerCoordinates, closed: bool = True) -> None:
    """Raise ValidationError naming the first slot outside its range.

    With ``closed=False`` the ranges are treated as open intervals.
    """
    for slot, x in zip(coordinate_layout(coords.n), coords.angles.tolist()):
        if not math.isfinite(x):
            raise ValidationError(f"slot {slot.name} is not finite: {x}", slot.name)
        inside = slot.low <= x <= slot.high if closed else slot.low < x < slot.high
        if not inside:
            raise ValidationError(
                f"slot {slot.name} = {x!r} outside [{slot.low!r}, {slot.high!r}]", slot.name
            )


@dataclass(frozen=True)
class SpecialUnitary:
    n: int
    entries: np.ndarray

    def unitarity_error(self) -> float:
        u = self.entries
        return float(np.max(np.abs(u.conj().T @ u - np.eye(self.n))))

    def det_error(self) -> float:
        return float(abs(np.linalg.det(self.entries) - 1.0))

    def is_valid(self, tol: float = 1e-10) -> bool:
        return self.unitarity_error() <= tol and self.det_error() <= tol


# ---------------------------------------------------------------------------
# factor programs

def _program_rows(n: int, offset: int = 0) -> list[tuple[int, int, int, int]]:
    if n == 2:
        return [(DIAG, 1, 0, offset), (ROT, 0, 1, offset + 1), (DIAG, 1, 0, offset + 2)]
    m = n - 1
    rows = [(DIAG, 1, 0, offset), (ROT, 0, 1, offset + 1)]
    for a in range(2, m + 1):
        # exp(i theta_a/eps_a lambda_{a^2-1}), exp(i phi_a lambda_{a^2+1})
        rows.append((DIAG, a - 1, 0, offset + 2 * a - 2))
        rows.append((ROT, 0, a, offset + 2 * a - 1))
    rows.extend(_program_rows(m, offset + 2 * m))
    rows.append((DIAG, m, 0, offset + 2 * m + m * m - 1))
    return rows


@lru_cache(maxsize=None)
def element_program(n: int) -> np.ndarray:
    """Factor program (kind, a, b, slot) producing the full element of SU(n)."""
    p = np.array(_program_rows(n), dtype=np.int_)
    p.setflags(write=False)
    return p


@lru_cache(maxsize=None)
def base_program(n: int) -> np.ndarray:
    """Program for the coset representative h only."""
    k = 2 if n == 2 else 2 * (n - 1)
    return element_program(n)[:k]


def build_elements(n: int, angles: np.ndarray) -> np.ndarray:
    """Batch version of build_element: ``angles`` is (batch, n*n - 1)."""
    angles = np.ascontiguousarray(np.atleast_2d(angles), dtype=np.float64)
    if angles.shape[1] != n * n - 1:
        raise ShapeError(f"SU({n}) needs {n * n - 1} angles per row, got {angles.shape[1]}")
    return kernels.apply_program(np.ascontiguousarray(element_program(n)), angles, n)


def build_base_points(n: int, angles: np.ndarray) -> np.ndarray:
    angles = np.ascontiguousarray(np.atleast_2d(angles), dtype=np.float64)
    if angles.shape[1] != n * n - 1:
        raise ShapeError(f"SU({n}) needs {n * n - 1} angles per row, got {angles.shape[1]}")
    return kernels.apply_program(np.ascontiguousarray(base_program(n)), angles, n)


def _check(basis: GellMannBasis, coords: EulerCoordinates) -> None:
    if basis.n != coords.n:
        raise ShapeError(f"basis is su({basis.n}) but coordinates are for SU({coords.n})")


def build_element(basis: GellMannBasis, coords: EulerCoordinates) -> SpecialUnitary:
    _check(basis, coords)
    return SpecialUnitary(coords.n, build_elements(coords.n, coords.angles)[0])


def build_base_point(basis: GellMannBasis, coords: EulerCoordinates) -> SpecialUnitary:
    _check(basis, coords)
    return SpecialUnitary(coords.n, build_base_points(coords.n, coords.angles)[0])


def fiber_element(basis: GellMannBasis, coords: EulerCoordinates) -> SpecialUnitary:
    """The embedded U(n-1) factor, so that element = base_point @ fiber."""
    _check(basis, coords)
    n = coords.n
    if n == 2:
        return SpecialUnitary(2, exp_generator(basis, 3, coords.angles[2]).entries)
    sub = coords.sub()
    u = np.eye(n, dtype=np.complex128)
    u[: n - 1, : n - 1] = build_elements(n - 1, sub.angles)[0]
    m = n - 1
    phase = np.full(n, np.exp(1j * coords.omega))
    phase[m] = np.exp(-1j * m * coords.omega)
    return SpecialUnitary(n, u * phase[None, :])


# ---------------------------------------------------------------------------
# one-parameter subgroups

def exp_hermitian(m: np.ndarray, x: float) -> np.ndarray:
    """exp(i x m) for Hermitian ``m`` by eigendecomposition."""
    w, v = np.linalg.eigh(m)
    return (v * np.exp(1j * x * w)) @ v.conj().T


def exp_generator(basis: GellMannBasis, index: int, x: float,
                  method: str = "closed") -> SpecialUnitary:
    """exp(i x lambda_index).

    Diagonal generators exponentiate entrywise and pair generators to a 2x2
    block; ``method="eig"`` forces the eigendecomposition route.
    """
    n = basis.n
    if not 1 <= index <= basis.dim:
        raise DomainError(f"generator index {index} outside 1..{basis.dim}")
    if method == "eig":
        return SpecialUnitary(n, exp_hermitian(basis[index], x))
    kind = classify(index)
    if kind[0] == "diag":
        d = np.diag(basis[index]).real
        return SpecialUnitary(n, np.diag(np.exp(1j * x * d)))
    if kind[0] in ("sym", "asym"):
        _, p, q = kind
        u = np.eye(n, dtype=np.complex128)
        c, s = math.cos(x), math.sin(x)
        u[p, p] = u[q, q] = c
        if kind[0] == "sym":
            u[p, q] = u[q, p] = 1j * s
        else:
            u[p, q] = s
            u[q, p] = -s
        return SpecialUnitary(n, u)
    return SpecialUnitary(n, exp_hermitian(basis[index], x))


# ---------------------------------------------------------------------------
# tangent map

def current_jacobian(basis: GellMannBasis, coords: EulerCoordinates,
                     step: float = 1e-5) -> np.ndarray:
    """Real (n^2-1) x (n^2-1) matrix of 1/2 Tr(-i g^-1 d_c g lambda_I).

    Rows index generators, columns index layout slots; derivatives are
    central differences.
    """
    _check(basis, coords)
    n, d = coords.n, coords.n * coords.n - 1
    x0 = coords.angles
    shifts = np.repeat(x0[None, :], 2 * d + 1, axis=0)
    idx = np.arange(d)
    shifts[1 + idx, idx] += step
    shifts[1 + d + idx, idx] -= step
    g = build_elements(n, shifts)
    ginv = g[0].conj().T
    dg = (g[1 : d + 1] - g[d + 1 :]) / (2 * step)
    currents = -1j * np.einsum("ij,cjk->cik", ginv, dg)
    return 0.5 * np.einsum("cij,Iji->Ic", currents, basis.generators).real


def tangent_rank(basis: GellMannBasis, coords: EulerCoordinates, step: float = 1e-5) -> int:
    """Numerical rank of the current Jacobian; requires a strictly interior point."""
    try:
        validate_coordinates(coords, closed=False)
    except ValidationError as exc:
        raise PreconditionError(f"tangent_rank needs an interior point: {exc}") from exc
    sv = np.linalg.svd(current_jacobian(basis, coords, step), compute_uv=False)
    return int(np.sum(sv > 1e-6 * sv[0]))


def random_coordinates(n: int, rng: np.random.Generator, margin: float = 0.0,
                       size: int | None = None) -> np.ndarray:
    """Uniform angles in the range box, shrunk by ``margin`` on every side."""
    low, high = slot_ranges(n)
    shape = (n * n - 1,) if size is None else (size, n * n - 1)
    return rng.uniform(low + margin, high - margin, size=shape)


def as_coordinates(n: int, angles: Sequence[float]) -> EulerCoordinates:
    return EulerCoordinates(n, np.asarray(angles, dtype=np.float64))


def default_basis(n: int) -> GellMannBasis:
    return build_basis(n)
