"""Generalized Gell-Mann basis for su(n) and its commutator identities.

Generators are numbered from 1 to n**2 - 1.  The basis for su(N+1) is built
from the one for su(N) by zero padding, then appending the 2N off-diagonal
pair generators coupling row ``a`` with row ``N+1`` and finally one diagonal
generator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DomainError, ShapeError

# n**4 complex entries are stored; 64**4 * 16 bytes is about 270 MB.
MAX_N = 64


def epsilon(k: int) -> float:
    """Normalization of the k-th diagonal generator, sqrt(2 / (k (k - 1)))."""
    if k < 2:
        raise DomainError(f"epsilon(k) requires k >= 2, got {k}")
    return math.sqrt(2.0 / (k * (k - 1)))


def diagonal_index(k: int) -> int:
    """1-based index of the diagonal generator introduced at su(k)."""
    return k * k - 1


def pair_indices(level: int, a: int) -> tuple[int, int]:
    """Indices (symmetric, antisymmetric) of the pair generators joining
    row ``a`` with row ``level + 1`` (both 1-based)."""
    return level * level + 2 * a - 2, level * level + 2 * a - 1


def classify(index: int) -> tuple:
    """Describe generator ``index`` structurally.

    Returns ``("diag", k)`` for the diagonal generator of su(k), or
    ``("sym", p, q)`` / ``("asym", p, q)`` for a pair generator acting on the
    0-based rows ``p < q``.
    """
    if index < 1:
        raise DomainError(f"generator index must be >= 1, got {index}")
    k = math.isqrt(index + 1)
    if k * k == index + 1:
        return ("diag", k)
    level = math.isqrt(index)
    offset = index - level * level
    a = offset // 2 + 1
    kind = "sym" if offset % 2 == 0 else "asym"
    return (kind, a - 1, level)


@dataclass(frozen=True)
class GellMannBasis:
    """Ordered generalized Gell-Mann generators of su(n).

    ``basis[I]`` returns lambda_I with the 1-based numbering; the raw stack in
    ``generators`` is 0-based (``generators[I - 1]``).
    """

    n: int
    generators: np.ndarray = field(repr=False)
    epsilons: tuple[float, ...] = field(repr=False)

    def __getitem__(self, index: int) -> np.ndarray:
        if not 1 <= index <= self.dim:
            raise DomainError(f"generator index {index} outside 1..{self.dim}")
        return self.generators[index - 1]

    def __len__(self) -> int:
        return self.dim

    @property
    def dim(self) -> int:
        return self.n * self.n - 1

    def eps(self, k: int) -> float:
        return self.epsilons[k - 2]

    def components(self, m: np.ndarray) -> np.ndarray:
        """Real coordinates 1/2 Tr(m lambda_I) of a Hermitian matrix."""
        return 0.5 * np.einsum("ij,kji->k", m, self.generators).real

    def to_json(self) -> dict:
        from .io import matrix_to_pairs

        return {"n": self.n, "generators": [matrix_to_pairs(g) for g in self.generators]}


def _build_generators(n: int) -> np.ndarray:
    gens = np.zeros((n * n - 1, n, n), dtype=np.complex128)
    for level in range(1, n):
        # level N: extend su(N) to su(N+1); new row/column index is N (0-based)
        for a in range(1, level + 1):
            s, t = pair_indices(level, a)
            gens[s - 1, a - 1, level] = 1.0
            gens[s - 1, level, a - 1] = 1.0
            gens[t - 1, a - 1, level] = -1j
            gens[t - 1, level, a - 1] = 1j
        d = np.zeros(n)
        d[:level] = 1.0
        d[level] = -level
        gens[diagonal_index(level + 1) - 1] = np.diag(epsilon(level + 1) * d)
    gens.setflags(write=False)
    return gens


@lru_cache(maxsize=None)
def build_basis(n: int) -> GellMannBasis:
    if n < 2:
        raise DomainError(f"su(n) basis requires n >= 2, got {n}")
    if n > MAX_N:
        raise CapacityError(f"n = {n} exceeds the supported maximum {MAX_N}")
    eps = tuple(epsilon(k) for k in range(2, n + 1))
    return GellMannBasis(n=n, generators=_build_generators(n), epsilons=eps)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape != b.shape:
        raise ShapeError(f"commutator needs equal square matrices, got {a.shape} and {b.shape}")
    return a @ b - b @ a


def _conj(basis: GellMannBasis, index: int, x: float) -> tuple[np.ndarray, np.ndarray]:
    """Return (exp(i x lambda), exp(-i x lambda)) for one generator."""
    from .group import exp_generator

    u = exp_generator(basis, index, x).entries
    return u, u.conj().T


# Sample points for the x-dependent identities; |sin x| > 0.1 on all of them.
IDENTITY_SAMPLE_X = (0.11, 0.3, 0.52, 0.7, 0.85, 1.0, 1.2, 1.35, 1.47)


def verify_identities(n: int, xs=IDENTITY_SAMPLE_X) -> list[tuple[str, float]]:
    """Evaluate the commutator, conjugation, scalar and trace relations of the
    su(N+1) basis with N = n - 1.

    Returns ``(name, max_abs_deviation)`` pairs.  x-dependent relations are
    sampled at every x in ``xs``; points with |sin x| <= 0.1 are skipped
    because the conjugation relations divide by sin x.
    """
    if n < 3:
        raise DomainError(f"identity suite requires n >= 3, got {n}")
    basis = build_basis(n)
    N = n - 1
    lam = basis.__getitem__
    eps = epsilon
    top = lam(N * N + 1)
    xs = [x for x in xs if abs(math.sin(x)) > 0.1]
    dev: dict[str, float] = {}

    def record(name: str, value: float) -> None:
        dev[name] = max(dev.get(name, 0.0), float(value))

    def maxabs(m) -> float:
        return float(np.max(np.abs(m)))

    for j in range(1, N):
        record("[l_N2+1, l_N2+2j] = -i l_j2",
               maxabs(commutator(top, lam(N * N + 2 * j)) + 1j * lam(j * j)))
        record("[l_N2+1, l_N2+2j+1] = i l_j2+1",
               maxabs(commutator(top, lam(N * N + 2 * j + 1)) - 1j * lam(j * j + 1)))

    rhs = -1j * (N + 1) * eps(N + 1) * lam((N + 1) ** 2 - 1)
    rhs = rhs - 1j * sum(eps(a) * lam(a * a - 1) for a in range(2, N + 1))
    record("[l_N2+1, l_N2]", maxabs(commutator(top, lam(N * N)) - rhs))
    # a = 1 would reference lambda_0, which does not exist
    for a in range(2, N + 1):
        record("[l_N2+1, l_a2-1] = i eps_a l_N2",
               maxabs(commutator(top, lam(a * a - 1)) - 1j * eps(a) * lam(N * N)))
    record("[l_N2+1, l_(N+1)2-1] = i (N+1) eps_N+1 l_N2",
           maxabs(commutator(top, lam((N + 1) ** 2 - 1))
                  - 1j * (N + 1) * eps(N + 1) * lam(N * N)))
    record("[l_N2+1, [l_N2+1, l_N2]] = 4 l_N2",
           maxabs(commutator(top, commutator(top, lam(N * N))) - 4 * lam(N * N)))

    s4 = sum(eps(a) ** 2 for a in range(2, N + 1)) + (N + 1) ** 2 * eps(N + 1) ** 2
    s2 = sum(eps(a) ** 2 for a in range(2, N + 1)) + (N + 1) * eps(N + 1) ** 2
    record("sum eps_a^2 + (N+1)^2 eps_N+1^2 = 4", abs(s4 - 4.0))
    record("sum eps_a^2 + (N+1) eps_N+1^2 = 2", abs(s2 - 2.0))

    rows = basis.generators[: N * N - 1]
    for x in xs:
        u, ui = _conj(basis, N * N + 1, x)
        s, t = math.sin(x), math.tan(x)
        for j in range(1, N):
            b_odd = lam(N * N + 2 * j + 1)
            b_even = lam(N * N + 2 * j)
            lhs = u @ lam(j * j + 1) @ ui
            rhs = b_odd / s - (u @ b_odd @ ui) / t
            record("conjugation of l_j2+1", maxabs(lhs - rhs))
            lhs = u @ lam(j * j) @ ui
            rhs = -b_even / s + (u @ b_even @ ui) / t
            record("conjugation of l_j2", maxabs(lhs - rhs))

        # Tr[e^{-ix l} l_N2-1 e^{ix l} l_N2+I] = eps_N delta_I0 sin 2x, I = 0..2N-1
        rot = ui @ lam(N * N - 1) @ u
        for i in range(2 * N):
            val = np.trace(rot @ lam(N * N + i))
            want = eps(N) * math.sin(2 * x) if i == 0 else 0.0
            record("Tr[rot(l_N2-1) l_N2+I]", abs(val - want))

        for i in range(1, N):
            conj_s = u @ lam(N * N + 2 * i) @ ui
            conj_a = u @ lam(N * N + 2 * i + 1) @ ui
            proj_s = 0.5 * np.einsum("kij,ji->k", rows, conj_s)
            proj_a = 0.5 * np.einsum("kij,ji->k", rows, conj_a)
            want_s = np.zeros(N * N - 1)
            want_a = np.zeros(N * N - 1)
            want_s[i * i - 1] = s
            want_a[i * i] = -s
            record("1/2 Tr[l_a rot(l_N2+2i)] = delta_a,i2 sin x", maxabs(proj_s - want_s))
            record("1/2 Tr[l_a rot(l_N2+2i+1)] = -delta_a,i2+1 sin x", maxabs(proj_a - want_a))

        # 1/2 Tr[rot(l_N2) C] = sin 2x * 1/2 sum_b C^{b^2-1} eps_b
        conj_top = u @ lam(N * N) @ ui
        proj = 0.5 * np.einsum("kij,ji->k", rows, conj_top)
        want = np.zeros(N * N - 1)
        for b in range(2, N + 1):
            want[b * b - 2] = 0.5 * math.sin(2 * x) * eps(b)
        record("1/2 Tr[rot(l_N2) C] diagonal projection", maxabs(proj - want))

        if N >= 3:
            # sum_a eps_a Tr[A rot(l_a2-1)] = cos^2 x sum_a eps_a Tr[A l_a2-1]
            v, vi = _conj(basis, (N - 1) ** 2 + 1, x)
            lhs_ops = sum(eps(a) * (v @ lam(a * a - 1) @ vi) for a in range(2, N + 1))
            rhs_ops = math.cos(x) ** 2 * sum(eps(a) * lam(a * a - 1) for a in range(2, N + 1))
            sub = basis.generators[: (N - 1) ** 2 - 1]
            lhs = np.einsum("kij,ji->k", sub, lhs_ops)
            rhs = np.einsum("kij,ji->k", sub, rhs_ops)
            record("sum_a eps_a Tr[A rot(l_a2-1)] = cos^2 x ...", maxabs(lhs - rhs))

        w, wi = _conj(basis, N * N - 1, x)
        c, sn = math.cos(N * eps(N) * x), math.sin(N * eps(N) * x)
        p, q = lam((N - 1) ** 2), lam((N - 1) ** 2 + 1)
        record("rot_l_N2-1(l_(N-1)2)", maxabs(w @ p @ wi - (c * p - sn * q)))
        record("rot_l_N2-1(l_(N-1)2+1)", maxabs(w @ q @ wi - (c * q + sn * p)))

    return list(dev.items())
