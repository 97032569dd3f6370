"""Pure numpy implementations of the batch kernels.

Same signatures as the compiled ``_ext`` module; used when the extension is
not built or when ``SUN_EULER_PURE_PYTHON=1``.
"""
from __future__ import annotations

import numpy as np

DIAG = 0
ROT = 1


def apply_program(program: np.ndarray, angles: np.ndarray, n: int) -> np.ndarray:
    """Evaluate a factor program for a batch of angle vectors.

    ``program`` rows are ``(kind, a, b, slot)``.  DIAG multiplies columns
    ``0..a-1`` by exp(i x) and column ``a`` by exp(-i a x); ROT mixes columns
    ``a`` and ``b`` with [[cos x, sin x], [-sin x, cos x]].  Factors are applied
    on the right, in program order, starting from the identity.
    """
    angles = np.ascontiguousarray(angles, dtype=np.float64)
    batch = angles.shape[0]
    g = np.zeros((batch, n, n), dtype=np.complex128)
    g[:, np.arange(n), np.arange(n)] = 1.0
    for kind, a, b, slot in program:
        x = angles[:, slot]
        if kind == DIAG:
            g[:, :, :a] *= np.exp(1j * x)[:, None, None]
            g[:, :, a] *= np.exp(-1j * a * x)[:, None]
        else:
            c = np.cos(x)[:, None]
            s = np.sin(x)[:, None]
            cp = g[:, :, a].copy()
            cq = g[:, :, b]
            g[:, :, a] = c * cp - s * cq
            g[:, :, b] = s * cp + c * cq
    return g


def density_terms(angles: np.ndarray, sin_slots: np.ndarray, sin_pows: np.ndarray,
                  cos_slots: np.ndarray, cos_pows: np.ndarray, const: float) -> np.ndarray:
    """const * prod sin(x[sin_slots])**sin_pows * prod cos(x[cos_slots])**cos_pows."""
    angles = np.asarray(angles, dtype=np.float64)
    out = np.full(angles.shape[0], const)
    if len(sin_slots):
        out *= np.prod(np.sin(angles[:, sin_slots]) ** sin_pows, axis=1)
    if len(cos_slots):
        out *= np.prod(np.cos(angles[:, cos_slots]) ** cos_pows, axis=1)
    return out
