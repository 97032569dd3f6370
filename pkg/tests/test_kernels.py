import os
import subprocess
import sys

import numpy as np
import pytest

from sun_euler import _fallback, kernels, measure
from sun_euler.group import element_program, random_coordinates

try:
    from sun_euler import _ext
except ImportError:  # pragma: no cover - exercised only without a compiler
    _ext = None

needs_ext = pytest.mark.skipif(_ext is None, reason="compiled extension not built")


def test_backend_name():
    assert kernels.BACKEND in ("compiled", "python")
    if _ext is not None and os.environ.get("SUN_EULER_PURE_PYTHON", "") in ("", "0"):
        assert kernels.BACKEND == "compiled"


@needs_ext
@pytest.mark.parametrize("n", [2, 3, 4, 6])
def test_apply_program_parity(n):
    a = random_coordinates(n, np.random.default_rng(n), size=50) * 3 - 5
    prog = np.ascontiguousarray(element_program(n))
    ref = _fallback.apply_program(prog, a, n)
    got = _ext.apply_program(prog, a, n)
    assert np.max(np.abs(ref - got)) <= 1e-13


@needs_ext
@pytest.mark.parametrize("n", [2, 3, 5])
def test_density_parity(n):
    a = random_coordinates(n, np.random.default_rng(n), size=200)
    args = measure._density_program(n)
    ref = _fallback.density_terms(a, *args)
    got = _ext.density_terms(a, *args)
    assert np.allclose(ref, got, rtol=1e-13, atol=0)


def test_empty_batch():
    prog = np.ascontiguousarray(element_program(3))
    out = kernels.apply_program(prog, np.zeros((0, 8)), 3)
    assert out.shape == (0, 3, 3)


def test_env_forces_fallback():
    code = "import sun_euler.kernels as k; print(k.BACKEND)"
    env = dict(os.environ, SUN_EULER_PURE_PYTHON="1")
    r = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert r.stdout.strip() == "python"
    env["SUN_EULER_PURE_PYTHON"] = "0"
    r = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert r.stdout.strip() == ("compiled" if _ext is not None else "python")


def test_fallback_end_to_end():
    # the whole volume pipeline gives identical output under either backend
    code = ("from sun_euler import measure; "
            "print(repr(measure.volume_monte_carlo(3, 3000, seed=2).mean))")
    outs = set()
    for flag in ("1", "0"):
        env = dict(os.environ, SUN_EULER_PURE_PYTHON=flag)
        r = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                           text=True, check=True)
        outs.add(float(r.stdout))
    a, *rest = outs
    assert all(abs(a - b) <= 1e-12 * abs(a) for b in rest)
