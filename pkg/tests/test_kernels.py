import numpy as np
import pytest

from burgess import kernels
from burgess.characters import build_group, enumerate_characters

backends = kernels.available_backends()
needs_both = pytest.mark.skipif("cython" not in backends, reason="compiled extension not built")


def sample_chars():
    for q in (1, 2, 3, 8, 12, 97, 120, 361, 997):
        cs = enumerate_characters(build_group(q))
        yield from cs[:: max(1, len(cs) // 5)]


def test_backend_reported():
    assert kernels.BACKEND in backends


@needs_both
def test_backends_agree():
    py, cy = backends["python"], backends["cython"]
    rng = np.random.default_rng(7)
    for chi in sample_chars():
        q, t, m = chi.q, np.ascontiguousarray(chi.log_table), chi.order
        vals = chi.values()
        y = q + 5
        assert np.allclose(py.window_maxima(vals, y), cy.window_maxima(vals, y))
        for B in (1, 2, 5):
            assert py.fourth_moment(t, m, B) == pytest.approx(cy.fourth_moment(t, m, B), rel=1e-12)
        sh = rng.integers(-2 * q, 3 * q, size=(20, 4)).astype(np.int64)
        sh[0] = [0, 0, q, 2 * q]
        assert np.allclose(py.polynomial_sums(t, m, sh), cy.polynomial_sums(t, m, sh))
        units = np.array([a for a in range(1, q + 1) if np.gcd(a, q) == 1], dtype=np.int64)
        for M, N in ((0, 1), (3, q), (q + 2, 2 * q + 1)):
            assert np.array_equal(py.v_counts(q, M, N, units), cy.v_counts(q, M, N, units))


def test_pure_python_env(monkeypatch):
    import importlib

    monkeypatch.setenv("BURGESS_PURE_PYTHON", "1")
    mod = importlib.reload(kernels)
    try:
        assert mod.BACKEND == "python"
    finally:
        monkeypatch.delenv("BURGESS_PURE_PYTHON")
        importlib.reload(kernels)
