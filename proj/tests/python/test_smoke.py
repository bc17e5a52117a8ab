import numpy as np
import pytest

import _lpm as lpm


@pytest.fixture(scope="module")
def swissroll():
    x, z, jac = lpm.generate("swissroll", 300, seed=7)
    return np.asarray(x), np.asarray(z), jac


def test_generate_shapes(swissroll):
    x, z, jac = swissroll
    assert x.shape == (300, 3)
    assert z.shape == (300, 2)
    assert len(jac) == 300
    j = np.asarray(jac[0])
    assert np.allclose(j.T @ j, np.eye(2), atol=1e-12)


def test_graph_and_fit(swissroll):
    x, _, _ = swissroll
    g = lpm.knn_graph(x, 8)
    assert g.n == 300
    assert g.members(5)[0] == 5
    assert 5 not in g.neighbors[5]

    rng = np.random.default_rng(0)
    y = rng.standard_normal((10, 2))
    theta = 0.3
    a = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    f = lpm.fit(y @ a.T + 1.5, y)
    assert f.residual < 1e-10
    assert np.allclose(f.rotation, a)


def test_embed_and_score(swissroll):
    x, z, _ = swissroll
    g = lpm.knn_graph(x, 10)
    y, warnings = lpm.embed_gp(x, g, d=2, seed=0)
    assert np.asarray(y).shape == (300, 2)
    # Greedy output at this density is rough; the refinement polish is part of
    # the standard recipe.
    y_ref, _ = lpm.refine(x, y, g, rel_tol=1e-12, max_iters=30000)
    rep = lpm.measure_report(x, y_ref, g)
    assert rep.R_N < 0.1
    assert rep.lower_bound_N <= rep.R_N + 1e-9
    assert rep.R_C <= rep.R_N + 1e-12

    y2, _ = lpm.embed_gp(x, g, d=2, seed=0)
    assert np.array_equal(np.asarray(y), np.asarray(y2))


def test_refine_never_worse(swissroll):
    x, _, _ = swissroll
    g = lpm.knn_graph(x, 10)
    rng = np.random.default_rng(1)
    y0 = rng.standard_normal((300, 2))
    r0 = lpm.measure_report(x, y0, g).R
    y1, trace = lpm.refine(x, y0, g)
    assert lpm.measure_report(x, y1, g).R <= r0 + 1e-12
    assert trace[0][0] == 0


def test_errors():
    x = np.zeros((5, 2))
    x[:, 0] = [0, 1, 2, 3, 100]
    with pytest.raises(RuntimeError):
        lpm.eps_graph(x, 0.5)  # the far point is isolated
    with pytest.raises(ValueError):
        lpm.knn_graph(x, 0)
