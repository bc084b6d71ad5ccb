import math

import numpy as np
import pytest
from scipy.optimize import linprog

from polycons.graph import (
    gen_erdos_renyi,
    make_complete,
    make_complete_bipartite,
    make_cycle,
    make_path,
    make_star,
    square_graph,
)
from polycons.precondition import (
    OptimizeOptions,
    distinct_laplacian_eigenvalues,
    k2m_symmetry_breaking,
    k2m_weights,
    lower_bound_square,
    mu2_and_gradient,
    mu2_value,
    nonconvexity_witness,
    optimize_fssc,
    optimize_p2,
    slem,
    star_deadbeat_weight,
)

FAST = OptimizeOptions(restarts=3, max_iters=2000)


def circulant_fssc_oracle(n, lengths):
    """Min SLEM of a circulant weighting with one weight per chord length, as an LP."""
    theta = 2 * np.pi * np.arange(1, n) / n
    # Laplacian eigenvalue k: sum_l w_l * c_l(k), c_l = 2 - 2cos(l theta) (halved for l = n/2)
    cols = []
    for length in lengths:
        c = 2 - 2 * np.cos(length * theta)
        if 2 * length == n:
            c = c / 2
        cols.append(c)
    c_mat = np.column_stack(cols)
    k = len(lengths)
    # variables (w_1..w_k, t); -t <= 1 - C w <= t
    a_ub = np.vstack([np.hstack([c_mat, -np.ones((n - 1, 1))]), np.hstack([-c_mat, -np.ones((n - 1, 1))])])
    b_ub = np.concatenate([np.ones(n - 1), -np.ones(n - 1)])
    res = linprog(np.r_[np.zeros(k), 1.0], A_ub=a_ub, b_ub=b_ub, bounds=[(None, None)] * (k + 1))
    assert res.success
    return res.fun


class TestOptions:
    @pytest.mark.parametrize("kw", [{"max_iters": 0}, {"tol": 0.0}, {"restarts": 0}])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            OptimizeOptions(**kw)


class TestFSSC:
    def test_complete(self):
        res = optimize_fssc(make_complete(5))
        assert np.allclose(res.weights, 0.2)
        assert res.mu == pytest.approx(0.0, abs=1e-12)

    def test_k24_nonneg_uniform(self):
        res = optimize_fssc(make_complete_bipartite(2, 4), OptimizeOptions(nonneg=True))
        # closed form: Laplacian spectrum w*{0, 2, 2, 2, 4, 6}; best uniform w = 1/4
        assert res.mu == pytest.approx(0.5, abs=1e-6)
        assert np.allclose(res.weights, 0.25, atol=1e-4)

    @pytest.mark.parametrize("method", ["sdp", "subgradient"])
    def test_path3_against_sweep(self, method):
        g = make_path(3)
        grid = np.linspace(0.0, 1.0, 10001)
        sweep = min(slem(g, np.array([w, w])) for w in grid)
        res = optimize_fssc(g, OptimizeOptions(fssc_method=method))
        assert res.mu > 0
        assert res.mu == pytest.approx(sweep, abs=1e-4)

    def test_methods_agree(self):
        g = gen_erdos_renyi(8, 12, 4)
        a = optimize_fssc(g).mu
        b = optimize_fssc(g, OptimizeOptions(fssc_method="subgradient")).mu
        assert b >= a - 1e-6
        assert b == pytest.approx(a, abs=5e-3)

    def test_convexity_chords(self, rng):
        g = gen_erdos_renyi(9, 16, 1)
        for _ in range(50):
            w1, w2 = rng.uniform(-0.2, 0.6, (2, g.m))
            t = rng.uniform()
            lhs = slem(g, t * w1 + (1 - t) * w2)
            assert lhs <= t * slem(g, w1) + (1 - t) * slem(g, w2) + 1e-9

    def test_ordering(self):
        res = optimize_fssc(gen_erdos_renyi(10, 20, 2), with_bound=False)
        assert res.mu2 <= res.mu**2 + 1e-9
        assert math.isnan(res.lower_bound)


class TestLowerBound:
    def test_diameter_two_is_zero(self):
        for g in (make_star(5), make_cycle(5), make_complete_bipartite(2, 3)):
            assert lower_bound_square(g) == 0.0

    def test_c6_circulant(self):
        g = make_cycle(6)
        sq = square_graph(g)
        assert sq.m == 12
        assert lower_bound_square(g) == pytest.approx(circulant_fssc_oracle(6, [1, 2]), abs=1e-6)

    def test_path5_positive(self):
        assert lower_bound_square(make_path(5)) > 1e-3


class TestGradient:
    @pytest.mark.parametrize("seed", range(4))
    def test_central_differences(self, seed):
        rng = np.random.default_rng(seed)
        g = gen_erdos_renyi(9, 18, seed)
        w = rng.uniform(0.05, 0.35, g.m)
        f, grad = mu2_and_gradient(g, w)
        h = 1e-6
        fd = np.array([(mu2_value(g, w + h * e) - mu2_value(g, w - h * e)) / (2 * h) for e in np.eye(g.m)])
        assert np.linalg.norm(grad - fd) <= 1e-4 * np.linalg.norm(fd)
        assert f == pytest.approx(mu2_value(g, w))

    def test_infinite_when_not_convergent(self):
        g = make_path(3)
        assert mu2_value(g, np.array([0.0, 0.3])) == math.inf


class TestOptimizeP2:
    def test_star_deadbeat(self):
        res = optimize_p2(make_star(4), FAST)
        assert res.mu2 <= 1e-8

    def test_k24_breaks_symmetry(self):
        res = optimize_p2(make_complete_bipartite(2, 4), OptimizeOptions(restarts=8))
        assert res.mu2 <= 1e-6

    def test_dense_er_improves(self):
        g = gen_erdos_renyi(20, 96, 11)
        opts = OptimizeOptions(restarts=2)
        fssc = optimize_fssc(g, opts, with_bound=False)
        res = optimize_p2(g, opts, fssc=fssc)
        assert res.mu2 < fssc.mu2
        assert res.mu2 >= res.lower_bound - 1e-6
        assert res.weight_matrix().support == g

    def test_nonneg(self):
        g = gen_erdos_renyi(10, 25, 5)
        res = optimize_p2(g, OptimizeOptions(restarts=3, nonneg=True))
        assert np.all(res.weights >= 0.0)

    def test_deterministic(self):
        g = gen_erdos_renyi(9, 15, 8)
        a = optimize_p2(g, FAST, with_bound=False)
        b = optimize_p2(g, FAST, with_bound=False)
        assert np.array_equal(a.weights, b.weights) and a.restart_index == b.restart_index

    def test_never_worse_than_fssc(self):
        g = gen_erdos_renyi(10, 14, 3)
        fssc = optimize_fssc(g, FAST, with_bound=False)
        res = optimize_p2(g, FAST, fssc=fssc)
        assert res.mu2 <= fssc.mu2 + 1e-12
        assert res.mu2 >= res.lower_bound - 1e-6

    def test_disconnected(self):
        from polycons.graph import Graph, GraphError

        with pytest.raises(GraphError):
            optimize_p2(Graph(4, [(0, 1), (2, 3)]))


class TestAnalytic:
    def test_k24_values(self):
        q = k2m_symmetry_breaking(4)
        assert q.q_plus == pytest.approx(2 + math.sqrt(3))
        assert q.q_minus == pytest.approx(2 - math.sqrt(3))

    def test_k22_uniform(self):
        q = k2m_symmetry_breaking(2)
        assert q.q_plus == pytest.approx(1.0) and q.q_minus == pytest.approx(1.0)

    @pytest.mark.parametrize("m", range(3, 9))
    def test_collapse_and_values(self, m):
        p = 0.7
        for q in k2m_symmetry_breaking(m, p):
            vals = distinct_laplacian_eigenvalues(make_complete_bipartite(2, m), k2m_weights(m, p, q))
            assert len(vals) == 2
            assert vals == pytest.approx([p + q, m * (p + q)], rel=1e-10)
            # direct oracle: dense eigenvalues of the weighted Laplacian
            lap = np.zeros((m + 2, m + 2))
            for (i, j), w in k2m_weights(m, p, q).items():
                lap[i, j] = lap[j, i] = -w
            np.fill_diagonal(lap, -lap.sum(axis=1))
            ev = np.linalg.eigvalsh(lap)
            assert len({round(v, 8) for v in ev if abs(v) > 1e-9}) == 2

    def test_uniform_k2m_three_values(self):
        assert len(distinct_laplacian_eigenvalues(make_complete_bipartite(2, 4), k2m_weights(4, 1, 1))) == 3

    def test_invalid(self):
        with pytest.raises(ValueError):
            k2m_symmetry_breaking(1)

    def test_star_deadbeat_weight(self):
        from polycons.spectral import is_deadbeat_2step, spectrum, weight_matrix

        for m in range(2, 7):
            s = spectrum(weight_matrix(make_star(m), star_deadbeat_weight(m)))
            assert s.centered and is_deadbeat_2step(s)


class TestWitness:
    def test_default_confirmed(self):
        rep = nonconvexity_witness(fit=False)
        assert rep.confirmed and not rep.vacuous
        assert abs(rep.entries[(1, 2)]) > 1e-3 and abs(rep.entries[(3, 4)]) > 1e-3
        for pair in ((1, 3), (1, 4), (2, 3), (2, 4)):
            assert rep.entries[pair] == 0.0
        assert rep.rows()[0][0] == "(2,3)"

    def test_entries_match_direct_computation(self):
        rep = nonconvexity_witness(weight=0.4, z_sq=0.25, fit=False)
        # leaf-leaf entry of P^2 for two leaves on the same hub: w^2; p2 scales by 1/(1-z_sq)
        assert rep.entries[(1, 2)] == pytest.approx(0.5 * 0.16 / 0.75)

    def test_vacuous(self):
        rep = nonconvexity_witness(weight=0.0, fit=False)
        assert rep.vacuous and not rep.confirmed

    def test_residual(self):
        rep = nonconvexity_witness(restarts=16)
        assert rep.residual > 1e-3
