"""Rank test, chi-square tail and principal components tests.

scipy and numpy.linalg serve as reference implementations here; the
package itself never imports them.
"""

import math

import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from moralnet.errors import DataError
from moralnet.stats import (
    KruskalWallisResult,
    PCA_MODES,
    SCREE_HEADER,
    biplot_header,
    biplot_rows,
    chi2_sf,
    heatmap_header,
    heatmap_rows,
    kruskal_wallis,
    pca,
    scree_rows,
)


class TestChi2Tail:
    def test_matches_scipy_over_grid(self):
        for df in (1, 2, 3, 5, 10, 30):
            for x in (0.001, 0.5, 1.0, 2.5, 7.3, 15.0, 40.0, 120.0):
                expect = scipy.stats.chi2.sf(x, df)
                assert chi2_sf(x, df) == pytest.approx(expect, abs=1e-12, rel=1e-10)

    def test_edge_values(self):
        assert chi2_sf(0.0, 3) == 1.0
        assert chi2_sf(-5.0, 3) == 1.0
        assert chi2_sf(1e6, 2) == pytest.approx(0.0, abs=1e-12)
        assert math.isnan(chi2_sf(float("nan"), 2))

    @given(st.floats(0.001, 200.0), st.integers(1, 40))
    @settings(max_examples=200, deadline=None)
    def test_matches_scipy_property(self, x, df):
        assert chi2_sf(x, df) == pytest.approx(
            scipy.stats.chi2.sf(x, df), abs=1e-10, rel=1e-8
        )


class TestKruskalWallis:
    def test_known_two_group_case(self):
        r = kruskal_wallis([1.0, 2.0, 3.0], [4.0, 5.0, 6.0])
        assert r.statistic == pytest.approx(3.8571428571428568, abs=1e-12)
        assert r.p_value == pytest.approx(0.04953461343562674, abs=1e-12)
        assert r.degrees_of_freedom == 1
        assert r.group_sizes == (3, 3)

    def test_equal_mean_ranks_give_zero(self):
        r = kruskal_wallis([1.0, 4.0], [2.0, 3.0])
        assert r.statistic == pytest.approx(0.0, abs=1e-12)
        assert r.p_value == 1.0

    def test_all_identical_observations(self):
        r = kruskal_wallis([2.0, 2.0], [2.0, 2.0, 2.0])
        assert r == KruskalWallisResult(0.0, 1.0, 1, (2, 3))

    def test_input_validation(self):
        with pytest.raises(ValueError):
            kruskal_wallis([1.0])
        with pytest.raises(ValueError):
            kruskal_wallis([1.0], [])
        with pytest.raises(ValueError):
            kruskal_wallis([1.0], [float("nan")])

    def test_matches_scipy_with_ties(self):
        rng = np.random.default_rng(123)
        for _ in range(100):
            k = int(rng.integers(2, 5))
            groups = [
                # coarse grid forces plenty of ties
                list(np.round(rng.uniform(0, 3, size=rng.integers(2, 12)), 1))
                for _ in range(k)
            ]
            if all(v == groups[0][0] for g in groups for v in g):
                continue
            ours = kruskal_wallis(*groups)
            ref = scipy.stats.kruskal(*groups)
            assert ours.statistic == pytest.approx(ref.statistic, abs=1e-9)
            assert ours.p_value == pytest.approx(ref.pvalue, abs=1e-9)

    def test_p_decreases_as_h_grows(self):
        ps = [chi2_sf(h, 4) for h in (0.5, 1.0, 2.0, 4.0, 8.0, 16.0)]
        assert all(a > b for a, b in zip(ps, ps[1:]))


def random_matrix(rng, n=12, d=5):
    return rng.normal(size=(n, d)) * rng.uniform(0.5, 3.0, size=d)


class TestPca:
    def test_input_validation(self):
        with pytest.raises(ValueError):
            pca([[1.0, 2.0], [2.0, 1.0]], mode="weird")
        with pytest.raises(DataError):
            pca([1.0, 2.0])
        with pytest.raises(DataError):
            pca([[1.0, 2.0]])
        with pytest.raises(DataError):
            pca([[1.0], [2.0]])
        with pytest.raises(DataError):
            pca([[1.0, float("inf")], [2.0, 1.0]])
        with pytest.raises(ValueError):
            pca([[1.0, 2.0], [2.0, 1.0]], dim_names=("only_one",))

    def test_constant_matrix_rejected(self):
        with pytest.raises(DataError, match="no variance"):
            pca([[1.0, 2.0], [1.0, 2.0], [1.0, 2.0]])

    def test_zero_variance_dimension_named_in_correlation_mode(self):
        with pytest.raises(DataError, match="flat"):
            pca(
                [[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]],
                mode="correlation",
                dim_names=("ok", "flat"),
            )

    def test_matches_numpy_eigh(self):
        rng = np.random.default_rng(42)
        for mode in PCA_MODES:
            for _ in range(20):
                m = random_matrix(rng)
                r = pca(m, mode=mode)
                centred = m - m.mean(axis=0)
                if mode == "correlation":
                    centred = centred / centred.std(axis=0, ddof=1)
                cov = centred.T @ centred / (m.shape[0] - 1)
                ref_vals = np.sort(np.linalg.eigvalsh(cov))[::-1]
                np.testing.assert_allclose(
                    r.eigenvalues, np.maximum(ref_vals, 0.0), atol=1e-9
                )

    def test_eigenvector_properties(self):
        rng = np.random.default_rng(7)
        m = random_matrix(rng)
        r = pca(m)
        d = r.components.shape[0]
        # orthonormal columns, descending eigenvalues, ratios sum to 1
        np.testing.assert_allclose(
            r.components.T @ r.components, np.eye(d), atol=1e-9
        )
        assert all(a >= b for a, b in zip(r.eigenvalues, r.eigenvalues[1:]))
        assert float(np.sum(r.explained_ratios)) == pytest.approx(1.0, abs=1e-9)
        # sign convention: the largest-magnitude coordinate is positive
        for j in range(d):
            col = r.components[:, j]
            assert col[int(np.argmax(np.abs(col)))] >= 0.0

    def test_reconstruction(self):
        rng = np.random.default_rng(99)
        m = random_matrix(rng)
        r = pca(m)
        rebuilt = r.scores @ r.components.T + r.mean
        np.testing.assert_allclose(rebuilt, m, atol=1e-9)

    def test_scores_reproduce_covariance_eigenvalues(self):
        rng = np.random.default_rng(3)
        m = random_matrix(rng)
        r = pca(m)
        var = r.scores.var(axis=0, ddof=1)
        np.testing.assert_allclose(var, r.eigenvalues, atol=1e-9)

    def test_simplex_rows_have_a_null_direction(self):
        # rows summing to 1 are confined to a hyperplane
        rng = np.random.default_rng(5)
        raw = rng.uniform(size=(20, 5))
        m = raw / raw.sum(axis=1, keepdims=True)
        r = pca(m)
        assert float(r.eigenvalues[-1]) <= 1e-9


class TestRowEmitters:
    def make_result(self):
        rng = np.random.default_rng(1)
        return pca(random_matrix(rng, n=6, d=3), dim_names=("x", "y", "z"))

    def test_scree(self):
        r = self.make_result()
        rows = list(scree_rows(r))
        assert SCREE_HEADER == ("component", "eigenvalue", "explained_ratio")
        assert [row[0] for row in rows] == ["PC1", "PC2", "PC3"]
        assert sum(row[2] for row in rows) == pytest.approx(1.0)

    def test_heatmap(self):
        r = self.make_result()
        assert heatmap_header(r) == ("dimension", "PC1", "PC2", "PC3")
        rows = list(heatmap_rows(r))
        assert [row[0] for row in rows] == ["x", "y", "z"]
        assert all(len(row) == 4 for row in rows)

    def test_biplot(self):
        r = self.make_result()
        assert biplot_header((1, 2)) == ("kind", "name", "PC1", "PC2")
        rows = list(biplot_rows(r, axes=(1, 2), row_names=[f"r{i}" for i in range(6)]))
        kinds = [row[0] for row in rows]
        assert kinds == ["score"] * 6 + ["axis"] * 3
        arrow = next(row for row in rows if row[:2] == ("axis", "x"))
        expect = float(r.components[0, 0] * math.sqrt(r.eigenvalues[0]))
        assert arrow[2] == pytest.approx(expect)

    def test_biplot_axis_validation(self):
        r = self.make_result()
        with pytest.raises(ValueError):
            list(biplot_rows(r, axes=(1, 1)))
        with pytest.raises(ValueError):
            list(biplot_rows(r, axes=(1, 4)))
        with pytest.raises(ValueError):
            list(biplot_rows(r, row_names=["too", "few"]))
