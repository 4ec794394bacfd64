# tests/test_reliability.py
import unittest

import numpy as np

from src.analysis.fault_tolerance import ft_degree
from src.analysis.reliability import (exact_reliability, koon_reliability, minimal_path_sets,
                                      monte_carlo_reliability, naive_parallel_series, naive_rbd_reliability,
                                      parallel_reliability, reliability_curve, reliability_polynomial,
                                      series_parallel, series_reliability)
from src.exceptions import (ConfigError, InvalidKooNError, InvalidProbabilityError, InvalidStructureError,
                            InvalidTimeError, InvalidTrialsError)
from src.layouts.generators import generate_named, list_schemes
from src.models.analysis_results import CurveMode, DiskModel, PathSet
from src.models.layout import Layout
from src.utils.helpers import parse_time_grid
from src.utils.log import init_logging
from tests.data.reference_tables import EXACT_AT_09, KOON_3_5_AT_09, PP2_AT_10000_HOURS

P_GRID = np.linspace(0.0, 1.0, 101)
FIVE_DISK_GAP = 5 * P_GRID ** 2 * (1 - P_GRID) ** 3


class TestStructures(unittest.TestCase):

    def test_koon(self):
        self.assertAlmostEqual(koon_reliability(3, 5, 0.9), KOON_3_5_AT_09, places=12)
        self.assertAlmostEqual(koon_reliability(5, 5, 0.9), 0.59049, places=12)
        self.assertAlmostEqual(koon_reliability(1, 1, 0.37), 0.37, places=12)
        self.assertEqual(koon_reliability(0, 5, 0.2), 1.0)

    def test_koon_vectorised(self):
        values = koon_reliability(1, 2, np.array([0.0, 0.5, 1.0]))
        np.testing.assert_allclose(values, [0.0, 0.75, 1.0], atol=1e-15)

    def test_koon_invalid(self):
        with self.assertRaises(InvalidKooNError):
            koon_reliability(6, 5, 0.9)
        with self.assertRaises(InvalidKooNError):
            koon_reliability(-1, 5, 0.9)
        with self.assertRaises(InvalidProbabilityError):
            koon_reliability(3, 5, 1.5)

    def test_parallel_series_formula(self):
        self.assertAlmostEqual(naive_parallel_series([[0.9, 0.9], [0.9, 0.9]]), 0.9639, places=12)
        self.assertAlmostEqual(naive_parallel_series([[0.5]]), 0.5, places=12)
        self.assertEqual(naive_parallel_series(PathSet.of([[1.0], [0.3]])), 1.0)

    def test_parallel_series_invalid(self):
        with self.assertRaises(InvalidStructureError):
            naive_parallel_series([])
        with self.assertRaises(InvalidStructureError):
            naive_parallel_series([[0.5], []])
        with self.assertRaises(InvalidProbabilityError):
            naive_parallel_series([[1.2]])

    def test_series_and_parallel(self):
        self.assertAlmostEqual(series_reliability([0.9, 0.8]), 0.72, places=12)
        self.assertAlmostEqual(parallel_reliability([0.9, 0.8]), 0.98, places=12)
        self.assertAlmostEqual(series_parallel([[0.9, 0.8], [0.5]]), 0.49, places=12)
        with self.assertRaises(InvalidStructureError):
            series_reliability([])

    def test_parallel_series_exact_for_disjoint_paths(self):
        # every disk holds the whole stripe, so each disk alone is a path
        mirror = Layout.from_rows("mirror", 2, [[[0], [1]], [[0], [1]], [[0], [1]]])
        self.assertEqual([path.disks for path in minimal_path_sets(mirror)], [(0,), (1,), (2,)])
        for p in (0.1, 0.5, 0.93):
            exact = exact_reliability(mirror, p)
            self.assertAlmostEqual(naive_parallel_series([[p], [p], [p]]), exact, places=12)
            self.assertAlmostEqual(naive_rbd_reliability(mirror, p), exact, places=12)


class TestExactReliability(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        init_logging()
        cls.layouts = {scheme: generate_named(scheme, 5) for scheme in list_schemes()}

    def test_point_values(self):
        for scheme, expected in EXACT_AT_09.items():
            self.assertAlmostEqual(exact_reliability(self.layouts[scheme], 0.9), expected, places=12)

    def test_endpoints(self):
        for layout in self.layouts.values():
            self.assertEqual(exact_reliability(layout, 0.0), 0.0)
            self.assertEqual(exact_reliability(layout, 1.0), 1.0)

    def test_closed_forms(self):
        """exact(PP2) = exact(RP2) = koon(2,5); the other three add 5 p^2 (1-p)^3 to koon(3,5)."""
        koon2 = koon_reliability(2, 5, P_GRID)
        koon3 = koon_reliability(3, 5, P_GRID)
        for scheme in ("PP2", "RP2"):
            np.testing.assert_allclose(exact_reliability(self.layouts[scheme], P_GRID), koon2, rtol=0, atol=1e-12)
        for scheme in ("RR", "PP1", "RP1"):
            np.testing.assert_allclose(exact_reliability(self.layouts[scheme], P_GRID), koon3 + FIVE_DISK_GAP,
                                       rtol=0, atol=1e-12)

    def test_orderings(self):
        inner = P_GRID[1:-1]
        pp1 = exact_reliability(self.layouts["PP1"], inner)
        pp2 = exact_reliability(self.layouts["PP2"], inner)
        np.testing.assert_allclose(pp2 - pp1, 5 * inner ** 2 * (1 - inner) ** 3, atol=1e-12)
        self.assertTrue(np.all(pp1 > koon_reliability(3, 5, inner)))

    def test_polynomial(self):
        self.assertEqual(reliability_polynomial(self.layouts["PP2"]), (0, 0, 10, 10, 5, 1))
        self.assertEqual(reliability_polynomial(self.layouts["RR"]), (0, 0, 5, 10, 5, 1))

    def test_monotone_in_p(self):
        for layout in self.layouts.values():
            values = exact_reliability(layout, P_GRID)
            self.assertTrue(np.all(np.diff(values) >= -1e-15))

    def test_guaranteed_tolerance_never_exceeds_exact(self):
        for layout in self.layouts.values():
            k = layout.n_disks - ft_degree(layout).degree
            self.assertTrue(np.all(koon_reliability(k, 5, P_GRID) <= exact_reliability(layout, P_GRID) + 1e-12))

    def test_naive_rbd_is_an_upper_bound(self):
        for layout in self.layouts.values():
            naive = naive_rbd_reliability(layout, P_GRID)
            self.assertTrue(np.all(naive >= exact_reliability(layout, P_GRID) - 1e-12))

    def test_minimal_paths(self):
        paths = minimal_path_sets(self.layouts["RR"])
        self.assertEqual(sorted(path.disks for path in paths if len(path.disks) == 2),
                         [(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)])
        self.assertEqual(len(paths), 5)

    def test_invalid_probability(self):
        with self.assertRaises(InvalidProbabilityError):
            exact_reliability(self.layouts["RR"], -0.1)


class TestCurves(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        init_logging()
        cls.model = DiskModel(1e-4)
        cls.t_grid = parse_time_grid("0:10000:100")

    def test_grid(self):
        self.assertEqual(len(self.t_grid), 101)
        self.assertEqual(self.t_grid[-1], 10000.0)

    def test_start_and_horizon(self):
        curve = reliability_curve(generate_named("PP2", 5), self.model, self.t_grid, "exact")
        self.assertEqual(curve.values[0], 1.0)
        self.assertAlmostEqual(curve.values[-1], PP2_AT_10000_HOURS, delta=1e-4)
        self.assertTrue(all(a >= b for a, b in zip(curve.values, curve.values[1:])))

    def test_reference_orderings(self):
        later = slice(1, None)
        curves = {scheme: np.array(reliability_curve(generate_named(scheme, 5), self.model, self.t_grid).values)
                  for scheme in list_schemes()}
        koon3 = np.array(reliability_curve(generate_named("RR", 5), self.model, self.t_grid, "koon:3").values)

        for scheme, values in curves.items():
            self.assertTrue(np.all(values[later] - koon3[later] > 1e-12), scheme)
        self.assertTrue(np.all(curves["PP2"][later] - curves["RR"][later] > 1e-12))
        self.assertTrue(np.all(curves["PP2"][later] - curves["PP1"][later] > 1e-12))
        self.assertTrue(np.all(curves["RP2"][later] - curves["RP1"][later] > 1e-12))

    def test_modes(self):
        layout = generate_named("RR", 5)
        guaranteed = reliability_curve(layout, self.model, self.t_grid, "guaranteed")
        koon3 = reliability_curve(layout, self.model, self.t_grid, CurveMode.parse("koon(3)"))
        self.assertEqual(guaranteed.mode, "koon(3)")
        self.assertEqual(guaranteed.values, koon3.values)
        self.assertEqual(reliability_curve(layout, self.model, self.t_grid, "naive-rbd").mode, "naive-rbd")
        with self.assertRaises(ConfigError):
            CurveMode.parse("weibull")

    def test_records(self):
        curve = reliability_curve(generate_named("RR", 5), self.model, [0.0, 50.0])
        self.assertEqual(curve.records()[0], {"t_hours": 0.0, "layout": "RR", "mode": "exact", "reliability": 1.0})

    def test_invalid_times(self):
        layout = generate_named("RR", 5)
        with self.assertRaises(InvalidTimeError):
            reliability_curve(layout, self.model, [-1.0, 0.0])
        with self.assertRaises(InvalidTimeError):
            reliability_curve(layout, self.model, [10.0, 5.0])
        with self.assertRaises(InvalidTimeError):
            parse_time_grid("0:10")
        for spec in ("0:nan:1", "0:inf:1", "nan:10:1", "0:10:inf"):
            with self.assertRaises(InvalidTimeError):
                parse_time_grid(spec)
        with self.assertRaises(InvalidTimeError):
            reliability_curve(layout, self.model, [0.0, float("inf")])
        with self.assertRaises(ConfigError):
            DiskModel(-1.0)


class TestMonteCarlo(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        init_logging()
        cls.pp2 = generate_named("PP2", 5)
        cls.rr = generate_named("RR", 5)

    def test_converges_to_exact(self):
        result = monte_carlo_reliability(self.pp2, 0.9, 1_000_000, 42)
        self.assertLessEqual(abs(result.estimate - EXACT_AT_09["PP2"]), max(3 * result.stderr, 0.002))

    def test_reproducible(self):
        first = monte_carlo_reliability(self.rr, 0.7, 25_000, 7)
        second = monte_carlo_reliability(self.rr, 0.7, 25_000, 7)
        self.assertEqual(first, second)

    def test_degenerate_probabilities(self):
        self.assertEqual(monte_carlo_reliability(self.rr, 1.0, 1000, 1), (1.0, 0.0))
        self.assertEqual(monte_carlo_reliability(self.rr, 0.0, 1000, 1).estimate, 0.0)

    def test_coverage_over_seeds(self):
        exact = exact_reliability(self.rr, 0.5)
        within = 0
        for seed in range(100):
            result = monte_carlo_reliability(self.rr, 0.5, 10_000, seed)
            within += abs(result.estimate - exact) <= 3 * result.stderr
        self.assertGreaterEqual(within, 95)

    def test_invalid_trials(self):
        with self.assertRaises(InvalidTrialsError):
            monte_carlo_reliability(self.rr, 0.5, 0, 1)
        with self.assertRaises(ConfigError):
            monte_carlo_reliability(self.rr, 0.5, 100, -1)

    def test_alive_sets_wider_than_int64(self):
        """Blocks live only on disks 64 and 65, so the stripe survives with probability p^2."""
        rows = [[] for _ in range(70)]
        rows[64] = [[0]]
        rows[65] = [[1]]
        wide = Layout.from_rows("wide", 2, rows)
        result = monte_carlo_reliability(wide, 0.5, 20_000, 1)
        self.assertLessEqual(abs(result.estimate - 0.25), max(4 * result.stderr, 0.01))
        self.assertEqual(monte_carlo_reliability(wide, 1.0, 50, 1).estimate, 1.0)


if __name__ == "__main__":
    unittest.main()
