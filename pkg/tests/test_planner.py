import math
import unittest
import warnings

import numpy as np
from sklearn.exceptions import ConvergenceWarning

from acelib.ace import SAFE, UNSAFE, UNEVALUATABLE
from acelib.exceptions import Unevaluatable
from acelib.kinematics import benchmark_rover, canonical_rover
from acelib.oracle import settle
from acelib.planner import plan, edge_poses, benchmark, \
    benchmark_keep_out, summarize, make_checker, AceChecker, IdealChecker, \
    PlanefitChecker, PlannerConfig, PlanOutcome, PlanefitThresholds, \
    planefit_metrics, planefit_estimate, planefit_check, goodness_map, \
    BENCHMARK_COLUMNS, SUMMARY_COLUMNS, CHECKERS
from acelib.terrain import Pose2D, generate_quadratic, generate_rock_field


def _plane(p, q, extent=8.0, resolution=0.05):
    dem = generate_quadratic(0.0, extent=extent, resolution=resolution)
    xs, ys = dem.cell_centers()
    return dem.with_heights(p * xs[:, np.newaxis] + q * ys[np.newaxis, :])


def _with_cell(dem, x, y, height):
    heights = np.array(dem.heights)
    heights[dem.cell_index(x, y)] = height
    return dem.with_heights(heights)


class EdgeTest(unittest.TestCase):
    def test_straight(self):
        """ Tests evenly spaced checkpoints on a straight edge """
        poses = edge_poses(Pose2D(1, 2, math.pi / 2), 0.0, 1.5, 0.25)

        self.assertEqual(len(poses), 6)
        for k, pose in enumerate(poses, 1):
            self.assertAlmostEqual(pose.x, 1.0)
            self.assertAlmostEqual(pose.y, 2 + 0.25 * k)
            self.assertAlmostEqual(pose.psi, math.pi / 2)

    def test_arc(self):
        """ Tests that a curved edge stays on its circle """
        poses = edge_poses(Pose2D(0, 0, 0), math.pi / 2, math.pi / 2, 0.1)

        end = poses[-1]
        self.assertAlmostEqual(end.x, 1.0)
        self.assertAlmostEqual(end.y, 1.0)
        self.assertAlmostEqual(end.psi, math.pi / 2)
        for pose in poses:
            self.assertAlmostEqual(pose.distance_to((0.0, 1.0)), 1.0)

        poses = edge_poses(Pose2D(0, 0, 0), -math.pi / 2, math.pi / 2, 0.1)
        self.assertAlmostEqual(poses[-1].y, -1.0)


class PlannerConfigTest(unittest.TestCase):
    def test_init(self):
        """ Tests the defaults and the ordering of the heading fan """
        config = PlannerConfig()

        self.assertEqual(config.n_checks, 6)
        self.assertEqual(len(config.heading_offsets), 9)
        self.assertEqual(config.heading_offsets[0], 0.0)
        self.assertEqual(sorted(map(abs, config.heading_offsets)),
                         list(map(abs, config.heading_offsets)))
        self.assertEqual(config.to_dict()['depth'], 5)

    def test_invalid(self):
        """ Tests that invalid parameters raise ValueError """
        with self.assertRaises(ValueError):
            PlannerConfig(depth=0)
        with self.assertRaises(ValueError):
            PlannerConfig(edge_length=1.0, check_interval=2.0)
        with self.assertRaises(ValueError):
            PlannerConfig(heading_offsets=[])
        with self.assertRaises(ValueError):
            PlannerConfig(goal_tolerance=0)
        with self.assertRaises(ValueError):
            PlannerConfig(max_replans=0)

    def test_outcome(self):
        """ Tests the inefficiency of successful and failed runs """
        path = [Pose2D(0, 0), Pose2D(1, 0)]
        self.assertAlmostEqual(
            PlanOutcome(True, path, 11.0, 10.0, 5, 0.1, 3,
                        'goal_reached').inefficiency, 0.1)
        outcome = PlanOutcome(False, path, 4.0, 10.0, 5, 0.1, 3,
                              'no_safe_edge')
        self.assertIsNone(outcome.inefficiency)
        self.assertEqual(outcome.to_dict()['path'], [[0, 0, 0], [1, 0, 0]])


class PlanTest(unittest.TestCase):
    def setUp(self):
        self.model = canonical_rover()
        self.dem = generate_quadratic(0.0, extent=16.0, resolution=0.1)
        self.small = PlannerConfig(depth=2,
                                   heading_offsets=np.radians([-20, 0, 20]),
                                   max_replans=10)

    def test_flat(self):
        """ Tests a straight drive on flat ground """
        checker = AceChecker(self.model)
        outcome = plan(self.dem, Pose2D(-5, 0, 0), (5, 0), checker)

        self.assertTrue(outcome.success)
        self.assertEqual(outcome.reason, 'goal_reached')
        self.assertAlmostEqual(outcome.straight_distance, 10.0)
        self.assertLessEqual(outcome.inefficiency, 0.01)
        self.assertGreaterEqual(outcome.inefficiency, -1e-9)
        self.assertEqual(outcome.checker_calls, checker.calls)
        self.assertLessEqual(outcome.path[-1].distance_to((5, 0)), 0.25)
        for pose in outcome.path:
            self.assertAlmostEqual(pose.y, 0.0)

    def test_wall(self):
        """ Tests that a wall across the map stops the rover """
        xs, _ = self.dem.cell_centers()
        heights = np.zeros(self.dem.shape)
        heights[np.abs(xs) <= 0.3, :] = -1.0
        dem = self.dem.with_heights(heights)

        outcome = plan(dem, Pose2D(-5, 0, 0), (5, 0), AceChecker(self.model),
                       self.small)

        self.assertFalse(outcome.success)
        self.assertIn(outcome.reason, ('no_safe_edge', 'replan_budget'))
        self.assertIsNone(outcome.inefficiency)
        for pose in outcome.path:
            self.assertLess(pose.x, -0.3)

        outcome = plan(dem, Pose2D(0, 0, 0), (5, 0), AceChecker(self.model),
                       self.small)
        self.assertEqual(outcome.reason, 'unsafe_start')
        self.assertEqual(outcome.replans, 0)
        self.assertEqual(outcome.path_length, 0.0)

    def test_detour(self):
        """ Tests that a single obstacle on the line is driven around """
        xs, ys = self.dem.cell_centers()
        heights = np.zeros(self.dem.shape)
        heights[np.ix_(np.abs(xs) <= 0.5, np.abs(ys) <= 0.5)] = -0.8
        dem = self.dem.with_heights(heights)

        outcome = plan(dem, Pose2D(-5, 0, 0), (5, 0), AceChecker(self.model))

        self.assertTrue(outcome.success)
        self.assertGreater(outcome.inefficiency, 0.0)
        self.assertGreater(max(abs(p.y) for p in outcome.path), 0.5)


class PlanefitTest(unittest.TestCase):
    def setUp(self):
        self.model = canonical_rover()

    def test_metrics_flat(self):
        """ Tests zero hazards on flat ground """
        m = planefit_metrics(_plane(0.0, 0.0), Pose2D(0.3, -0.2, 1.0))

        self.assertAlmostEqual(m['slope'], 0.0)
        self.assertAlmostEqual(m['roughness'], 0.0)
        self.assertEqual(m['step'], 0.0)
        self.assertGreater(m['n_points'], 1500)
        self.assertLess(m['n_points'], 2100)

    def test_metrics_plane(self):
        """ Tests the fitted coefficients of a tilted plane """
        m = planefit_metrics(_plane(0.1, -0.05), Pose2D(0.5, 0.5, 0.0))

        c, p, q = m['plane']
        self.assertAlmostEqual(c, 0.1 * 0.5 - 0.05 * 0.5, places=9)
        self.assertAlmostEqual(p, 0.1, places=9)
        self.assertAlmostEqual(q, -0.05, places=9)
        self.assertAlmostEqual(m['slope'], math.atan(math.hypot(0.1, 0.05)),
                               places=9)
        self.assertLess(m['roughness'], 1e-9)

    def test_metrics_unevaluatable(self):
        """ Tests windows leaving the grid or holding unknown cells """
        dem = _plane(0.0, 0.0)

        with self.assertRaises(Unevaluatable) as cm:
            planefit_metrics(dem, Pose2D(3.5, 0.0))
        self.assertEqual(cm.exception.reason, 'out_of_bounds')

        with self.assertRaises(Unevaluatable) as cm:
            planefit_metrics(_with_cell(dem, 0.5, 0.0, np.nan), Pose2D(0, 0))
        self.assertEqual(cm.exception.reason, 'unknown_terrain')

    def test_estimate(self):
        """ Tests the attitude and clearance of the fitted plane """
        est = planefit_estimate(_plane(0.0, 0.0), Pose2D(0, 0), self.model)
        self.assertAlmostEqual(est['clearance'], self.model.c_0)
        self.assertAlmostEqual(est['phi'], 0.0)

        slope = 0.1
        dem = _plane(-math.tan(slope), 0.0)
        est = planefit_estimate(dem, Pose2D(0, 0, 0), self.model)
        self.assertAlmostEqual(est['theta'], slope, places=9)
        self.assertAlmostEqual(est['phi'], 0.0, places=9)

        est = planefit_estimate(dem, Pose2D(0, 0, math.pi / 2), self.model)
        self.assertAlmostEqual(est['phi'], slope, places=9)
        self.assertAlmostEqual(est['theta'], 0.0, places=9)

    def test_estimate_optimistic(self):
        """ Tests that the plane overestimates the clearance over a crest """
        dem = generate_quadratic(0.2)
        est = planefit_estimate(dem, Pose2D(0, 0, 0), self.model)
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', ConvergenceWarning)
            truth = settle(dem, Pose2D(0, 0, 0), self.model,
                           enforce_limits=False)

        self.assertGreater(est['clearance'], truth.clearance)

    def test_check(self):
        """ Tests safe, unsafe and unevaluatable poses """
        dem = generate_quadratic(0.0, extent=16.0, resolution=0.1)
        pose = Pose2D(0, 0, 0)

        verdict = planefit_check(dem, pose, self.model)
        self.assertEqual(verdict.overall, SAFE)
        self.assertEqual(set(verdict.metrics), {'slope', 'roughness', 'step'})

        verdict = planefit_check(_with_cell(dem, 1.0, 0.0, -0.3), pose,
                                 self.model)
        self.assertEqual(verdict.overall, UNSAFE)
        self.assertFalse(verdict.metrics['step']['passed'])

        verdict = planefit_check(_with_cell(dem, 5.0, 0.0, -0.3), pose,
                                 self.model)
        self.assertEqual(verdict.overall, SAFE)

        verdict = planefit_check(_with_cell(dem, 1.0, 0.0, np.nan), pose,
                                 self.model)
        self.assertEqual(verdict.overall, UNEVALUATABLE)
        self.assertEqual(verdict.reason, 'unknown_terrain')

        for far in (Pose2D(7.5, 0), Pose2D(9.0, 0)):
            verdict = planefit_check(dem, far, self.model)
            self.assertEqual(verdict.reason, 'out_of_bounds')

    def test_check_slope(self):
        """ Tests the slope hazard on tilted planes """
        for degrees, expected in ((10, SAFE), (25, UNSAFE)):
            dem = _plane(-math.tan(math.radians(degrees)), 0.0, extent=16.0,
                         resolution=0.1)
            verdict = planefit_check(dem, Pose2D(0, 0, 0), self.model)
            self.assertEqual(verdict.overall, expected)
            self.assertAlmostEqual(verdict.metrics['slope']['value'],
                                   math.radians(degrees), places=9)

    def test_goodness_map(self):
        """ Tests that the map agrees with the single window fit """
        dem = _plane(0.1, 0.2, extent=12.0, resolution=0.1)
        goodness = goodness_map(dem, self.model)
        i, j = dem.cell_index(0.0, 0.0)
        m = planefit_metrics(dem, Pose2D(0.0, 0.0), 1.25)

        self.assertAlmostEqual(goodness.slope[i, j], m['slope'], places=9)
        self.assertTrue(goodness.unknown[0, 0])
        self.assertFalse(goodness.unknown[i, j])

    def test_thresholds(self):
        """ Tests the default hazard radius and invalid limits """
        th = PlanefitThresholds().resolve(self.model)
        self.assertEqual(th.rover_radius, self.model.footprint_radius)
        self.assertEqual(PlanefitThresholds(rover_radius=1.0).resolve(
            self.model).rover_radius, 1.0)
        with self.assertRaises(ValueError):
            PlanefitThresholds(max_step=0.0)


class CheckerTest(unittest.TestCase):
    def setUp(self):
        self.model = canonical_rover()

    def test_make_checker(self):
        """ Tests checker construction by name """
        self.assertIsInstance(make_checker('ace', self.model), AceChecker)
        self.assertIsInstance(make_checker('planefit', self.model),
                              PlanefitChecker)
        self.assertIsInstance(make_checker('ideal', self.model),
                              IdealChecker)
        with self.assertRaises(ValueError):
            make_checker('lidar', self.model)

    def test_calls(self):
        """ Tests that every check is counted """
        dem = generate_quadratic(0.0, extent=16.0, resolution=0.1)
        for name in ('ace', 'planefit', 'ideal'):
            checker = make_checker(name, self.model)
            self.assertEqual(checker.check(dem, Pose2D(0, 0)).overall, SAFE)
            checker.check(dem, Pose2D(1, 0))
            self.assertEqual(checker.calls, 2)

        verdict = make_checker('ideal', self.model).check(dem,
                                                          Pose2D(7.9, 0))
        self.assertEqual(verdict.overall, UNEVALUATABLE)

    def test_conservative(self):
        """ Tests that poses passing the conservative check pass the exact
        one """
        dem = generate_rock_field(0.15, extent=(12, 12), random_state=0)
        ace, ideal = AceChecker(self.model), IdealChecker(self.model)
        rs = np.random.RandomState(0)
        safe = 0

        for _ in range(100):
            pose = Pose2D(rs.uniform(4, 8), rs.uniform(4, 8),
                          rs.uniform(-math.pi, math.pi))
            if ace.check(dem, pose).overall == SAFE:
                safe += 1
                self.assertEqual(ideal.check(dem, pose).overall, SAFE)

        self.assertGreater(safe, 0)


class BenchmarkTest(unittest.TestCase):
    def test_summarize(self):
        """ Tests the per level statistics """
        rows = [{'cfa': 0.1, 'checker': 'ace', 'success': True,
                 'inefficiency': 0.1, 'checker_calls': 10},
                {'cfa': 0.1, 'checker': 'ace', 'success': True,
                 'inefficiency': 0.3, 'checker_calls': 20},
                {'cfa': 0.1, 'checker': 'ace', 'success': False,
                 'inefficiency': None, 'checker_calls': 30},
                {'cfa': 0.1, 'checker': 'planefit', 'success': False,
                 'inefficiency': None, 'checker_calls': 4}]

        summary = {r['checker']: r for r in summarize(rows)}

        ace = summary['ace']
        self.assertEqual(set(ace), set(SUMMARY_COLUMNS))
        self.assertEqual(ace['n_maps'], 3)
        self.assertAlmostEqual(ace['success_rate'], 2 / 3)
        self.assertAlmostEqual(ace['mean_inefficiency'], 0.2)
        self.assertAlmostEqual(ace['sem_inefficiency'], 0.1)
        self.assertAlmostEqual(ace['mean_checker_calls'], 20.0)

        planefit = summary['planefit']
        self.assertEqual(planefit['success_rate'], 0.0)
        self.assertTrue(np.isnan(planefit['mean_inefficiency']))
        self.assertTrue(np.isnan(planefit['sem_inefficiency']))

    def test_benchmark(self):
        """ Tests a single small map run by two checkers """
        config = PlannerConfig(depth=2, max_replans=20)
        kwargs = dict(cfa_levels=(0.05,), maps_per_level=1, random_state=0,
                      checkers=('ace', 'planefit'), config=config,
                      extent=(20.0, 20.0), start=(5.0, 10.0, 0.0),
                      goal_distance=8.0)

        rows = benchmark(**kwargs)

        self.assertEqual(len(rows), 2)
        self.assertEqual([r['checker'] for r in rows], ['ace', 'planefit'])
        self.assertEqual(rows[0]['map_seed'], rows[1]['map_seed'])
        for row in rows:
            self.assertEqual(set(row), set(BENCHMARK_COLUMNS))
            self.assertEqual(row['cfa'], 0.05)
            self.assertGreater(row['checker_calls'], 1)

        again = benchmark(**kwargs)
        self.assertEqual([r['success'] for r in rows],
                         [r['success'] for r in again])
        self.assertEqual([r['path_length_m'] for r in rows],
                         [r['path_length_m'] for r in again])

    def test_benchmark_deterministic(self):
        """ Tests that a map's rows do not depend on the other maps run """
        config = PlannerConfig(depth=2, max_replans=20)
        kwargs = dict(cfa_levels=(0.10,), random_state=7, checkers=('ace',),
                      config=config, extent=(20.0, 20.0),
                      start=(5.0, 10.0, 0.0), goal_distance=8.0)

        one = benchmark(maps_per_level=1, **kwargs)
        two = benchmark(maps_per_level=2, **kwargs)

        self.assertEqual(len(two), 2)
        self.assertNotEqual(two[0]['map_seed'], two[1]['map_seed'])
        keys = [k for k in BENCHMARK_COLUMNS if k != 'wall_time_s']
        self.assertEqual([one[0][k] for k in keys],
                         [two[0][k] for k in keys])

    def test_start_clearing(self):
        """ Tests that every checker finds the start safe on rock fields """
        model = benchmark_rover()
        start, goal = Pose2D(5.0, 10.0, 0.0), (13.0, 10.0)
        keep_out = benchmark_keep_out(start, goal, model)

        thresholds = PlanefitThresholds().resolve(model)
        reach = thresholds.rover_radius + thresholds.window_radius
        for disc in keep_out:
            self.assertGreater(disc[2], reach)
            self.assertGreater(disc[2], model.footprint_radius)
        self.assertEqual(keep_out[1][:2], goal)

        for cfa in (0.10, 0.20):
            for seed in range(2):
                dem = generate_rock_field(cfa, (20.0, 20.0), 0.1,
                                          random_state=seed,
                                          keep_out=keep_out)
                for name in CHECKERS:
                    verdict = make_checker(name, model).check(dem, start)
                    self.assertEqual(verdict.overall, SAFE,
                                     (cfa, seed, name, verdict.reason))

    def test_benchmark_invalid(self):
        """ Tests that unknown checkers and empty levels raise """
        with self.assertRaises(ValueError):
            benchmark(maps_per_level=0)
        with self.assertRaises(ValueError):
            benchmark(checkers=('lidar',))
        with self.assertRaises(ValueError):
            benchmark(checkers=())


def main():
    unittest.main()


if __name__ == '__main__':
    main()
