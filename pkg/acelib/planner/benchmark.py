import numpy as np
from pycompss.api.api import compss_wait_on
from pycompss.api.task import task
from scipy import stats
from sklearn.utils import check_random_state

from acelib.kinematics import benchmark_rover
from acelib.planner.base import plan
from acelib.planner.checkers import CHECKERS, make_checker
from acelib.planner.classes import PlannerConfig
from acelib.planner.planefit import PlanefitThresholds
from acelib.terrain import Pose2D, generate_rock_field

BENCHMARK_COLUMNS = ['cfa', 'checker', 'map_seed', 'success', 'path_length_m',
                     'inefficiency', 'checker_calls', 'wall_time_s']
SUMMARY_COLUMNS = ['cfa', 'checker', 'n_maps', 'success_rate',
                   'mean_inefficiency', 'sem_inefficiency',
                   'mean_checker_calls']

CLEARING_MARGIN = 0.25


def benchmark(cfa_levels=(0.05, 0.10, 0.15, 0.20), maps_per_level=20,
              random_state=None, checkers=CHECKERS, model=None,
              thresholds=None, planefit_thresholds=None, config=None,
              extent=(30.0, 40.0), resolution=0.1, start=(5.0, 20.0, 0.0),
              goal_distance=20.0, verbose=False):
    """ Runs the planner over random rock fields with several checkers.

    Every map is drawn from its own seed, taken from ``random_state``, and
    every checker drives from the same start to the goal
    ``goal_distance`` ahead of it. Rocks are kept away from the start and
    the goal (see :func:`benchmark_keep_out`). Each map is a separate task,
    so the maps run in parallel when launched with ``runcompss``.

    Parameters
    ----------
    cfa_levels : sequence of float, optional
        Rock coverage of the maps.
    maps_per_level : int, optional (default=20)
    random_state : int, RandomState instance or None, optional
        Seed of the map seeds.
    checkers : sequence of str, optional (default=('ace', 'planefit',
        'ideal'))
    model : RoverModel, optional
        Defaults to ``benchmark_rover()``.
    thresholds : SafetyThresholds, optional
        Used by the ACE and ideal checkers.
    planefit_thresholds : PlanefitThresholds, optional
    config : PlannerConfig, optional
    extent : tuple, optional (default=(30, 40))
        Map size (m).
    resolution : float, optional (default=0.1)
    start : tuple, optional (default=(5, 20, 0))
        Start ``(x, y, psi)``.
    goal_distance : float, optional (default=20)
    verbose : bool, optional (default=False)
        Print a line per map.

    Returns
    -------
    rows : list of dict
        One row per map and checker with the ``BENCHMARK_COLUMNS`` keys, in
        level, map and checker order.
    """
    if maps_per_level < 1:
        raise ValueError("Invalid value for 'maps_per_level': %r"
                         % maps_per_level)
    if not checkers:
        raise ValueError("Invalid value for 'checkers': %r" % (checkers,))
    for name in checkers:
        if name not in CHECKERS:
            raise ValueError("Invalid value for 'checkers': %r" % name)

    model = model or benchmark_rover()
    config = config or PlannerConfig()
    random_state = check_random_state(random_state)
    seeds = random_state.randint(np.iinfo(np.int32).max,
                                 size=(len(cfa_levels), maps_per_level))

    start_pose = Pose2D(*start)
    goal = tuple(start_pose.to_world([goal_distance, 0.0]))
    keep_out = benchmark_keep_out(start_pose, goal, model,
                                  planefit_thresholds)

    partials = [_run_map(float(cfa), int(seed), extent, resolution, keep_out,
                         start_pose, goal, tuple(checkers), model, thresholds,
                         planefit_thresholds, config)
                for cfa, level_seeds in zip(cfa_levels, seeds)
                for seed in level_seeds]
    partials = compss_wait_on(partials)

    if verbose:
        for rows in partials:
            print("Map cfa=%.2f seed=%d: %s" % (
                rows[0]['cfa'], rows[0]['map_seed'], ", ".join(
                    "%s %s" % (r['checker'], 'ok' if r['success'] else 'fail')
                    for r in rows)))

    return [row for rows in partials for row in rows]


def benchmark_keep_out(start, goal, model, planefit_thresholds=None):
    """ Rock-free discs around the start and the goal of a benchmark run.

    The radius covers every terrain cell any checker reads at those poses:
    the rover footprint and, for the plane fit, the hazard inflation
    radius plus the fitting window.

    Parameters
    ----------
    start : Pose2D
    goal : tuple
        Goal ``(x, y)``.
    model : RoverModel
    planefit_thresholds : PlanefitThresholds, optional

    Returns
    -------
    keep_out : list of tuple
        ``(x, y, radius)`` of the two discs.
    """
    planefit = (planefit_thresholds or PlanefitThresholds()).resolve(model)
    radius = max(model.footprint_radius, planefit.rover_radius +
                 planefit.window_radius) + CLEARING_MARGIN
    return [(start.x, start.y, radius), (goal[0], goal[1], radius)]


@task(returns=list)
def _run_map(cfa, seed, extent, resolution, keep_out, start, goal, checkers,
             model, thresholds, planefit_thresholds, config):
    dem = generate_rock_field(cfa, extent, resolution, random_state=seed,
                              keep_out=keep_out)
    rows = []
    for name in checkers:
        checker = make_checker(name, model, thresholds, planefit_thresholds)
        outcome = plan(dem, start, goal, checker, config)
        rows.append({'cfa': cfa, 'checker': name, 'map_seed': seed,
                     'success': outcome.success,
                     'path_length_m': outcome.path_length,
                     'inefficiency': outcome.inefficiency,
                     'checker_calls': outcome.checker_calls,
                     'wall_time_s': outcome.wall_time})
    return rows


def summarize(rows):
    """ Success rate and inefficiency statistics per level and checker.

    The inefficiency mean and standard error are taken over successful
    runs only; they are NaN when there are none (the error also needs two).

    Parameters
    ----------
    rows : list of dict
        Output of :func:`benchmark`.

    Returns
    -------
    summary : list of dict
        One row per ``(cfa, checker)`` with the ``SUMMARY_COLUMNS`` keys.
    """
    groups = {}
    for row in rows:
        groups.setdefault((row['cfa'], row['checker']), []).append(row)

    summary = []
    for (cfa, checker), group in groups.items():
        inefficiency = np.array([r['inefficiency'] for r in group
                                 if r['success']], dtype=float)
        summary.append({
            'cfa': cfa, 'checker': checker, 'n_maps': len(group),
            'success_rate': np.mean([r['success'] for r in group]),
            'mean_inefficiency': (inefficiency.mean() if inefficiency.size
                                  else np.nan),
            'sem_inefficiency': (stats.sem(inefficiency)
                                 if inefficiency.size > 1 else np.nan),
            'mean_checker_calls': np.mean([r['checker_calls']
                                           for r in group])})
    return summary
