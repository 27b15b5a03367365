from acelib.planner.base import plan, edge_poses
from acelib.planner.benchmark import benchmark, benchmark_keep_out, \
    summarize, BENCHMARK_COLUMNS, SUMMARY_COLUMNS
from acelib.planner.checkers import CollisionChecker, AceChecker, \
    PlanefitChecker, IdealChecker, exact_state_verdict, make_checker, \
    CHECKERS
from acelib.planner.classes import PlannerConfig, PlanOutcome
from acelib.planner.planefit import PlanefitThresholds, GoodnessMap, \
    planefit_metrics, planefit_estimate, planefit_check, goodness_map

__all__ = ['plan', 'edge_poses', 'benchmark', 'benchmark_keep_out',
           'summarize', 'BENCHMARK_COLUMNS', 'SUMMARY_COLUMNS',
           'CollisionChecker', 'AceChecker', 'PlanefitChecker',
           'IdealChecker', 'exact_state_verdict', 'make_checker', 'CHECKERS',
           'PlannerConfig', 'PlanOutcome', 'PlanefitThresholds',
           'GoodnessMap', 'planefit_metrics', 'planefit_estimate',
           'planefit_check', 'goodness_map']
