import math

import numpy as np


class PlannerConfig(object):
    """ Tree search parameters of the receding-horizon planner.

    Parameters
    ----------
    depth : int, optional (default=5)
        Edges from the root to a leaf.
    edge_length : float, optional (default=1.5)
        Arc length of an edge (m).
    check_interval : float, optional (default=0.25)
        Spacing of the safety checks along an edge (m).
    heading_offsets : array-like, optional
        Heading change of each edge of the fan (rad). Defaults to -40 to 40
        degrees in 10 degree steps.
    goal_tolerance : float, optional (default=0.25)
        Distance (m) at which the goal counts as reached.
    max_replans : int, optional (default=60)
        Edges executed before giving up.
    max_expansions : int, optional (default=500)
        Nodes expanded per tree search.
    """

    def __init__(self, depth=5, edge_length=1.5, check_interval=0.25,
                 heading_offsets=None, goal_tolerance=0.25, max_replans=60,
                 max_expansions=500):
        if depth < 1:
            raise ValueError("Invalid value for 'depth': %r" % depth)
        if not 0 < check_interval <= edge_length:
            raise ValueError("Invalid value for 'check_interval': %r (must "
                             "be in (0, edge_length])" % check_interval)
        if not goal_tolerance > 0:
            raise ValueError("Invalid value for 'goal_tolerance': %r"
                             % goal_tolerance)
        if max_replans < 1:
            raise ValueError("Invalid value for 'max_replans': %r"
                             % max_replans)
        if max_expansions < 1:
            raise ValueError("Invalid value for 'max_expansions': %r"
                             % max_expansions)
        if heading_offsets is None:
            heading_offsets = np.radians(np.arange(-40, 41, 10))
        if len(heading_offsets) == 0:
            raise ValueError("Invalid value for 'heading_offsets': empty")

        self.depth = int(depth)
        self.edge_length = float(edge_length)
        self.check_interval = float(check_interval)
        # straight ahead first so ties favor the smallest turn
        self.heading_offsets = tuple(sorted((float(o) for o in
                                             heading_offsets), key=abs))
        self.goal_tolerance = float(goal_tolerance)
        self.max_replans = int(max_replans)
        self.max_expansions = int(max_expansions)

    @property
    def n_checks(self):
        """ Checkpoints per edge. """
        return max(1, int(round(self.edge_length / self.check_interval)))

    def to_dict(self):
        return {'depth': self.depth, 'edge_length': self.edge_length,
                'check_interval': self.check_interval,
                'heading_offsets_deg': [math.degrees(o) for o in
                                        self.heading_offsets],
                'goal_tolerance': self.goal_tolerance,
                'max_replans': self.max_replans,
                'max_expansions': self.max_expansions}


class PlanOutcome(object):
    """ Result of a planner run.

    Attributes
    ----------
    success : bool
    path : list of Pose2D
        Start pose followed by every executed checkpoint.
    path_length : float
        Driven length (m); on success it includes the final gap to the
        goal.
    straight_distance : float
        Start to goal distance (m).
    inefficiency : float or None
        ``path_length / straight_distance - 1``; None on failure.
    checker_calls : int
        Distinct poses sent to the checker.
    wall_time : float
        Seconds spent planning.
    replans : int
        Tree searches run.
    reason : str
        'goal_reached', 'unsafe_start', 'no_safe_edge' or
        'replan_budget'.
    """

    def __init__(self, success, path, path_length, straight_distance,
                 checker_calls, wall_time, replans, reason):
        self.success = bool(success)
        self.path = list(path)
        self.path_length = float(path_length)
        self.straight_distance = float(straight_distance)
        self.checker_calls = int(checker_calls)
        self.wall_time = float(wall_time)
        self.replans = int(replans)
        self.reason = reason

    @property
    def inefficiency(self):
        if not self.success or self.straight_distance == 0:
            return None
        return self.path_length / self.straight_distance - 1

    def to_dict(self):
        return {'success': self.success,
                'path': [p.to_list() for p in self.path],
                'path_length': self.path_length,
                'straight_distance': self.straight_distance,
                'inefficiency': self.inefficiency,
                'checker_calls': self.checker_calls,
                'wall_time': self.wall_time,
                'replans': self.replans,
                'reason': self.reason}

    def __repr__(self):
        return "PlanOutcome(success=%r, path_length=%.3f, reason=%r)" % (
            self.success, self.path_length, self.reason)
