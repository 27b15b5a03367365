import heapq
import itertools
import math
import time

from acelib.ace.classes import SAFE
from acelib.planner.classes import PlannerConfig, PlanOutcome
from acelib.terrain import Pose2D


def edge_poses(pose, heading_offset, length, interval):
    """ Checkpoints along a constant-curvature edge.

    Parameters
    ----------
    pose : Pose2D
        Start of the edge.
    heading_offset : float
        Heading change over the edge (rad).
    length : float
        Arc length (m).
    interval : float
        Nominal checkpoint spacing (m); the edge is split into
        ``round(length / interval)`` equal steps.

    Returns
    -------
    poses : list of Pose2D
        Checkpoints after each step, the edge end last.
    """
    n = max(1, int(round(length / interval)))
    curvature = heading_offset / length
    x, y, psi = pose.x, pose.y, pose.psi
    poses = []

    for k in range(1, n + 1):
        s = length * k / n
        if abs(curvature) < 1e-12:
            poses.append(Pose2D(x + s * math.cos(psi),
                                y + s * math.sin(psi), psi))
        else:
            radius = 1.0 / curvature
            psi_s = psi + curvature * s
            poses.append(Pose2D(x + radius * (math.sin(psi_s) - math.sin(psi)),
                                y - radius * (math.cos(psi_s) - math.cos(psi)),
                                psi_s))
    return poses


def plan(dem, start, goal_xy, checker, config=None, verbose=False):
    """ Drives a rover to a goal with a receding-horizon tree search.

    At each step a tree of constant-curvature edges is grown from the
    current pose, edges with a checkpoint that is not safe are pruned, and
    the leaf minimizing driven length plus straight-line distance to the
    goal is selected. The first edge towards it is executed and the search
    is repeated from its end.

    Parameters
    ----------
    dem : Dem
    start : Pose2D
    goal_xy : tuple
        Goal position (m).
    checker : CollisionChecker
    config : PlannerConfig, optional
    verbose : bool, optional (default=False)
        Print a line per executed edge.

    Returns
    -------
    outcome : PlanOutcome

    Examples
    --------
    >>> from acelib.kinematics import canonical_rover
    >>> from acelib.planner import AceChecker, plan
    >>> from acelib.terrain import generate_quadratic, Pose2D
    >>> dem = generate_quadratic(0.0, extent=16.0, resolution=0.1)
    >>> outcome = plan(dem, Pose2D(-5, 0, 0), (5, 0),
    ...                AceChecker(canonical_rover()))
    >>> outcome.success
    True
    """
    config = config or PlannerConfig()
    goal_xy = (float(goal_xy[0]), float(goal_xy[1]))
    search = _TreeSearch(dem, goal_xy, checker, config)
    started = time.perf_counter()

    current = start
    path = [start]
    length = 0.0
    replans = 0
    step = config.edge_length / config.n_checks

    if not search.is_safe(start):
        reason = 'unsafe_start'
    else:
        while True:
            if current.distance_to(goal_xy) <= config.goal_tolerance:
                reason = 'goal_reached'
                length += current.distance_to(goal_xy)
                break
            if replans >= config.max_replans:
                reason = 'replan_budget'
                break

            edge = search.first_edge(current)
            replans += 1
            if edge is None:
                reason = 'no_safe_edge'
                break

            for pose in edge:
                path.append(pose)
                length += step
                current = pose
                if pose.distance_to(goal_xy) <= config.goal_tolerance:
                    break

            if verbose:
                print("Replan %d: at (%.2f, %.2f), %.2f m to goal"
                      % (replans, current.x, current.y,
                         current.distance_to(goal_xy)))

    return PlanOutcome(reason == 'goal_reached', path, length,
                       start.distance_to(goal_xy), search.checker_calls,
                       time.perf_counter() - started, replans, reason)


class _Node(object):
    __slots__ = ('pose', 'cost', 'depth', 'turn', 'first', 'reached')

    def __init__(self, pose, cost, depth, turn, first, reached):
        self.pose = pose
        self.cost = cost
        self.depth = depth
        self.turn = turn
        self.first = first
        self.reached = reached


class _TreeSearch(object):
    """ Best-first search over the edge tree, with checker results
    memoized across replans. """

    def __init__(self, dem, goal_xy, checker, config):
        self._dem = dem
        self._goal = goal_xy
        self._checker = checker
        self._config = config
        self._memo = {}

    @property
    def checker_calls(self):
        return len(self._memo)

    def is_safe(self, pose):
        key = (round(pose.x, 9), round(pose.y, 9), round(pose.psi, 9))
        if key not in self._memo:
            verdict = self._checker.check(self._dem, pose)
            self._memo[key] = verdict.overall == SAFE
        return self._memo[key]

    def first_edge(self, pose):
        """ Checkpoints of the first edge towards the best leaf, or None if
        every edge from ``pose`` is pruned. """
        cfg = self._config
        counter = itertools.count()
        root = _Node(pose, 0.0, 0, 0.0, None, False)
        heap = [(self._h(pose), 0.0, next(counter), root)]
        best = None
        expansions = 0

        while heap:
            _, _, _, node = heapq.heappop(heap)
            if node.depth == cfg.depth or node.reached:
                return node.first
            if expansions >= cfg.max_expansions:
                break
            expansions += 1

            for offset in cfg.heading_offsets:
                child = self._grow(node, offset)
                if child is None:
                    continue
                f = child.cost + self._h(child.pose)
                heapq.heappush(heap, (f, child.turn, next(counter), child))
                rank = (self._h(child.pose), f, child.turn)
                if best is None or rank < best[0]:
                    best = (rank, child)

        return best[1].first if best is not None else None

    def _grow(self, node, offset):
        cfg = self._config
        poses = []
        reached = False

        for pose in edge_poses(node.pose, offset, cfg.edge_length,
                               cfg.check_interval):
            if not self.is_safe(pose):
                return None
            poses.append(pose)
            if pose.distance_to(self._goal) <= cfg.goal_tolerance:
                reached = True
                break

        step = cfg.edge_length / cfg.n_checks
        return _Node(poses[-1], node.cost + step * len(poses),
                     node.depth + 1, node.turn + abs(offset),
                     node.first if node.first is not None else poses,
                     reached)

    def _h(self, pose):
        return pose.distance_to(self._goal)
