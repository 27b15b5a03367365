import warnings

from sklearn.exceptions import ConvergenceWarning

from acelib.ace import evaluate_pose
from acelib.ace.classes import SafetyThresholds, SafetyVerdict, metric, \
    UNEVALUATABLE
from acelib.exceptions import AttitudeDomainError, KinematicInfeasible, \
    Unevaluatable
from acelib.oracle import settle_constrained
from acelib.planner.planefit import PlanefitThresholds, goodness_map

CHECKERS = ('ace', 'planefit', 'ideal')


class CollisionChecker(object):
    """ Pose safety test used by the planner.

    Subclasses implement ``_check(dem, pose)`` returning a SafetyVerdict.
    ``calls`` counts the poses checked.
    """
    name = None

    def __init__(self, model):
        self._model = model
        self.calls = 0

    def check(self, dem, pose):
        """ Safety verdict of a pose.

        Parameters
        ----------
        dem : Dem
        pose : Pose2D

        Returns
        -------
        verdict : SafetyVerdict
        """
        self.calls += 1
        return self._check(dem, pose)

    def _check(self, dem, pose):
        raise NotImplementedError


class AceChecker(CollisionChecker):
    """ Conservative check through :func:`acelib.ace.evaluate_pose`.

    Parameters
    ----------
    model : RoverModel
    thresholds : SafetyThresholds, optional
    epsilon : float, optional (default=0)
        Perception margin (m).
    """
    name = 'ace'

    def __init__(self, model, thresholds=None, epsilon=0.0):
        super().__init__(model)
        self._thresholds = (thresholds or SafetyThresholds()).resolve(model)
        self._epsilon = epsilon

    def _check(self, dem, pose):
        _, verdict = evaluate_pose(dem, pose, self._model, self._thresholds,
                                   self._epsilon)
        return verdict


class PlanefitChecker(CollisionChecker):
    """ Plane-fit hazard check with hazards inflated by the rover radius.

    The goodness map of the last DEM seen is kept, so checking many poses
    on one map costs a single map computation.

    Parameters
    ----------
    model : RoverModel
    thresholds : PlanefitThresholds, optional
    """
    name = 'planefit'

    def __init__(self, model, thresholds=None):
        super().__init__(model)
        self._thresholds = (thresholds or PlanefitThresholds()).resolve(model)
        self._dem = None
        self._map = None

    def _check(self, dem, pose):
        if dem is not self._dem:
            self._map = goodness_map(dem, self._model, self._thresholds)
            self._dem = dem
        return self._map.verdict(pose)


class IdealChecker(CollisionChecker):
    """ Exact-state check: settles the rover and gates its true state.

    Parameters
    ----------
    model : RoverModel
    thresholds : SafetyThresholds, optional
    """
    name = 'ideal'

    def __init__(self, model, thresholds=None):
        super().__init__(model)
        self._thresholds = (thresholds or SafetyThresholds()).resolve(model)

    def _check(self, dem, pose):
        try:
            with warnings.catch_warnings():
                warnings.simplefilter('ignore', ConvergenceWarning)
                result = settle_constrained(dem, pose, self._model,
                                            enforce_limits=False)
        except Unevaluatable as e:
            return SafetyVerdict(UNEVALUATABLE, reason=e.reason)
        except (KinematicInfeasible, AttitudeDomainError) as e:
            return SafetyVerdict.from_metrics(
                {'kinematics': metric(False, None, None)}, reason=str(e))

        return exact_state_verdict(result, self._thresholds)


def exact_state_verdict(result, thresholds):
    """ Safety gate applied to a settled state.

    Parameters
    ----------
    result : SettleResult
    thresholds : SafetyThresholds
        Resolved thresholds.

    Returns
    -------
    verdict : SafetyVerdict
    """
    s, body = result.suspension, result.body
    delta, beta = thresholds.delta_range, thresholds.beta_range
    betas = (s.beta_l, s.beta_r)
    return SafetyVerdict.from_metrics({
        'clearance': metric(result.clearance >= thresholds.min_clearance,
                            result.clearance, thresholds.min_clearance),
        'tilt': metric(body.tilt <= thresholds.max_tilt, body.tilt,
                       thresholds.max_tilt),
        'delta': metric(delta.contains(s.delta_l) and
                        delta.contains(-s.delta_l), s.delta_l, delta),
        'beta': metric(all(beta.contains(b) for b in betas),
                       max(betas, key=abs), beta)})


def make_checker(name, model, thresholds=None, planefit_thresholds=None,
                 epsilon=0.0):
    """ Builds the checker called ``name`` ('ace', 'planefit' or
    'ideal'). """
    if name == 'ace':
        return AceChecker(model, thresholds, epsilon)
    if name == 'planefit':
        return PlanefitChecker(model, planefit_thresholds)
    if name == 'ideal':
        return IdealChecker(model, thresholds)
    raise ValueError("Invalid value for 'name': %r (expected one of %s)"
                     % (name, ", ".join(CHECKERS)))
