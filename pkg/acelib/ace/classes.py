import math

from acelib.interval import Interval, as_interval

SAFE = 'safe'
UNSAFE = 'unsafe'
UNEVALUATABLE = 'unevaluatable'


class WheelIntervals(object):
    """ Height interval (m, z-down) of the terrain in each wheel box.

    Parameters
    ----------
    intervals : dict
        Wheel name to Interval (or (lo, hi) pair).
    epsilon : float, optional (default=0)
        Perception margin already applied to the intervals.
    """

    def __init__(self, intervals, epsilon=0.0):
        if epsilon < 0:
            raise ValueError("Invalid value for 'epsilon': %r" % epsilon)
        self._intervals = {k: as_interval(v) for k, v in intervals.items()}
        self.epsilon = float(epsilon)

    def __getitem__(self, name):
        return self._intervals[name]

    def __contains__(self, name):
        return name in self._intervals

    @property
    def names(self):
        order = ('fl', 'fr', 'ml', 'mr', 'rl', 'rr')
        return tuple(n for n in order if n in self._intervals)

    @property
    def max_width(self):
        return max(i.width for i in self._intervals.values())

    def corners(self):
        """ Iterates over the 2**n height assignments at the endpoints. """
        names = self.names
        for mask in range(2 ** len(names)):
            yield {n: self._intervals[n].hi if mask >> b & 1
                   else self._intervals[n].lo for b, n in enumerate(names)}

    def to_dict(self):
        return {'epsilon': self.epsilon,
                'wheels': {n: self._intervals[n].to_list()
                           for n in self.names}}

    def __repr__(self):
        return "WheelIntervals(%s)" % ", ".join(
            "%s=[%.4g, %.4g]" % (n, self[n].lo, self[n].hi)
            for n in self.names)


class StateBounds(object):
    """ Bounds on the suspension, attitude and height of the rover.

    Attributes
    ----------
    delta : Interval
        Left rocker angle; the right one is ``-delta``.
    beta_l, beta_r : Interval
        Bogie angles.
    z_d_l, z_d_r, z_b_l, z_b_r : Interval
        Differential and bogie joint heights.
    phi, theta : Interval
        Roll and pitch.
    abs_phi, abs_theta : Interval
        Ranges of ``|phi|`` and ``|theta|``.
    z_o : Interval
        Body origin height.
    z_p : Interval
        Height of the lowest belly pan point.
    clearance : Interval or None
        Belly pan clearance, once computed by ``clearance_interval``.
    wheel_drop : float
        Largest wheel interval width.
    wheels : WheelIntervals
        The intervals the bounds were derived from.
    """
    interval_fields = ('delta', 'beta_l', 'beta_r', 'z_d_l', 'z_d_r',
                       'z_b_l', 'z_b_r', 'phi', 'theta', 'abs_phi',
                       'abs_theta', 'z_o', 'z_p')

    def __init__(self, delta, beta_l, beta_r, z_d_l, z_d_r, z_b_l, z_b_r,
                 phi, theta, z_o, z_p, wheels=None, clearance=None):
        self.delta = delta
        self.beta_l = beta_l
        self.beta_r = beta_r
        self.z_d_l = z_d_l
        self.z_d_r = z_d_r
        self.z_b_l = z_b_l
        self.z_b_r = z_b_r
        self.phi = phi
        self.theta = theta
        self.abs_phi = phi.abs()
        self.abs_theta = theta.abs()
        self.z_o = z_o
        self.z_p = z_p
        self.wheels = wheels
        self.wheel_drop = wheels.max_width if wheels is not None else 0.0
        self.clearance = clearance

    @property
    def delta_r(self):
        return -self.delta

    @property
    def tilt(self):
        """ Largest combined tilt ``acos(cos|phi| cos|theta|)``. """
        return tilt_bound(self.abs_phi, self.abs_theta)

    def to_dict(self):
        out = {f: getattr(self, f).to_list() for f in self.interval_fields}
        out['delta_r'] = self.delta_r.to_list()
        out['clearance'] = (self.clearance.to_list()
                            if self.clearance is not None else None)
        out['wheel_drop'] = self.wheel_drop
        out['tilt'] = self.tilt
        if self.wheels is not None:
            out['wheels'] = self.wheels.to_dict()
        return out

    def __repr__(self):
        return "StateBounds(delta=%r, phi=%r, theta=%r, clearance=%r)" % (
            self.delta, self.phi, self.theta, self.clearance)


def tilt_bound(abs_phi, abs_theta):
    c = math.cos(abs_phi.hi) * math.cos(abs_theta.hi)
    return math.acos(max(-1.0, min(1.0, c)))


class SafetyThresholds(object):
    """ Limits a pose must satisfy to be safe.

    Parameters
    ----------
    min_clearance : float, optional (default=0.15)
        Smallest belly pan clearance (m).
    max_tilt : float, optional (default=pi/6)
        Largest combined tilt (rad).
    delta_range, beta_range : tuple or Interval, optional
        Allowed rocker and bogie angles. Default to the model limits.
    max_wheel_drop : float, optional
        Largest wheel height uncertainty (m). Defaults to the wheel radius.
    """

    def __init__(self, min_clearance=0.15, max_tilt=math.radians(30),
                 delta_range=None, beta_range=None, max_wheel_drop=None):
        for name, value in (('min_clearance', min_clearance),
                            ('max_tilt', max_tilt),
                            ('max_wheel_drop', max_wheel_drop)):
            if value is not None and not value > 0:
                raise ValueError("Invalid value for '%s': %r (must be > 0)"
                                 % (name, value))

        self.min_clearance = float(min_clearance)
        self.max_tilt = float(max_tilt)
        self.delta_range = (as_interval(delta_range)
                            if delta_range is not None else None)
        self.beta_range = (as_interval(beta_range)
                           if beta_range is not None else None)
        self.max_wheel_drop = max_wheel_drop

    def resolve(self, model):
        """ Copy with the model-dependent defaults filled in. """
        return SafetyThresholds(
            min_clearance=self.min_clearance, max_tilt=self.max_tilt,
            delta_range=(self.delta_range if self.delta_range is not None
                         else model.delta_limits),
            beta_range=(self.beta_range if self.beta_range is not None
                        else model.beta_limits),
            max_wheel_drop=(self.max_wheel_drop
                            if self.max_wheel_drop is not None
                            else model.wheel_radius))

    def to_dict(self):
        return {'min_clearance': self.min_clearance,
                'max_tilt': self.max_tilt,
                'delta_range': (self.delta_range.to_list()
                                if self.delta_range is not None else None),
                'beta_range': (self.beta_range.to_list()
                               if self.beta_range is not None else None),
                'max_wheel_drop': self.max_wheel_drop}


class SafetyVerdict(object):
    """ Outcome of the safety gate.

    Attributes
    ----------
    overall : str
        'safe', 'unsafe' or 'unevaluatable'.
    metrics : dict
        Metric name to ``{'passed': bool, 'value': ..., 'limit': ...}``,
        where ``value`` is the worst case checked against ``limit``.
    reason : str or None
        Why the pose is unevaluatable or kinematically infeasible.
    """

    def __init__(self, overall, metrics=None, reason=None):
        if overall not in (SAFE, UNSAFE, UNEVALUATABLE):
            raise ValueError("Invalid value for 'overall': %r" % overall)
        self.overall = overall
        self.metrics = metrics if metrics is not None else {}
        self.reason = reason

    @property
    def is_safe(self):
        return self.overall == SAFE

    @classmethod
    def from_metrics(cls, metrics, reason=None):
        passed = all(m['passed'] for m in metrics.values())
        return cls(SAFE if passed else UNSAFE, metrics, reason)

    def to_dict(self):
        return {'overall': self.overall, 'reason': self.reason,
                'metrics': {k: dict(v) for k, v in self.metrics.items()}}

    def __repr__(self):
        failed = [k for k, v in self.metrics.items() if not v['passed']]
        return "SafetyVerdict(%r, failed=%r)" % (self.overall, failed)


def metric(passed, value, limit):
    if isinstance(value, Interval):
        value = value.to_list()
    if isinstance(limit, Interval):
        limit = limit.to_list()
    return {'passed': bool(passed), 'value': value, 'limit': limit}
