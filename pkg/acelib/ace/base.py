import math

from acelib.ace.classes import StateBounds, SafetyThresholds, \
    SafetyVerdict, WheelIntervals, metric, UNEVALUATABLE
from acelib.exceptions import AttitudeDomainError, KinematicInfeasible, \
    OutOfBounds, Unevaluatable
from acelib.interval import Interval, hull
from acelib.kinematics import kappa, tri_height, roll_angle, solve
from acelib.terrain import WheelBoxQuery, minmax_in_box

# added around the sampled wheel envelope to cover motion between samples
BOX_MARGIN = 0.01


def wheel_boxes(model):
    """ Wheel boxes of a rover in its heading frame.

    A box is the wheel footprint swept over every contact position the wheel
    can take within the joint and tilt limits, plus ``BOX_MARGIN``.

    Parameters
    ----------
    model : RoverModel

    Returns
    -------
    boxes : list of WheelBoxQuery
        One per wheel, in ``model.wheel_names`` order.
    """
    hx = model.wheel_box_x / 2 + BOX_MARGIN
    hy = model.wheel_box_y / 2 + BOX_MARGIN
    boxes = []

    for x_lo, x_hi, y_lo, y_hi in model.wheel_envelope:
        boxes.append(WheelBoxQuery(0.5 * (x_lo + x_hi), 0.5 * (y_lo + y_hi),
                                   x_hi - x_lo + 2 * hx,
                                   y_hi - y_lo + 2 * hy))
    return boxes


def wheel_height_intervals(dem, pose, model, epsilon=0.0):
    """ Terrain height interval under each wheel box.

    Parameters
    ----------
    dem : Dem
    pose : Pose2D
    model : RoverModel
    epsilon : float, optional (default=0)
        Perception margin (m) added on both sides of every interval.

    Returns
    -------
    wheels : WheelIntervals

    Raises
    ------
    Unevaluatable
        If a box leaves the DEM or covers unknown cells.
    """
    if epsilon < 0:
        raise ValueError("Invalid value for 'epsilon': %r" % epsilon)

    intervals = {}
    for name, box in zip(model.wheel_names, wheel_boxes(model)):
        try:
            z = minmax_in_box(dem, pose, box)
        except OutOfBounds as e:
            raise Unevaluatable('out_of_bounds', "Wheel box '%s': %s"
                                % (name, e))
        if z is None:
            raise Unevaluatable('unknown_terrain',
                                "Unknown terrain in wheel box '%s'" % name)
        intervals[name] = z.widen(epsilon) if epsilon > 0 else z

    return WheelIntervals(intervals, epsilon)


def propagate_bounds(w, model):
    """ Closed-form bounds on the rover state.

    Every bound is obtained from the wheel interval endpoints that make the
    quantity smallest and largest, which is exact for the joint heights,
    rocker angle, roll and pitch, and conservative for the bogie angles and
    the body and pan heights.

    Parameters
    ----------
    w : WheelIntervals
    model : RoverModel

    Returns
    -------
    bounds : StateBounds
        With ``clearance`` unset.

    Raises
    ------
    KinematicInfeasible
        If an endpoint combination is beyond the reach of a link.
    AttitudeDomainError
        If the roll bound is undefined.
    """
    rocker, bogie = model.rocker, model.bogie
    sides = {}

    for s in ('l', 'r'):
        f = w['f' + s]
        if bogie is not None:
            m, r = w['m' + s], w['r' + s]
            z_b = Interval(tri_height(m.lo, r.lo, bogie),
                           tri_height(m.hi, r.hi, bogie))
            k_b = Interval(kappa(m.lo, r.hi, bogie), kappa(m.hi, r.lo, bogie))
        else:
            z_b, k_b = w['r' + s], None

        z_d = Interval(tri_height(f.lo, z_b.lo, rocker),
                       tri_height(f.hi, z_b.hi, rocker))
        k_d = Interval(kappa(f.lo, z_b.hi, rocker),
                       kappa(f.hi, z_b.lo, rocker))
        sides[s] = (z_b, z_d, k_d, k_b)

    (z_b_l, z_d_l, k_d_l, k_b_l), (z_b_r, z_d_r, k_d_r, k_b_r) = \
        sides['l'], sides['r']

    delta = Interval(0.5 * (k_d_r.lo - k_d_l.hi), 0.5 * (k_d_r.hi - k_d_l.lo))

    if bogie is not None:
        offset = model.kappa_b0 - model.kappa_d0
        beta_l = Interval(k_d_l.lo - k_b_l.hi + offset,
                          k_d_l.hi - k_b_l.lo + offset)
        beta_r = Interval(k_d_r.lo - k_b_r.hi + offset,
                          k_d_r.hi - k_b_r.lo + offset)
    else:
        beta_l = beta_r = Interval(0.0)

    phi = Interval(roll_angle(z_d_l.hi, z_d_r.lo, model.y_od),
                   roll_angle(z_d_l.lo, z_d_r.hi, model.y_od))
    theta = Interval(model.kappa_d0 - 0.5 * (k_d_l.hi + k_d_r.hi),
                     model.kappa_d0 - 0.5 * (k_d_l.lo + k_d_r.lo))
    abs_phi, abs_theta = phi.abs(), theta.abs()

    if abs_phi.hi >= math.pi / 2 or abs_theta.hi >= math.pi / 2:
        raise AttitudeDomainError("Attitude bounds reach pi/2: phi=%r, "
                                  "theta=%r" % (phi, theta))

    z_o = (_mean(z_d_l, z_d_r) + _offset_term(abs_phi, abs_theta, model) +
           _lever_term(theta, abs_phi, model))

    cos_phi, cos_theta = _cos(abs_phi), _cos(abs_theta)
    z_p = Interval(
        z_o.lo - model.c_0 * cos_theta.hi * cos_phi.hi +
        0.5 * model.l_p * math.sin(abs_theta.lo) * cos_phi.lo +
        0.5 * model.w_p * math.sin(abs_phi.lo),
        z_o.hi - model.c_0 * cos_theta.lo * cos_phi.lo +
        0.5 * model.l_p * math.sin(abs_theta.hi) * cos_phi.hi +
        0.5 * model.w_p * math.sin(abs_phi.hi))

    return StateBounds(delta=delta, beta_l=beta_l, beta_r=beta_r,
                       z_d_l=z_d_l, z_d_r=z_d_r, z_b_l=z_b_l, z_b_r=z_b_r,
                       phi=phi, theta=theta, z_o=z_o, z_p=z_p, wheels=w)


def bounds_via_extremes(w, model):
    """ State bounds from the exact kinematics at every interval corner.

    Solves the suspension for all combinations of wheel interval endpoints
    and keeps the range of each quantity. Tighter than
    :func:`propagate_bounds` for the bogie angles and heights, but not
    guaranteed to contain the state for heights inside the intervals.

    Parameters
    ----------
    w : WheelIntervals
    model : RoverModel

    Returns
    -------
    bounds : StateBounds
    """
    values = {k: [] for k in ('delta', 'beta_l', 'beta_r', 'z_d_l', 'z_d_r',
                              'z_b_l', 'z_b_r', 'phi', 'theta', 'z_o',
                              'z_p')}

    for heights in w.corners():
        suspension, body = solve(heights, model)
        values['delta'].append(suspension.delta_l)
        for key in values:
            if key in ('phi', 'theta', 'z_o', 'z_p'):
                values[key].append(getattr(body, key))
            elif key != 'delta':
                values[key].append(getattr(suspension, key))

    ranges = {k: Interval(min(v), max(v)) for k, v in values.items()}
    return StateBounds(wheels=w, **ranges)


def pan_region(bounds, model):
    """ Heading-frame rectangle covering the belly pan footprint for every
    attitude within the bounds. """
    sin_phi = math.sin(bounds.abs_phi.hi)
    sin_theta = math.sin(bounds.abs_theta.hi)
    half_x = 0.5 * model.l_p + model.c_0 * sin_theta
    half_y = (0.5 * model.w_p + 0.5 * model.l_p * sin_phi * sin_theta +
              model.c_0 * sin_phi)
    return WheelBoxQuery(0.0, 0.0, 2 * half_x, 2 * half_y)


def clearance_interval(bounds, dem, pose, model, epsilon=0.0):
    """ Bounds on the belly pan clearance.

    The ground height is the highest terrain point (smallest z-down value)
    under :func:`pan_region`, lowered by the perception margin.

    Parameters
    ----------
    bounds : StateBounds
    dem : Dem
    pose : Pose2D
    model : RoverModel
    epsilon : float, optional (default=0)

    Returns
    -------
    clearance : Interval

    Raises
    ------
    Unevaluatable
        If the region leaves the DEM or covers unknown cells.
    """
    try:
        z_g = minmax_in_box(dem, pose, pan_region(bounds, model))
    except OutOfBounds as e:
        raise Unevaluatable('out_of_bounds', "Belly pan region: %s" % e)
    if z_g is None:
        raise Unevaluatable('unknown_terrain',
                            "Unknown terrain under the belly pan")

    ground = z_g.lo - epsilon
    return Interval(ground - bounds.z_p.hi, ground - bounds.z_p.lo)


def safety_verdict(bounds, thresholds):
    """ Applies the safety gate to bounds with a computed clearance. """
    beta = hull(bounds.beta_l, bounds.beta_r)
    metrics = {
        'clearance': metric(bounds.clearance.lo >= thresholds.min_clearance,
                            bounds.clearance.lo, thresholds.min_clearance),
        'tilt': metric(bounds.tilt <= thresholds.max_tilt, bounds.tilt,
                       thresholds.max_tilt),
        'delta': metric(bounds.delta.issubset(thresholds.delta_range),
                        bounds.delta, thresholds.delta_range),
        'beta': metric(all(b.issubset(thresholds.beta_range)
                           for b in (bounds.beta_l, bounds.beta_r)),
                       beta, thresholds.beta_range),
        'wheel_drop': metric(bounds.wheel_drop <= thresholds.max_wheel_drop,
                             bounds.wheel_drop, thresholds.max_wheel_drop),
    }
    return SafetyVerdict.from_metrics(metrics)


def evaluate_pose(dem, pose, model, thresholds=None, epsilon=0.0):
    """ Conservative safety assessment of a single pose.

    Computes the wheel intervals, propagates them to state bounds, bounds
    the clearance and applies the safety gate. A wheel pair beyond the reach
    of its link is reported as unsafe through the wheel drop metric.

    Parameters
    ----------
    dem : Dem
    pose : Pose2D
    model : RoverModel
    thresholds : SafetyThresholds, optional
        Defaults to ``SafetyThresholds()``.
    epsilon : float, optional (default=0)
        Perception margin (m).

    Returns
    -------
    bounds : StateBounds or None
        None when the verdict is unevaluatable or kinematically infeasible.
    verdict : SafetyVerdict

    Examples
    --------
    >>> from acelib.kinematics import canonical_rover
    >>> from acelib.terrain import generate_quadratic, Pose2D
    >>> from acelib.ace import evaluate_pose
    >>> dem = generate_quadratic(0.0)
    >>> bounds, verdict = evaluate_pose(dem, Pose2D(0, 0, 0),
    ...                                 canonical_rover())
    >>> verdict.overall
    'safe'
    """
    thresholds = (thresholds or SafetyThresholds()).resolve(model)

    try:
        wheels = wheel_height_intervals(dem, pose, model, epsilon)
    except Unevaluatable as e:
        return None, SafetyVerdict(UNEVALUATABLE, reason=e.reason)

    try:
        bounds = propagate_bounds(wheels, model)
    except (KinematicInfeasible, AttitudeDomainError) as e:
        drop = metric(False, wheels.max_width, thresholds.max_wheel_drop)
        return None, SafetyVerdict.from_metrics({'wheel_drop': drop},
                                                reason=str(e))

    try:
        bounds.clearance = clearance_interval(bounds, dem, pose, model,
                                              epsilon)
    except Unevaluatable as e:
        return bounds, SafetyVerdict(UNEVALUATABLE, reason=e.reason)

    return bounds, safety_verdict(bounds, thresholds)


def _mean(a, b):
    return Interval(0.5 * (a.lo + b.lo), 0.5 * (a.hi + b.hi))


def _cos(abs_angle):
    return Interval(math.cos(abs_angle.hi), math.cos(abs_angle.lo))


def _offset_term(abs_phi, abs_theta, model):
    # -z_od cos(theta) cos(phi)
    c_lo = math.cos(abs_theta.hi) * math.cos(abs_phi.hi)
    c_hi = math.cos(abs_theta.lo) * math.cos(abs_phi.lo)
    a, b = -model.z_od * c_lo, -model.z_od * c_hi
    return Interval(min(a, b), max(a, b))


def _lever_term(theta, abs_phi, model):
    # x_od sin(theta) cos(phi), extreme at the corners
    values = [model.x_od * math.sin(t) * math.cos(p)
              for t in (theta.lo, theta.hi) for p in (abs_phi.lo, abs_phi.hi)]
    return Interval(min(values), max(values))
