import math
import os

import numpy as np

from acelib.exceptions import AttitudeDomainError, InvalidModelFile, \
    KinematicInfeasible, NonMonotoneConfiguration
from acelib.kinematics.classes import BodyState, RoverModel, \
    SuspensionState, WheelHeights, ROCKER, ROCKER_BOGIE

# arcsin arguments within this distance of [-1, 1] are clamped
_ASIN_SLOP = 1e-12


def kappa(z_a, z_b, tri):
    """ Angle of link CA below the horizontal.

    Parameters
    ----------
    z_a, z_b : float
        Heights (z-down) of vertices A and B.
    tri : TriangleParams

    Returns
    -------
    kappa : float
        ``phi_a + arcsin((z_a - z_b) / l_ab)``.

    Raises
    ------
    KinematicInfeasible
        If ``|z_a - z_b| > l_ab``.
    """
    ratio = (z_a - z_b) / tri.l_ab

    if not -1.0 <= ratio <= 1.0:
        if abs(ratio) > 1.0 + _ASIN_SLOP:
            raise KinematicInfeasible(
                "Heights %.6g and %.6g are %.6g m apart, beyond the %.6g m "
                "reach of the link" % (z_a, z_b, abs(z_a - z_b), tri.l_ab))
        ratio = max(-1.0, min(1.0, ratio))

    return tri.phi_a + math.asin(ratio)


def tri_height(z_a, z_b, tri):
    """ Height of the joint C given the heights of A and B. """
    return z_a - tri.l_ca * math.sin(kappa(z_a, z_b, tri))


def roll_angle(z_d_l, z_d_r, y_od):
    """ Body roll from the differential joint heights. """
    ratio = (z_d_r - z_d_l) / (2 * y_od)

    if not -1.0 <= ratio <= 1.0:
        if abs(ratio) > 1.0 + _ASIN_SLOP:
            raise AttitudeDomainError(
                "Differential joints are %.6g m apart in height, more than "
                "the %.6g m joint spacing" % (abs(z_d_r - z_d_l), 2 * y_od))
        ratio = max(-1.0, min(1.0, ratio))

    return math.asin(ratio)


def body_height(z_d_l, z_d_r, phi, theta, model):
    """ Body origin height from the joint heights and the attitude. """
    return (0.5 * (z_d_l + z_d_r) +
            model.x_od * math.sin(theta) * math.cos(phi) -
            model.z_od * math.cos(theta) * math.cos(phi))


def pan_lowest_height(body, model):
    """ Height (z-down) of the lowest point of the belly pan.

    Parameters
    ----------
    body : BodyState
        Only ``phi``, ``theta`` and ``z_o`` are used.
    model : RoverModel

    Returns
    -------
    z_p : float
    """
    phi, theta = body.phi, body.theta
    if not (abs(phi) < math.pi / 2 and abs(theta) < math.pi / 2):
        raise AttitudeDomainError("Attitude out of range: phi=%r, theta=%r"
                                  % (phi, theta))

    return (body.z_o - model.c_0 * math.cos(theta) * math.cos(phi) +
            0.5 * model.l_p * math.sin(abs(theta)) * math.cos(phi) +
            0.5 * model.w_p * math.sin(abs(phi)))


def solve_rocker(heights, model):
    """ Exact state of a four-wheel rocker rover.

    Parameters
    ----------
    heights : WheelHeights, dict or array-like
        Wheel heights; arrays follow ``model.wheel_names``.
    model : RoverModel
        A model with ``variant == 'rocker'``.

    Returns
    -------
    suspension : SuspensionState
    body : BodyState
    """
    if model.variant != ROCKER:
        raise ValueError("solve_rocker needs a 'rocker' model, got %r"
                         % model.variant)
    z = _heights(heights, model)
    tri = model.rocker

    k_l = kappa(z['fl'], z['rl'], tri)
    k_r = kappa(z['fr'], z['rr'], tri)
    z_d_l = z['fl'] - tri.l_ca * math.sin(k_l)
    z_d_r = z['fr'] - tri.l_ca * math.sin(k_r)

    suspension = SuspensionState(delta_l=0.5 * (k_r - k_l), beta_l=0.0,
                                 beta_r=0.0, z_d_l=z_d_l, z_d_r=z_d_r,
                                 z_b_l=z['rl'], z_b_r=z['rr'])
    return suspension, _body(z_d_l, z_d_r, k_l, k_r, model)


def solve_rocker_bogie(heights, model):
    """ Exact state of a six-wheel rocker-bogie rover.

    The bogie joint heights are solved first from the middle and rear
    wheels, then the rocker from the front wheel and the bogie joint.

    Parameters
    ----------
    heights : WheelHeights, dict or array-like
        Wheel heights; arrays follow ``model.wheel_names``.
    model : RoverModel
        A model with ``variant == 'rocker-bogie'``.

    Returns
    -------
    suspension : SuspensionState
    body : BodyState

    Raises
    ------
    KinematicInfeasible
        If some wheel pair is beyond the reach of its link.
    AttitudeDomainError
        If the roll is undefined.
    """
    if model.variant != ROCKER_BOGIE:
        raise ValueError("solve_rocker_bogie needs a 'rocker-bogie' model, "
                         "got %r" % model.variant)
    z = _heights(heights, model)
    rocker, bogie = model.rocker, model.bogie

    k_b_l = kappa(z['ml'], z['rl'], bogie)
    k_b_r = kappa(z['mr'], z['rr'], bogie)
    z_b_l = z['ml'] - bogie.l_ca * math.sin(k_b_l)
    z_b_r = z['mr'] - bogie.l_ca * math.sin(k_b_r)

    k_l = kappa(z['fl'], z_b_l, rocker)
    k_r = kappa(z['fr'], z_b_r, rocker)
    z_d_l = z['fl'] - rocker.l_ca * math.sin(k_l)
    z_d_r = z['fr'] - rocker.l_ca * math.sin(k_r)

    offset = model.kappa_b0 - model.kappa_d0
    suspension = SuspensionState(delta_l=0.5 * (k_r - k_l),
                                 beta_l=k_l - k_b_l + offset,
                                 beta_r=k_r - k_b_r + offset,
                                 z_d_l=z_d_l, z_d_r=z_d_r,
                                 z_b_l=z_b_l, z_b_r=z_b_r)
    return suspension, _body(z_d_l, z_d_r, k_l, k_r, model)


def solve(heights, model):
    """ Dispatches to the solver of the model's variant. """
    if model.variant == ROCKER:
        return solve_rocker(heights, model)
    return solve_rocker_bogie(heights, model)


def assert_monotone_regime(model, n_samples=2001):
    """ Checks that the joint heights are monotone in the wheel heights.

    For every suspension triangle, the joint height ``z_c(z_a, z_b)`` must
    be non-decreasing in both arguments for all link angles reachable
    within the mechanical limits: the rocker angle range for the rocker and
    the bogie angle range for the bogie. Interval propagation relies on
    this.

    Parameters
    ----------
    model : RoverModel
    n_samples : int, optional (default=2001)
        Number of link angles scanned per triangle.

    Raises
    ------
    NonMonotoneConfiguration
        Naming the triangle, the limit and the first offending angle.
    """
    checks = [('rocker', model.rocker, model.kappa_d0, model.delta_limits,
               'delta_limits')]
    if model.bogie is not None:
        checks.append(('bogie', model.bogie, model.kappa_b0,
                       model.beta_limits, 'beta_limits'))

    for name, tri, kappa_0, limits, limit_name in checks:
        k = kappa_0 + np.linspace(limits.lo, limits.hi, n_samples)
        alpha = k - tri.phi_a
        vertical = np.abs(alpha) >= math.pi / 2

        with np.errstate(divide='ignore', invalid='ignore'):
            d_zb = tri.l_ca * np.cos(k) / (tri.l_ab * np.cos(alpha))
        bad = vertical | (d_zb < 0) | (1 - d_zb < 0)

        if bad.any():
            raise NonMonotoneConfiguration(
                "The %s triangle is not monotone at kappa=%.4f rad, inside "
                "%s [%.4f, %.4f]" % (name, k[bad][0], limit_name, limits.lo,
                                     limits.hi))


def wheel_points(model, delta_l=0.0, beta_l=0.0, beta_r=0.0):
    """ Body-frame wheel contact points for a suspension configuration.

    Parameters
    ----------
    model : RoverModel
    delta_l : float, optional (default=0)
        Left rocker angle; the right one is ``-delta_l``.
    beta_l, beta_r : float, optional (default=0)
        Bogie angles.

    Returns
    -------
    points : ndarray, shape=(n_wheels, 3)
        ``(x, y, z)`` per wheel in ``model.wheel_names`` order, z-down,
        with the flat-ground contacts at ``z = 0``.
    """
    left = _side_points(model, delta_l, beta_l)
    right = _side_points(model, -delta_l, beta_r)

    points = np.empty((model.n_wheels, 3))
    for i, name in enumerate(model.wheel_names):
        side = left if name[1] == 'l' else right
        x, z = side[name[0]]
        points[i] = (x, model.y_od if name[1] == 'r' else -model.y_od, z)
    return points


def horizontal_offsets(points, phi, theta):
    """ Heading-frame (forward, right) coordinates of body points.

    Parameters
    ----------
    points : array-like, shape=(n, 3)
        Body-frame points, z-down.
    phi, theta : float
        Roll and pitch.

    Returns
    -------
    offsets : ndarray, shape=(n, 2)
    """
    points = np.asarray(points, dtype=float)
    x, y, z = points[..., 0], points[..., 1], points[..., 2]
    sp, cp = math.sin(phi), math.cos(phi)
    st, ct = math.sin(theta), math.cos(theta)
    forward = ct * x + st * z
    right = sp * st * x + cp * y - sp * ct * z
    return np.stack([forward, right], axis=-1)


def world_heights(points, body):
    """ Heights (z-down) of body points for a given body state. """
    points = np.asarray(points, dtype=float)
    sp, cp = math.sin(body.phi), math.cos(body.phi)
    st, ct = math.sin(body.theta), math.cos(body.theta)
    return (body.z_o - st * cp * points[..., 0] + sp * points[..., 1] +
            cp * ct * points[..., 2])


def wheel_envelope(model, n_samples=15):
    """ Extent of each wheel's contact point in the heading frame.

    Sweeps the rocker and bogie angles over their limits and roll and pitch
    over ``model.tilt_limit`` on a regular grid.

    Returns
    -------
    envelope : ndarray, shape=(n_wheels, 4)
        ``x_min, x_max, y_min, y_max`` per wheel.
    """
    deltas = np.linspace(model.delta_limits.lo, model.delta_limits.hi,
                         n_samples)
    if model.bogie is not None:
        betas = np.linspace(model.beta_limits.lo, model.beta_limits.hi,
                            n_samples)
    else:
        betas = np.zeros(1)
    tilts = np.linspace(-model.tilt_limit, model.tilt_limit, n_samples)

    d, b, phi, theta = (a.ravel() for a in
                        np.meshgrid(deltas, betas, tilts, tilts,
                                    indexing='ij'))
    sp, cp = np.sin(phi), np.cos(phi)
    st, ct = np.sin(theta), np.cos(theta)

    sides = {'l': _side_points(model, d, b), 'r': _side_points(model, -d, b)}
    envelope = np.empty((model.n_wheels, 4))

    for i, name in enumerate(model.wheel_names):
        x, z = sides[name[1]][name[0]]
        y = model.y_od if name[1] == 'r' else -model.y_od
        forward = ct * x + st * z
        right = sp * st * x + cp * y - sp * ct * z
        envelope[i] = (forward.min(), forward.max(), right.min(),
                       right.max())

    return envelope


def load_rover_model(path):
    """ Reads a rover model file.

    The file holds one ``key = value`` pair per line; ``#`` starts a
    comment. Lengths are in meters and angles in radians. Keys are the
    ``RoverModel`` parameters, with the joint limits given as
    ``delta_min``, ``delta_max``, ``beta_min`` and ``beta_max``.

    Parameters
    ----------
    path : str

    Returns
    -------
    model : RoverModel

    Raises
    ------
    InvalidModelFile
        On syntax errors, unknown or missing keys.
    NonMonotoneConfiguration
        If the model fails the monotone regime check.
    """
    if not os.path.isfile(path):
        raise InvalidModelFile("Rover model file not found: %s" % path)

    values = {}
    with open(path) as f:
        for number, line in enumerate(f, start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise InvalidModelFile("%s:%d: expected 'key = value'"
                                       % (path, number))
            key, value = (s.strip() for s in line.split('=', 1))
            if key not in _FILE_KEYS:
                raise InvalidModelFile("%s:%d: unknown key '%s'"
                                       % (path, number, key))
            if key == 'variant':
                values[key] = value
                continue
            try:
                values[key] = float(value)
            except ValueError:
                raise InvalidModelFile("%s:%d: invalid number '%s' for '%s'"
                                       % (path, number, value, key))

    variant = values.get('variant', ROCKER_BOGIE)
    required = list(_REQUIRED)
    if variant == ROCKER_BOGIE:
        required += ['l_bm', 'l_br', 'phi_b']
    missing = [k for k in required if k not in values]
    if missing:
        raise InvalidModelFile("%s: missing keys %s"
                               % (path, ", ".join(missing)))

    params = {k: v for k, v in values.items() if k not in _LIMIT_KEYS}
    params['variant'] = variant
    params['delta_limits'] = (values.get('delta_min', -0.6),
                              values.get('delta_max', 0.6))
    params['beta_limits'] = (values.get('beta_min', -0.7),
                             values.get('beta_max', 0.7))
    if variant == ROCKER:
        for key in ('l_bm', 'l_br', 'phi_b'):
            params.pop(key, None)

    return RoverModel(**params)


def save_rover_model(model, path):
    """ Writes a model in the format read by ``load_rover_model``. """
    params = model.get_params()
    delta, beta = params.pop('delta_limits'), params.pop('beta_limits')
    params.update(delta_min=delta[0], delta_max=delta[1],
                  beta_min=beta[0], beta_max=beta[1])

    with open(path, 'w') as f:
        f.write("# acelib rover model\n")
        f.write("# lengths in meters, angles in radians, heights z-down\n")
        f.write("variant = %s\n" % params.pop('variant'))
        for key in sorted(params):
            f.write("%s = %r\n" % (key, float(params[key])))


def canonical_rover(**overrides):
    """ Small six-wheel rover used in examples and tests. """
    params = dict(l_df=1.2, l_db=1.0, phi_f=2.1, l_bm=0.6, l_br=0.6,
                  phi_b=2.4, x_od=0.4, y_od=0.8, c_0=0.6, w_p=1.0, l_p=1.8,
                  wheel_box_x=0.4, wheel_box_y=0.3, wheel_radius=0.25,
                  delta_limits=(-0.6, 0.6), beta_limits=(-0.7, 0.7))
    params.update(overrides)
    return RoverModel(**params)


def benchmark_rover(wheelbase=2.7):
    """ Canonical rover scaled to the given wheelbase, with joint and tilt
    limits typical of a flight rover. Used by the planner benchmark. """
    base = canonical_rover()
    return base.scaled(wheelbase / base.wheelbase,
                       delta_limits=(-0.35, 0.35), beta_limits=(-0.45, 0.45),
                       tilt_limit=math.radians(20))


_REQUIRED = ['l_df', 'l_db', 'phi_f', 'x_od', 'y_od', 'c_0', 'w_p', 'l_p',
             'wheel_box_x', 'wheel_box_y', 'wheel_radius']
_LIMIT_KEYS = ('delta_min', 'delta_max', 'beta_min', 'beta_max')
_FILE_KEYS = set(_REQUIRED + list(_LIMIT_KEYS) +
                 ['variant', 'l_bm', 'l_br', 'phi_b', 'z_od', 'tilt_limit'])


def _heights(heights, model):
    if isinstance(heights, WheelHeights):
        return {n: heights[n] for n in model.wheel_names}
    if isinstance(heights, dict):
        return {n: float(heights[n]) for n in model.wheel_names}
    heights = WheelHeights.from_array(heights, model.wheel_names)
    return {n: heights[n] for n in model.wheel_names}


def _body(z_d_l, z_d_r, k_l, k_r, model):
    phi = roll_angle(z_d_l, z_d_r, model.y_od)
    theta = model.kappa_d0 - 0.5 * (k_l + k_r)
    body = BodyState(phi, theta, body_height(z_d_l, z_d_r, phi, theta,
                                             model))
    body.z_p = pan_lowest_height(body, model)
    return body


def _rotate(vx, vz, angle):
    # counter-clockwise in the (x, up) plane
    c, s = np.cos(angle), np.sin(angle)
    return vx * c + vz * s, vz * c - vx * s


def _side_points(model, delta, beta):
    x_d, z_d = model.x_od, model.z_od
    links = model.link_vectors

    fx, fz = _rotate(links['f'][0], links['f'][1], delta)
    points = {'f': (x_d + fx, z_d + fz)}

    if model.bogie is None:
        rx, rz = _rotate(links['r'][0], links['r'][1], delta)
        points['r'] = (x_d + rx, z_d + rz)
        return points

    bx, bz = _rotate(links['b'][0], links['b'][1], delta)
    bx, bz = x_d + bx, z_d + bz
    for key in ('m', 'r'):
        vx, vz = _rotate(links[key][0], links[key][1], delta + beta)
        points[key] = (bx + vx, bz + vz)
    return points
