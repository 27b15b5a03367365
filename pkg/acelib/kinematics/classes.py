import math

import numpy as np

from acelib.interval import Interval

ROCKER = 'rocker'
ROCKER_BOGIE = 'rocker-bogie'

_WHEELS = {ROCKER_BOGIE: ('fl', 'fr', 'ml', 'mr', 'rl', 'rr'),
           ROCKER: ('fl', 'fr', 'rl', 'rr')}


class TriangleParams(object):
    """ Suspension triangle ABC with the joint at C.

    A is the front wheel (or front sub-linkage), B the rear one and C the
    joint the triangle pivots about.

    Parameters
    ----------
    l_ca : float
        Length of side CA in meters.
    l_ab : float
        Length of side AB in meters.
    phi_a : float
        Interior angle at A in radians, ``0 < phi_a < pi``.
    """

    def __init__(self, l_ca, l_ab, phi_a):
        if not l_ca > 0:
            raise ValueError("Invalid value for 'l_ca': %r" % l_ca)
        if not l_ab > 0:
            raise ValueError("Invalid value for 'l_ab': %r" % l_ab)
        if not 0 < phi_a < math.pi:
            raise ValueError("Invalid value for 'phi_a': %r (expected a "
                             "value in (0, pi))" % phi_a)

        self.l_ca = float(l_ca)
        self.l_ab = float(l_ab)
        self.phi_a = float(phi_a)

    @classmethod
    def from_apex(cls, l_ca, l_cb, phi_c):
        """ Builds the triangle from its two links and the apex angle at C.
        """
        if not 0 < phi_c < math.pi:
            raise ValueError("Invalid apex angle: %r (expected a value in "
                             "(0, pi))" % phi_c)
        l_ab = math.sqrt(l_ca ** 2 + l_cb ** 2 -
                         2 * l_ca * l_cb * math.cos(phi_c))
        cos_a = (l_ca ** 2 + l_ab ** 2 - l_cb ** 2) / (2 * l_ca * l_ab)
        return cls(l_ca, l_ab, math.acos(max(-1.0, min(1.0, cos_a))))

    def __repr__(self):
        return "TriangleParams(l_ca=%r, l_ab=%r, phi_a=%r)" % (
            self.l_ca, self.l_ab, self.phi_a)


class RoverModel(object):
    """ Geometry and limits of a rocker or rocker-bogie rover.

    All heights follow the z-down convention. The flat-ground link angles
    ``kappa_d0`` and ``kappa_b0`` and the differential joint height
    ``z_od`` are obtained by settling the suspension on flat ground, so that
    all-zero wheel heights always give a zero state.

    Parameters
    ----------
    l_df : float
        Link from the differential joint to the front wheel (m).
    l_db : float
        Link from the differential joint to the bogie joint (m). For the
        pure rocker variant this is the link to the rear wheel.
    phi_f : float
        Rocker apex angle at the differential joint (rad).
    x_od, y_od : float
        Offsets of the differential joints from the body origin (m). The
        joints sit at ``y = -y_od`` (left) and ``y = +y_od`` (right).
    c_0 : float
        Nominal ground clearance of the belly pan (m).
    w_p, l_p : float
        Belly pan width and length (m).
    wheel_box_x, wheel_box_y : float
        Size of a wheel's contact footprint along and across the heading (m).
    wheel_radius : float
        Wheel radius (m). Default wheel drop threshold.
    l_bm, l_br, phi_b : float, optional
        Bogie links to the middle and rear wheels and bogie apex angle.
        Required for the rocker-bogie variant.
    delta_limits : tuple, optional (default=(-0.6, 0.6))
        Mechanical range of the rocker angle (rad).
    beta_limits : tuple, optional (default=(-0.7, 0.7))
        Mechanical range of the bogie angles (rad).
    variant : str, optional (default='rocker-bogie')
        'rocker' or 'rocker-bogie'.
    tilt_limit : float, optional (default=pi/6)
        Largest roll and pitch considered when sizing the wheel boxes.
    z_od : float, optional
        Differential joint height. It is always derived by calibration; a
        given value must agree with it.
    check_regime : bool, optional (default=True)
        Whether to reject models that are not monotone within the limits.

    Attributes
    ----------
    rocker : TriangleParams
        Rocker triangle (front wheel, bogie joint or rear wheel, differential
        joint).
    bogie : TriangleParams or None
        Bogie triangle (middle wheel, rear wheel, bogie joint).
    kappa_d0, kappa_b0 : float
        Flat-ground link angles. ``kappa_b0`` is 0 for the rocker variant.
    z_d0, z_b0 : float
        Flat-ground joint heights relative to the wheels.
    wheel_names : tuple
        Wheel identifiers in canonical order.
    """

    def __init__(self, l_df, l_db, phi_f, x_od, y_od, c_0, w_p, l_p,
                 wheel_box_x, wheel_box_y, wheel_radius, l_bm=None,
                 l_br=None, phi_b=None, delta_limits=(-0.6, 0.6),
                 beta_limits=(-0.7, 0.7), variant=ROCKER_BOGIE,
                 tilt_limit=math.pi / 6, z_od=None, check_regime=True):
        if variant not in _WHEELS:
            raise ValueError("Invalid value for 'variant': %r (expected "
                             "'rocker' or 'rocker-bogie')" % variant)

        lengths = dict(l_df=l_df, l_db=l_db, y_od=y_od, c_0=c_0, w_p=w_p,
                       l_p=l_p, wheel_box_x=wheel_box_x,
                       wheel_box_y=wheel_box_y, wheel_radius=wheel_radius)
        if variant == ROCKER_BOGIE:
            lengths.update(l_bm=l_bm, l_br=l_br)
            if phi_b is None:
                raise ValueError("Invalid value for 'phi_b': None (required "
                                 "for the rocker-bogie variant)")

        for key in sorted(lengths):
            value = lengths[key]
            if value is None or not value > 0:
                raise ValueError("Invalid value for '%s': %r (must be > 0)"
                                 % (key, value))

        if not 0 < tilt_limit < math.pi / 2:
            raise ValueError("Invalid value for 'tilt_limit': %r" % tilt_limit)

        self.variant = variant
        self.l_df = float(l_df)
        self.l_db = float(l_db)
        self.phi_f = float(phi_f)
        self.l_bm = float(l_bm) if variant == ROCKER_BOGIE else None
        self.l_br = float(l_br) if variant == ROCKER_BOGIE else None
        self.phi_b = float(phi_b) if variant == ROCKER_BOGIE else None
        self.x_od = float(x_od)
        self.y_od = float(y_od)
        self.c_0 = float(c_0)
        self.w_p = float(w_p)
        self.l_p = float(l_p)
        self.wheel_box_x = float(wheel_box_x)
        self.wheel_box_y = float(wheel_box_y)
        self.wheel_radius = float(wheel_radius)
        self.tilt_limit = float(tilt_limit)
        self.delta_limits = _limits(delta_limits, 'delta_limits')
        self.beta_limits = _limits(beta_limits, 'beta_limits')
        self.wheel_names = _WHEELS[variant]

        self.rocker = TriangleParams.from_apex(self.l_df, self.l_db,
                                               self.phi_f)
        if variant == ROCKER_BOGIE:
            self.bogie = TriangleParams.from_apex(self.l_bm, self.l_br,
                                                  self.phi_b)
        else:
            self.bogie = None

        self._calibrate()

        if z_od is not None and abs(z_od - self.z_od) > 1e-6:
            raise ValueError("Invalid value for 'z_od': %r (flat-ground "
                             "calibration gives %r)" % (z_od, self.z_od))

        self._envelope = None

        if check_regime:
            from acelib.kinematics.base import assert_monotone_regime
            assert_monotone_regime(self)

    def _calibrate(self):
        rocker = self.rocker

        if self.bogie is not None:
            # flat ground: middle and rear wheels at the same height
            self.kappa_b0 = self.bogie.phi_a
            self.z_b0 = -self.bogie.l_ca * math.sin(self.kappa_b0)
        else:
            self.kappa_b0 = 0.0
            self.z_b0 = 0.0

        ratio = -self.z_b0 / rocker.l_ab
        if abs(ratio) >= 1:
            raise ValueError("Invalid suspension geometry: the rocker cannot "
                             "reach the bogie joint on flat ground")
        self.kappa_d0 = rocker.phi_a + math.asin(ratio)
        self.z_d0 = -rocker.l_ca * math.sin(self.kappa_d0)
        self.z_od = self.z_d0

        # flat-ground link vectors in the body (x, z-down) side plane
        alpha0 = self.kappa_d0 - rocker.phi_a
        front = np.array([rocker.l_ca * math.cos(self.kappa_d0),
                          rocker.l_ca * math.sin(self.kappa_d0)])
        rear = front + rocker.l_ab * np.array([-math.cos(alpha0),
                                               -math.sin(alpha0)])
        self.link_vectors = {'f': front}

        if self.bogie is None:
            self.link_vectors['r'] = rear
        else:
            bogie = self.bogie
            middle = np.array([bogie.l_ca * math.cos(self.kappa_b0),
                               bogie.l_ca * math.sin(self.kappa_b0)])
            alpha_b0 = self.kappa_b0 - bogie.phi_a
            self.link_vectors['b'] = rear
            self.link_vectors['m'] = middle
            self.link_vectors['r'] = middle + bogie.l_ab * np.array(
                [-math.cos(alpha_b0), -math.sin(alpha_b0)])

    @property
    def n_wheels(self):
        return len(self.wheel_names)

    @property
    def wheel_envelope(self):
        """ Per-wheel extent of contact point motion, shape (n_wheels, 4).

        Columns are ``x_min, x_max, y_min, y_max`` in the heading frame,
        over the joint limits and the tilt limit.
        """
        if self._envelope is None:
            from acelib.kinematics.base import wheel_envelope
            self._envelope = wheel_envelope(self)
        return self._envelope

    @property
    def wheelbase(self):
        from acelib.kinematics.base import wheel_points
        x = wheel_points(self)[:, 0]
        return float(x.max() - x.min())

    @property
    def footprint_radius(self):
        """ Radius of the circle around the body origin covering all wheel
        footprints on flat ground. """
        from acelib.kinematics.base import wheel_points
        pts = wheel_points(self)
        reach = np.hypot(np.abs(pts[:, 0]) + self.wheel_box_x / 2,
                         np.abs(pts[:, 1]) + self.wheel_box_y / 2)
        pan = math.hypot(self.l_p / 2, self.w_p / 2)
        return float(max(reach.max(), pan))

    def get_params(self):
        """ Constructor parameters of this model. """
        params = dict(variant=self.variant, l_df=self.l_df, l_db=self.l_db,
                      phi_f=self.phi_f, x_od=self.x_od, y_od=self.y_od,
                      c_0=self.c_0, w_p=self.w_p, l_p=self.l_p,
                      wheel_box_x=self.wheel_box_x,
                      wheel_box_y=self.wheel_box_y,
                      wheel_radius=self.wheel_radius,
                      delta_limits=tuple(self.delta_limits),
                      beta_limits=tuple(self.beta_limits),
                      tilt_limit=self.tilt_limit)
        if self.variant == ROCKER_BOGIE:
            params.update(l_bm=self.l_bm, l_br=self.l_br, phi_b=self.phi_b)
        return params

    def scaled(self, factor, **overrides):
        """ Copy of this model with every length multiplied by ``factor``.

        Angles are kept. Keyword arguments override constructor parameters
        of the copy.
        """
        if not factor > 0:
            raise ValueError("Invalid value for 'factor': %r" % factor)
        params = self.get_params()
        for key in ('l_df', 'l_db', 'l_bm', 'l_br', 'x_od', 'y_od', 'c_0',
                    'w_p', 'l_p', 'wheel_box_x', 'wheel_box_y',
                    'wheel_radius'):
            if params.get(key) is not None:
                params[key] = params[key] * factor
        params.update(overrides)
        return RoverModel(**params)

    def __repr__(self):
        return "RoverModel(variant=%r, wheelbase=%.3f)" % (self.variant,
                                                           self.wheelbase)


class WheelHeights(object):
    """ Terrain height (z-down, m) under each wheel.

    Parameters
    ----------
    fl, fr, rl, rr : float
        Front and rear wheels, left and right.
    ml, mr : float, optional
        Middle wheels (rocker-bogie only).
    """

    def __init__(self, fl, fr, rl, rr, ml=None, mr=None):
        self._z = {'fl': float(fl), 'fr': float(fr), 'rl': float(rl),
                   'rr': float(rr)}
        if (ml is None) != (mr is None):
            raise ValueError("Invalid middle wheel heights: both or none "
                             "must be given")
        if ml is not None:
            self._z['ml'] = float(ml)
            self._z['mr'] = float(mr)

        for key, value in self._z.items():
            if not math.isfinite(value):
                raise ValueError("Invalid height for wheel '%s': %r"
                                 % (key, value))

    @classmethod
    def from_array(cls, values, names):
        """ Builds heights from values ordered as ``names``. """
        values = np.asarray(values, dtype=float).ravel()
        if values.shape[0] != len(names):
            raise ValueError("Expected %d wheel heights, got %d"
                             % (len(names), values.shape[0]))
        return cls(**dict(zip(names, values)))

    @property
    def names(self):
        order = ('fl', 'fr', 'ml', 'mr', 'rl', 'rr')
        return tuple(n for n in order if n in self._z)

    def __getitem__(self, name):
        return self._z[name]

    def as_array(self, names=None):
        names = self.names if names is None else names
        return np.array([self._z[n] for n in names])

    def __repr__(self):
        return "WheelHeights(%s)" % ", ".join(
            "%s=%r" % (n, self._z[n]) for n in self.names)


class SuspensionState(object):
    """ Rocker and bogie angles and joint heights.

    For the pure rocker variant ``beta_l`` and ``beta_r`` are 0 and
    ``z_b_l``/``z_b_r`` are the rear wheel heights.

    Attributes
    ----------
    delta_l, delta_r : float
        Rocker angles (rad); ``delta_r == -delta_l``.
    beta_l, beta_r : float
        Bogie angles (rad).
    z_d_l, z_d_r : float
        Differential joint heights (m).
    z_b_l, z_b_r : float
        Bogie joint heights (m).
    """
    _fields = ('delta_l', 'delta_r', 'beta_l', 'beta_r', 'z_d_l', 'z_d_r',
               'z_b_l', 'z_b_r')

    def __init__(self, delta_l, beta_l, beta_r, z_d_l, z_d_r, z_b_l, z_b_r):
        self.delta_l = delta_l
        self.delta_r = -delta_l
        self.beta_l = beta_l
        self.beta_r = beta_r
        self.z_d_l = z_d_l
        self.z_d_r = z_d_r
        self.z_b_l = z_b_l
        self.z_b_r = z_b_r

    def to_dict(self):
        return {f: float(getattr(self, f)) for f in self._fields}

    def __repr__(self):
        return "SuspensionState(delta_l=%.6g, beta_l=%.6g, beta_r=%.6g)" % (
            self.delta_l, self.beta_l, self.beta_r)


class BodyState(object):
    """ Body attitude and heights.

    Attributes
    ----------
    phi : float
        Roll (rad), positive with the right side low.
    theta : float
        Pitch (rad), positive nose up.
    z_o : float
        Body origin height (m, z-down).
    z_p : float
        Height of the lowest belly pan point (m, z-down).
    """
    _fields = ('phi', 'theta', 'z_o', 'z_p')

    def __init__(self, phi, theta, z_o, z_p=None):
        self.phi = phi
        self.theta = theta
        self.z_o = z_o
        self.z_p = z_p

    @property
    def tilt(self):
        """ Angle between the body z axis and the vertical. """
        c = math.cos(self.phi) * math.cos(self.theta)
        return math.acos(max(-1.0, min(1.0, c)))

    def to_dict(self):
        return {f: None if getattr(self, f) is None
                else float(getattr(self, f)) for f in self._fields}

    def __repr__(self):
        return "BodyState(phi=%.6g, theta=%.6g, z_o=%.6g)" % (
            self.phi, self.theta, self.z_o)


def _limits(value, name):
    try:
        lo, hi = value
        return Interval(lo, hi)
    except (TypeError, ValueError):
        raise ValueError("Invalid value for '%s': %r (expected a (min, max) "
                         "pair)" % (name, value))
