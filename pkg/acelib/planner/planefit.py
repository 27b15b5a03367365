import math

import numpy as np
from scipy import linalg, ndimage

from acelib.ace.classes import SafetyVerdict, metric, UNEVALUATABLE
from acelib.exceptions import OutOfBounds, Unevaluatable
from acelib.kinematics import pan_lowest_height
from acelib.kinematics.classes import BodyState

# neighbor directions covering every adjacent pair once
_PAIRS = ((0, 1), (1, 0), (1, 1), (1, -1))


class PlanefitThresholds(object):
    """ Hazard limits of the plane-fit traversability check.

    Parameters
    ----------
    max_slope : float, optional (default=20 deg)
        Largest plane tilt (rad).
    max_roughness : float, optional (default=0.10)
        Largest distance (m) of a cell from the fitted plane.
    max_step : float, optional (default=0.20)
        Largest height difference (m) between adjacent cells.
    window_radius : float, optional (default=1.25)
        Radius (m) of the fitting window.
    rover_radius : float, optional
        Hazard inflation radius (m). Defaults to the rover footprint radius.
    """

    def __init__(self, max_slope=math.radians(20), max_roughness=0.10,
                 max_step=0.20, window_radius=1.25, rover_radius=None):
        for name, value in (('max_slope', max_slope),
                            ('max_roughness', max_roughness),
                            ('max_step', max_step),
                            ('window_radius', window_radius),
                            ('rover_radius', rover_radius)):
            if value is not None and not value > 0:
                raise ValueError("Invalid value for '%s': %r (must be > 0)"
                                 % (name, value))

        self.max_slope = float(max_slope)
        self.max_roughness = float(max_roughness)
        self.max_step = float(max_step)
        self.window_radius = float(window_radius)
        self.rover_radius = rover_radius

    def resolve(self, model):
        radius = self.rover_radius if self.rover_radius is not None \
            else model.footprint_radius
        return PlanefitThresholds(self.max_slope, self.max_roughness,
                                  self.max_step, self.window_radius, radius)

    def to_dict(self):
        return {'max_slope': self.max_slope,
                'max_roughness': self.max_roughness,
                'max_step': self.max_step,
                'window_radius': self.window_radius,
                'rover_radius': self.rover_radius}


def planefit_metrics(dem, pose, window_radius=1.25):
    """ Least-squares plane over the cells around a pose.

    Parameters
    ----------
    dem : Dem
    pose : Pose2D
    window_radius : float, optional (default=1.25)

    Returns
    -------
    metrics : dict
        ``slope`` (rad), ``roughness`` and ``step`` (m), ``plane`` as
        ``(c, p, q)`` with ``z = c + p (x - pose.x) + q (y - pose.y)``,
        ``ground_top`` (smallest z-down value in the window) and
        ``n_points``.

    Raises
    ------
    Unevaluatable
        If the window leaves the DEM or holds unknown cells.
    """
    z, dx, dy, mask = _window(dem, pose.x, pose.y, window_radius)
    values = z[mask]

    if np.isnan(values).any():
        raise Unevaluatable('unknown_terrain',
                            "Unknown terrain in the plane-fit window")

    a = np.column_stack([np.ones(values.size), dx[mask], dy[mask]])
    coef, _, _, _ = linalg.lstsq(a, values)
    residuals = values - a.dot(coef)

    return {'slope': float(math.atan(math.hypot(coef[1], coef[2]))),
            'roughness': float(np.abs(residuals).max()),
            'step': _window_step(z, mask),
            'plane': tuple(float(c) for c in coef),
            'ground_top': float(values.min()),
            'n_points': int(values.size)}


def planefit_estimate(dem, pose, model, window_radius=1.25):
    """ Rover state predicted by placing the body on the fitted plane.

    Returns a dict with ``phi``, ``theta``, ``z_o``, ``z_p`` and
    ``clearance``; the suspension is assumed undeflected.
    """
    m = planefit_metrics(dem, pose, window_radius)
    c, p, q = m['plane']
    c_psi, s_psi = math.cos(pose.psi), math.sin(pose.psi)
    g_f = p * c_psi + q * s_psi
    g_r = -p * s_psi + q * c_psi

    phi = math.atan(g_r)
    theta = math.asin(-g_f / math.sqrt(1 + g_f ** 2 + g_r ** 2))
    z_p = pan_lowest_height(BodyState(phi, theta, c), model)

    return {'phi': phi, 'theta': theta, 'z_o': c, 'z_p': z_p,
            'clearance': m['ground_top'] - z_p,
            'delta': 0.0, 'beta_l': 0.0, 'beta_r': 0.0}


class GoodnessMap(object):
    """ Per-cell plane-fit hazard metrics of a whole DEM.

    Cells whose window touches unknown terrain or the DEM border are
    marked unknown. Use :func:`goodness_map` to build one.

    Attributes
    ----------
    slope, roughness, step : ndarray
        Metric of the window centered at each cell.
    unknown : ndarray of bool
    thresholds : PlanefitThresholds
    """

    def __init__(self, dem, slope, roughness, step, unknown, thresholds):
        self.dem = dem
        self.slope = slope
        self.roughness = roughness
        self.step = step
        self.unknown = unknown
        self.thresholds = thresholds
        self._disk = _disk(thresholds.rover_radius / dem.resolution)
        self._half = self._disk.shape[0] // 2

    def verdict(self, pose):
        """ Worst metrics within the rover radius of the pose cell. """
        try:
            i, j = self.dem.cell_index(pose.x, pose.y)
        except OutOfBounds:
            return SafetyVerdict(UNEVALUATABLE, reason='out_of_bounds')

        h = self._half
        if (i - h < 0 or j - h < 0 or i + h >= self.dem.n_rows or
                j + h >= self.dem.n_cols):
            return SafetyVerdict(UNEVALUATABLE, reason='out_of_bounds')

        window = (slice(i - h, i + h + 1), slice(j - h, j + h + 1))
        if (self.unknown[window] & self._disk).any():
            return SafetyVerdict(UNEVALUATABLE, reason='unknown_terrain')

        th = self.thresholds
        values = {name: float(getattr(self, name)[window][self._disk].max())
                  for name in ('slope', 'roughness', 'step')}

        return SafetyVerdict.from_metrics({
            'slope': metric(values['slope'] <= th.max_slope,
                            values['slope'], th.max_slope),
            'roughness': metric(values['roughness'] <= th.max_roughness,
                                values['roughness'], th.max_roughness),
            'step': metric(values['step'] <= th.max_step, values['step'],
                           th.max_step)})


def goodness_map(dem, model, thresholds=None):
    """ Plane-fit metrics for every cell of a DEM.

    Parameters
    ----------
    dem : Dem
    model : RoverModel
        Provides the default hazard inflation radius.
    thresholds : PlanefitThresholds, optional

    Returns
    -------
    goodness : GoodnessMap
    """
    thresholds = (thresholds or PlanefitThresholds()).resolve(model)
    res = dem.resolution
    kernel = _disk(thresholds.window_radius / res).astype(float)
    r = kernel.shape[0] // 2
    du, dv = np.mgrid[-r:r + 1, -r:r + 1] * res

    heights = dem.heights
    unknown = np.isnan(heights)
    z = np.where(unknown, 0.0, heights)

    n = kernel.sum()
    c = ndimage.correlate(z, kernel, mode='constant') / n
    p = ndimage.correlate(z, kernel * du, mode='constant') / \
        (kernel * du ** 2).sum()
    q = ndimage.correlate(z, kernel * dv, mode='constant') / \
        (kernel * dv ** 2).sum()
    touched = ndimage.correlate(unknown.astype(float), kernel,
                                mode='constant', cval=1.0)

    padded = np.pad(z, r, mode='edge')
    n_rows, n_cols = z.shape
    roughness = np.zeros_like(z)
    for a, b in zip(*np.nonzero(kernel)):
        shifted = padded[a:a + n_rows, b:b + n_cols]
        plane = c + p * du[a, b] + q * dv[a, b]
        np.maximum(roughness, np.abs(shifted - plane), out=roughness)

    local = np.zeros_like(z)
    edge = np.pad(z, 1, mode='edge')
    for a in range(3):
        for b in range(3):
            shifted = edge[a:a + n_rows, b:b + n_cols]
            np.maximum(local, np.abs(shifted - z), out=local)
    step = ndimage.maximum_filter(local, footprint=kernel.astype(bool),
                                  mode='nearest')

    slope = np.arctan(np.hypot(p, q))
    return GoodnessMap(dem, slope, roughness, step, touched > 0.5,
                       thresholds)


def planefit_check(dem, pose, model, thresholds=None):
    """ Plane-fit safety verdict of a single pose.

    Slope, roughness and step hazards are computed for every cell within
    the rover radius of the pose, and the worst of each is compared with
    its threshold.

    Parameters
    ----------
    dem : Dem
    pose : Pose2D
    model : RoverModel
    thresholds : PlanefitThresholds, optional

    Returns
    -------
    verdict : SafetyVerdict
    """
    thresholds = (thresholds or PlanefitThresholds()).resolve(model)

    try:
        i, j = dem.cell_index(pose.x, pose.y)
    except OutOfBounds:
        return SafetyVerdict(UNEVALUATABLE, reason='out_of_bounds')

    margin = int(math.ceil((thresholds.rover_radius +
                            thresholds.window_radius) / dem.resolution)) + 2
    local = dem.crop(i - margin, i + margin + 1, j - margin, j + margin + 1)
    return goodness_map(local, model, thresholds).verdict(pose)


def _disk(radius_cells):
    r = int(math.floor(radius_cells + 1e-9))
    u, v = np.mgrid[-r:r + 1, -r:r + 1]
    return u ** 2 + v ** 2 <= radius_cells ** 2 + 1e-9


def _window(dem, x, y, radius):
    x_min, x_max, y_min, y_max = dem.extent
    if (x - radius < x_min or x + radius > x_max or y - radius < y_min or
            y + radius > y_max):
        raise Unevaluatable('out_of_bounds', "Plane-fit window at (%.3f, "
                            "%.3f) leaves the DEM" % (x, y))

    x0, y0 = dem.origin_xy
    res = dem.resolution
    i_lo = max(int(math.ceil((x - radius - x0) / res - 0.5)), 0)
    i_hi = min(int(math.floor((x + radius - x0) / res - 0.5)), dem.n_rows - 1)
    j_lo = max(int(math.ceil((y - radius - y0) / res - 0.5)), 0)
    j_hi = min(int(math.floor((y + radius - y0) / res - 0.5)), dem.n_cols - 1)

    dx = x0 + (np.arange(i_lo, i_hi + 1) + 0.5) * res - x
    dy = y0 + (np.arange(j_lo, j_hi + 1) + 0.5) * res - y
    dx, dy = np.meshgrid(dx, dy, indexing='ij')
    mask = dx ** 2 + dy ** 2 <= radius ** 2 + 1e-9
    return dem.heights[i_lo:i_hi + 1, j_lo:j_hi + 1], dx, dy, mask


def _window_step(z, mask):
    n, m = z.shape
    step = 0.0
    for di, dj in _PAIRS:
        a = (slice(0, n - di), slice(max(0, -dj), m - max(0, dj)))
        b = (slice(di, n), slice(max(0, dj), m - max(0, -dj)))
        both = mask[a] & mask[b]
        if both.any():
            step = max(step, float(np.abs(z[a] - z[b])[both].max()))
    return step
