import math
import warnings

import numpy as np
from sklearn.exceptions import ConvergenceWarning

from acelib.ace import wheel_boxes
from acelib.exceptions import OutOfBounds, SuspensionLimitExceeded, \
    Unevaluatable
from acelib.kinematics import horizontal_offsets, solve, wheel_points
from acelib.oracle.classes import SettleResult
from acelib.terrain import minmax_in_region, rect_corners

# rim samples of a wheel footprint, heading frame, unit radius
_RIM_SAMPLES = 128
_RIM = np.column_stack([
    np.cos(np.arange(_RIM_SAMPLES) * 2 * np.pi / _RIM_SAMPLES),
    np.sin(np.arange(_RIM_SAMPLES) * 2 * np.pi / _RIM_SAMPLES)])


def settle(dem, pose, model, tol=1e-6, max_iter=200, enforce_limits=True,
           verbose=False):
    """ Settles the rover on the terrain at a pose.

    Starting from the flat-ground configuration, alternates between reading
    the contact height under each wheel and solving the suspension for
    those heights, until the wheels stop moving to other heights. The
    contact height is the highest point of the bilinear terrain surface
    (see :meth:`Dem.surface_heights`) over the disc of radius
    ``wheel_radius`` around the wheel contact point, taken over the cell
    centers inside the disc and a dense sampling of its rim.

    Parameters
    ----------
    dem : Dem
    pose : Pose2D
    model : RoverModel
    tol : float, optional (default=1e-6)
        Largest accepted wheel-terrain gap (m).
    max_iter : int, optional (default=200)
    enforce_limits : bool, optional (default=True)
        Raise if the settled state leaves the joint limits.
    verbose : bool, optional (default=False)
        Print the residual of every iteration.

    Returns
    -------
    result : SettleResult
        If the iteration does not converge, the iterate with the smallest
        residual is returned with ``converged=False`` and a
        ``ConvergenceWarning`` is issued.

    Raises
    ------
    Unevaluatable
        If a footprint leaves the DEM or touches unknown cells.
    KinematicInfeasible
        If the terrain is beyond the reach of the suspension.
    SuspensionLimitExceeded
        If ``enforce_limits`` and the state leaves the joint limits.
    """
    return _settle(dem, pose, model, None, tol, max_iter, enforce_limits,
                   verbose)


def settle_constrained(dem, pose, model, boxes=None, tol=1e-6, max_iter=200,
                       enforce_limits=True, verbose=False):
    """ Settles the rover with each wheel contact kept inside a box.

    Each footprint sample is moved to the nearest point of its box before
    reading the contact height, and the height is kept within the range of
    the box cells around the footprint. With the ACE wheel boxes the contact
    heights therefore stay inside the intervals the bounds were computed
    from.

    Parameters
    ----------
    dem : Dem
    pose : Pose2D
    model : RoverModel
    boxes : list of WheelBoxQuery, optional
        One region per wheel in ``model.wheel_names`` order. Defaults to
        the ACE wheel boxes.
    tol, max_iter, enforce_limits, verbose
        As in :func:`settle`.

    Returns
    -------
    result : SettleResult
    """
    if boxes is None:
        boxes = wheel_boxes(model)
    if len(boxes) != model.n_wheels:
        raise ValueError("Expected %d contact regions, got %d"
                         % (model.n_wheels, len(boxes)))
    return _settle(dem, pose, model, [b.bounds for b in boxes], tol,
                   max_iter, enforce_limits, verbose)


def pan_clearance(dem, pose, model, body):
    """ Exact belly pan clearance for a body state. """
    half_x, half_y = model.l_p / 2, model.w_p / 2
    corners = np.array([[half_x, half_y, -model.c_0],
                        [half_x, -half_y, -model.c_0],
                        [-half_x, -half_y, -model.c_0],
                        [-half_x, half_y, -model.c_0]])
    footprint = pose.to_world(horizontal_offsets(corners, body.phi,
                                                 body.theta))
    try:
        rows, cols = dem.region_cells(footprint)
    except OutOfBounds as e:
        raise Unevaluatable('out_of_bounds', "Belly pan: %s" % e)

    z = dem.heights[rows, cols]
    if np.isnan(z).any():
        raise Unevaluatable('unknown_terrain',
                            "Unknown terrain under the belly pan")
    return float(z.min() - body.z_p)


def _settle(dem, pose, model, regions, tol, max_iter, enforce_limits,
            verbose):
    if not tol > 0:
        raise ValueError("Invalid value for 'tol': %r" % tol)
    if max_iter < 1:
        raise ValueError("Invalid value for 'max_iter': %d" % max_iter)

    offsets = horizontal_offsets(wheel_points(model), 0.0, 0.0)
    heights, _ = _contacts(dem, pose, model, offsets, regions)
    best = None

    for iteration in range(1, max_iter + 1):
        suspension, body = solve(heights, model)
        offsets = horizontal_offsets(
            wheel_points(model, suspension.delta_l, suspension.beta_l,
                         suspension.beta_r), body.phi, body.theta)
        new_heights, contacts = _contacts(dem, pose, model, offsets, regions)
        residual = float(np.max(np.abs(new_heights - heights)))

        if verbose:
            print("Settle iteration %d, residual %.3e m" % (iteration,
                                                           residual))

        if best is None or residual < best[4]:
            best = (suspension, body, heights, contacts, residual, iteration)

        if residual <= tol:
            break

        heights = new_heights

    suspension, body, heights, contacts, residual, iteration = best
    converged = residual <= tol

    if not converged:
        warnings.warn("Settling did not converge after %d iterations "
                      "(best residual %.3e m at iteration %d)"
                      % (max_iter, residual, iteration), ConvergenceWarning)

    result = SettleResult(suspension, body, heights, contacts, residual,
                          iteration, converged,
                          pan_clearance(dem, pose, model, body),
                          model.wheel_names)

    if enforce_limits:
        _check_limits(result, model)

    return result


def _contacts(dem, pose, model, offsets, regions):
    heights = np.empty(model.n_wheels)
    contacts = np.empty((model.n_wheels, 3))

    for k, center in enumerate(offsets):
        name = model.wheel_names[k]
        points = _footprint(dem, pose, center, model.wheel_radius)
        if regions is not None:
            x_lo, x_hi, y_lo, y_hi = regions[k]
            points = np.column_stack([np.clip(points[:, 0], x_lo, x_hi),
                                      np.clip(points[:, 1], y_lo, y_hi)])

        world = pose.to_world(points)
        try:
            z = dem.surface_heights(world)
            limits = None if regions is None else \
                _region_range(dem, pose, points, regions[k])
        except OutOfBounds as e:
            raise Unevaluatable('out_of_bounds', "Wheel '%s': %s"
                                % (name, e))

        if np.isnan(z).any() or (regions is not None and limits is None):
            raise Unevaluatable('unknown_terrain', "Unknown terrain under "
                                "wheel '%s'" % name)

        top = z.min()
        ties = np.flatnonzero(z == top)
        dist = np.hypot(points[ties, 0] - center[0],
                        points[ties, 1] - center[1])
        pick = ties[np.argmin(dist)]

        if limits is not None:
            top = min(max(top, limits.lo), limits.hi)

        heights[k] = top
        contacts[k] = (world[pick, 0], world[pick, 1], top)

    return heights, contacts


def _footprint(dem, pose, center, radius):
    """ Heading-frame samples of a wheel footprint: its center, its rim and
    the cell centers inside it. """
    rim = center + radius * _RIM
    cx, cy = pose.to_world(center)
    x0, y0 = dem.origin_xy
    res = dem.resolution

    rows = np.arange(max(math.ceil((cx - radius - x0) / res - 0.5), 0),
                     min(math.floor((cx + radius - x0) / res - 0.5),
                         dem.n_rows - 1) + 1)
    cols = np.arange(max(math.ceil((cy - radius - y0) / res - 0.5), 0),
                     min(math.floor((cy + radius - y0) / res - 0.5),
                         dem.n_cols - 1) + 1)
    dx, dy = np.meshgrid(x0 + (rows + 0.5) * res - pose.x,
                         y0 + (cols + 0.5) * res - pose.y, indexing='ij')
    c, s = math.cos(pose.psi), math.sin(pose.psi)
    nodes = np.column_stack([(c * dx + s * dy).ravel(),
                             (c * dy - s * dx).ravel()])
    nodes = nodes[np.hypot(nodes[:, 0] - center[0],
                           nodes[:, 1] - center[1]) <= radius]

    return np.vstack([center[np.newaxis, :], rim, nodes])


def _region_range(dem, pose, points, region):
    # cells within a diagonal of the samples hold every interpolation
    # neighbour; keeping to the region keeps to its cells
    pad = dem.resolution * math.sqrt(2)
    lo, hi = points.min(axis=0) - pad, points.max(axis=0) + pad
    return minmax_in_region(dem, rect_corners(
        pose, max(lo[0], region[0]), min(hi[0], region[1]),
        max(lo[1], region[2]), min(hi[1], region[3])))


def _check_limits(result, model):
    s = result.suspension
    outside = []
    if not model.delta_limits.contains(s.delta_l):
        outside.append("delta_l=%.4f" % s.delta_l)
    if model.bogie is not None:
        for name in ('beta_l', 'beta_r'):
            if not model.beta_limits.contains(getattr(s, name)):
                outside.append("%s=%.4f" % (name, getattr(s, name)))
    if outside:
        raise SuspensionLimitExceeded(
            "Settled state outside the joint limits: %s"
            % ", ".join(outside), result)
