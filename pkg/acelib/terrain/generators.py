import math

import numpy as np
from scipy.optimize import brentq
from scipy.stats import truncnorm
from sklearn.utils import check_random_state

from acelib.exceptions import PlacementFailure
from acelib.terrain.dem import Dem


def generate_quadratic(a, extent=8.0, resolution=0.05):
    """ Terrain ``z = a * x**2`` centered on the origin.

    Cell centers lie on multiples of ``resolution`` so that the cell under
    the origin has its center at (0, 0). Heights are z-down: a negative
    ``a`` gives a convex terrain.

    Parameters
    ----------
    a : float
        Curvature coefficient (1/m).
    extent : float or tuple, optional (default=8.0)
        Size of the grid along x and y (m).
    resolution : float, optional (default=0.05)

    Returns
    -------
    dem : Dem
    """
    xs, ys, origin = _centered_axes(extent, resolution)
    heights = np.repeat((a * xs ** 2)[:, np.newaxis], ys.size, axis=1)
    return Dem(heights, resolution, origin,
               {'generator': 'quadratic',
                'params': {'a': a, 'extent': _pair(extent),
                           'resolution': resolution},
                'seed': None})


def generate_bump(extent=(24.0, 8.0), resolution=0.05, bump_height=0.2,
                  bump_center=(0.0, 0.0), bump_width=1.0, bump_length=None):
    """ Flat terrain with a smooth bump.

    Across x the bump has a raised-cosine profile of width ``bump_width``.
    Along y it is flat over ``bump_length`` and tapers with the same
    profile at both ends; with ``bump_length=None`` it is a ridge across the
    whole grid.

    Parameters
    ----------
    extent : float or tuple, optional (default=(24, 8))
    resolution : float, optional (default=0.05)
    bump_height : float, optional (default=0.2)
        Height of the bump top above the base (m).
    bump_center : tuple, optional (default=(0, 0))
    bump_width : float, optional (default=1.0)
    bump_length : float or None, optional (default=None)

    Returns
    -------
    dem : Dem
    """
    if bump_height < 0:
        raise ValueError("Invalid value for 'bump_height': %r" % bump_height)
    if not bump_width > 0:
        raise ValueError("Invalid value for 'bump_width': %r" % bump_width)

    xs, ys, origin = _centered_axes(extent, resolution)
    cx, cy = bump_center
    half = bump_width / 2

    if cx - half < xs[0] or cx + half > xs[-1]:
        raise ValueError("Invalid bump: center %r and width %r do not fit "
                         "in the grid" % (bump_center, bump_width))

    profile_x = _raised_cosine(np.abs(xs - cx), half)
    if bump_length is None:
        profile_y = np.ones_like(ys)
    else:
        overhang = np.maximum(np.abs(ys - cy) - bump_length / 2, 0.0)
        profile_y = _raised_cosine(overhang, half)

    heights = -bump_height * np.outer(profile_x, profile_y)
    heights[heights == 0] = 0.0

    return Dem(heights, resolution, origin,
               {'generator': 'bump',
                'params': {'extent': _pair(extent), 'resolution': resolution,
                           'bump_height': bump_height,
                           'bump_center': list(bump_center),
                           'bump_width': bump_width,
                           'bump_length': bump_length},
                'seed': None})


def size_frequency_coefficient(cfa, d_min):
    """ Coefficient ``k`` of the cumulative area model.

    The fraction of area covered by rocks of diameter at least ``D`` is
    modeled as ``F(D) = k * exp(-q(k) * D)`` with
    ``q(k) = 1.79 + 0.152 / k``. Returns the ``k`` for which the rocks
    larger than ``d_min`` cover a fraction ``cfa``.
    """
    if not 0 < cfa < 1:
        raise ValueError("Invalid value for 'cfa': %r" % cfa)

    def residual(k):
        return k * math.exp(-_q(k) * d_min) - cfa

    if residual(1.0) < 0:
        raise ValueError("Cannot reach cfa=%r with rocks above %r m"
                         % (cfa, d_min))
    return brentq(residual, cfa, 1.0)


def generate_rock_field(cfa, extent=(30.0, 40.0), resolution=0.1,
                        random_state=None, d_min=None, d_max=2.0,
                        keep_out=(), tolerance=0.004, max_attempts=None):
    """ Flat terrain populated with hemispherical rocks.

    Rock diameters follow the number density implied by the cumulative area
    model of :func:`size_frequency_coefficient`. Rocks are placed uniformly
    at random, without touching each other, until the fraction of cells
    under a rock is within ``tolerance`` of ``cfa``.

    Parameters
    ----------
    cfa : float
        Requested covered fraction of area, in [0, 0.25].
    extent : float or tuple, optional (default=(30, 40))
        Size of the grid along x and y (m). The grid starts at (0, 0).
    resolution : float, optional (default=0.1)
    random_state : int, RandomState instance or None, optional
        Seed of the placement.
    d_min : float, optional (default=max(0.2, 2 * resolution))
        Smallest rock diameter (m).
    d_max : float, optional (default=2.0)
        Largest rock diameter (m).
    keep_out : sequence of (x, y, radius), optional
        Discs that must stay free of rocks.
    tolerance : float, optional (default=0.004)
        Accepted deviation of the covered fraction from ``cfa``.
    max_attempts : int, optional
        Placement attempts before giving up.

    Returns
    -------
    dem : Dem
        ``dem.metadata['achieved_cfa']`` holds the covered fraction.

    Raises
    ------
    PlacementFailure
        If the requested coverage cannot be reached.
    """
    if not 0 <= cfa <= 0.25:
        raise ValueError("Invalid value for 'cfa': %r (expected a value in "
                         "[0, 0.25])" % cfa)

    seed = random_state if isinstance(random_state, (int, np.integer)) \
        else None
    random_state = check_random_state(random_state)
    length_x, length_y = _pair(extent)
    n_rows = int(round(length_x / resolution))
    n_cols = int(round(length_y / resolution))
    heights = np.zeros((n_rows, n_cols))
    covered = np.zeros((n_rows, n_cols), dtype=bool)

    d_min = max(0.2, 2 * resolution) if d_min is None else d_min
    if not 0 < d_min < d_max:
        raise ValueError("Invalid diameter range: [%r, %r]" % (d_min, d_max))

    target = cfa * covered.size
    slack = tolerance * covered.size
    count = 0
    n_rocks = 0

    if cfa > 0:
        q = _q(size_frequency_coefficient(cfa, d_min))
        diameters = np.linspace(d_min, d_max, 4096)
        cdf = np.cumsum(np.exp(-q * diameters) / diameters ** 2)
        cdf /= cdf[-1]

        if max_attempts is None:
            max_attempts = 200 * int(target / (math.pi * (d_min / resolution)
                                               ** 2 / 4) + 1) + 10000
        attempts = 0

        while count < target - slack:
            attempts += 1
            if attempts > max_attempts:
                raise PlacementFailure(
                    "Placed %d rocks covering %.4f of the area after %d "
                    "attempts; requested %.4f" % (n_rocks,
                                                  count / covered.size,
                                                  max_attempts, cfa))

            radius = 0.5 * np.interp(random_state.uniform(), cdf, diameters)
            x = random_state.uniform(radius, length_x - radius)
            y = random_state.uniform(radius, length_y - radius)

            if any(math.hypot(x - kx, y - ky) <= kr + radius
                   for kx, ky, kr in keep_out):
                continue

            rows, cols, r = _disc_cells(x, y, radius + resolution,
                                        resolution, n_rows, n_cols)
            inside = r < radius
            n_inside = int(inside.sum())

            if n_inside == 0 or covered[rows, cols].any():
                continue
            if count + n_inside > target + slack:
                continue

            rows, cols, r = rows[inside], cols[inside], r[inside]
            heights[rows, cols] = -np.sqrt(radius ** 2 - r ** 2)
            covered[rows, cols] = True
            count += n_inside
            n_rocks += 1

    return Dem(heights, resolution, (0.0, 0.0),
               {'generator': 'rock_field',
                'params': {'cfa': cfa, 'extent': [length_x, length_y],
                           'resolution': resolution, 'd_min': d_min,
                           'd_max': d_max,
                           'keep_out': [list(k) for k in keep_out]},
                'seed': None if seed is None else int(seed),
                'n_rocks': n_rocks,
                'achieved_cfa': count / covered.size})


def covered_fraction(dem):
    """ Fraction of known cells standing above the zero base. """
    known = dem.known
    return float((dem.heights[known] < 0).sum()) / max(known.sum(), 1)


def add_height_noise(dem, sigma, truncate=None, random_state=None):
    """ Adds zero-mean truncated Gaussian noise to every known cell.

    Parameters
    ----------
    dem : Dem
    sigma : float
        Standard deviation of the noise (m).
    truncate : float, optional (default=3 * sigma)
        Largest absolute noise value (m).
    random_state : int, RandomState instance or None, optional

    Returns
    -------
    noisy : Dem
    """
    if sigma < 0:
        raise ValueError("Invalid value for 'sigma': %r" % sigma)
    if sigma == 0:
        return dem.with_heights(dem.heights)

    truncate = 3 * sigma if truncate is None else truncate
    random_state = check_random_state(random_state)
    bound = truncate / sigma
    noise = truncnorm.rvs(-bound, bound, scale=sigma, size=dem.shape,
                          random_state=random_state)
    noise = np.clip(noise, -truncate, truncate)

    return dem.with_heights(dem.heights + noise, noise_sigma=sigma,
                            noise_truncate=truncate)


def _q(k):
    return 1.79 + 0.152 / k


def _raised_cosine(distance, half_width):
    profile = 0.5 * (1 + np.cos(np.pi * distance / half_width))
    return np.where(distance < half_width, profile, 0.0)


def _pair(extent):
    if np.isscalar(extent):
        return [float(extent), float(extent)]
    return [float(extent[0]), float(extent[1])]


def _centered_axes(extent, resolution):
    if not resolution > 0:
        raise ValueError("Invalid value for 'resolution': %r" % resolution)
    length_x, length_y = _pair(extent)
    n_x = int(round(length_x / resolution)) + 1
    n_y = int(round(length_y / resolution)) + 1
    xs = (np.arange(n_x) - (n_x - 1) // 2) * resolution
    ys = (np.arange(n_y) - (n_y - 1) // 2) * resolution
    origin = (xs[0] - resolution / 2, ys[0] - resolution / 2)
    return xs, ys, origin


def _disc_cells(x, y, radius, resolution, n_rows, n_cols):
    i_lo = max(int((x - radius) / resolution), 0)
    i_hi = min(int((x + radius) / resolution) + 1, n_rows)
    j_lo = max(int((y - radius) / resolution), 0)
    j_hi = min(int((y + radius) / resolution) + 1, n_cols)
    rows, cols = np.meshgrid(np.arange(i_lo, i_hi), np.arange(j_lo, j_hi),
                             indexing='ij')
    rows, cols = rows.ravel(), cols.ravel()
    r = np.hypot((rows + 0.5) * resolution - x, (cols + 0.5) * resolution - y)
    return rows, cols, r