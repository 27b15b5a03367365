import json
import math
import os

import numpy as np
from scipy import ndimage

from acelib.exceptions import OutOfBounds
from acelib.interval import Interval

# slack for inclusive cell/polygon overlap and extent tests
_TOL = 1e-9


def normalize_angle(angle):
    """ Wraps an angle to (-pi, pi]. """
    wrapped = math.fmod(angle + math.pi, 2 * math.pi)
    if wrapped <= 0:
        wrapped += 2 * math.pi
    return wrapped - math.pi


class Pose2D(object):
    """ Planar rover pose in the north-east frame.

    Parameters
    ----------
    x, y : float
        Position (m); x points north, y east.
    psi : float
        Heading (rad), measured from x toward y. Normalized to (-pi, pi].
    """
    __slots__ = ('x', 'y', 'psi')

    def __init__(self, x, y, psi=0.0):
        self.x = float(x)
        self.y = float(y)
        self.psi = normalize_angle(float(psi))

    @property
    def forward(self):
        return np.array([math.cos(self.psi), math.sin(self.psi)])

    @property
    def right(self):
        return np.array([-math.sin(self.psi), math.cos(self.psi)])

    def to_world(self, offsets):
        """ Maps heading-frame (forward, right) offsets to world x, y. """
        offsets = np.asarray(offsets, dtype=float)
        c, s = math.cos(self.psi), math.sin(self.psi)
        x = self.x + c * offsets[..., 0] - s * offsets[..., 1]
        y = self.y + s * offsets[..., 0] + c * offsets[..., 1]
        return np.stack([x, y], axis=-1)

    def distance_to(self, xy):
        return math.hypot(xy[0] - self.x, xy[1] - self.y)

    def to_list(self):
        return [self.x, self.y, self.psi]

    def __eq__(self, other):
        if not isinstance(other, Pose2D):
            return NotImplemented
        return self.to_list() == other.to_list()

    def __hash__(self):
        return hash((self.x, self.y, self.psi))

    def __repr__(self):
        return "Pose2D(x=%r, y=%r, psi=%r)" % (self.x, self.y, self.psi)


class WheelBoxQuery(object):
    """ Rectangle in the heading frame of a pose.

    Parameters
    ----------
    center_x, center_y : float
        Box center, forward and right of the body origin (m).
    size_x, size_y : float
        Box length along the heading and width across it (m).
    """

    def __init__(self, center_x, center_y, size_x, size_y):
        if not size_x > 0 or not size_y > 0:
            raise ValueError("Invalid box size: %r x %r (must be > 0)"
                             % (size_x, size_y))
        self.center_x = float(center_x)
        self.center_y = float(center_y)
        self.size_x = float(size_x)
        self.size_y = float(size_y)

    @property
    def bounds(self):
        """ ``(x_lo, x_hi, y_lo, y_hi)`` in the heading frame. """
        hx, hy = self.size_x / 2, self.size_y / 2
        return (self.center_x - hx, self.center_x + hx,
                self.center_y - hy, self.center_y + hy)

    def corners(self, pose):
        return rect_corners(pose, *self.bounds)

    def contains(self, other):
        """ True if the box ``other`` lies inside this one. """
        a, b = self.bounds, other.bounds
        return (a[0] <= b[0] and b[1] <= a[1] and a[2] <= b[2] and
                b[3] <= a[3])

    def __repr__(self):
        return "WheelBoxQuery(center=(%.4g, %.4g), size=(%.4g, %.4g))" % (
            self.center_x, self.center_y, self.size_x, self.size_y)


def rect_corners(pose, x_lo, x_hi, y_lo, y_hi):
    """ World corners of a heading-frame rectangle, shape (4, 2).

    Zero-size rectangles are allowed and give a segment or a point.
    """
    local = np.array([[x_lo, y_lo], [x_hi, y_lo], [x_hi, y_hi],
                      [x_lo, y_hi]])
    return pose.to_world(local)


class Dem(object):
    """ Regular grid of terrain heights.

    Heights follow the z-down convention: a rock is a negative height on a
    zero base. Row ``i`` spans ``x`` in ``[x0 + i * res, x0 + (i+1) * res]``
    and column ``j`` spans ``y`` in ``[y0 + j * res, y0 + (j+1) * res]``.
    Unknown cells hold NaN and are never read as a height.

    Parameters
    ----------
    heights : array-like, shape=(n_rows, n_cols)
        Cell heights (m, z-down). NaN marks unknown cells.
    resolution : float
        Cell size (m).
    origin_xy : tuple, optional (default=(0, 0))
        World coordinates of the lower corner of cell (0, 0).
    metadata : dict, optional
        Free-form description of how the grid was produced.

    Attributes
    ----------
    n_rows, n_cols : int
    known : ndarray of bool
        False on unknown cells.
    """

    def __init__(self, heights, resolution, origin_xy=(0.0, 0.0),
                 metadata=None):
        heights = np.array(heights, dtype=float)

        if heights.ndim != 2 or heights.size == 0:
            raise ValueError("Invalid heights: expected a non-empty 2D array, "
                             "got shape %s" % (heights.shape,))
        if not resolution > 0:
            raise ValueError("Invalid value for 'resolution': %r"
                             % resolution)
        if np.isinf(heights).any():
            raise ValueError("Invalid heights: infinite values")

        heights.setflags(write=False)
        self._heights = heights
        self._resolution = float(resolution)
        self._origin = (float(origin_xy[0]), float(origin_xy[1]))
        self.known = ~np.isnan(heights)
        self.known.setflags(write=False)
        self.metadata = dict(metadata) if metadata else {}

    @property
    def heights(self):
        return self._heights

    @property
    def resolution(self):
        return self._resolution

    @property
    def origin_xy(self):
        return self._origin

    @property
    def shape(self):
        return self._heights.shape

    @property
    def n_rows(self):
        return self._heights.shape[0]

    @property
    def n_cols(self):
        return self._heights.shape[1]

    @property
    def extent(self):
        """ ``(x_min, x_max, y_min, y_max)`` of the grid. """
        x0, y0 = self._origin
        return (x0, x0 + self.n_rows * self._resolution,
                y0, y0 + self.n_cols * self._resolution)

    def cell_centers(self):
        """ Cell center coordinates along x (rows) and y (columns). """
        x0, y0 = self._origin
        res = self._resolution
        return (x0 + (np.arange(self.n_rows) + 0.5) * res,
                y0 + (np.arange(self.n_cols) + 0.5) * res)

    def cell_index(self, x, y):
        """ Row and column of the cell containing (x, y). """
        x0, y0 = self._origin
        i = int(math.floor((x - x0) / self._resolution))
        j = int(math.floor((y - y0) / self._resolution))
        if not (0 <= i < self.n_rows and 0 <= j < self.n_cols):
            raise OutOfBounds("Point (%.4f, %.4f) is outside the DEM" % (x, y))
        return i, j

    def height_at(self, x, y):
        i, j = self.cell_index(x, y)
        return float(self._heights[i, j])

    def surface_heights(self, xy):
        """ Heights of the bilinear surface through the cell centers.

        Between the outermost cell centers and the grid edge the surface
        keeps the edge cell height. A point next to an unknown cell reads
        NaN.

        Parameters
        ----------
        xy : array-like, shape=(n, 2)
            World coordinates.

        Returns
        -------
        heights : ndarray, shape=(n,)

        Raises
        ------
        OutOfBounds
            If a point is outside the DEM extent.
        """
        xy = np.atleast_2d(np.asarray(xy, dtype=float))
        if not self.contains_xy(xy):
            raise OutOfBounds("Points outside the DEM extent %s"
                              % (self.extent,))

        x0, y0 = self._origin
        coords = np.vstack([(xy[:, 0] - x0) / self._resolution - 0.5,
                            (xy[:, 1] - y0) / self._resolution - 0.5])
        return ndimage.map_coordinates(self._heights, coords, order=1,
                                       mode='nearest')

    def contains_xy(self, xy):
        xy = np.asarray(xy, dtype=float)
        x_min, x_max, y_min, y_max = self.extent
        return bool(np.all((xy[..., 0] >= x_min - _TOL) &
                           (xy[..., 0] <= x_max + _TOL) &
                           (xy[..., 1] >= y_min - _TOL) &
                           (xy[..., 1] <= y_max + _TOL)))

    def region_cells(self, corners):
        """ Cells whose square intersects a convex polygon.

        Uses a separating axis test over the cell axes and the polygon edge
        normals, so a cell touching the polygon boundary is included.

        Parameters
        ----------
        corners : array-like, shape=(n, 2)
            Polygon vertices in order, world coordinates.

        Returns
        -------
        rows, cols : ndarray of int

        Raises
        ------
        OutOfBounds
            If the polygon is not inside the DEM extent.
        """
        corners = np.asarray(corners, dtype=float)

        if not self.contains_xy(corners):
            raise OutOfBounds("Query region %s extends beyond the DEM extent "
                              "%s" % (np.round(corners, 4).tolist(),
                                      self.extent))

        x0, y0 = self._origin
        res = self._resolution
        half = res / 2
        (x_min, y_min), (x_max, y_max) = corners.min(0), corners.max(0)

        i_lo = max(int(math.floor((x_min - x0) / res)) - 1, 0)
        i_hi = min(int(math.floor((x_max - x0) / res)) + 1, self.n_rows - 1)
        j_lo = max(int(math.floor((y_min - y0) / res)) - 1, 0)
        j_hi = min(int(math.floor((y_max - y0) / res)) + 1, self.n_cols - 1)

        rows, cols = np.meshgrid(np.arange(i_lo, i_hi + 1),
                                 np.arange(j_lo, j_hi + 1), indexing='ij')
        rows, cols = rows.ravel(), cols.ravel()
        cx = x0 + (rows + 0.5) * res
        cy = y0 + (cols + 0.5) * res

        keep = ((cx + half >= x_min - _TOL) & (cx - half <= x_max + _TOL) &
                (cy + half >= y_min - _TOL) & (cy - half <= y_max + _TOL))

        edges = np.roll(corners, -1, axis=0) - corners
        for ex, ey in edges:
            norm = math.hypot(ex, ey)
            if norm == 0:
                continue
            nx, ny = -ey / norm, ex / norm
            proj = corners[:, 0] * nx + corners[:, 1] * ny
            center = cx * nx + cy * ny
            radius = half * (abs(nx) + abs(ny))
            keep &= ((center + radius >= proj.min() - _TOL) &
                     (center - radius <= proj.max() + _TOL))

        return rows[keep], cols[keep]

    def minmax_in_box(self, pose, box):
        """ See :func:`minmax_in_box`. """
        return minmax_in_region(self, box.corners(pose))

    def crop(self, i_lo, i_hi, j_lo, j_hi):
        """ Sub-grid of rows ``i_lo:i_hi`` and columns ``j_lo:j_hi``. """
        i_lo, j_lo = max(i_lo, 0), max(j_lo, 0)
        i_hi, j_hi = min(i_hi, self.n_rows), min(j_hi, self.n_cols)
        if i_lo >= i_hi or j_lo >= j_hi:
            raise OutOfBounds("Empty crop [%d:%d, %d:%d]"
                              % (i_lo, i_hi, j_lo, j_hi))
        x0, y0 = self._origin
        return Dem(self._heights[i_lo:i_hi, j_lo:j_hi], self._resolution,
                   (x0 + i_lo * self._resolution,
                    y0 + j_lo * self._resolution), self.metadata)

    def with_heights(self, heights, **metadata):
        """ Same grid geometry with other heights. """
        meta = dict(self.metadata)
        meta.update(metadata)
        return Dem(heights, self._resolution, self._origin, meta)

    def __repr__(self):
        return "Dem(shape=%s, resolution=%r, origin_xy=%r)" % (
            self.shape, self._resolution, self._origin)


def minmax_in_region(dem, corners):
    """ Height range over the cells intersecting a convex polygon.

    Returns None if any of those cells is unknown.
    """
    rows, cols = dem.region_cells(corners)
    z = dem.heights[rows, cols]
    if z.size == 0 or np.isnan(z).any():
        return None
    return Interval(z.min(), z.max())


def minmax_in_box(dem, pose, box):
    """ Range of terrain heights inside a rotated box.

    Every cell whose square intersects the box, placed at ``pose``, takes
    part in the range.

    Parameters
    ----------
    dem : Dem
    pose : Pose2D
    box : WheelBoxQuery

    Returns
    -------
    heights : Interval or None
        None if an intersected cell is unknown.

    Raises
    ------
    OutOfBounds
        If the box leaves the DEM extent.
    """
    return minmax_in_region(dem, box.corners(pose))


def load_esri_ascii(path):
    """ Reads an ESRI ASCII grid into a Dem.

    Elevations in the file are up-positive and are negated. File columns run
    east (y) and rows run from north to south; ``xllcorner`` is therefore
    the y origin and ``yllcorner`` the x origin. Cell-center headers
    (``xllcenter``/``yllcenter``) are accepted.
    """
    header = {}
    with open(path) as f:
        tokens = f.read().split()

    pos = 0
    while pos + 1 < len(tokens) and tokens[pos][0].isalpha():
        header[tokens[pos].lower()] = tokens[pos + 1]
        pos += 2

    try:
        n_cols = int(header['ncols'])
        n_rows = int(header['nrows'])
        cellsize = float(header['cellsize'])
    except (KeyError, ValueError):
        raise ValueError("Invalid ESRI ASCII header in %s: %s" % (path,
                                                                  header))
    nodata = float(header.get('nodata_value', -9999.0))

    if 'xllcorner' in header:
        y0 = float(header['xllcorner'])
    else:
        y0 = float(header.get('xllcenter', 0.5 * cellsize)) - 0.5 * cellsize
    if 'yllcorner' in header:
        x0 = float(header['yllcorner'])
    else:
        x0 = float(header.get('yllcenter', 0.5 * cellsize)) - 0.5 * cellsize

    values = [float(t) for t in tokens[pos:]]
    if len(values) != n_rows * n_cols:
        raise ValueError("Expected %d values in %s, found %d"
                         % (n_rows * n_cols, path, len(values)))

    data = np.array(values).reshape(n_rows, n_cols)[::-1]
    heights = np.where(data == nodata, np.nan, -data)

    metadata = {}
    sidecar = metadata_path(path)
    if os.path.isfile(sidecar):
        with open(sidecar) as f:
            metadata = json.load(f)

    return Dem(heights, cellsize, (x0, y0), metadata)


def save_esri_ascii(dem, path, nodata=-9999.0, metadata=True):
    """ Writes a Dem as an ESRI ASCII grid.

    Values are written with ``repr`` so that finite heights round-trip
    exactly. If ``metadata`` is true and the Dem carries metadata, it is
    written to a JSON sidecar next to the grid.

    Raises
    ------
    ValueError
        If ``nodata`` is not finite or equals the elevation of a known cell,
        which would then load back as unknown.
    """
    nodata = float(nodata)
    if not math.isfinite(nodata):
        raise ValueError("Invalid value for 'nodata': %r" % nodata)
    if np.any(-dem.heights[dem.known] == nodata):
        raise ValueError("Invalid value for 'nodata': %r (a known cell "
                         "has this elevation)" % nodata)

    x0, y0 = dem.origin_xy
    lines = ["ncols %d" % dem.n_cols,
             "nrows %d" % dem.n_rows,
             "xllcorner %r" % y0,
             "yllcorner %r" % x0,
             "cellsize %r" % dem.resolution,
             "NODATA_value %r" % nodata]

    heights = dem.heights
    for i in range(dem.n_rows - 1, -1, -1):
        lines.append(" ".join(repr(nodata) if math.isnan(z)
                              else repr(-float(z)) for z in heights[i]))

    with open(path, 'w') as f:
        f.write("\n".join(lines) + "\n")

    if metadata and dem.metadata:
        save_metadata(path, dem.metadata)


def metadata_path(path):
    return os.path.splitext(path)[0] + '.json'


def save_metadata(path, metadata):
    """ Writes the JSON sidecar of a grid file. """
    with open(metadata_path(path), 'w') as f:
        json.dump(metadata, f, indent=2, sort_keys=True)
        f.write("\n")
