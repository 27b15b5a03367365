import math
import numbers


class Interval(object):
    """ Closed real interval [lo, hi].

    Intervals are immutable values. A degenerate interval (lo == hi)
    represents an exact value. Infinite endpoints are allowed only as
    sentinels for unknown quantities.

    Parameters
    ----------
    lo : float
        Lower endpoint.
    hi : float, optional (default=lo)
        Upper endpoint. If omitted, the interval is degenerate.

    Attributes
    ----------
    lo : float
    hi : float

    Examples
    --------
    >>> from acelib.interval import Interval
    >>> Interval(1, 2) + Interval(3, 4)
    Interval(4.0, 6.0)
    """
    __slots__ = ('_lo', '_hi')

    def __init__(self, lo, hi=None):
        lo = float(lo)
        hi = lo if hi is None else float(hi)

        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("Invalid interval: endpoints cannot be NaN")
        if lo > hi:
            raise ValueError("Invalid interval: lower endpoint %r is greater "
                             "than upper endpoint %r" % (lo, hi))

        self._lo = lo
        self._hi = hi

    @property
    def lo(self):
        return self._lo

    @property
    def hi(self):
        return self._hi

    @property
    def width(self):
        return self._hi - self._lo

    @property
    def midpoint(self):
        return 0.5 * (self._lo + self._hi)

    def is_degenerate(self):
        return self._lo == self._hi

    def contains(self, value, tol=0.0):
        """ True if ``lo - tol <= value <= hi + tol``. """
        return self._lo - tol <= value <= self._hi + tol

    def issubset(self, other, tol=0.0):
        """ True if this interval lies inside ``other`` (up to ``tol``). """
        other = as_interval(other)
        return other._lo - tol <= self._lo and self._hi <= other._hi + tol

    def hull(self, *others):
        """ Smallest interval containing this one and all ``others``. """
        return hull(self, *others)

    def widen(self, eps):
        """ Interval grown by ``eps`` on both sides. """
        if eps < 0:
            raise ValueError("Invalid value for 'eps': %r (must be >= 0)"
                             % eps)
        return Interval(self._lo - eps, self._hi + eps)

    def abs(self):
        """ Range of |x| for x in the interval. """
        if self._lo >= 0:
            return Interval(self._lo, self._hi)
        if self._hi <= 0:
            return Interval(-self._hi, -self._lo)
        return Interval(0.0, max(-self._lo, self._hi))

    def to_list(self):
        return [self._lo, self._hi]

    def __iter__(self):
        yield self._lo
        yield self._hi

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __neg__(self):
        return neg(self)

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self._lo == other._lo and self._hi == other._hi

    def __hash__(self):
        return hash((self._lo, self._hi))

    def __repr__(self):
        return "Interval(%r, %r)" % (self._lo, self._hi)


def as_interval(value):
    """ Coerces a scalar or a (lo, hi) pair to an Interval. """
    if isinstance(value, Interval):
        return value
    if isinstance(value, numbers.Real):
        return Interval(value)
    lo, hi = value
    return Interval(lo, hi)


def add(a, b):
    """ [a.lo + b.lo, a.hi + b.hi] """
    a, b = as_interval(a), as_interval(b)
    return Interval(a.lo + b.lo, a.hi + b.hi)


def sub(a, b):
    """ [a.lo - b.hi, a.hi - b.lo] """
    a, b = as_interval(a), as_interval(b)
    return Interval(a.lo - b.hi, a.hi - b.lo)


def neg(a):
    a = as_interval(a)
    return Interval(-a.hi, -a.lo)


def map_monotone(f, x, increasing=True):
    """ Image of an interval under a monotone function.

    Parameters
    ----------
    f : callable
        Scalar function, monotone on ``[x.lo, x.hi]``. Monotonicity is the
        caller's contract and is not checked.
    x : Interval
    increasing : bool, optional (default=True)
        Direction of monotonicity.

    Returns
    -------
    image : Interval
    """
    x = as_interval(x)
    if increasing:
        return Interval(f(x.lo), f(x.hi))
    return Interval(f(x.hi), f(x.lo))


def contains(x, value):
    return as_interval(x).contains(value)


def width(x):
    return as_interval(x).width


def hull(a, *others):
    items = [as_interval(a)] + [as_interval(o) for o in others]
    return Interval(min(i.lo for i in items), max(i.hi for i in items))
