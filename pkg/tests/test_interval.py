import math
import unittest

import numpy as np

from acelib.interval import Interval, add, sub, neg, map_monotone, \
    contains, width, hull, as_interval


class IntervalTest(unittest.TestCase):
    def test_init(self):
        """ Tests that endpoints are stored and that a single value gives a
        degenerate interval """
        i = Interval(1, 2)
        self.assertEqual(i.lo, 1.0)
        self.assertEqual(i.hi, 2.0)
        self.assertEqual(i.width, 1.0)
        self.assertEqual(i.midpoint, 1.5)
        self.assertFalse(i.is_degenerate())
        self.assertTrue(Interval(3).is_degenerate())
        self.assertEqual(Interval(3), Interval(3, 3))

    def test_init_invalid(self):
        """ Tests that reversed or NaN endpoints raise ValueError """
        with self.assertRaises(ValueError):
            Interval(2, 1)
        with self.assertRaises(ValueError):
            Interval(float('nan'), 1)

    def test_infinite_sentinel(self):
        """ Tests that infinite endpoints are accepted """
        i = Interval(-math.inf, math.inf)
        self.assertTrue(i.contains(1e300))

    def test_add(self):
        """ Tests interval addition """
        self.assertEqual(add(Interval(1, 2), Interval(3, 4)), Interval(4, 6))
        self.assertEqual(add(Interval(0, 0), Interval(-2, 5)),
                         Interval(-2, 5))
        self.assertEqual(Interval(-1, 1) + Interval(-1, 1), Interval(-2, 2))
        self.assertEqual(Interval(1, 2) + 1, Interval(2, 3))
        self.assertEqual(1 + Interval(1, 2), Interval(2, 3))

    def test_sub(self):
        """ Tests interval subtraction """
        self.assertEqual(sub(Interval(1, 2), Interval(3, 4)),
                         Interval(-3, -1))
        self.assertEqual(Interval(-2, 5) - Interval(0), Interval(-2, 5))
        self.assertEqual(Interval(1, 1) - Interval(1, 1), Interval(0, 0))
        self.assertEqual(5 - Interval(1, 2), Interval(3, 4))

    def test_neg_abs(self):
        """ Tests negation and the absolute value range """
        self.assertEqual(neg(Interval(1, 2)), Interval(-2, -1))
        self.assertEqual(-Interval(-1, 3), Interval(-3, 1))
        self.assertEqual(Interval(1, 2).abs(), Interval(1, 2))
        self.assertEqual(Interval(-3, -1).abs(), Interval(1, 3))
        self.assertEqual(Interval(-3, 2).abs(), Interval(0, 3))

    def test_map_monotone(self):
        """ Tests images under increasing and decreasing functions """
        i = map_monotone(math.asin, Interval(0, 0.5))
        self.assertAlmostEqual(i.lo, 0.0)
        self.assertAlmostEqual(i.hi, math.pi / 6)

        i = map_monotone(lambda v: v, Interval(-1, 2))
        self.assertEqual(i, Interval(-1, 2))

        i = map_monotone(math.sin, Interval(0, math.pi / 6))
        self.assertAlmostEqual(i.hi, 0.5)

        i = map_monotone(math.cos, Interval(0, math.pi / 3),
                         increasing=False)
        self.assertAlmostEqual(i.lo, 0.5)
        self.assertAlmostEqual(i.hi, 1.0)

    def test_helpers(self):
        """ Tests contains, width, hull, widen and issubset """
        self.assertTrue(contains(Interval(0, 1), 0.5))
        self.assertFalse(contains(Interval(0, 1), 1.5))
        self.assertTrue(Interval(0, 1).contains(1 + 1e-12, tol=1e-9))
        self.assertEqual(width(Interval(2, 2)), 0)
        self.assertEqual(hull(Interval(0, 1), Interval(2, 3)),
                         Interval(0, 3))
        self.assertEqual(Interval(0, 1).widen(0.5), Interval(-0.5, 1.5))
        self.assertTrue(Interval(0.2, 0.3).issubset((0, 1)))
        self.assertFalse(Interval(-0.2, 0.3).issubset((0, 1)))
        self.assertEqual(as_interval((1, 2)), Interval(1, 2))
        self.assertEqual(list(Interval(1, 2)), [1.0, 2.0])

        with self.assertRaises(ValueError):
            Interval(0, 1).widen(-1)

    def test_soundness(self):
        """ Tests that sums and differences of members are members of the
        interval sum and difference """
        rs = np.random.RandomState(0)

        for _ in range(1000):
            a = Interval(*sorted(rs.uniform(-5, 5, 2)))
            b = Interval(*sorted(rs.uniform(-5, 5, 2)))
            x = rs.uniform(a.lo, a.hi)
            y = rs.uniform(b.lo, b.hi)
            self.assertTrue((a + b).contains(x + y, tol=1e-12))
            self.assertTrue((a - b).contains(x - y, tol=1e-12))
            self.assertTrue(map_monotone(math.atan, a).contains(
                math.atan(x), tol=1e-12))

    def test_isotonicity(self):
        """ Tests that larger operands give larger sums and differences """
        rs = np.random.RandomState(1)

        for _ in range(1000):
            a = Interval(*sorted(rs.uniform(-5, 5, 2)))
            b = Interval(*sorted(rs.uniform(-5, 5, 2)))
            a2 = a.widen(rs.uniform(0, 1))
            b2 = b.widen(rs.uniform(0, 1))
            self.assertTrue((a + b).issubset(a2 + b2, tol=1e-12))
            self.assertTrue((a - b).issubset(a2 - b2, tol=1e-12))


def main():
    unittest.main()


if __name__ == '__main__':
    main()
