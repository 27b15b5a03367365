from acelib.interval.base import Interval, add, sub, neg, map_monotone, \
    contains, width, hull, as_interval

__all__ = ['Interval', 'add', 'sub', 'neg', 'map_monotone', 'contains',
           'width', 'hull', 'as_interval']
