from acelib.ace.base import wheel_boxes, wheel_height_intervals, \
    propagate_bounds, bounds_via_extremes, pan_region, clearance_interval, \
    safety_verdict, evaluate_pose, BOX_MARGIN
from acelib.ace.classes import WheelIntervals, StateBounds, \
    SafetyThresholds, SafetyVerdict, tilt_bound, SAFE, UNSAFE, UNEVALUATABLE

__all__ = ['wheel_boxes', 'wheel_height_intervals', 'propagate_bounds',
           'bounds_via_extremes', 'pan_region', 'clearance_interval',
           'safety_verdict', 'evaluate_pose', 'BOX_MARGIN', 'WheelIntervals',
           'StateBounds', 'SafetyThresholds', 'SafetyVerdict', 'tilt_bound',
           'SAFE', 'UNSAFE', 'UNEVALUATABLE']
