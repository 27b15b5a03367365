from acelib.kinematics.base import kappa, tri_height, roll_angle, \
    body_height, pan_lowest_height, solve_rocker, solve_rocker_bogie, solve, \
    assert_monotone_regime, wheel_points, horizontal_offsets, world_heights, \
    wheel_envelope, load_rover_model, save_rover_model, canonical_rover, \
    benchmark_rover
from acelib.kinematics.classes import TriangleParams, RoverModel, \
    WheelHeights, SuspensionState, BodyState, ROCKER, ROCKER_BOGIE

__all__ = ['kappa', 'tri_height', 'roll_angle', 'body_height',
           'pan_lowest_height', 'solve_rocker', 'solve_rocker_bogie',
           'solve', 'assert_monotone_regime', 'wheel_points',
           'horizontal_offsets', 'world_heights', 'wheel_envelope',
           'load_rover_model', 'save_rover_model', 'canonical_rover',
           'benchmark_rover', 'TriangleParams', 'RoverModel', 'WheelHeights',
           'SuspensionState', 'BodyState', 'ROCKER', 'ROCKER_BOGIE']
