from acelib.terrain.dem import Dem, Pose2D, WheelBoxQuery, minmax_in_box, \
    minmax_in_region, rect_corners, normalize_angle, load_esri_ascii, \
    save_esri_ascii, save_metadata, metadata_path
from acelib.terrain.generators import generate_quadratic, generate_bump, \
    generate_rock_field, size_frequency_coefficient, covered_fraction, \
    add_height_noise

__all__ = ['Dem', 'Pose2D', 'WheelBoxQuery', 'minmax_in_box',
           'minmax_in_region', 'rect_corners', 'normalize_angle',
           'load_esri_ascii', 'save_esri_ascii', 'save_metadata',
           'metadata_path', 'generate_quadratic', 'generate_bump',
           'generate_rock_field', 'size_frequency_coefficient',
           'covered_fraction', 'add_height_noise']
