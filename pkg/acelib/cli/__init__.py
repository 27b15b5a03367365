from acelib.cli.base import main, build_parser, cmd_evaluate, cmd_sweep, \
    cmd_drive, cmd_benchmark, cmd_gen_terrain, cmd_timing, EXIT_SAFE, \
    EXIT_UNSAFE, EXIT_UNEVALUATABLE, EXIT_ERROR

__all__ = ['main', 'build_parser', 'cmd_evaluate', 'cmd_sweep', 'cmd_drive',
           'cmd_benchmark', 'cmd_gen_terrain', 'cmd_timing', 'EXIT_SAFE',
           'EXIT_UNSAFE', 'EXIT_UNEVALUATABLE', 'EXIT_ERROR']
