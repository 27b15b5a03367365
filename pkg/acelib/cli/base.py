import argparse
import json
import math
import sys
import time
import warnings

import numpy as np
from sklearn.exceptions import ConvergenceWarning
from sklearn.utils import check_random_state

from acelib.ace import SafetyThresholds, evaluate_pose, SAFE, UNSAFE
from acelib.exceptions import AttitudeDomainError, KinematicInfeasible, \
    Unevaluatable
from acelib.kinematics import benchmark_rover, canonical_rover, \
    load_rover_model
from acelib.oracle import settle_constrained
from acelib.planner import PlannerConfig, benchmark, summarize, \
    planefit_estimate, planefit_metrics, BENCHMARK_COLUMNS, \
    SUMMARY_COLUMNS, CHECKERS
from acelib.terrain import Pose2D, generate_bump, generate_quadratic, \
    generate_rock_field, add_height_noise, load_esri_ascii, save_esri_ascii
from acelib.utils import RunManifest, write_csv

EXIT_SAFE = 0
EXIT_UNSAFE = 1
EXIT_UNEVALUATABLE = 2
EXIT_ERROR = 3

# state quantities compared between the bounds, the oracle and plane-fit
STATE_FIELDS = ('clearance', 'phi', 'theta', 'delta', 'beta_l', 'beta_r',
                'z_o')
_TOL = 1e-9


class ArgumentParser(argparse.ArgumentParser):
    """ Parser exiting with ``EXIT_ERROR`` on usage errors. """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, "%s: error: %s\n" % (self.prog, message))


def main(argv=None):
    """ Runs the acelib command line and returns its exit code. """
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help(sys.stderr)
        return EXIT_ERROR

    try:
        return args.func(args)
    except (OSError, ValueError, RuntimeError) as e:
        print("acelib %s: error: %s" % (args.command, e), file=sys.stderr)
        return EXIT_ERROR


def build_parser():
    parser = ArgumentParser(
        prog='acelib', description="Conservative rover clearance "
                                   "evaluation on elevation maps.")
    sub = parser.add_subparsers(dest='command', parser_class=ArgumentParser)

    p = sub.add_parser('evaluate', help="Evaluate the safety of one pose.")
    p.add_argument('--dem', required=True, help="ESRI ASCII grid.")
    _add_rover(p)
    p.add_argument('--pose', required=True, type=_pose,
                   help="x,y,psi_deg")
    _add_safety(p)
    p.add_argument('--out', help="Also write the JSON result here.")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser('sweep', help="Quadratic terrain sweep.")
    _add_rover(p)
    p.add_argument('--a-min', type=float, default=-0.2)
    p.add_argument('--a-max', type=float, default=0.2)
    p.add_argument('--a-steps', type=int, default=21)
    p.add_argument('--extent', type=float, default=8.0)
    p.add_argument('--resolution', type=float, default=0.05)
    _add_safety(p)
    _add_noise(p)
    p.add_argument('--out', required=True, help="Output CSV.")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser('drive', help="Replay a trajectory.")
    p.add_argument('--dem', help="ESRI ASCII grid. Defaults to a bump "
                                 "terrain built from the --bump-* flags.")
    _add_rover(p)
    p.add_argument('--path', type=_waypoints,
                   help="Waypoints as 'x,y;x,y;...'.")
    p.add_argument('--path-file', help="CSV file with one x,y per line.")
    p.add_argument('--step', type=float, default=0.1,
                   help="Spacing of the replayed poses (m).")
    p.add_argument('--bump-height', type=float, default=0.2)
    p.add_argument('--bump-center', type=_floats(2), default=(0.0, 0.0))
    p.add_argument('--bump-length', type=float, default=None)
    _add_safety(p)
    _add_noise(p)
    p.add_argument('--out', required=True, help="Output CSV.")
    p.set_defaults(func=cmd_drive)

    p = sub.add_parser('benchmark', help="Planner comparison.")
    _add_rover(p, default="the benchmark rover")
    p.add_argument('--cfa', type=_floats(), default=(0.05, 0.10, 0.15, 0.20),
                   help="Comma separated rock coverage levels.")
    p.add_argument('--maps', type=int, default=20,
                   help="Maps per coverage level.")
    p.add_argument('--checker', action='append', choices=CHECKERS,
                   help="Checker to run; repeat for several (default: all).")
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--depth', type=int, default=5)
    p.add_argument('--max-replans', type=int, default=60)
    p.add_argument('--verbose', action='store_true')
    p.add_argument('--out', required=True, help="Per-run output CSV.")
    p.add_argument('--summary-out',
                   help="Per-level summary CSV (default: printed).")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser('gen-terrain', help="Generate a synthetic DEM.")
    p.add_argument('--kind', choices=('quadratic', 'bump', 'rocks'),
                   default='rocks')
    p.add_argument('--a', type=float, default=0.0,
                   help="Quadratic coefficient (1/m).")
    p.add_argument('--cfa', type=float, default=0.10)
    p.add_argument('--extent', type=_floats(), default=None,
                   help="Size along x (and y) in m.")
    p.add_argument('--resolution', type=float, default=None)
    p.add_argument('--bump-height', type=float, default=0.2)
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--noise-sigma-mm', type=float, default=0.0)
    p.add_argument('--out', required=True, help="Output ESRI ASCII grid.")
    p.set_defaults(func=cmd_gen_terrain)

    p = sub.add_parser('timing', help="Per-pose latency of ACE and "
                                      "plane-fit.")
    _add_rover(p)
    p.add_argument('--poses', type=int, default=1000)
    p.add_argument('--cfa', type=float, default=0.20)
    p.add_argument('--planefit-radius', type=float, default=0.8,
                   help="Window radius; 0.8 m holds about 200 cells at "
                        "0.1 m.")
    p.add_argument('--seed', type=int, default=0)
    p.add_argument('--out', required=True, help="Output CSV.")
    p.set_defaults(func=cmd_timing)

    return parser


def cmd_evaluate(args):
    """ Prints the bounds and the verdict of a pose as JSON; the exit code
    tells the verdict. """
    dem = load_esri_ascii(args.dem)
    model = _rover(args)
    pose = args.pose
    epsilon = args.epsilon_mm / 1000.0

    bounds, verdict = evaluate_pose(dem, pose, model, _thresholds(args),
                                    epsilon)
    manifest = _manifest('evaluate', args, inputs=[args.dem, args.rover])
    result = {'pose': {'x': pose.x, 'y': pose.y, 'psi': pose.psi},
              'epsilon': epsilon,
              'bounds': bounds.to_dict() if bounds is not None else None,
              'verdict': verdict.to_dict(),
              'manifest': manifest.to_dict()}

    text = json.dumps(result, indent=2, sort_keys=True)
    print(text)
    if args.out:
        with open(args.out, 'w') as f:
            f.write(text + "\n")

    if verdict.overall == SAFE:
        return EXIT_SAFE
    if verdict.overall == UNSAFE:
        return EXIT_UNSAFE
    return EXIT_UNEVALUATABLE


def cmd_sweep(args):
    """ Bounds, settled truth and plane-fit estimate on ``z = a x**2`` for
    a range of ``a``. """
    if args.a_steps < 1 or not (math.isfinite(args.a_min) and
                                math.isfinite(args.a_max)):
        raise ValueError("Invalid sweep range: [%r, %r] in %r steps"
                         % (args.a_min, args.a_max, args.a_steps))

    model = _rover(args)
    thresholds = _thresholds(args)
    pose = Pose2D(0.0, 0.0, 0.0)
    rows = []

    for i, a in enumerate(np.linspace(args.a_min, args.a_max, args.a_steps)):
        dem = generate_quadratic(float(a), args.extent, args.resolution)
        row = {'a': float(a)}
        row.update(_compare(dem, _noisy(dem, args, i), pose, model,
                            thresholds, args.epsilon_mm / 1000.0))
        try:
            estimate = planefit_estimate(dem, pose, model)
        except Unevaluatable:
            estimate = {}
        for name in STATE_FIELDS:
            row[name + '_planefit'] = estimate.get(name)
        rows.append(row)

    write_csv(rows, args.out, ['a'] + _compare_columns() +
              [n + '_planefit' for n in STATE_FIELDS],
              _manifest('sweep', args, inputs=[args.rover]))
    return EXIT_SAFE


def cmd_drive(args):
    """ Time series of settled states and bounds along a path. """
    if args.path is None and args.path_file is None:
        raise ValueError("One of --path or --path-file is required")
    if not args.step > 0:
        raise ValueError("Invalid value for 'step': %r" % args.step)

    waypoints = args.path if args.path is not None else \
        [tuple(p) for p in np.loadtxt(args.path_file, delimiter=',',
                                      ndmin=2)]
    if len(waypoints) < 2:
        raise ValueError("A path needs at least two waypoints")

    if args.dem:
        dem = load_esri_ascii(args.dem)
    else:
        dem = generate_bump(bump_height=args.bump_height,
                            bump_center=args.bump_center,
                            bump_length=args.bump_length)

    model = _rover(args)
    thresholds = _thresholds(args)
    rows = []

    for i, (s, pose) in enumerate(_path_poses(waypoints, args.step)):
        row = {'s': s, 'x': pose.x, 'y': pose.y, 'psi': pose.psi}
        row.update(_compare(dem, _noisy(dem, args, i), pose, model,
                            thresholds, args.epsilon_mm / 1000.0))
        rows.append(row)

    inputs = [p for p in (args.dem, args.rover, args.path_file) if p]
    write_csv(rows, args.out, ['s', 'x', 'y', 'psi'] + _compare_columns(),
              _manifest('drive', args, inputs=inputs))
    return EXIT_SAFE


def cmd_benchmark(args):
    """ Runs the planner comparison and writes one row per map and
    checker. """
    model = _rover(args, benchmark=True)
    config = PlannerConfig(depth=args.depth, max_replans=args.max_replans)
    checkers = tuple(args.checker) if args.checker else CHECKERS

    rows = benchmark(args.cfa, args.maps, random_state=args.seed,
                     checkers=checkers, model=model, config=config,
                     verbose=args.verbose)
    manifest = _manifest('benchmark', args, inputs=[args.rover])
    write_csv(rows, args.out, BENCHMARK_COLUMNS, manifest)

    summary = summarize(rows)
    if args.summary_out:
        write_csv(summary, args.summary_out, SUMMARY_COLUMNS, manifest)
    else:
        for row in summary:
            print("cfa=%.2f %-8s success=%.2f inefficiency=%.3f +- %.3f"
                  % (row['cfa'], row['checker'], row['success_rate'],
                     row['mean_inefficiency'], row['sem_inefficiency']),
                  file=sys.stderr)
    return EXIT_SAFE


def cmd_gen_terrain(args):
    """ Writes a synthetic DEM and its metadata. """
    if args.kind == 'quadratic':
        dem = generate_quadratic(args.a, *_grid(args, 8.0, 0.05))
    elif args.kind == 'bump':
        dem = generate_bump(*_grid(args, (24.0, 8.0), 0.05),
                            bump_height=args.bump_height)
    else:
        dem = generate_rock_field(args.cfa, *_grid(args, (30.0, 40.0), 0.1),
                                  random_state=args.seed)

    if args.noise_sigma_mm > 0:
        dem = add_height_noise(dem, args.noise_sigma_mm / 1000.0,
                               random_state=args.seed)

    save_esri_ascii(dem, args.out)
    _manifest('gen-terrain', args).save(args.out)
    return EXIT_SAFE


def cmd_timing(args):
    """ Per-pose latency of ACE and of a plane fit on flat and rocky
    terrain. """
    if args.poses < 1:
        raise ValueError("Invalid value for 'poses': %r" % args.poses)

    model = _rover(args)
    thresholds = SafetyThresholds().resolve(model)
    random_state = check_random_state(args.seed)
    terrains = {'flat': generate_rock_field(0.0, random_state=args.seed),
                'rocks': generate_rock_field(args.cfa,
                                             random_state=args.seed)}
    rows = []

    for terrain, dem in terrains.items():
        poses = _random_poses(dem, model, args.poses, random_state)
        for method in ('ace', 'planefit'):
            times = np.array([_time_pose(method, dem, pose, model,
                                         thresholds, args.planefit_radius)
                              for pose in poses]) * 1e6
            rows.append({'method': method, 'terrain': terrain,
                         'n_poses': len(poses), 'mean_us': times.mean(),
                         'p99_us': np.percentile(times, 99)})

    for method in ('ace', 'planefit'):
        means = np.array([r['mean_us'] for r in rows
                          if r['method'] == method])
        for row in rows:
            if row['method'] == method:
                row['cv_across_terrains'] = means.std() / means.mean()

    write_csv(rows, args.out, ['method', 'terrain', 'n_poses', 'mean_us',
                               'p99_us', 'cv_across_terrains'],
              _manifest('timing', args, inputs=[args.rover]))
    return EXIT_SAFE


def _compare(dem, observed, pose, model, thresholds, epsilon):
    """ ACE bounds on the observed DEM against the settled state on the
    true one. """
    bounds, verdict = evaluate_pose(observed, pose, model, thresholds,
                                    epsilon)
    row = {'verdict': verdict.overall}

    try:
        with warnings.catch_warnings():
            warnings.simplefilter('ignore', ConvergenceWarning)
            truth = settle_constrained(dem, pose, model,
                                       enforce_limits=False)
        row['oracle'] = 'converged' if truth.converged else 'not_converged'
        values = _truth_values(truth)
    except (Unevaluatable, KinematicInfeasible, AttitudeDomainError):
        row['oracle'] = 'failed'
        values = {}

    contained = bounds is not None and bool(values)
    for name in STATE_FIELDS:
        interval = getattr(bounds, name) if bounds is not None else None
        row[name + '_lo'] = interval.lo if interval is not None else None
        row[name + '_hi'] = interval.hi if interval is not None else None
        row[name + '_true'] = values.get(name)
        if interval is None or name not in values:
            contained = False
        elif name == 'clearance':
            contained &= values[name] >= interval.lo - _TOL
        else:
            contained &= interval.contains(values[name], _TOL)

    row['contained'] = contained
    return row


def _compare_columns():
    columns = ['verdict', 'oracle', 'contained']
    for name in STATE_FIELDS:
        columns += [name + '_lo', name + '_hi', name + '_true']
    return columns


def _truth_values(result):
    s, body = result.suspension, result.body
    return {'clearance': result.clearance, 'phi': body.phi,
            'theta': body.theta, 'delta': s.delta_l, 'beta_l': s.beta_l,
            'beta_r': s.beta_r, 'z_o': body.z_o}


def _noisy(dem, args, index):
    if args.noise_sigma_mm <= 0:
        return dem
    return add_height_noise(dem, args.noise_sigma_mm / 1000.0,
                            random_state=args.seed + index)


def _path_poses(waypoints, step):
    poses = []
    s0 = 0.0
    for k, ((x0, y0), (x1, y1)) in enumerate(zip(waypoints[:-1],
                                                 waypoints[1:])):
        length = math.hypot(x1 - x0, y1 - y0)
        if length == 0:
            continue
        psi = math.atan2(y1 - y0, x1 - x0)
        n = max(1, int(round(length / step)))
        for i in range(0 if not poses else 1, n + 1):
            t = i / n
            poses.append((s0 + t * length,
                          Pose2D(x0 + t * (x1 - x0), y0 + t * (y1 - y0),
                                 psi)))
        s0 += length
    return poses


def _random_poses(dem, model, n, random_state):
    x_min, x_max, y_min, y_max = dem.extent
    margin = model.footprint_radius + 1.0
    xs = random_state.uniform(x_min + margin, x_max - margin, n)
    ys = random_state.uniform(y_min + margin, y_max - margin, n)
    psis = random_state.uniform(-math.pi, math.pi, n)
    return [Pose2D(x, y, psi) for x, y, psi in zip(xs, ys, psis)]


def _time_pose(method, dem, pose, model, thresholds, radius):
    started = time.perf_counter()
    if method == 'ace':
        evaluate_pose(dem, pose, model, thresholds)
    else:
        try:
            planefit_metrics(dem, pose, radius)
        except Unevaluatable:
            pass
    return time.perf_counter() - started


def _rover(args, benchmark=False):
    if args.rover:
        return load_rover_model(args.rover)
    if benchmark:
        return benchmark_rover()
    return canonical_rover()


def _thresholds(args):
    return SafetyThresholds(min_clearance=args.min_clearance,
                            max_tilt=math.radians(args.max_tilt_deg))


def _grid(args, extent, resolution):
    if args.extent is not None:
        extent = args.extent[0] if len(args.extent) == 1 \
            else tuple(args.extent)
    return extent, args.resolution or resolution


def _manifest(command, args, inputs=()):
    params = {k: v for k, v in vars(args).items() if k != 'func'}
    seeds = {'seed': args.seed} if getattr(args, 'seed', None) is not None \
        else {}
    return RunManifest(command, params, seeds, [p for p in inputs if p])


def _add_rover(parser, default="the canonical rover"):
    parser.add_argument('--rover', help="Rover model file (default: %s)."
                                        % default)


def _add_safety(parser):
    parser.add_argument('--epsilon-mm', type=float, default=0.0,
                        help="Perception margin (mm).")
    parser.add_argument('--min-clearance', type=float, default=0.15)
    parser.add_argument('--max-tilt-deg', type=float, default=30.0)


def _add_noise(parser):
    parser.add_argument('--noise-sigma-mm', type=float, default=0.0,
                        help="Height noise added to the DEM the bounds are "
                             "computed on (mm).")
    parser.add_argument('--seed', type=int, default=0)


def _pose(text):
    x, y, psi_deg = _floats(3)(text)
    return Pose2D(x, y, math.radians(psi_deg))


def _floats(n=None):
    def parse(text):
        try:
            values = tuple(float(v) for v in text.split(','))
        except ValueError:
            raise argparse.ArgumentTypeError("expected comma separated "
                                             "numbers, got %r" % text)
        if n is not None and len(values) != n:
            raise argparse.ArgumentTypeError("expected %d values, got %r"
                                             % (n, text))
        return values
    return parse


def _waypoints(text):
    return [_floats(2)(p) for p in text.split(';') if p.strip()]
