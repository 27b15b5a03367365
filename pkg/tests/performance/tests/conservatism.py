import math

import numpy as np
import performance

from acelib.ace import evaluate_pose
from acelib.kinematics import canonical_rover
from acelib.terrain import Pose2D, generate_bump, generate_quadratic, \
    generate_rock_field


def terrains(random_state):
    out = []
    for a in np.linspace(-0.2, 0.2, 21):
        out.append((generate_quadratic(float(a)), (-1.0, 1.0), (-1.0, 1.0)))
    for height in (0.1, 0.2, 0.3):
        for length in (0.4, 1.0, 2.0):
            out.append((generate_bump(bump_height=height,
                                      bump_length=length),
                        (-4.0, 4.0), (-1.0, 1.0)))
    for cfa in (0.05, 0.10, 0.15, 0.20):
        for _ in range(4):
            seed = random_state.randint(np.iinfo(np.int32).max)
            out.append((generate_rock_field(cfa, random_state=seed),
                        (4.0, 26.0), (4.0, 36.0)))
    return out


def run(n_pairs, seed):
    rs = np.random.RandomState(seed)
    model = canonical_rover()
    fields = terrains(rs)
    checked = unevaluated = 0
    failures = []

    for k in range(n_pairs):
        dem, x_range, y_range = fields[k % len(fields)]
        pose = Pose2D(rs.uniform(*x_range), rs.uniform(*y_range),
                      rs.uniform(-math.pi, math.pi))
        bounds, _ = evaluate_pose(dem, pose, model)
        result = performance.oracle(dem, pose, model) \
            if bounds is not None else None
        if result is None:
            unevaluated += 1
            continue

        checked += 1
        bad = performance.violations(bounds, result)
        if bad:
            failures.append((pose, bad))

    print("Checked %d pairs, %d not evaluated, %d violations"
          % (checked, unevaluated, len(failures)))
    for pose, bad in failures[:20]:
        print("  %r: %s" % (pose, ", ".join(bad)))
    return len(failures)


def main():
    performance.measure("Conservatism", "10k", run, 10000, 0)


if __name__ == "__main__":
    main()
