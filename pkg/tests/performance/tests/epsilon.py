import math

import numpy as np
import performance

from acelib.ace import evaluate_pose
from acelib.kinematics import canonical_rover
from acelib.terrain import Pose2D, add_height_noise, generate_rock_field


def run(n_poses, margins_mm, sigma, truncate, seed):
    rs = np.random.RandomState(seed)
    model = canonical_rover()
    maps = []
    for cfa in (0.05, 0.10, 0.15, 0.20):
        dem = generate_rock_field(cfa, random_state=rs.randint(1 << 30))
        maps.append((dem, add_height_noise(dem, sigma, truncate,
                                           random_state=rs.randint(1 << 30))))

    samples = []
    while len(samples) < n_poses:
        dem, noisy = maps[len(samples) % len(maps)]
        pose = Pose2D(rs.uniform(4, 26), rs.uniform(4, 36),
                      rs.uniform(-math.pi, math.pi))
        result = performance.oracle(dem, pose, model)
        if result is not None:
            samples.append((noisy, pose, result))

    rates = {}
    for eps_mm in margins_mm:
        ok = total = 0
        for noisy, pose, result in samples:
            bounds, _ = evaluate_pose(noisy, pose, model,
                                      epsilon=eps_mm / 1000.0)
            if bounds is None:
                continue
            total += 1
            ok += not performance.violations(bounds, result)
        rates[eps_mm] = ok / total
        print("epsilon=%4.1f mm: %d/%d contained (%.2f%%)"
              % (eps_mm, ok, total, 100.0 * ok / total))

    worst = truncate * 1000.0
    print("Worst-case margin %s" % ("holds" if rates.get(worst) == 1.0
                                    else "VIOLATED"))
    return rates


def main():
    performance.measure("Epsilon", "1k", run, 1000, (0.0, 5.0, 10.0, 15.0),
                        0.005, 0.015, 0)


if __name__ == "__main__":
    main()
