import os
import tempfile

import performance

from acelib.cli import main as cli_main


def main():
    out = os.path.join(tempfile.mkdtemp(), 'timing.csv')
    performance.measure("Timing", "1k", cli_main,
                        ['timing', '--poses', '1000', '--cfa', '0.20',
                         '--out', out])

    with open(out) as f:
        header = f.readline().strip().split(',')
        for line in f:
            row = dict(zip(header, line.strip().split(',')))
            print("%-8s %-6s mean=%sus p99=%sus cv=%s"
                  % (row['method'], row['terrain'], row['mean_us'],
                     row['p99_us'], row['cv_across_terrains']))


if __name__ == "__main__":
    main()
