import os
import sys

perf_dir = os.path.abspath(os.path.join(os.path.dirname(__file__), ".."))


def main():
    res_path = os.path.join(perf_dir, "results")
    log_dir = os.path.join(perf_dir, "logs", sys.argv[1])

    os.makedirs(res_path, exist_ok=True)
    out = os.path.join(res_path, sys.argv[1])

    for f in sorted(os.listdir(log_dir)):
        if not f.endswith(".out"):
            continue

        test_name = f[:-4]
        elapsed = None
        for line in open(os.path.join(log_dir, f)):
            if "==== STARTING ====" in line:
                test_name = line.split(" ")[-1].rstrip()
            elif "==== OUTPUT ====" in line:
                fields = line.split()
                dataset, elapsed = fields[-2], float(fields[-1])

        with open(out, "a") as fout:
            if elapsed is None:
                fout.write(test_name + " ERROR\n")
            else:
                fout.write("%s %s %s\n" % (test_name, dataset, elapsed))


if __name__ == "__main__":
    main()
