import datetime
import os
import subprocess
import sys

perf_dir = os.path.dirname(os.path.abspath(__file__))
tests_dir = os.path.join(perf_dir, "tests")
scripts_dir = os.path.join(perf_dir, "scripts")
root_dir = os.path.abspath(os.path.join(perf_dir, "..", ".."))


def main():
    out = datetime.datetime.now().strftime("%Y-%m-%d_%H:%M")
    logdir = os.path.join(perf_dir, "logs", out)
    os.makedirs(logdir, exist_ok=True)

    env = dict(os.environ)
    env["PYTHONPATH"] = os.pathsep.join(
        [scripts_dir, root_dir] + [p for p in [env.get("PYTHONPATH")] if p])

    names = sys.argv[1:] or sorted(f[:-3] for f in os.listdir(tests_dir)
                                   if f.endswith(".py"))
    for name in names:
        print("Running " + name)
        with open(os.path.join(logdir, name + ".out"), "w") as log:
            subprocess.run([sys.executable,
                            os.path.join(tests_dir, name + ".py")],
                           stdout=log, stderr=subprocess.STDOUT, env=env)

    subprocess.run([sys.executable,
                    os.path.join(scripts_dir, "postprocess.py"), out])


if __name__ == "__main__":
    main()
