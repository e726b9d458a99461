from pathlib import Path
import sys
import tempfile

# Ensure repo root on path
REPO_ROOT = Path(__file__).resolve().parents[1]
if str(REPO_ROOT) not in sys.path:
    sys.path.insert(0, str(REPO_ROOT))

from click.testing import CliRunner
from matroidlab.app.main import cli


def run(runner, *args):
    result = runner.invoke(cli, ["--no-run-logs", *args])
    head = result.stdout.splitlines()[:3]
    print(f"{' '.join(args)}: exit={result.exit_code}", head)
    return result


def main():
    print("Testing matroidlab CLI...")
    runner = CliRunner(mix_stderr=False)

    with tempfile.TemporaryDirectory() as tmp:
        r10 = str(Path(tmp) / "r10.txt")
        run(runner, "gen", "--type", "r10", "--out", r10)
        run(runner, "sibo", "pair", r10, "--a", "0,3,4,7,9", "--b", "1,2,5,6,8")
        run(runner, "sibo", "table", "--k", "1")
        run(runner, "sat", "emit", "--rank", "2")
        run(runner, "multilabel", "window-bound", "--k", "3")

        m = str(Path(tmp) / "m.txt")
        labels = str(Path(tmp) / "l.txt")
        run(runner, "multilabel", "lower-bound", "--k", "2", "--matroid-out", m, "--labels-out", labels)
        run(runner, "multilabel", "closest", "--instance", m, labels, "--a", "0,1,2")

    r = run(runner, "reproduce", "r10-basis-count")
    print("reproduce ok:", r.exit_code == 0)


if __name__ == '__main__':
    main()
