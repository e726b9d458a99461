import stat
import sys
from pathlib import Path

import pytest

repo_root = Path(__file__).resolve().parents[2]
if str(repo_root) not in sys.path:
    sys.path.insert(0, str(repo_root))


@pytest.fixture(scope="session")
def r10():
    from matroidlab.app.services.matroid import make_r10
    return make_r10()


@pytest.fixture
def rng():
    from matroidlab.app.services.generators import make_rng
    return make_rng(20240917)


@pytest.fixture
def tmp_log_dir(tmp_path, monkeypatch):
    log_dir = tmp_path / "logs"
    monkeypatch.setenv("MATROIDLAB_LOG_DIR", str(log_dir))
    return log_dir


@pytest.fixture
def fake_solver(tmp_path):
    """Build a shell script that ignores its CNF argument and prints fixed solver output."""
    counter = {"n": 0}

    def make(output: str = "", *, sleep: float = 0.0) -> str:
        counter["n"] += 1
        script = tmp_path / f"solver{counter['n']}.sh"
        body = ["#!/bin/sh"]
        if sleep:
            # exec so a timeout kill also closes the output pipe
            body.append(f"exec sleep {sleep}")
        body.append("cat <<'EOF'")
        body.append(output.rstrip("\n"))
        body.append("EOF")
        script.write_text("\n".join(body) + "\n")
        script.chmod(script.stat().st_mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH)
        return str(script)

    return make
