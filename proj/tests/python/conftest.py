import os
import shutil
import subprocess

import pytest


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("PAUSEBENCH_CLI") or shutil.which("pausebench")
    if not path:
        pytest.skip("pausebench executable not found")

    def run(*args, check=None):
        proc = subprocess.run([path, *map(str, args)], capture_output=True, text=True)
        if check is not None:
            assert proc.returncode == check, proc.stderr
        return proc

    return run
