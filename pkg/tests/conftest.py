import sys
from pathlib import Path

import pytest

from gravopt.space import default_hyperparameter_space

WORKER = Path(__file__).parent / "workers" / "mock_worker.py"


@pytest.fixture
def tune_space():
    return default_hyperparameter_space()


def worker_command(mode: str) -> list:
    return [sys.executable, str(WORKER), "--mode", mode]
