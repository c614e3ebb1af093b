import os
import random

os.environ["DB_CONNECTION_STRING"] = "sqlite:///:memory:"

import pytest  # noqa: E402

from app.config import reset_settings  # noqa: E402
from app.numtheory import IntegerSet  # noqa: E402


@pytest.fixture(autouse=True)
def fresh_settings():
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def divisors_of_6():
    return IntegerSet.from_ints([1, 2, 3, 6])


@pytest.fixture
def write_set(tmp_path):
    def _write(lines, name="set.txt"):
        path = tmp_path / name
        path.write_text("".join(f"{line}\n" for line in lines), encoding="utf-8")
        return str(path)
    return _write


def random_sets(seed, count, max_size, max_value):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        size = rng.randint(1, max_size)
        out.append(IntegerSet.from_ints(rng.sample(range(1, max_value + 1), size)))
    return out
