import os
from functools import lru_cache

from pydantic import BaseModel


def _env_flag(name: str, default: str = "0") -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


class Settings(BaseModel):
    # caps
    sieve_cap: int = 10**9
    pair_cap: int = 20_000
    enum_cap: int = 10**6
    work_cap: int = 10**8
    spectral_cap: int = 5000

    # numerics
    dickman_step: float = 1e-4
    dickman_max_u: float = 30.0
    quad_tol: float = 1e-10
    block_rows: int = 32
    progress: bool = False

    # workers and storage
    broker_url: str = "redis://redis:6379/0"
    result_backend: str = "redis://redis:6379/0"
    always_eager: bool = False
    database_url: str = "sqlite:///:memory:"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings(
        sieve_cap=int(float(os.getenv("GCDZETA_SIEVE_CAP", "1e9"))),
        pair_cap=int(float(os.getenv("GCDZETA_PAIR_CAP", "20000"))),
        enum_cap=int(float(os.getenv("GCDZETA_ENUM_CAP", "1e6"))),
        work_cap=int(float(os.getenv("GCDZETA_WORK_CAP", "1e8"))),
        spectral_cap=int(float(os.getenv("GCDZETA_SPECTRAL_CAP", "5000"))),
        dickman_step=float(os.getenv("GCDZETA_DICKMAN_STEP", "1e-4")),
        dickman_max_u=float(os.getenv("GCDZETA_DICKMAN_MAX_U", "30")),
        quad_tol=float(os.getenv("GCDZETA_QUAD_TOL", "1e-10")),
        block_rows=int(os.getenv("GCDZETA_BLOCK_ROWS", "32")),
        progress=_env_flag("GCDZETA_PROGRESS"),
        broker_url=os.getenv("CELERY_BROKER_URL", "redis://redis:6379/0"),
        result_backend=os.getenv("CELERY_RESULT_BACKEND", "redis://redis:6379/0"),
        always_eager=_env_flag("CELERY_TASK_ALWAYS_EAGER"),
        # default to sqlite in memory for testing if DB_CONNECTION_STRING empty
        database_url=os.getenv("DB_CONNECTION_STRING") or "sqlite:///:memory:",
    )


def reset_settings() -> None:
    get_settings.cache_clear()
