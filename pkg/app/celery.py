from celery import Celery

from app.config import get_settings

settings = get_settings()

# Initialize Celery application
celery_app = Celery(
    "gcdzeta",
    broker=settings.broker_url,
    backend=settings.result_backend,
)

# Celery configurations
celery_app.conf.task_routes = {
    "app.tasks.*": "main-queue",
}
celery_app.conf.update(
    task_serializer="json",
    accept_content=["json"],
    result_serializer="json",
    timezone="UTC",
    enable_utc=True,
    task_always_eager=settings.always_eager,
    task_eager_propagates=False,
)

import app.tasks  # noqa: E402,F401

celery_app.autodiscover_tasks(["app.tasks"])
