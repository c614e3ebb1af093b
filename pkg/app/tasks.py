import json

from celery.utils.log import get_task_logger

from app import crud, schemas
from app.celery import celery_app
from app.cli import run
from app.constants import a_constant, d_over_spade, spade
from app.database import SessionLocal, init_db

logger = get_task_logger(__name__)


def save_run(db, code: int, document: dict):
    db_run = crud.create_run(db, schemas.CreateRun(
        command=document["command"],
        params=json.dumps(document["params"]),
        result=json.dumps(document["result"]) if code == 0 else json.dumps({"error": document.get("error")}),
        provenance=document["provenance"],
        seed=document["seed"],
        exit_code=code,
        elapsed_ms=document["elapsed_ms"],
    ))
    logger.info("stored run %s (%s, exit %d)", db_run.id, db_run.command, code)
    return db_run


@celery_app.task(bind=True, max_retries=3)
def run_experiment(self, config: dict, timing: bool = False):
    """Run a RunConfig in a worker and persist the emitted document."""
    init_db()
    db = SessionLocal()
    try:
        code, document = run(schemas.RunConfig.model_validate(config), timing=timing)
        db_run = save_run(db, code, document)
        return {"run_id": db_run.id, "exit_code": code, "document": document}
    except Exception as e:
        logger.error("run_experiment failed: %s", e)
        db.rollback()
        raise self.retry(exc=e, countdown=10)
    finally:
        db.close()


@celery_app.task(bind=True, max_retries=3)
def certify_constants(self, tol: float = 1e-6):
    """Certify spade, 4^-ell a_ell and D_ell/spade for ell = 1..3 and store them."""
    init_db()
    db = SessionLocal()
    try:
        spade_val = spade(tol)
        records = [schemas.CreateConstant(name="spade", lower=spade_val.lower, upper=spade_val.upper,
                                          value=spade_val.value, provenance=spade_val.provenance)]
        for ell in (1, 2, 3):
            normalized = a_constant(ell).normalized
            records.append(schemas.CreateConstant(
                name=f"a_{ell}/4^{ell}", lower=normalized, upper=normalized, value=normalized,
                provenance="4^-ell min_A exp(2 gamma + 2 e^{2 ell A} - 2) / (zeta(2) A^{2 ell})",
            ))
            ratio = d_over_spade(ell, spade_val)
            records.append(schemas.CreateConstant(name=f"D_{ell}/spade", lower=ratio.lower, upper=ratio.upper,
                                                  value=ratio.value, provenance=ratio.provenance))
        saved = [crud.save_constant(db, record) for record in records]
        logger.info("certified %d constants", len(saved))
        return [record.name for record in saved]
    except Exception as e:
        db.rollback()
        raise self.retry(exc=e, countdown=10)
    finally:
        db.close()
