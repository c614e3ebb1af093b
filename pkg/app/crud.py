from sqlalchemy.orm import Session

from app import schemas

from . import models


def create_run(db: Session, new_run: schemas.CreateRun):
    db_run = models.Run(command=new_run.command,
                        params=new_run.params,
                        result=new_run.result,
                        provenance=new_run.provenance,
                        seed=None if new_run.seed is None else str(new_run.seed),
                        exit_code=new_run.exit_code,
                        elapsed_ms=new_run.elapsed_ms)
    db.add(db_run)
    db.commit()
    db.refresh(db_run)
    return db_run


def get_run(db: Session, run_id: int):
    return db.query(models.Run).filter(models.Run.id == run_id).first()


def get_runs_by_command(db: Session, command: str):
    return db.query(models.Run).filter(models.Run.command == command).order_by(models.Run.id)


def save_constant(db: Session, new_constant: schemas.CreateConstant):
    db_constant = models.ConstantRecord(name=new_constant.name,
                                        lower=new_constant.lower,
                                        upper=new_constant.upper,
                                        value=new_constant.value,
                                        provenance=new_constant.provenance)
    db.add(db_constant)
    db.commit()
    db.refresh(db_constant)
    return db_constant


def get_constant_by_name(db: Session, name: str):
    # latest certification wins
    return (
        db.query(models.ConstantRecord)
        .filter(models.ConstantRecord.name == name)
        .order_by(models.ConstantRecord.id.desc())
        .first()
    )
