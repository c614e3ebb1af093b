import json

import pytest

from app import crud, schemas
from app.database import SessionLocal, init_db
from app.tasks import certify_constants, run_experiment


@pytest.fixture
def db():
    init_db()
    session = SessionLocal()
    yield session
    session.close()


def test_crud_runs(db):
    row = crud.create_run(db, schemas.CreateRun(command="gal identity", params="{}", result="8", exit_code=0))
    assert crud.get_run(db, row.id).command == "gal identity"
    assert schemas.ReadRun.model_validate(row).id == row.id


def test_crud_run_keeps_full_seed(db):
    seed = 2**64 - 1
    row = crud.create_run(db, schemas.CreateRun(command="randzeta sample", params="{}", seed=seed))
    assert schemas.ReadRun.model_validate(crud.get_run(db, row.id)).seed == seed


def test_crud_constants_latest_wins(db):
    for value in (1.0, 2.0):
        crud.save_constant(db, schemas.CreateConstant(name="spade", lower=value, upper=value, value=value,
                                                      provenance="test"))
    assert crud.get_constant_by_name(db, "spade").value == 2.0
    assert crud.get_constant_by_name(db, "missing") is None


def test_run_experiment_task(db):
    config = {"subcommand": "gal", "operation": "identity", "parameters": {"r": 2, "b": 3, "alpha": 1.0}}
    outcome = run_experiment.apply(args=[config]).get()
    assert outcome["exit_code"] == 0
    assert outcome["document"]["result"]["value_exact"] == "451/18"
    stored = crud.get_run(db, outcome["run_id"])
    assert stored.command == "gal identity"
    assert json.loads(stored.params) == {"r": 2, "b": 3, "alpha": 1.0}


def test_run_experiment_task_records_failures(db):
    config = {"subcommand": "chebyshev", "operation": "prime-ratio", "parameters": {"X": 100, "A": 3}}
    outcome = run_experiment.apply(args=[config]).get()
    assert outcome["exit_code"] == 1
    assert "error" in json.loads(crud.get_run(db, outcome["run_id"]).result)


def test_certify_constants_task(db):
    names = certify_constants.apply(kwargs={"tol": 1e-6}).get()
    assert "spade" in names and "D_3/spade" in names
    spade_row = crud.get_constant_by_name(db, "spade")
    assert 0.14149 < spade_row.lower <= spade_row.upper < 0.14151
    assert crud.get_constant_by_name(db, "a_2/4^2").value == pytest.approx(861.5, rel=0.005)
