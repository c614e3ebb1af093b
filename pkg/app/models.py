import datetime

from sqlalchemy import Column, DateTime, Float, Integer, String, Text

from .database import Base


class Run(Base):
    __tablename__ = "runs"

    id = Column(Integer, primary_key=True)
    command = Column(String(100), index=True)
    params = Column(Text)
    result = Column(Text)
    provenance = Column(String(512))
    seed = Column(String(20))
    exit_code = Column(Integer, default=0, nullable=False)
    elapsed_ms = Column(Float)
    created_at = Column(DateTime, default=datetime.datetime.utcnow)


class ConstantRecord(Base):
    __tablename__ = "constants"

    id = Column(Integer, primary_key=True)
    name = Column(String(100), index=True)
    lower = Column(Float)
    upper = Column(Float)
    value = Column(Float)
    provenance = Column(String(512))
    created_at = Column(DateTime, default=datetime.datetime.utcnow)
