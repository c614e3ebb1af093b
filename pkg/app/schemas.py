import datetime
from enum import Enum
from fractions import Fraction
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class GcdSumKind(str, Enum):
    plain = "plain"
    log_type = "log_type"
    modified_log = "modified_log"
    diagonal = "diagonal"


class Subcommand(str, Enum):
    gcdsum = "gcdsum"
    gal = "gal"
    constants = "constants"
    bell = "bell"
    randzeta = "randzeta"
    resonate = "resonate"
    dickman = "dickman"
    chebyshev = "chebyshev"


class OutputFormat(str, Enum):
    json = "json"
    csv = "csv"
    text = "text"


class Record(BaseModel):
    model_config = ConfigDict(from_attributes=True, populate_by_name=True, arbitrary_types_allowed=True)


# numtheory

class MertensResult(Record):
    product: float
    ratio_to_asymptotic: float


class PrimeRatioBounds(Record):
    value: float
    lower_sum: float
    upper_sum: float
    upper_main: float
    target_upper: float
    target_limit: float


class DickmanMoment(Record):
    ell: int
    value: float
    tail_bound: float


# gcd engine

class GcdSumResult(Record):
    sigma: float
    ell: float = 0.0
    kind: GcdSumKind
    value_real: float
    value_exact: Optional[Fraction] = None
    set_size: int
    strategy: str = "pairs"

    @model_validator(mode="after")
    def _exact_only_for_rational_kinds(self):
        if self.value_exact is not None and self.kind in (GcdSumKind.log_type, GcdSumKind.modified_log) and self.ell:
            raise ValueError("log-weighted sums never carry an exact value")
        return self


class SpectralResult(Record):
    lambda_max: float
    iterations: int


# gal sets

class GalIdentity(Record):
    r: int
    b: int
    alpha: float
    value: float
    value_exact: Optional[Fraction] = None


class ThreeFactorSplit(Record):
    f1: float
    f2: float
    f3: float
    f1_exact: Optional[Fraction] = None
    f2_exact: Optional[Fraction] = None
    f3_exact: Optional[Fraction] = None


class DiagonalRatio(Record):
    k: int
    sigma: float
    closed_form: float
    exact: float


class GalParameters(Record):
    N: int
    r: int
    b: int


class PrimePowerConstruction(Record):
    x: float
    b: int
    sigma: float
    K: Any = Field(exclude=True)
    K_literal: str
    ratio: float
    factors: tuple[float, float, float]


class GalAsymptotics(Record):
    f2_over_mertens: float
    f3: float
    f3_target: float


# bell

class ZetaBoundConstant(Record):
    ell: int
    c: Fraction
    bound_in_e_gamma_units: Fraction


# constants

class BracketedConstant(Record):
    lower: float
    upper: float
    value: float
    provenance: str
    argmax: Optional[float] = None

    @model_validator(mode="after")
    def _ordered(self):
        if not self.lower <= self.value <= self.upper:
            raise ValueError(f"bracket [{self.lower}, {self.upper}] does not contain {self.value}")
        return self

    @property
    def width(self) -> float:
        return self.upper - self.lower


class AConstant(Record):
    ell: float
    A_star: float
    a: float
    normalized: float


class FirstProofConstant(Record):
    ell: int
    A_star: float
    coeff_in_e_gamma_units: float


# random zeta

class RandomZetaConfig(Record):
    alpha: float = Field(gt=0.5)
    prime_cutoff: float = 2.0
    Y: float = Field(default=1.0, ge=0.0)
    samples: int = Field(default=1000, ge=1)
    seed: int = Field(default=0, ge=0, lt=2**64)


class LogExpectation(Record):
    estimate: float
    std_error: float
    lz_bound: Optional[float] = None
    logexpect_bound: Optional[float] = None
    samples: int


class SinglePrimeFactor(Record):
    exact: float
    bessel_approx: float


# resonance

class ResonanceParams(Record):
    beta: float = Field(default=0.0, ge=0.0, lt=1.0)
    kappa: float = Field(default=0.5, gt=0.0)
    ell: int = Field(default=0, ge=0)
    A: float = Field(default=1.0, gt=0.0)

    @model_validator(mode="after")
    def _kappa_below_one_minus_beta(self):
        if self.kappa + self.beta >= 1:
            raise ValueError(f"kappa + beta must be < 1, got {self.kappa} + {self.beta}")
        return self


class M1Moment(Record):
    exact: float
    theta_bound: float = Field(serialization_alias="paper_bound")


class ZetaLineValue(Record):
    value: complex
    error_scale: float


class ResonanceExperiment(Record):
    M1: float
    M2: float
    ratio: float
    sampled_max_sq: float
    nodes: int


class MainTermRatio(Record):
    ratio: float
    factors: tuple[float, float, float]


# cli

class RunConfig(Record):
    subcommand: Subcommand
    operation: Optional[str] = None
    parameters: dict[str, Any] = Field(default_factory=dict)
    seed: Optional[int] = None
    output: OutputFormat = OutputFormat.json


# persistence

class CreateRun(Record):
    command: str
    params: str
    result: Optional[str] = None
    provenance: Optional[str] = None
    seed: Optional[int] = None
    exit_code: int = 0
    elapsed_ms: Optional[float] = None


class ReadRun(CreateRun):
    id: int
    created_at: datetime.datetime


class CreateConstant(Record):
    name: str
    lower: float
    upper: float
    value: float
    provenance: str


class ReadConstant(CreateConstant):
    id: int
    created_at: datetime.datetime
