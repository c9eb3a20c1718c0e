"""
Pydantic wire models for slope sets, points, specifications and certificates
"""
import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, Field, RootModel, field_validator

from .intervals import IntervalUnion
from .relation import SlopeSet
from .shift_space import TruncatedPoint
from .specification import Specification, TraceCertificate


class RationalModel(BaseModel):
    """Exact rational as digit strings"""
    num: str
    den: str

    @field_validator("num")
    @classmethod
    def _check_num(cls, v: str) -> str:
        if not re.fullmatch(r"-?\d+", v):
            raise ValueError(f"numerator must be a digit string, got {v!r}")
        return v

    @field_validator("den")
    @classmethod
    def _check_den(cls, v: str) -> str:
        if not re.fullmatch(r"\d+", v) or int(v) == 0:
            raise ValueError(f"denominator must be a positive digit string, got {v!r}")
        return v

    def to_domain(self) -> Fraction:
        return Fraction(int(self.num), int(self.den))

    @classmethod
    def from_domain(cls, r: Fraction) -> "RationalModel":
        return cls(num=str(r.numerator), den=str(r.denominator))


class SlopeSetModel(BaseModel):
    slopes: List[RationalModel]
    nc_pair: Optional[Tuple[int, int]] = None

    def to_domain(self) -> SlopeSet:
        return SlopeSet.from_json(self.model_dump())

    @classmethod
    def from_domain(cls, omega: SlopeSet) -> "SlopeSetModel":
        return cls.model_validate(omega.to_json())


class IntervalUnionModel(RootModel[List[Tuple[RationalModel, RationalModel]]]):
    def to_domain(self) -> IntervalUnion:
        return IntervalUnion.from_json(self.model_dump())

    @classmethod
    def from_domain(cls, A: IntervalUnion) -> "IntervalUnionModel":
        return cls.model_validate(A.to_json())


class ConstTailModel(BaseModel):
    const: RationalModel


class PeriodicTailModel(BaseModel):
    periodic: int = Field(ge=1)


class TruncatedPointModel(BaseModel):
    start: int = 1
    coords: List[RationalModel]
    tail: Union[Literal["unknown", "zero"], ConstTailModel, PeriodicTailModel] = "unknown"
    word: List[Optional[int]] = []
    sided: Literal["one_sided", "two_sided"] = "one_sided"

    def to_domain(self, omega: SlopeSet) -> TruncatedPoint:
        return TruncatedPoint.from_json(omega, self.model_dump())

    @classmethod
    def from_domain(cls, p: TruncatedPoint) -> "TruncatedPointModel":
        return cls.model_validate(p.to_json())


class OrbitSegmentModel(BaseModel):
    k: int = Field(ge=1)
    l: int = Field(ge=1)
    values: List[RationalModel]


class SpecificationModel(BaseModel):
    segments: List[OrbitSegmentModel] = Field(min_length=1)

    def to_domain(self) -> Specification:
        return Specification.from_json(self.model_dump())

    @classmethod
    def from_domain(cls, spec: Specification) -> "SpecificationModel":
        return cls.model_validate(spec.to_json())


class TraceEntryModel(BaseModel):
    segment: int
    index: int
    distance: RationalModel


class TraceCertificateModel(BaseModel):
    kind: Literal["trace"] = "trace"
    eps: RationalModel
    horizon: int
    point: TruncatedPointModel
    entries: List[TraceEntryModel]

    def to_domain(self, omega: SlopeSet) -> TraceCertificate:
        return TraceCertificate.from_json(omega, self.model_dump())

    @classmethod
    def from_domain(cls, cert: TraceCertificate) -> "TraceCertificateModel":
        return cls.model_validate(cert.to_json())


class ConstraintModel(BaseModel):
    index: int
    k: int
    j: int
    target: RationalModel
    radius: RationalModel


class NoShadowCertificateModel(BaseModel):
    kind: Literal["no_shadow"] = "no_shadow"
    eps: RationalModel
    horizon: int
    depth: int
    branches: int = Field(ge=1)
    constraints: List[ConstraintModel]
    pruned: Dict[str, int]


SCHEMA_MODELS = {
    "rational": RationalModel,
    "slope_set": SlopeSetModel,
    "interval_union": IntervalUnionModel,
    "truncated_point": TruncatedPointModel,
    "specification": SpecificationModel,
    "trace_certificate": TraceCertificateModel,
    "no_shadow_certificate": NoShadowCertificateModel,
}


def export_schemas(directory: Union[str, Path]) -> List[Path]:
    """Write one JSON schema per wire model into directory"""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, model in SCHEMA_MODELS.items():
        path = directory / f"{name}.schema.json"
        path.write_text(json.dumps(model.model_json_schema(), sort_keys=True, indent=2) + "\n")
        written.append(path)
    return written
