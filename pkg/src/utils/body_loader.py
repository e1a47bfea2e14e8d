import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.geometry.core import Body, CertificateFormatError, Configuration, Point2
from src.lemma.certificate import (
    LemmaCertificate,
    NoncoverRecord,
    SubsetResult,
    SubsetStrategy,
)
from src.lemma.engine import ConstructionParams
from src.utils.serializers import to_jsonable

logger = logging.getLogger(__name__)

Pair = Tuple[float, float]


class BodyFile(BaseModel):
    """{"core": [[x, y], ...], "radius": number}"""
    model_config = ConfigDict(extra="forbid")

    core: List[Pair] = Field(min_length=1)
    radius: float = Field(default=0.0, ge=0.0, allow_inf_nan=False)

    def to_body(self) -> Body:
        return Body(tuple(Point2(x, y) for x, y in self.core), self.radius)


class PointsFile(BaseModel):
    """{"points": [[x, y], ...]}"""
    model_config = ConfigDict(extra="forbid")

    points: List[Pair] = Field(min_length=1)

    def to_configuration(self, provenance: str = "") -> Configuration:
        return Configuration(tuple(Point2(x, y) for x, y in self.points), provenance=provenance)


class _ParamsModel(BaseModel):
    epsilon: float = Field(ge=0.0)
    n: int = Field(ge=3)
    R: float = Field(gt=0.0)
    center: Pair


class _StrategyModel(BaseModel):
    mode: Literal["exhaustive", "sampled"]
    count: int = Field(ge=0)
    seed: Optional[int] = None
    note: Optional[str] = None


class _SubsetResultModel(BaseModel):
    subset: List[int]
    theta: float
    margin: float


class _NoncoverModel(BaseModel):
    hull_inradius: float
    body_inradius: float


class CertificateFile(BaseModel):
    """证书 JSON 的字段校验；字段与 LemmaCertificate 一一对应。"""
    model_config = ConfigDict(extra="forbid")

    body: BodyFile
    center: Pair
    k: int = Field(ge=1)
    params: _ParamsModel
    alpha: float = Field(ge=0.0)
    points: List[Pair] = Field(min_length=1)
    subset_strategy: _StrategyModel
    subset_results: List[_SubsetResultModel]
    noncover: _NoncoverModel
    verdict: bool

    def to_certificate(self) -> LemmaCertificate:
        center = Point2(*self.center)
        params = ConstructionParams(epsilon=self.params.epsilon, n=self.params.n, R=self.params.R,
                                    center=Point2(*self.params.center))
        return LemmaCertificate(
            body=self.body.to_body(),
            center=center,
            k=self.k,
            params=params,
            alpha=self.alpha,
            points=Configuration(tuple(Point2(x, y) for x, y in self.points)),
            subset_strategy=SubsetStrategy(self.subset_strategy.mode, self.subset_strategy.count,
                                           self.subset_strategy.seed),
            subset_results=tuple(SubsetResult(tuple(r.subset), r.theta, r.margin) for r in self.subset_results),
            noncover=NoncoverRecord(self.noncover.hull_inradius, self.noncover.body_inradius),
            verdict=self.verdict,
        )


def describe_validation_error(exc: ValidationError) -> str:
    """把 pydantic 的第一条错误写成 "field 'a.b': message"。"""
    err = exc.errors()[0]
    loc = ".".join(str(part) for part in err["loc"]) or "<root>"
    return f"field '{loc}': {err['msg']}"


def _read_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def parse_body(data: Dict[str, Any]) -> Body:
    """
    :raises ValueError: 字段缺失 / 类型错误 (pydantic)，或 Body 不变量不成立 (InvalidBodyError)
    """
    try:
        model = BodyFile.model_validate(data)
    except ValidationError as exc:
        raise ValueError(f"body: {describe_validation_error(exc)}") from exc
    return model.to_body()


def body_to_dict(body: Body) -> Dict[str, Any]:
    return {"core": [list(p.as_tuple()) for p in body.core], "radius": body.rho}


def same_body(a: Body, b: Body) -> bool:
    """按写盘精度 (12 位有效数字) 比较两个凸体。"""
    return to_jsonable(body_to_dict(a)) == to_jsonable(body_to_dict(b))


def load_body(path: Union[str, Path]) -> Body:
    body = parse_body(_read_json(path))
    logger.debug(f"Loaded body from {path}: {len(body.core)} core points, rho={body.rho}")
    return body


def load_points(path: Union[str, Path]) -> Configuration:
    try:
        model = PointsFile.model_validate(_read_json(path))
    except ValidationError as exc:
        raise ValueError(f"points: {describe_validation_error(exc)}") from exc
    return model.to_configuration(provenance=str(path))


def parse_certificate(data: Dict[str, Any]) -> LemmaCertificate:
    """
    :raises CertificateFormatError: 字段缺失或类型错误
    """
    try:
        model = CertificateFile.model_validate(data)
    except ValidationError as exc:
        raise CertificateFormatError(f"certificate: {describe_validation_error(exc)}") from exc
    return model.to_certificate()


def load_certificate(path: Union[str, Path]) -> LemmaCertificate:
    return parse_certificate(_read_json(path))
