import math
import logging
from dataclasses import dataclass
from typing import Iterable, List, Tuple

import numpy as np
import pandas as pd

from src.geometry.core import (
    TWO_PI,
    AngularSet,
    ArcPiece,
    Body,
    InvalidParameterError,
    Point2,
    SegmentPiece,
    normalize_angle,
    radial_distance,
)
from src.utils.config_manager import CONFIG

logger = logging.getLogger(__name__)

MARK_BAND = float(CONFIG.get("marking.band", 1e-14))
# 两个交点角度之差低于该值视为同一点
_ANGLE_MERGE = 1e-15

MARKING_INTERPRETATION = "marked angles are subtended radially at the center"


@dataclass(frozen=True)
class MarkedSet:
    """
    标记集合：从 center 看去，边界点到 center 的距离 < R 的方向。

    :param R: 阈值半径
    :param U: 方向集合 (规范 AngularSet)
    :param alpha: U 的角度测度
    """
    R: float
    U: AngularSet
    alpha: float
    center: Point2 = Point2(0.0, 0.0)
    interpretation: str = MARKING_INTERPRETATION


@dataclass(frozen=True)
class AlphaProfile:
    """α(R) 表，按 R 升序。"""
    rows: Tuple[Tuple[float, float], ...]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(list(self.rows), columns=["R", "alpha"])


def _segment_crossings(piece: SegmentPiece, c: np.ndarray, R: float) -> List[np.ndarray]:
    """|a + s(b - a) - c| = R 的根 (s ∈ [0, 1])。"""
    d = piece.b - piece.a
    w = piece.a - c
    qa = float(d @ d)
    qb = 2.0 * float(d @ w)
    qc = float(w @ w) - R * R
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        return []
    root = math.sqrt(disc)
    # 数值稳定的二次求根
    q = -0.5 * (qb + math.copysign(root, qb))
    roots = {q / qa}
    if q != 0.0:
        roots.add(qc / q)
    # 顶点处的根在相邻两段上都可能因舍入落到区间外
    return [piece.a + min(1.0, max(0.0, s)) * d for s in roots if -1e-12 <= s <= 1.0 + 1e-12]


def _arc_crossings(piece: ArcPiece, c: np.ndarray, R: float) -> List[np.ndarray]:
    """
    |v + rho·u(ψ) - c| = R，余弦定理化为 cos(ψ - ω) = κ。
    圆心与 center 重合时距离恒为 rho，没有穿越点。
    """
    w = piece.center - c
    dist = float(np.hypot(*w))
    if dist <= 1e-15 or piece.radius <= 0.0:
        return []
    kappa = (R * R - dist * dist - piece.radius ** 2) / (2.0 * piece.radius * dist)
    if abs(kappa) > 1.0:
        return []
    omega = math.atan2(w[1], w[0])
    spread = math.acos(kappa)
    psis = np.array(sorted({omega + spread, omega - spread}))
    psis = psis[piece.contains_angle(psis)]
    return [piece.center + piece.radius * np.array([math.cos(p), math.sin(p)]) for p in psis]


def crossing_angles(body: Body, center: Point2, R: float) -> List[float]:
    """边界与半径 R 的圆的全部交点，在 center 处的角度 (升序、去重)。"""
    c = np.array(center.as_tuple())
    hits: List[np.ndarray] = []
    for piece in body.pieces:
        if isinstance(piece, SegmentPiece):
            hits.extend(_segment_crossings(piece, c, R))
        else:
            hits.extend(_arc_crossings(piece, c, R))

    angles = sorted(normalize_angle(math.atan2(p[1] - c[1], p[0] - c[0])) for p in hits)
    unique: List[float] = []
    for phi in angles:
        if not unique or phi - unique[-1] > _ANGLE_MERGE:
            unique.append(phi)
    if len(unique) > 1 and unique[0] + TWO_PI - unique[-1] <= _ANGLE_MERGE:
        unique.pop()
    return unique


def marked_set(body: Body, center: Point2, R: float) -> MarkedSet:
    """
    标记集合 U(R) = {φ : ρ_K(φ) < R}。
    逐片段闭式求出穿越角，相邻穿越角之间 ρ_K - R 不变号，用区间中点判定。
    |ρ_K - R| 落在 band 内的方向按未标记处理 (严格小于)。

    :raises InvalidParameterError: R <= 0
    :raises NotInteriorError: center 不在内部
    """
    if not (math.isfinite(R) and R > 0.0):
        raise InvalidParameterError(f"R must be a positive number, got {R}")
    band = MARK_BAND * max(1.0, R)

    angles = crossing_angles(body, center, R)
    if not angles:
        rho0 = radial_distance(body, center, 0.0)
        U = AngularSet.full() if rho0 < R - band else AngularSet.empty()
        return MarkedSet(R=R, U=U, alpha=U.measure, center=center)

    starts = np.array(angles)
    ends = np.append(starts[1:], starts[0] + TWO_PI)
    mids = 0.5 * (starts + ends)
    rho = np.atleast_1d(radial_distance(body, center, mids))
    marked = rho < R - band

    U = AngularSet.from_bounds((float(a), float(b)) for a, b, hit in zip(starts, ends, marked) if hit)
    logger.debug(f"marked_set R={R}: {len(angles)} crossings, alpha={U.measure}")
    return MarkedSet(R=R, U=U, alpha=U.measure, center=center)


def alpha_profile(body: Body, center: Point2, R_list: Iterable[float]) -> AlphaProfile:
    rows = sorted((float(R), marked_set(body, center, float(R)).alpha) for R in R_list)
    return AlphaProfile(rows=tuple(rows))
