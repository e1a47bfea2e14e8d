import math
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from src.geometry.core import (
    TWO_PI,
    DEFAULT_TOL,
    AngularSet,
    Body,
    Configuration,
    BudgetExhausted,
    InvalidParameterError,
    Point2,
    angular_complement,
    angular_union,
    normalize_angle,
    radial_distance,
    rotation_matrix,
)
from src.geometry.incircle import chebyshev_incircle, inradius_of_points
from src.geometry.marking import marked_set
from src.utils.config_manager import CONFIG

logger = logging.getLogger(__name__)

SCHEDULES = ("decade", "halving")


@dataclass(frozen=True)
class ConstructionParams:
    """
    正 n 边形构造参数：内切圆半径 r + epsilon，外接圆半径 R = (r + epsilon) / cos(π/n)。

    :param epsilon: 内切圆放大量
    :param n: 边数 (>= 3)
    :param R: 顶点到 center 的距离
    :param center: 与 K 的内切圆同心的中心
    """
    epsilon: float
    n: int
    R: float
    center: Point2


def circumradius(r: float, epsilon: float, n: int) -> float:
    return (r + epsilon) / math.cos(math.pi / n)


def regular_polygon_config(center: Point2, r: float, epsilon: float, n: int,
                           phase: float = 0.0) -> Tuple[Configuration, float]:
    """
    以 center 为中心、内切圆半径 r + epsilon 的正 n 边形顶点。
    epsilon = 0 只用于恒等性检查 (例如恢复 Square2 的四个角)。

    :return: (顶点配置, 外接圆半径 R)
    """
    if int(n) != n or n < 3:
        raise InvalidParameterError(f"n must be an integer >= 3, got {n}")
    if not (math.isfinite(epsilon) and epsilon >= 0.0):
        raise InvalidParameterError(f"epsilon must be >= 0, got {epsilon}")
    if not (math.isfinite(r) and r + epsilon > 0.0):
        raise InvalidParameterError(f"r + epsilon must be positive, got r={r}, epsilon={epsilon}")
    n = int(n)
    R = circumradius(r, epsilon, n)
    phis = phase + TWO_PI * np.arange(n) / n
    xs = center.x + R * np.cos(phis)
    ys = center.y + R * np.sin(phis)
    points = tuple(Point2(float(x), float(y)) for x, y in zip(xs, ys))
    provenance = f"regular {n}-gon, epsilon={epsilon:.12g}, R={R:.12g}, phase={phase:.12g}"
    return Configuration(points, provenance=provenance), R


def _threshold(k: int, slack: float) -> float:
    return TWO_PI / (k * (1.0 + slack))


def _decade_schedule(body: Body, center: Point2, r: float, k: int, budget: int, slack: float):
    for j in range(1, budget + 1):
        epsilon = r * 10.0 ** (-j)
        n = 8 * 5 ** (j - 1)
        R = circumradius(r, epsilon, n)
        alpha = marked_set(body, center, R).alpha
        logger.debug(f"decade j={j}: epsilon={epsilon:.3g}, n={n}, R={R:.12g}, alpha={alpha:.12g}")
        if alpha < _threshold(k, slack):
            return ConstructionParams(epsilon=epsilon, n=n, R=R, center=center), alpha
    return None


def _halving_schedule(body: Body, center: Point2, r: float, k: int, budget: int, slack: float):
    max_n = int(CONFIG.get("lemma.max_n", 4096))
    limit = _threshold(k, slack)

    def alpha_at(epsilon, n):
        return marked_set(body, center, circumradius(r, epsilon, n)).alpha

    for j in range(1, budget + 1):
        epsilon = r * 2.0 ** (-j)
        # alpha 随 n 单调不增：先看上限，再倍增 + 二分找最小 n
        if alpha_at(epsilon, max_n) >= limit:
            continue
        lo, hi = 2, 3
        while hi < max_n and alpha_at(epsilon, hi) >= limit:
            lo, hi = hi, min(2 * hi, max_n)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if mid >= 3 and alpha_at(epsilon, mid) < limit:
                hi = mid
            else:
                lo = mid
        R = circumradius(r, epsilon, hi)
        return ConstructionParams(epsilon=epsilon, n=hi, R=R, center=center), alpha_at(epsilon, hi)
    return None


def choose_construction_params(body: Body, center: Point2, k: int, budget: int = None,
                               schedule: str = None, slack: float = None) -> Tuple[ConstructionParams, float]:
    """
    按参数表依次尝试 (epsilon_j, n_j)，返回第一组满足 alpha < 2π / (k (1 + slack)) 的参数。

    :return: (参数, alpha)
    :raises BudgetExhausted: 预算内 alpha 降不到阈值以下 (例如 center 处接触集有正测度)
    """
    budget = int(CONFIG.get("lemma.budget", 8)) if budget is None else int(budget)
    schedule = CONFIG.get("lemma.schedule", "decade") if schedule is None else schedule
    slack = float(CONFIG.get("lemma.slack", 0.05)) if slack is None else float(slack)
    if int(k) != k or k < 1:
        raise InvalidParameterError(f"k must be an integer >= 1, got {k}")
    if budget < 1:
        raise InvalidParameterError(f"budget must be >= 1, got {budget}")
    if schedule not in SCHEDULES:
        raise InvalidParameterError(f"schedule must be one of {SCHEDULES}, got {schedule!r}")

    r = chebyshev_incircle(body).r
    search = _decade_schedule if schedule == "decade" else _halving_schedule
    found = search(body, center, r, int(k), budget, slack)
    if found is None:
        raise BudgetExhausted(
            f"alpha stays above 2π/(k(1+slack)) for k={k} after {budget} {schedule} steps "
            f"at center ({center.x:.6g}, {center.y:.6g}); contact there is not discrete")
    params, alpha = found
    logger.info(f"k={k}: epsilon={params.epsilon:.6g}, n={params.n}, R={params.R:.12g}, alpha={alpha:.12g}")
    return params, alpha


def rotation_feasible_set(U: AngularSet, vertex_angles: Sequence[float]) -> AngularSet:
    """
    顶点 φ 旋转 θ 后落在标记集合之外 ⟺ θ ∉ U - φ。
    返回所有顶点都避开标记集合的 θ 集合。
    """
    if U.is_empty:
        return AngularSet.full()
    forbidden = angular_union([U.shift(-phi) for phi in vertex_angles])
    return angular_complement(forbidden)


def rotate_about(pts: np.ndarray, center: Point2, theta: float) -> np.ndarray:
    c = np.array(center.as_tuple())
    return (pts - c) @ rotation_matrix(theta).T + c


def verify_subset(body: Body, center: Point2, config: Configuration, subset: Sequence[int],
                  theta: float) -> float:
    """
    把选中的点绕 center 旋转 theta，返回径向裕量 min_i (ρ_K(φ_i) - |p_i - center|)。
    裕量非负 ⟺ 所有点都在 K 内；空子集返回 +∞。
    """
    if len(subset) == 0:
        return math.inf
    pts = rotate_about(config.as_array()[list(subset)], center, theta)
    rel = pts - np.array(center.as_tuple())
    dist = np.hypot(rel[:, 0], rel[:, 1])
    phis = np.arctan2(rel[:, 1], rel[:, 0])
    rho = np.atleast_1d(radial_distance(body, center, phis))
    return float(np.min(rho - dist))


def vertex_angles(config: Configuration, center: Point2) -> np.ndarray:
    rel = config.as_array() - np.array(center.as_tuple())
    return np.array([normalize_angle(a) for a in np.arctan2(rel[:, 1], rel[:, 0])])


def noncover_inradii(body: Body, config: Configuration) -> Tuple[float, float]:
    """(凸包内切圆半径, K 的内切圆半径)。"""
    return inradius_of_points(config.points), chebyshev_incircle(body).r


def verify_noncover(body: Body, config: Configuration, tol: Optional[float] = None) -> bool:
    """
    凸包内切圆半径 > K 的内切圆半径 + tol 时返回 True：
    任何刚体像 g(K) 覆盖全部点都意味着 conv(points) ⊆ g(K)，于是凸包内切圆半径 <= r。
    返回 False 本身不说明任何事。

    :raises DegenerateHullError: 点集凸包退化
    """
    tol = DEFAULT_TOL if tol is None else tol
    hull_r, body_r = noncover_inradii(body, config)
    return hull_r > body_r + tol
