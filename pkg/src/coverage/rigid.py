import math
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Set, Tuple

import numpy as np
from tqdm import tqdm

from src.coverage.translation import (
    CoverResult,
    ImpossibilityCertificate,
    cutting_plane_minimize,
    min_core_residual,
    translation_cover,
)
from src.geometry.core import (
    TWO_PI,
    Body,
    Configuration,
    InvalidParameterError,
    RigidMotion,
    apply,
    contains_all,
    convex_hull,
    normalize_angle,
    rotation_matrix,
)
from src.geometry.incircle import chebyshev_incircle, inradius_of_points
from src.utils.config_manager import CONFIG

logger = logging.getLogger(__name__)

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class HellyEstimate:
    """
    :param k_max: 所有 k 子集都可被刚体覆盖的最大 k
    :param mode: "exhaustive" | "sampled" (抽样时不是证明)
    """
    k_max: int
    mode: str
    n_points: int
    subsets_checked: int = 0


def impossibility_certificate(pts: np.ndarray, body: Body, tol: float):
    """凸包内切圆半径 > K 的内切圆半径 + tol 时返回证书，否则 None。"""
    if len(pts) < 3:
        return None
    _, degenerate = convex_hull(pts)
    if degenerate:
        return None
    hull_r = inradius_of_points(pts)
    body_r = chebyshev_incircle(body).r
    if hull_r > body_r + tol:
        return ImpossibilityCertificate(hull_inradius=hull_r, body_inradius=body_r)
    return None


def _rotated_objective(pts: np.ndarray, body: Body) -> Callable[[float], float]:
    """
    m(θ)：K 旋转 θ 后的最小平移超出量。
    等价地把点旋转 -θ、K 不动。rho = 0 时用精确 LP 的残差 (与距离同号)。
    """
    use_lp = body.rho == 0.0 and body.is_polygon_core

    def objective(theta: float) -> float:
        q = pts @ rotation_matrix(-theta).T
        if use_lp:
            value, _ = min_core_residual(q, body)
            return value
        best_sd, _, _ = cutting_plane_minimize(q, body)
        return best_sd - body.rho

    return objective


def _golden_section(f: Callable[[float], float], lo: float, hi: float, iters: int) -> Tuple[float, float]:
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def rigid_cover(points: Configuration, body: Body, grid_n: int = None, refine_iters: int = None,
                tol: float = None, stop_at_first: bool = False) -> CoverResult:
    """
    启发式刚体覆盖：先做不可能性检验 (凸包内切圆过大)，
    再在 θ 网格上逐个求最小平移超出量，最后在最优 θ 附近黄金分割细化。
    没找到且没有不可能性证书时结果标记为 inconclusive。

    :param stop_at_first: 网格扫描遇到第一个可行 θ 即停止
    """
    grid_n = int(CONFIG.get("coverage.grid_n", 720)) if grid_n is None else int(grid_n)
    refine_iters = int(CONFIG.get("coverage.refine_iters", 60)) if refine_iters is None else int(refine_iters)
    tol = float(CONFIG.get("coverage.tol", 1e-7)) if tol is None else float(tol)
    if grid_n < 1:
        raise InvalidParameterError(f"grid_n must be >= 1, got {grid_n}")
    if refine_iters < 0:
        raise InvalidParameterError(f"refine_iters must be >= 0, got {refine_iters}")

    pts = points.as_array()
    cert = impossibility_certificate(pts, body, tol)
    if cert is not None:
        logger.info(f"rigid_cover: impossible, hull inradius {cert.hull_inradius:.12g} > {cert.body_inradius:.12g}")
        return CoverResult(found=False, motion=None, margin=-(cert.hull_inradius - cert.body_inradius),
                           certificate_of_impossibility=cert)

    objective = _rotated_objective(pts, body)
    step = TWO_PI / grid_n
    best_theta, best_value = 0.0, math.inf
    for i in range(grid_n):
        theta = i * step
        value = objective(theta)
        if value < best_value:
            best_theta, best_value = theta, value
        if stop_at_first and value <= tol:
            break

    if best_value > tol and refine_iters > 0 and grid_n > 1:
        theta, value = _golden_section(objective, best_theta - step, best_theta + step, refine_iters)
        if value < best_value:
            best_theta, best_value = normalize_angle(theta), value

    # 在最优 θ 上用切平面给出真实的欧氏裕量和平移
    rotated = Configuration(tuple(map(tuple, pts @ rotation_matrix(-best_theta).T)))
    inner = translation_cover(rotated, body, tol, cross_check=False)
    if not inner.found and best_theta != 0.0:
        # LP 残差与欧氏距离在 tol 量级上可能不一致，θ = 0 单独再试一次
        plain = translation_cover(points, body, tol, cross_check=False)
        if plain.found:
            best_theta, inner = 0.0, plain
    found = inner.found
    motion = None
    if found:
        t_local = np.array(inner.motion.t)
        t = rotation_matrix(best_theta) @ t_local
        motion = RigidMotion(best_theta, (float(t[0]), float(t[1])))
        moved = apply(motion, body)
        if not np.all(contains_all(moved, pts, tol)):
            logger.warning(f"rigid_cover post-check rejected theta={best_theta:.6g}")
            found, motion = False, None

    return CoverResult(found=found, motion=motion, margin=inner.margin, inconclusive=not found,
                       iterations=inner.iterations)


def _subset_stream(n: int, k: int, budget: int, rng: np.random.Generator):
    """C(n, k) <= budget 时穷举，否则抽样 budget 个 (有序索引元组)。"""
    if math.comb(n, k) <= budget:
        return combinations(range(n), k), math.comb(n, k), "exhaustive"

    def sampled():
        for _ in range(budget):
            yield tuple(sorted(int(i) for i in rng.choice(n, size=k, replace=False)))

    return sampled(), budget, "sampled"


def empirical_helly_number(points: Configuration, body: Body, budget: int = None, seed: int = 0,
                           grid_n: int = None, refine_iters: int = None, tol: float = None,
                           show_progress: bool = None) -> HellyEstimate:
    """
    估计 k_max：所有 k 子集都可被刚体覆盖的最大 k。
    先判全体；否则 k 从小到大扫描，某个 k 子集失败即停止。
    抽样中重复出现的已覆盖子集直接跳过。
    """
    budget = int(CONFIG.get("helly.budget", 2000)) if budget is None else int(budget)
    grid_n = int(CONFIG.get("helly.grid_n", 90)) if grid_n is None else int(grid_n)
    refine_iters = int(CONFIG.get("helly.refine_iters", 20)) if refine_iters is None else int(refine_iters)
    if show_progress is None:
        show_progress = bool(CONFIG.get("runtime.show_progress", False))
    if budget < 1:
        raise InvalidParameterError(f"budget must be >= 1, got {budget}")

    n = len(points)

    def coverable(config: Configuration) -> bool:
        return rigid_cover(config, body, grid_n=grid_n, refine_iters=refine_iters, tol=tol,
                           stop_at_first=True).found

    if coverable(points):
        return HellyEstimate(k_max=n, mode="exhaustive", n_points=n, subsets_checked=1)

    # 一个 k 子集失败则所有更大的子集都无须再看，扫描到此为止
    covered: Set[Tuple[int, ...]] = set()
    mode = "exhaustive"
    checked = 1
    # 单点总能被覆盖
    for k in range(2, n):
        rng = np.random.default_rng([seed, k])
        stream, total, level_mode = _subset_stream(n, k, budget, rng)
        if level_mode == "sampled":
            mode = "sampled"
        for subset in tqdm(stream, total=total, desc=f"k={k}", disable=not show_progress):
            if subset in covered:
                continue
            checked += 1
            if not coverable(points.subset(subset)):
                logger.info(f"k={k}: subset {list(subset)} is not coverable")
                return HellyEstimate(k_max=k - 1, mode=mode, n_points=n, subsets_checked=checked)
            covered.add(subset)
    return HellyEstimate(k_max=n - 1, mode=mode, n_points=n, subsets_checked=checked)
