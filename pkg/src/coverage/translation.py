import logging
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import linprog

from src.geometry.core import (
    TWO_PI,
    Body,
    Configuration,
    InvalidParameterError,
    RigidMotion,
    signed_excess,
)
from src.utils.config_manager import CONFIG

logger = logging.getLogger(__name__)

_LP_OPTIONS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


@dataclass(frozen=True)
class ImpossibilityCertificate:
    """conv(points) 的内切圆比 K 的大：任何刚体像都盖不住。"""
    hull_inradius: float
    body_inradius: float


@dataclass(frozen=True)
class CoverResult:
    """
    覆盖判定结果。

    :param found: 是否找到覆盖
    :param motion: 找到时的刚体运动 (作用在 K 上)
    :param margin: 最佳包含裕量 (有符号，正数表示严格在内部)
    :param certificate_of_impossibility: 不可能性证书 (可选)
    :param inconclusive: 启发式搜索没找到且没有证书
    :param solver_agreement: rho = 0 时切平面法与精确 LP 的结论是否一致
    """
    found: bool
    motion: Optional[RigidMotion]
    margin: float
    certificate_of_impossibility: Optional[ImpossibilityCertificate] = None
    inconclusive: bool = False
    solver_agreement: Optional[bool] = None
    iterations: int = 0


@dataclass(frozen=True)
class HellyReport:
    all_triples_coverable: bool
    whole_coverable: bool
    witness: Optional[Tuple[int, int, int]] = None
    violation: bool = False
    triples_checked: int = 0


def _translation_box(pts: np.ndarray, body: Body) -> List[Tuple[float, float]]:
    """可行平移所在的盒子：t ∈ v - conv(core)，再放宽 rho + 1。"""
    core = body.vertices
    pad = body.rho + 1.0
    lo = pts.min(axis=0) - core.max(axis=0) - pad
    hi = pts.max(axis=0) - core.min(axis=0) + pad
    return [(float(lo[0]), float(hi[0])), (float(lo[1]), float(hi[1])), (None, None)]


def _initial_directions(body: Body, count: int) -> np.ndarray:
    phis = TWO_PI * np.arange(count) / count
    uniform = np.column_stack([np.cos(phis), np.sin(phis)])
    if len(body.core) >= 2:
        _, _, normals, _ = body.edges
        return np.vstack([normals, uniform])
    return uniform


def min_core_residual(pts: np.ndarray, body: Body) -> Tuple[float, np.ndarray]:
    """
    精确线性可行性：min_t max_{i,j} (<n_j, v_i - t> - c_j)。
    仅对多边形核心有意义；值 <= 0 当且仅当存在平移使所有点落在 conv(core) 内。
    """
    _, _, normals, offsets = body.edges
    n_pts, n_edges = len(pts), len(normals)
    a_t = -np.repeat(normals[None, :, :], n_pts, axis=0).reshape(-1, 2)
    a_ub = np.column_stack([a_t, -np.ones(n_pts * n_edges)])
    b_ub = (offsets[None, :] - pts @ normals.T).reshape(-1)
    res = linprog(c=[0.0, 0.0, 1.0], A_ub=a_ub, b_ub=b_ub, bounds=_translation_box(pts, body),
                  method="highs", options=_LP_OPTIONS)
    if not res.success:
        raise RuntimeError(f"translation feasibility LP failed: {res.message}")
    return float(res.x[2]), np.asarray(res.x[:2], dtype=float)


def cutting_plane_minimize(pts: np.ndarray, body: Body) -> Tuple[float, np.ndarray, int]:
    """
    切平面法最小化 g(t) = max_i sd_P(v_i - t)，返回 (min sd_P, t, 迭代次数)。
    每次评估用精确的点-多边形距离；次梯度给出新的割平面。
    """
    gap_tol = float(CONFIG.get("coverage.gap_tol", 1e-12))
    max_iter = int(CONFIG.get("coverage.max_iter", 10000))
    stall_iters = int(CONFIG.get("coverage.stall_iters", 5))
    n_dirs = int(CONFIG.get("coverage.initial_directions", 16))

    dirs = _initial_directions(body, n_dirs)
    h = body.support(dirs)
    # sd_P(x) >= <u, x> - h(u) 对所有单位向量 u 成立
    rows = [[-u[0], -u[1], -1.0] for _ in pts for u in dirs]
    rhs = [float(hu - u @ v) for v in pts for u, hu in zip(dirs, h)]
    seen = set()
    bounds = _translation_box(pts, body)

    best, best_t = np.inf, None
    stall = 0
    it = 0
    for it in range(1, max_iter + 1):
        res = linprog(c=[0.0, 0.0, 1.0], A_ub=np.array(rows), b_ub=np.array(rhs), bounds=bounds,
                      method="highs", options=_LP_OPTIONS)
        if not res.success:
            logger.warning(f"cutting-plane master LP failed at iteration {it}: {res.message}")
            break
        t_k = np.asarray(res.x[:2], dtype=float)
        lower = float(res.x[2])

        sd, grad = body.core_distance(pts - t_k)
        value = float(sd.max())
        if value < best - gap_tol:
            best, best_t = value, t_k
            stall = 0
        else:
            if value < best:
                best, best_t = value, t_k
            stall += 1
        if best - lower <= gap_tol or stall >= stall_iters:
            break

        added = 0
        for i in np.flatnonzero(sd > lower + gap_tol):
            g = grad[i]
            row = (-g[0], -g[1], -1.0)
            b = float(-sd[i] - g @ t_k)
            key = tuple(np.round(row[:2], 12)) + (round(b, 12),)
            if key in seen:
                continue
            seen.add(key)
            rows.append(list(row))
            rhs.append(b)
            added += 1
        if added == 0:
            break

    if best_t is None:
        best_t = pts.mean(axis=0)
        best = float(body.core_distance(pts - best_t)[0].max())
    return best, best_t, it


def translation_cover(points: Configuration, body: Body, tol: float = None,
                      cross_check: bool = True) -> CoverResult:
    """
    是否存在平移 t 使 t + K 覆盖所有点 (等价于 ∩_i (v_i + (-K)) 非空)。
    切平面法求 min g，found ⟺ min g <= tol，margin = -min g；结果再用 signed_excess 复核。
    rho = 0 时额外解精确线性可行性问题，两者结论需一致。
    """
    tol = float(CONFIG.get("coverage.tol", 1e-7)) if tol is None else float(tol)
    pts = points.as_array()

    best_sd, t, iterations = cutting_plane_minimize(pts, body)
    g = best_sd - body.rho
    found = g <= tol
    if found:
        excess = signed_excess(body, pts - t)
        if np.max(excess) > tol:
            logger.warning(f"translation post-check rejected t={t.tolist()}: excess {np.max(excess):.3g}")
            found = False

    agreement = None
    if cross_check and body.rho == 0.0 and body.is_polygon_core:
        lp_value, _ = min_core_residual(pts, body)
        agreement = (lp_value <= tol) == found
        if not agreement:
            logger.warning(f"translation solvers disagree: cutting plane g={g:.3g}, exact LP residual={lp_value:.3g}")

    motion = RigidMotion(0.0, (float(t[0]), float(t[1]))) if found else None
    return CoverResult(found=found, motion=motion, margin=-g, solver_agreement=agreement, iterations=iterations)


def translation_coverable(pts: np.ndarray, body: Body, tol: float) -> bool:
    """快速判定：多边形且 rho = 0 时直接用精确 LP，否则走切平面。"""
    if body.rho == 0.0 and body.is_polygon_core:
        value, _ = min_core_residual(pts, body)
        return value <= tol
    best_sd, _, _ = cutting_plane_minimize(pts, body)
    return best_sd - body.rho <= tol


def helly_triple_property(points: Configuration, body: Body, tol: float = None) -> HellyReport:
    """
    平移版 Helly 推论：任意 3 点可被 K 的某个平移覆盖 ⇒ 全体可被覆盖。
    先判全体 (可覆盖则所有三元组都可覆盖)，否则按字典序找一个不可覆盖的三元组；
    找不到即为违例，说明判定器有问题。

    :raises InvalidParameterError: 少于 3 个点
    """
    if len(points) < 3:
        raise InvalidParameterError(f"helly_triple_property needs at least 3 points, got {len(points)}")
    tol = float(CONFIG.get("coverage.tol", 1e-7)) if tol is None else float(tol)
    pts = points.as_array()

    if translation_coverable(pts, body, tol):
        return HellyReport(all_triples_coverable=True, whole_coverable=True)

    checked = 0
    for triple in combinations(range(len(pts)), 3):
        checked += 1
        if not translation_coverable(pts[list(triple)], body, tol):
            return HellyReport(all_triples_coverable=False, whole_coverable=False,
                               witness=triple, triples_checked=checked)

    logger.error(f"Helly violation: all {checked} triples coverable but the whole set is not")
    return HellyReport(all_triples_coverable=True, whole_coverable=False, violation=True,
                       triples_checked=checked)
