import math
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import List, NamedTuple, Sequence, Tuple, Union

import numpy as np

from .errors import InvalidBodyError, NotInteriorError
from .primitives import DEFAULT_TOL, HULL_EPS, TWO_PI, Point2, normalize_angle, points_to_array

logger = logging.getLogger(__name__)

# 射线与边界片段求交时的参数容差
_PIECE_EPS = 1e-9


class SegmentPiece(NamedTuple):
    """边界上的直边：核心边沿外法向平移 rho 后的线段。"""
    a: np.ndarray
    b: np.ndarray
    normal: np.ndarray


class ArcPiece(NamedTuple):
    """边界上的圆角：以核心顶点为圆心、半径 rho，从 start 逆时针扫过 sweep。"""
    center: np.ndarray
    radius: float
    start: float
    sweep: float

    def contains_angle(self, psi: np.ndarray) -> np.ndarray:
        if self.sweep >= TWO_PI - 1e-15:
            return np.ones_like(psi, dtype=bool)
        offset = np.mod(psi - self.start, TWO_PI)
        return (offset <= self.sweep + _PIECE_EPS) | (offset >= TWO_PI - _PIECE_EPS)


def _validate_core(core: Tuple[Point2, ...], rho: float, tol: float):
    if not math.isfinite(rho) or rho < 0.0:
        raise InvalidBodyError(f"rho must be a finite number >= 0, got {rho}")
    m = len(core)
    if m == 0:
        raise InvalidBodyError("core must contain at least one point")
    if rho == 0.0 and m < 3:
        raise InvalidBodyError("a body with rho = 0 needs at least 3 core points (nonempty interior)")
    if m == 1:
        return

    v = points_to_array(core)
    d = np.roll(v, -1, axis=0) - v
    lens = np.hypot(d[:, 0], d[:, 1])
    if np.any(lens <= tol):
        raise InvalidBodyError("core points must be distinct (duplicate within tolerance)")
    if m == 2:
        return

    d_next = np.roll(d, -1, axis=0)
    cross = d[:, 0] * d_next[:, 1] - d[:, 1] * d_next[:, 0]
    dot = np.sum(d * d_next, axis=1)
    area2 = float(np.sum(v[:, 0] * np.roll(v[:, 1], -1) - np.roll(v[:, 0], -1) * v[:, 1]))
    if area2 < 0.0:
        raise InvalidBodyError("core must be listed counterclockwise")
    if np.any(cross <= HULL_EPS * lens * np.roll(lens, -1)):
        raise InvalidBodyError("core points must be in convex position (no reflex or collinear vertices)")
    turning = float(np.sum(np.arctan2(cross, dot)))
    if abs(turning - TWO_PI) > 1e-6:
        raise InvalidBodyError("core must be a simple convex polygon (boundary winds more than once)")


@dataclass(frozen=True)
class Body:
    """
    圆盘多边形凸体 K = conv(core) ⊕ {半径 rho 的圆盘}。

    :param core: 逆时针、凸位置、无重复的核心点 (>= 1 个)
    :param rho: 圆盘半径 (>= 0)；rho = 0 时核心至少 3 点
    """
    core: Tuple[Point2, ...]
    rho: float = 0.0

    def __post_init__(self):
        core = tuple(Point2.of(p) for p in self.core)
        object.__setattr__(self, "core", core)
        object.__setattr__(self, "rho", float(self.rho))
        _validate_core(core, self.rho, DEFAULT_TOL)

    # --- 缓存的几何数据 ---

    @cached_property
    def vertices(self) -> np.ndarray:
        v = points_to_array(self.core)
        v.setflags(write=False)
        return v

    @cached_property
    def edges(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """
        核心边数据 (m >= 2)：起点、方向、外法向 (单位)、偏移量 c_j = <n_j, p_j>。
        两点核心视为往返的两条边。
        """
        v = self.vertices
        d = np.roll(v, -1, axis=0) - v
        lens = np.hypot(d[:, 0], d[:, 1])
        normals = np.column_stack([d[:, 1], -d[:, 0]]) / lens[:, None]
        offsets = np.sum(normals * v, axis=1)
        return v, d, normals, offsets

    @cached_property
    def pieces(self) -> List[Union[SegmentPiece, ArcPiece]]:
        """沿边界逆时针排列的片段：arc_0, seg_0, arc_1, seg_1, ..."""
        v = self.vertices
        m = len(v)
        if m == 1:
            return [ArcPiece(v[0].copy(), self.rho, 0.0, TWO_PI)]

        starts, d, normals, _ = self.edges
        angles = np.arctan2(normals[:, 1], normals[:, 0])
        result: List[Union[SegmentPiece, ArcPiece]] = []
        for k in range(m):
            if self.rho > 0.0:
                start = normalize_angle(float(angles[k - 1]))
                sweep = float(np.mod(angles[k] - angles[k - 1], TWO_PI))
                if m == 2:
                    sweep = math.pi
                result.append(ArcPiece(v[k].copy(), self.rho, start, sweep))
            shift = self.rho * normals[k]
            result.append(SegmentPiece(starts[k] + shift, starts[k] + d[k] + shift, normals[k].copy()))
        return result

    @property
    def is_polygon_core(self) -> bool:
        return len(self.core) >= 3

    def bounding_box(self) -> Tuple[float, float, float, float]:
        v = self.vertices
        return (float(v[:, 0].min() - self.rho), float(v[:, 1].min() - self.rho),
                float(v[:, 0].max() + self.rho), float(v[:, 1].max() + self.rho))

    def diameter(self) -> float:
        v = self.vertices
        diff = v[:, None, :] - v[None, :, :]
        return float(np.sqrt(np.max(np.sum(diff * diff, axis=2)))) + 2.0 * self.rho

    def support(self, directions: np.ndarray) -> np.ndarray:
        """核心的支撑函数 h(u) = max_k <u, v_k> (不含 rho)。"""
        return np.max(np.asarray(directions, dtype=float) @ self.vertices.T, axis=1)

    def max_distance_from(self, c: Point2) -> float:
        """K 上离 c 最远的点的距离 = max_k |v_k - c| + rho。"""
        diff = self.vertices - np.array(c.as_tuple())
        return float(np.max(np.hypot(diff[:, 0], diff[:, 1]))) + self.rho

    # --- 距离查询 ---

    def core_distance(self, pts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        到 conv(core) 的有符号距离及其 (次) 梯度。

        :param pts: (N, 2) 点
        :return: (sd, grad)；sd 在内部为负 (等于到边界距离的相反数)，
                 grad 为单位向量 (外部：最近点指向该点；内部：活跃边外法向)
        """
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        n_pts = len(pts)
        v = self.vertices
        rows = np.arange(n_pts)

        if len(v) == 1:
            diff = pts - v[0]
            dist = np.hypot(diff[:, 0], diff[:, 1])
            safe = np.where(dist > 0.0, dist, 1.0)
            grad = np.where(dist[:, None] > 0.0, diff / safe[:, None], np.array([1.0, 0.0]))
            return dist, grad

        starts, d, normals, offsets = self.edges
        rel = pts[:, None, :] - starts[None, :, :]
        tau = np.clip(np.sum(rel * d[None], axis=2) / np.sum(d * d, axis=1)[None], 0.0, 1.0)
        diff = rel - tau[..., None] * d[None]
        dist = np.hypot(diff[..., 0], diff[..., 1])
        j = np.argmin(dist, axis=1)
        dmin = dist[rows, j]
        dvec = diff[rows, j]
        safe = np.where(dmin > 0.0, dmin, 1.0)
        grad_out = np.where(dmin[:, None] > 0.0, dvec / safe[:, None], normals[j])

        if len(v) == 2:
            return dmin, grad_out

        res = pts @ normals.T - offsets[None]
        jr = np.argmax(res, axis=1)
        rmax = res[rows, jr]
        inside = rmax <= 0.0
        sd = np.where(inside, rmax, dmin)
        grad = np.where(inside[:, None], normals[jr], grad_out)
        return sd, grad


def signed_excess(body: Body, pts) -> np.ndarray:
    """
    到 K 的有符号距离：外部为正，内部为负 (= -到 ∂K 的距离)。
    利用 K = P ⊕ rho·D 时 sd_K = sd_P - rho。
    """
    sd, _ = body.core_distance(np.asarray(pts, dtype=float).reshape(-1, 2))
    return sd - body.rho


def contains(body: Body, p: Union[Point2, Sequence[float]], tol: float = DEFAULT_TOL) -> bool:
    """
    p ∈ K (容差 tol)：dist(p, conv(core)) <= rho + tol，内部距离为 0。
    """
    if tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    p = Point2.of(p)
    return bool(signed_excess(body, np.array([p.as_tuple()]))[0] <= tol)


def contains_all(body: Body, pts: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """contains 的向量化版本。"""
    return signed_excess(body, pts) <= tol


def is_interior(body: Body, c: Point2, tol: float = DEFAULT_TOL) -> bool:
    return bool(signed_excess(body, np.array([c.as_tuple()]))[0] < -tol)


def _ray_exit(body: Body, c: np.ndarray, u: np.ndarray) -> np.ndarray:
    """从内部点 c 沿单位方向 u (K, 2) 射出，返回与 ∂K 的交点距离。"""
    best = np.full(len(u), -np.inf)
    for piece in body.pieces:
        if isinstance(piece, SegmentPiece):
            denom = u @ piece.normal
            num = float(piece.normal @ (piece.a - c))
            ok = denom > 1e-15
            s = np.where(ok, num / np.where(ok, denom, 1.0), 0.0)
            hit = c + s[:, None] * u
            seg = piece.b - piece.a
            tau = ((hit - piece.a) @ seg) / float(seg @ seg)
            valid = ok & (tau >= -_PIECE_EPS) & (tau <= 1.0 + _PIECE_EPS)
        else:
            w = c - piece.center
            bu = u @ w
            disc = bu * bu - (float(w @ w) - piece.radius ** 2)
            s = -bu + np.sqrt(np.maximum(disc, 0.0))
            hit = c + s[:, None] * u
            psi = np.arctan2(hit[:, 1] - piece.center[1], hit[:, 0] - piece.center[0])
            valid = (disc >= 0.0) & piece.contains_angle(psi)
        best = np.where(valid & (s > best), s, best)
    return best


def _bisect_exit(body: Body, c: np.ndarray, u: np.ndarray, iters: int = 200) -> float:
    lo, hi = 0.0, body.diameter() + 1.0
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if signed_excess(body, (c + mid * u)[None])[0] <= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


def radial_distance(body: Body, c: Point2, phi, tol: float = DEFAULT_TOL):
    """
    径向边界函数 ρ_K(φ)：从内部点 c 沿方向 φ 到 ∂K 的距离。
    逐片段求交 (直边：射线-线段；圆角：射线-圆)。

    :param phi: 标量或数组
    :raises NotInteriorError: c 不在 K 的内部
    """
    if not is_interior(body, c, tol):
        raise NotInteriorError(f"center ({c.x}, {c.y}) is not interior to the body")
    phis = np.atleast_1d(np.asarray(phi, dtype=float))
    u = np.column_stack([np.cos(phis), np.sin(phis)])
    origin = np.array(c.as_tuple())
    s = _ray_exit(body, origin, u)

    missing = ~np.isfinite(s)
    if np.any(missing):
        logger.warning(f"ray/boundary intersection fell back to bisection for {int(missing.sum())} directions")
        for idx in np.flatnonzero(missing):
            s[idx] = _bisect_exit(body, origin, u[idx])

    if np.ndim(phi) == 0:
        return float(s[0])
    return s


def reflect(body: Body) -> Body:
    """-K = {-x : x ∈ K}；取负保持逆时针顺序，rho 不变。"""
    return Body(tuple(-p for p in body.core), body.rho)
