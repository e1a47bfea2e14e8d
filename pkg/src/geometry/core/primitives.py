import math
from dataclasses import dataclass, field
from typing import Iterable, List, Sequence, Tuple, Union

import numpy as np

from src.utils.config_manager import CONFIG

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = float(CONFIG.get("geometry.tol", 1e-9))
HULL_EPS = float(CONFIG.get("geometry.hull_eps", 1e-12))


def normalize_angle(theta: float) -> float:
    """把角度规范到 [0, 2π)。浮点取模可能恰好得到 2π，这里截回 0。"""
    a = math.fmod(theta, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    if a >= TWO_PI:
        a = 0.0
    return a


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"Point2 coordinates must be finite, got ({self.x}, {self.y})")

    @classmethod
    def of(cls, value: Union["Point2", Sequence[float]]) -> "Point2":
        if isinstance(value, Point2):
            return value
        x, y = value
        return cls(x, y)

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Point2":
        return Point2(-self.x, -self.y)

    def scale(self, s: float) -> "Point2":
        return Point2(self.x * s, self.y * s)

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def angle(self) -> float:
        """相对原点的极角，范围 [0, 2π)。"""
        return normalize_angle(math.atan2(self.y, self.x))

    def distance(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def as_tuple(self) -> Tuple[float, float]:
        return (self.x, self.y)


def points_to_array(points: Iterable[Union[Point2, Sequence[float]]]) -> np.ndarray:
    """Point2 列表 -> (N, 2) float 数组。"""
    rows = [Point2.of(p).as_tuple() for p in points]
    if not rows:
        return np.zeros((0, 2), dtype=float)
    return np.asarray(rows, dtype=float)


def array_to_points(arr: np.ndarray) -> List[Point2]:
    return [Point2(float(x), float(y)) for x, y in np.asarray(arr, dtype=float).reshape(-1, 2)]


def rotation_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]], dtype=float)


@dataclass(frozen=True)
class Configuration:
    """
    待覆盖的有限平面点集。

    :param points: 点列表 (至少 1 个，坐标有限)
    :param provenance: 来源描述 (例如 "regular 40-gon, epsilon=0.01")
    """
    points: Tuple[Point2, ...]
    provenance: str = ""

    def __post_init__(self):
        pts = tuple(Point2.of(p) for p in self.points)
        if not pts:
            raise ValueError("Configuration needs at least one point")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return points_to_array(self.points)

    def subset(self, indices: Sequence[int]) -> "Configuration":
        return Configuration(tuple(self.points[i] for i in indices),
                             provenance=f"{self.provenance} subset {list(indices)}".strip())


@dataclass(frozen=True)
class RigidMotion:
    """
    平面刚体运动：先绕原点旋转 theta，再平移 t。theta 规范到 [0, 2π)。
    """
    theta: float = 0.0
    t: Tuple[float, float] = field(default=(0.0, 0.0))

    def __post_init__(self):
        object.__setattr__(self, "theta", normalize_angle(float(self.theta)))
        tx, ty = self.t
        object.__setattr__(self, "t", (float(tx), float(ty)))

    @classmethod
    def identity(cls) -> "RigidMotion":
        return cls(0.0, (0.0, 0.0))

    @classmethod
    def rotation_about(cls, center: Point2, theta: float) -> "RigidMotion":
        """绕 center 旋转 theta 的刚体运动。"""
        rot = rotation_matrix(theta)
        c = np.array(center.as_tuple())
        t = c - rot @ c
        return cls(theta, (float(t[0]), float(t[1])))

    def inverse(self) -> "RigidMotion":
        rot_inv = rotation_matrix(-self.theta)
        t = -(rot_inv @ np.array(self.t))
        return RigidMotion(-self.theta, (float(t[0]), float(t[1])))

    def apply_array(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float).reshape(-1, 2)
        return pts @ rotation_matrix(self.theta).T + np.array(self.t)

    def apply_point(self, p: Point2) -> Point2:
        x, y = self.apply_array(np.array([p.as_tuple()]))[0]
        return Point2(x, y)


def apply(motion: RigidMotion, target):
    """
    把刚体运动作用在 Point2 / Configuration / Body 上。
    Body 的 rho 不变，核心点顺序 (逆时针) 在旋转下保持。
    """
    # 延迟导入，避免 body 与 primitives 循环依赖
    from .body import Body

    if isinstance(target, Point2):
        return motion.apply_point(target)
    if isinstance(target, Configuration):
        moved = array_to_points(motion.apply_array(target.as_array()))
        return Configuration(tuple(moved), provenance=target.provenance)
    if isinstance(target, Body):
        moved = array_to_points(motion.apply_array(target.vertices))
        return Body(tuple(moved), target.rho)
    raise TypeError(f"Cannot apply a rigid motion to {type(target).__name__}")


def _cross(o: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    return float((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]))


def convex_hull(points: Iterable[Union[Point2, Sequence[float]]]) -> Tuple[List[Point2], bool]:
    """
    Andrew 单调链凸包。

    :param points: 至少一个点
    :return: (逆时针凸包顶点, degenerate)；共线点被剔除。
             退化凸包 (单点 / 线段) 原样返回并把 degenerate 置为 True。
    """
    arr = points_to_array(points)
    if len(arr) == 0:
        raise ValueError("convex_hull needs at least one point")

    # 去重 + 字典序排序
    uniq = np.unique(arr, axis=0)
    if len(uniq) == 1:
        return [Point2(*uniq[0])], True

    scale = float(np.max(np.abs(uniq))) or 1.0
    eps = HULL_EPS * scale * scale

    def half(seq):
        chain = []
        for p in seq:
            while len(chain) >= 2 and _cross(chain[-2], chain[-1], p) <= eps:
                chain.pop()
            chain.append(p)
        return chain

    lower = half(uniq)
    upper = half(uniq[::-1])
    hull = lower[:-1] + upper[:-1]

    if len(hull) < 3:
        # 全部共线：返回两个端点
        ends = [uniq[0], uniq[-1]]
        return [Point2(*p) for p in ends], True

    # 首尾拼接处再按相对判据清理一遍，与 Body 的凸性校验保持一致
    changed = True
    while changed and len(hull) >= 3:
        changed = False
        for i in range(len(hull)):
            o, a, b = hull[i - 1], hull[i], hull[(i + 1) % len(hull)]
            rel = HULL_EPS * float(np.hypot(*(a - o))) * float(np.hypot(*(b - a)))
            if _cross(o, a, b) <= rel:
                del hull[i]
                changed = True
                break
    if len(hull) < 3:
        ends = [uniq[0], uniq[-1]]
        return [Point2(*p) for p in ends], True
    return [Point2(*p) for p in hull], False
