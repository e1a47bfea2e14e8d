import math
import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np
from scipy.optimize import linprog

from src.geometry.core import (
    TWO_PI,
    AngularSet,
    ArcPiece,
    Body,
    CenterNotAdmissibleError,
    DegenerateHullError,
    Point2,
    SegmentPiece,
    convex_hull,
    normalize_angle,
    points_to_array,
)
from src.utils.config_manager import CONFIG

logger = logging.getLogger(__name__)

CENTER_SLACK = float(CONFIG.get("incircle.center_slack", 1e-9))
CLASSIFY_EPS = float(CONFIG.get("incircle.classify_eps", 1e-7))
CONTACT_TOL = float(CONFIG.get("incircle.contact_tol", 1e-7))

CONTACT_INTERPRETATION = "contact set read as boundary ∩ incircle (the union reading is never discrete)"

_LP_OPTIONS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


@dataclass(frozen=True)
class Incircle:
    """
    内切圆 (最大内切圆，圆心可能不唯一)。

    :param r: 内切圆半径
    :param centers: 圆心集合的顶点 (点 / 线段端点 / 凸多边形顶点)
    :param kind: "point" | "segment" | "polygon"
    :param core_radius: 核心多边形的 Chebyshev 半径 s*，r = s* + rho
    """
    r: float
    centers: Tuple[Point2, ...]
    kind: str
    core_radius: float = 0.0

    def distance_to_centers(self, p: Point2) -> float:
        pts = points_to_array(self.centers)
        q = np.array(p.as_tuple())
        if self.kind == "point":
            return float(np.hypot(*(q - pts[0])))
        if self.kind == "segment":
            return _segment_distance(q, pts[0], pts[1])
        # 凸多边形：内部为 0
        d = np.roll(pts, -1, axis=0) - pts
        cross = d[:, 0] * (q[1] - pts[:, 1]) - d[:, 1] * (q[0] - pts[:, 0])
        if np.all(cross >= 0.0):
            return 0.0
        return min(_segment_distance(q, pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts)))


@dataclass(frozen=True)
class ContactReport:
    """
    ∂K ∩ O 的分析结果及 β/α 下界。

    :param tangent_points: 孤立切点在圆心处的角度
    :param contact_arcs: 与内切圆同心的边界圆弧 (角度集合)
    :param alpha_contact: 接触弧的弧长 (1 维测度)
    :param beta: 内切圆周长 2πr
    :param lower_bound: beta / alpha_contact，离散接触时为 ∞
    """
    center: Point2
    r: float
    tangent_points: Tuple[float, ...]
    contact_arcs: AngularSet
    alpha_contact: float
    beta: float
    discrete: bool
    lower_bound: float
    interpretation: str = CONTACT_INTERPRETATION


@dataclass(frozen=True)
class BoundSummary:
    min_lower_bound: float
    max_lower_bound: float
    reports: Tuple[ContactReport, ...] = field(default=())


def _segment_distance(q: np.ndarray, a: np.ndarray, b: np.ndarray) -> float:
    d = b - a
    dd = float(d @ d)
    tau = 0.0 if dd == 0.0 else min(1.0, max(0.0, float((q - a) @ d) / dd))
    return float(np.hypot(*(q - a - tau * d)))


def _chebyshev_lp(normals: np.ndarray, offsets: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    max s  s.t.  <x, n_j> + s <= c_j。
    HiGHS 解之后在活跃约束上做一次最小二乘精化，并以 min_j (c_j - <n_j, x>) 作为 s 的后验值。
    """
    m = len(normals)
    a_ub = np.column_stack([normals, np.ones(m)])
    res = linprog(c=[0.0, 0.0, -1.0], A_ub=a_ub, b_ub=offsets,
                  bounds=[(None, None), (None, None), (0.0, None)],
                  method="highs", options=_LP_OPTIONS)
    if not res.success:
        raise RuntimeError(f"Chebyshev LP failed: {res.message}")

    def slack_at(x):
        return float(np.min(offsets - normals @ x))

    x = np.asarray(res.x[:2], dtype=float)
    best_x, best_s = x, slack_at(x)

    resid = offsets - normals @ x - res.x[2]
    active = resid < 1e-7
    if np.count_nonzero(active) >= 2:
        sol, *_ = np.linalg.lstsq(a_ub[active], offsets[active], rcond=None)
        x_ref = sol[:2]
        if slack_at(x_ref) > best_s:
            best_x, best_s = x_ref, slack_at(x_ref)

    if best_s < res.x[2] - 1e-7:
        logger.warning(f"Chebyshev LP post-check: residual {best_s} below LP value {res.x[2]}")
    return best_x, best_s


def _clip_halfplane(poly: List[np.ndarray], n: np.ndarray, b: float) -> List[np.ndarray]:
    """Sutherland-Hodgman：凸多边形与半平面 <n, x> <= b 求交。"""
    out = []
    for i in range(len(poly)):
        p, q = poly[i], poly[(i + 1) % len(poly)]
        fp, fq = float(n @ p) - b, float(n @ q) - b
        if fp <= 0.0:
            out.append(p)
        if fp * fq < 0.0:
            out.append(p + fp / (fp - fq) * (q - p))
    return out


def _polygon_area(pts: np.ndarray) -> float:
    if len(pts) < 3:
        return 0.0
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * abs(float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)))


def _center_region(body: Body, s_star: float, x_star: np.ndarray) -> Tuple[Tuple[Point2, ...], str]:
    """
    在 s* 处把所有边向内平移 (带 center_slack 放宽)，求半平面交并分类为点 / 线段 / 多边形。
    """
    _, _, normals, offsets = body.edges
    xmin, ymin, xmax, ymax = body.bounding_box()
    poly = [np.array([xmin, ymin]), np.array([xmax, ymin]), np.array([xmax, ymax]), np.array([xmin, ymax])]
    bounds = offsets - s_star + CENTER_SLACK
    for n, b in zip(normals, bounds):
        poly = _clip_halfplane(poly, n, float(b))
        if not poly:
            break

    if not poly:
        return (Point2(*x_star),), "point"

    region = np.array(poly)
    diff = region[:, None, :] - region[None, :, :]
    diam = float(np.sqrt(np.max(np.sum(diff * diff, axis=2))))
    if diam < CLASSIFY_EPS:
        return (Point2(*x_star),), "point"

    area = _polygon_area(region)
    if area <= CLASSIFY_EPS * diam:
        # 细长区域：沿主轴在 (几乎) 不放宽的半平面上截出中线段
        centroid = region.mean(axis=0)
        _, _, vt = np.linalg.svd(region - centroid)
        axis = vt[0]
        if axis[0] < 0.0 or (axis[0] == 0.0 and axis[1] < 0.0):
            axis = -axis
        lo, hi = -np.inf, np.inf
        for n, c in zip(normals, offsets - s_star + 1e-12):
            na = float(n @ axis)
            rhs = float(c - n @ centroid)
            if abs(na) < 1e-15:
                continue
            if na > 0.0:
                hi = min(hi, rhs / na)
            else:
                lo = max(lo, rhs / na)
        if not (np.isfinite(lo) and np.isfinite(hi)) or hi < lo:
            return (Point2(*x_star),), "point"
        ends = (Point2(*(centroid + lo * axis)), Point2(*(centroid + hi * axis)))
        return ends, "segment"

    hull, _ = convex_hull(region)
    return tuple(hull), "polygon"


def chebyshev_incircle(body: Body) -> Incircle:
    """
    内切圆。核心 >= 3 点时解 Chebyshev LP 得 s*，r = s* + rho
    (K = conv(core) ⊕ rho·D 被 rho·D 腐蚀后恰为 conv(core))；
    1 / 2 点核心时圆心集合为 conv(core)，r = rho。
    """
    if not body.is_polygon_core:
        centers = body.core
        kind = "point" if len(centers) == 1 else "segment"
        return Incircle(r=body.rho, centers=centers, kind=kind, core_radius=0.0)

    _, _, normals, offsets = body.edges
    x_star, s_star = _chebyshev_lp(normals, offsets)
    centers, kind = _center_region(body, s_star, x_star)
    logger.debug(f"incircle: r={s_star + body.rho}, kind={kind}")
    return Incircle(r=s_star + body.rho, centers=centers, kind=kind, core_radius=s_star)


def inradius_of_points(points: Sequence) -> float:
    """
    conv(points) 的内切圆半径 (rho = 0 的凸包 Body 上解 Chebyshev LP)。

    :raises DegenerateHullError: 凸包退化 (少于 3 个不共线点)
    """
    hull, degenerate = convex_hull(points)
    if degenerate:
        raise DegenerateHullError(f"degenerate hull with {len(hull)} vertices has no incircle")
    return chebyshev_incircle(Body(tuple(hull), 0.0)).r


def contact_report(body: Body, center: Point2, incircle: Incircle = None) -> ContactReport:
    """
    分析 ∂K ∩ O：直边切点 + 同心圆弧。
    同心圆弧只在某核心顶点与圆心重合且 rho = r 时出现，此时整段圆角都是接触弧。

    :raises CenterNotAdmissibleError: center 不是内切圆心
    """
    inc = incircle or chebyshev_incircle(body)
    if inc.distance_to_centers(center) > CONTACT_TOL:
        raise CenterNotAdmissibleError(
            f"({center.x}, {center.y}) is not an incircle center (distance {inc.distance_to_centers(center):.3g})")

    r = inc.r
    c = np.array(center.as_tuple())
    arcs = []
    for piece in body.pieces:
        if isinstance(piece, ArcPiece):
            concentric = float(np.hypot(*(piece.center - c))) <= CONTACT_TOL
            if concentric and abs(piece.radius - r) <= CONTACT_TOL:
                arcs.append((piece.start, piece.start + piece.sweep))
    contact = AngularSet.from_bounds(arcs)

    tangents = []
    for piece in body.pieces:
        if not isinstance(piece, SegmentPiece):
            continue
        dist = float(piece.normal @ (piece.a - c))
        if abs(dist - r) > CONTACT_TOL:
            continue
        foot = c + dist * piece.normal
        seg = piece.b - piece.a
        tau = float((foot - piece.a) @ seg) / float(seg @ seg)
        if -1e-9 <= tau <= 1.0 + 1e-9:
            tangents.append(normalize_angle(math.atan2(piece.normal[1], piece.normal[0])))

    def strictly_inside_contact(phi):
        for arc in contact.arcs:
            off = (phi - arc.start) % TWO_PI
            if 1e-9 < off < arc.length - 1e-9:
                return True
        return False

    points = []
    for phi in sorted(tangents):
        if strictly_inside_contact(phi):
            continue
        if points and abs(phi - points[-1]) < 1e-9:
            continue
        points.append(phi)

    alpha_contact = r * contact.measure
    beta = TWO_PI * r
    discrete = contact.is_empty
    lower_bound = math.inf if discrete else beta / alpha_contact
    return ContactReport(center=center, r=r, tangent_points=tuple(points), contact_arcs=contact,
                         alpha_contact=alpha_contact, beta=beta, discrete=discrete, lower_bound=lower_bound)


def candidate_centers(body: Body, incircle: Incircle = None) -> List[Point2]:
    """
    值得分析的内切圆心：圆心集合的极点、其中点 / 形心，以及落在集合内的核心顶点 (去重)。
    """
    inc = incircle or chebyshev_incircle(body)
    candidates = list(inc.centers)
    if len(inc.centers) > 1:
        mean = points_to_array(inc.centers).mean(axis=0)
        candidates.append(Point2(*mean))
    for v in body.core:
        if inc.distance_to_centers(v) <= CONTACT_TOL:
            candidates.append(v)

    unique: List[Point2] = []
    for p in candidates:
        if all(p.distance(q) > 1e-9 for q in unique):
            unique.append(p)
    return unique


def bound_summary(body: Body) -> BoundSummary:
    """在所有候选圆心上汇总 β/α 下界的最小值与最大值 (∞ 合法)。"""
    inc = chebyshev_incircle(body)
    reports = tuple(contact_report(body, c, inc) for c in candidate_centers(body, inc))
    bounds = [rep.lower_bound for rep in reports]
    return BoundSummary(min_lower_bound=min(bounds), max_lower_bound=max(bounds), reports=reports)
