"""
SVG 场景：把凸体、内切圆、标记弧与点集画成一张图。

场景只保存计算得到的对象，绘制时才换算成屏幕坐标 (每单位 svg_scale 像素，y 轴翻转，四周留白 svg_padding)。
"""
import math
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from src.geometry.core import TWO_PI, ArcPiece, Body, Configuration, Point2, radial_distance
from src.geometry.incircle import chebyshev_incircle, candidate_centers
from src.geometry.marking import MarkedSet, marked_set
from src.utils.config_manager import CONFIG
from src.utils.serializers import atomic_write_text

logger = logging.getLogger(__name__)

# 每段标记弧的采样点数
_MARK_SAMPLES = 64


@dataclass(frozen=True)
class Scene:
    body: Body
    incircles: Tuple[Tuple[Point2, float], ...] = ()
    marked: Optional[MarkedSet] = None
    points: Optional[Configuration] = None
    labels: Tuple[str, ...] = field(default=())


def scene_for_body(body: Body) -> Scene:
    inc = chebyshev_incircle(body)
    center = candidate_centers(body, inc)[0]
    return Scene(body=body, incircles=((center, inc.r),), labels=(f"r = {inc.r:.6g}",))


def scene_for_marking(body: Body, R: float, center: Point2 = None) -> Scene:
    inc = chebyshev_incircle(body)
    center = center or candidate_centers(body, inc)[0]
    marking = marked_set(body, center, R)
    labels = (f"r = {inc.r:.6g}", f"R = {R:.6g}", f"alpha = {marking.alpha:.6g}")
    return Scene(body=body, incircles=((center, inc.r),), marked=marking, labels=labels)


def scene_for_certificate(cert) -> Scene:
    """证书场景：凸体、内切圆、n 个顶点、半径 R 处的标记弧。"""
    inc = chebyshev_incircle(cert.body)
    marking = marked_set(cert.body, cert.center, cert.params.R)
    labels = (f"r = {inc.r:.6g}", f"R = {cert.params.R:.6g}", f"alpha = {cert.alpha:.6g}",
              f"k = {cert.k}, n = {cert.params.n}")
    return Scene(body=cert.body, incircles=((cert.center, inc.r),), marked=marking, points=cert.points,
                 labels=labels)


class _Canvas:
    def __init__(self, scene: Scene, scale: float, padding: float):
        xmin, ymin, xmax, ymax = scene.body.bounding_box()
        if scene.points is not None:
            pts = scene.points.as_array()
            xmin, ymin = min(xmin, pts[:, 0].min()), min(ymin, pts[:, 1].min())
            xmax, ymax = max(xmax, pts[:, 0].max()), max(ymax, pts[:, 1].max())
        pad = padding * max(xmax - xmin, ymax - ymin)
        self.x0, self.y1 = xmin - pad, ymax + pad
        self.scale = scale
        self.width = (xmax - xmin + 2 * pad) * scale
        self.height = (ymax - ymin + 2 * pad) * scale

    def xy(self, p) -> str:
        x, y = float(p[0]), float(p[1])
        return f"{(x - self.x0) * self.scale:.3f},{(self.y1 - y) * self.scale:.3f}"

    def length(self, v: float) -> str:
        return f"{v * self.scale:.3f}"


def _arc_end(piece: ArcPiece, angle: float) -> np.ndarray:
    return piece.center + piece.radius * np.array([math.cos(angle), math.sin(angle)])


def _body_path(body: Body, cv: _Canvas) -> str:
    """边界路径：直边用 L，圆角用 A；y 轴翻转后逆时针对应 sweep-flag 0。"""
    pieces = body.pieces
    first = pieces[0]
    start = _arc_end(first, first.start) if isinstance(first, ArcPiece) else first.a
    cmds = [f"M {cv.xy(start)}"]
    for piece in pieces:
        if isinstance(piece, ArcPiece):
            r = cv.length(piece.radius)
            if piece.sweep >= TWO_PI - 1e-12:
                # 整圆拆成两个半圆
                half = _arc_end(piece, piece.start + math.pi)
                end = _arc_end(piece, piece.start)
                cmds.append(f"A {r} {r} 0 0 0 {cv.xy(half)}")
                cmds.append(f"A {r} {r} 0 0 0 {cv.xy(end)}")
            else:
                large = 1 if piece.sweep > math.pi else 0
                cmds.append(f"A {r} {r} 0 {large} 0 {cv.xy(_arc_end(piece, piece.start + piece.sweep))}")
        else:
            cmds.append(f"L {cv.xy(piece.b)}")
    cmds.append("Z")
    return " ".join(cmds)


def _marked_paths(body: Body, marking: MarkedSet, cv: _Canvas) -> List[str]:
    """每段标记方向区间沿边界采样成一条折线。"""
    c = np.array(marking.center.as_tuple())
    paths = []
    for arc in marking.U.arcs:
        phis = arc.start + arc.length * np.linspace(0.0, 1.0, _MARK_SAMPLES)
        rho = np.atleast_1d(radial_distance(body, marking.center, phis))
        pts = c + rho[:, None] * np.column_stack([np.cos(phis), np.sin(phis)])
        paths.append("M " + " L ".join(cv.xy(p) for p in pts))
    return paths


def render_svg(scene: Scene) -> str:
    scale = float(CONFIG.get("output.svg_scale", 100))
    padding = float(CONFIG.get("output.svg_padding", 0.05))
    cv = _Canvas(scene, scale, padding)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{cv.width:.3f}" height="{cv.height:.3f}" '
        f'viewBox="0 0 {cv.width:.3f} {cv.height:.3f}">',
        f'  <path class="body" d="{_body_path(scene.body, cv)}" fill="none" stroke="black" stroke-width="1.5"/>',
    ]
    for center, r in scene.incircles:
        x, y = cv.xy(center.as_tuple()).split(",")
        lines.append(f'  <circle class="incircle" cx="{x}" cy="{y}" r="{cv.length(r)}" '
                     f'fill="none" stroke="blue" stroke-width="1"/>')
    if scene.marked is not None:
        for d in _marked_paths(scene.body, scene.marked, cv):
            lines.append(f'  <path class="marked" d="{d}" fill="none" stroke="red" stroke-width="3"/>')
    if scene.points is not None:
        for p in scene.points.points:
            x, y = cv.xy(p.as_tuple()).split(",")
            lines.append(f'  <circle class="point" cx="{x}" cy="{y}" r="2.5" fill="black"/>')
    for i, text in enumerate(scene.labels):
        lines.append(f'  <text x="6" y="{16 + 16 * i}" font-size="13" font-family="sans-serif">{text}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_svg(scene: Scene, path: Union[str, Path]) -> Path:
    """
    :raises OSError: 路径不可写
    """
    path = Path(path)
    atomic_write_text(path, render_svg(scene))
    return path
