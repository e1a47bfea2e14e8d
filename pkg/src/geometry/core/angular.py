import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

from .primitives import TWO_PI, normalize_angle

# 合并相邻弧段时允许的数值缝隙
MERGE_EPS = 1e-13
# 长度低于该值的弧段视为空
MIN_ARC = 1e-15


@dataclass(frozen=True)
class AngularInterval:
    """
    单位圆上的半开弧 [start, start + length)。

    :param start: 起点，[0, 2π)
    :param length: 长度，(0, 2π]
    """
    start: float
    length: float

    def __post_init__(self):
        object.__setattr__(self, "start", float(self.start))
        object.__setattr__(self, "length", float(self.length))
        if not (0.0 <= self.start < TWO_PI):
            raise ValueError(f"arc start must lie in [0, 2π), got {self.start}")
        if not (0.0 < self.length <= TWO_PI):
            raise ValueError(f"arc length must lie in (0, 2π], got {self.length}")

    @property
    def end(self) -> float:
        """终点 (未取模，可能超过 2π)。"""
        return self.start + self.length

    @property
    def midpoint(self) -> float:
        return normalize_angle(self.start + 0.5 * self.length)

    def contains_angle(self, phi: float) -> bool:
        if self.length >= TWO_PI:
            return True
        return (normalize_angle(phi) - self.start) % TWO_PI < self.length

    def unwrap(self) -> List[Tuple[float, float]]:
        """拆成落在 [0, 2π] 内的不回绕区间。"""
        if self.end <= TWO_PI:
            return [(self.start, self.end)]
        return [(self.start, TWO_PI), (0.0, self.end - TWO_PI)]


def _canonical_arcs(pieces: Iterable[Tuple[float, float]]) -> Tuple[AngularInterval, ...]:
    """
    把 [0, 2π] 内的区间列表合并为规范弧列表：
    按起点排序、两两不相交且不相邻，跨越 0 的弧放在末尾 (起点最大)。
    """
    segs = sorted((max(0.0, a), min(TWO_PI, b)) for a, b in pieces if b - a > MIN_ARC)
    if not segs:
        return ()

    merged: List[List[float]] = []
    for a, b in segs:
        if merged and a <= merged[-1][1] + MERGE_EPS:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])

    if len(merged) == 1 and merged[0][0] <= MERGE_EPS and merged[0][1] >= TWO_PI - MERGE_EPS:
        return (AngularInterval(0.0, TWO_PI),)

    # 首尾在 0 / 2π 处相接时拼成一条回绕弧
    if len(merged) > 1 and merged[0][0] <= MERGE_EPS and merged[-1][1] >= TWO_PI - MERGE_EPS:
        first = merged.pop(0)
        last = merged.pop()
        merged.append([last[0], TWO_PI + first[1]])

    arcs = []
    for a, b in merged:
        start = normalize_angle(a)
        length = min(b - a, TWO_PI)
        if length > MIN_ARC:
            arcs.append(AngularInterval(start, length))
    return tuple(sorted(arcs, key=lambda arc: arc.start))


@dataclass(frozen=True)
class AngularSet:
    """
    单位圆上有限条弧的并集 (规范形式)。

    规范形式：半开弧 [a, a+len)，a ∈ [0, 2π)，按起点排序，两两不相交且不相邻；
    整圆存为一条长度恰为 2π 的弧。measure 为弧长之和。
    """
    arcs: Tuple[AngularInterval, ...] = ()

    def __post_init__(self):
        pieces = []
        for arc in self.arcs:
            pieces.extend(arc.unwrap())
        object.__setattr__(self, "arcs", _canonical_arcs(pieces))

    # --- 构造 ---

    @classmethod
    def empty(cls) -> "AngularSet":
        return cls(())

    @classmethod
    def full(cls) -> "AngularSet":
        return cls((AngularInterval(0.0, TWO_PI),))

    @classmethod
    def _trusted(cls, arcs: Tuple[AngularInterval, ...]) -> "AngularSet":
        """跳过规范化，arcs 必须已是规范形式。"""
        result = cls.__new__(cls)
        object.__setattr__(result, "arcs", arcs)
        return result

    @classmethod
    def from_bounds(cls, bounds: Iterable[Tuple[float, float]]) -> "AngularSet":
        """
        由 (start, end) 对构造，start 任意实数，end >= start；
        长度不小于 2π 的区间视为整圆。
        """
        arcs = []
        for a, b in bounds:
            length = b - a
            if length <= MIN_ARC:
                continue
            if length >= TWO_PI:
                return cls.full()
            arcs.append(AngularInterval(normalize_angle(a), length))
        return cls(tuple(arcs))

    # --- 查询 ---

    @property
    def measure(self) -> float:
        return math.fsum(arc.length for arc in self.arcs)

    @property
    def is_empty(self) -> bool:
        return not self.arcs

    @property
    def is_full(self) -> bool:
        return len(self.arcs) == 1 and self.arcs[0].length >= TWO_PI

    def contains_angle(self, phi: float) -> bool:
        return any(arc.contains_angle(phi) for arc in self.arcs)

    def largest_arc(self) -> Optional[AngularInterval]:
        if not self.arcs:
            return None
        # 长度相同时取起点最小者，保证确定性
        return max(self.arcs, key=lambda arc: (arc.length, -arc.start))

    def issubset(self, other: "AngularSet", eps: float = 1e-12) -> bool:
        """规范形式下的包含关系 (允许端点 eps 误差)。"""
        if self.is_empty:
            return True
        if other.is_full:
            return True
        for arc in self.arcs:
            for a, b in arc.unwrap():
                if not any(c - eps <= a and b <= d + eps
                           for big in other.arcs for c, d in big.unwrap()):
                    return False
        return True

    # --- 运算 ---

    def shift(self, delta: float) -> "AngularSet":
        """整体旋转 delta。"""
        if self.is_full or self.is_empty:
            return self
        return AngularSet(tuple(AngularInterval(normalize_angle(arc.start + delta), arc.length)
                                for arc in self.arcs))

    def union(self, other: "AngularSet") -> "AngularSet":
        return angular_union([self, other])

    def complement(self) -> "AngularSet":
        return angular_complement(self)

    def to_bounds(self) -> List[Tuple[float, float]]:
        return [(arc.start, arc.end) for arc in self.arcs]


def angular_union(sets: Sequence[AngularSet]) -> AngularSet:
    """
    规范并集。空列表返回空集；度量满足次可加性。
    """
    pieces = []
    for s in sets:
        for arc in s.arcs:
            if arc.length >= TWO_PI:
                return AngularSet.full()
            pieces.extend(arc.unwrap())
    return AngularSet._trusted(_canonical_arcs(pieces))


def angular_complement(s: AngularSet) -> AngularSet:
    """
    圆上的补集：measure(s) + measure(补集) = 2π。
    """
    if s.is_empty:
        return AngularSet.full()
    if s.is_full:
        return AngularSet.empty()

    covered = sorted(piece for arc in s.arcs for piece in arc.unwrap())
    gaps = []
    cursor = 0.0
    for a, b in covered:
        if a > cursor:
            gaps.append((cursor, a))
        cursor = max(cursor, b)
    if cursor < TWO_PI:
        gaps.append((cursor, TWO_PI))

    return AngularSet._trusted(_canonical_arcs(gaps))
