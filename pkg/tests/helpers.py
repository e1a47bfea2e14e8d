import math

import numpy as np

from src.geometry.core import TWO_PI, Body, convex_hull


def square_alpha(R: float) -> float:
    """Square2 绕原点的标记测度闭式解。"""
    if R <= 1.0:
        return 0.0
    if R >= math.sqrt(2.0):
        return TWO_PI
    return 8.0 * math.atan(math.sqrt(R * R - 1.0))


def cyclic_distance(a: float, b: float) -> float:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def random_convex_body(rng: np.random.Generator, count: int, rho: float = 0.0) -> Body:
    """随机点的凸包 (逆时针)，退化时重抽。"""
    while True:
        hull, degenerate = convex_hull(rng.normal(size=(count, 2)))
        if not degenerate and len(hull) >= 3:
            return Body(tuple(hull), rho)


def assert_bounds_close(actual, expected, atol: float = 1e-12):
    """逐个比较 [(start, end), ...] 列表的端点。"""
    np.testing.assert_allclose(np.asarray(actual, dtype=float).reshape(-1, 2),
                               np.asarray(expected, dtype=float).reshape(-1, 2), rtol=0.0, atol=atol)
