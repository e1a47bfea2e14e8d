import math
import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from src.geometry.core import (
    TWO_PI,
    DEFAULT_TOL,
    Body,
    Configuration,
    InvalidParameterError,
    Point2,
    VerificationError,
    contains,
)
from src.geometry.incircle import CONTACT_TOL, candidate_centers, chebyshev_incircle
from src.geometry.marking import marked_set
from src.lemma.engine import (
    ConstructionParams,
    rotate_about,
    choose_construction_params,
    circumradius,
    noncover_inradii,
    regular_polygon_config,
    rotation_feasible_set,
    verify_subset,
    vertex_angles,
)
from src.utils.config_manager import CONFIG
from src.utils.serializers import round_sig

logger = logging.getLogger(__name__)

SAMPLED_NOTE = "k*alpha < 2*pi guarantees every subset; sampled subsets corroborate"


@dataclass(frozen=True)
class SubsetStrategy:
    """mode = "exhaustive" 时 count = C(n, k)；"sampled" 时记录样本数和种子。"""
    mode: str
    count: int
    seed: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        if self.mode == "exhaustive":
            return {"mode": "exhaustive", "count": self.count}
        return {"mode": "sampled", "count": self.count, "seed": self.seed, "note": SAMPLED_NOTE}


@dataclass(frozen=True)
class SubsetResult:
    subset: Tuple[int, ...]
    theta: float
    margin: float


@dataclass(frozen=True)
class NoncoverRecord:
    hull_inradius: float
    body_inradius: float


@dataclass(frozen=True)
class LemmaCertificate:
    """
    引理构造的可复核记录：参数、点、每个子集的旋转角与裕量、不可覆盖不等式。
    所有浮点数在构造时已保留 12 位有效数字，内存与磁盘上的复核看到同样的输入。
    """
    body: Body
    center: Point2
    k: int
    params: ConstructionParams
    alpha: float
    points: Configuration
    subset_strategy: SubsetStrategy
    subset_results: Tuple[SubsetResult, ...]
    noncover: NoncoverRecord
    verdict: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "body": {"core": [list(p.as_tuple()) for p in self.body.core], "radius": self.body.rho},
            "center": list(self.center.as_tuple()),
            "k": self.k,
            "params": {
                "epsilon": self.params.epsilon,
                "n": self.params.n,
                "R": self.params.R,
                "center": list(self.params.center.as_tuple()),
            },
            "alpha": self.alpha,
            "points": [list(p.as_tuple()) for p in self.points.points],
            "subset_strategy": self.subset_strategy.to_dict(),
            "subset_results": [
                {"subset": list(res.subset), "theta": res.theta, "margin": res.margin}
                for res in self.subset_results
            ],
            "noncover": {
                "hull_inradius": self.noncover.hull_inradius,
                "body_inradius": self.noncover.body_inradius,
            },
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class VerificationReport:
    violations: Tuple[str, ...]
    subsets_checked: int
    alpha_recomputed: float
    hull_inradius: float
    body_inradius: float
    interpretation: str = "any k of the n vertices share one rotation avoiding every marked direction"

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "violations": list(self.violations),
            "subsets_checked": self.subsets_checked,
            "alpha_recomputed": self.alpha_recomputed,
            "hull_inradius": self.hull_inradius,
            "body_inradius": self.body_inradius,
            "interpretation": self.interpretation,
        }


def _round_point(p: Point2) -> Point2:
    return Point2(round_sig(p.x), round_sig(p.y))


def _round_body(body: Body) -> Body:
    return Body(tuple(_round_point(p) for p in body.core), round_sig(body.rho))


class CertificateBuilder:
    def __init__(self, body: Body, k: int, budget: int = None, subset_budget: int = None, seed: int = 0,
                 schedule: str = None, phase: float = 0.0, tol: float = None, show_progress: bool = None,
                 sample_count: int = None):
        """
        初始化证书构造流程。

        :param body: 凸体 K
        :param k: 要推翻的 Helly 型数
        :param budget: 参数表的步数
        :param subset_budget: C(n, k) 不超过它时穷举，否则抽样
        :param seed: 抽样种子
        :param schedule: "decade" | "halving"
        :param phase: 正多边形的初始相位
        :param sample_count: 抽样子集数，默认 min(subset_budget, lemma.sample_count)
        """
        if int(k) != k or k < 1:
            raise InvalidParameterError(f"k must be an integer >= 1, got {k}")
        self.body = _round_body(body)
        self.k = int(k)
        self.budget = budget
        self.subset_budget = int(CONFIG.get("lemma.subset_budget", 100000)) if subset_budget is None \
            else int(subset_budget)
        if self.subset_budget < 1:
            raise InvalidParameterError(f"subset_budget must be >= 1, got {self.subset_budget}")
        if sample_count is None:
            sample_count = min(self.subset_budget, int(CONFIG.get("lemma.sample_count", 10000)))
        self.sample_count = int(sample_count)
        if self.sample_count < 1:
            raise InvalidParameterError(f"sample_count must be >= 1, got {self.sample_count}")
        self.seed = int(seed)
        self.schedule = schedule
        self.phase = float(phase)
        self.tol = DEFAULT_TOL if tol is None else float(tol)
        self.show_progress = bool(CONFIG.get("runtime.show_progress", False)) if show_progress is None \
            else show_progress

    def pick_center(self, r: float) -> Tuple[Point2, float]:
        """在候选圆心中选 R = r(1 + probe_factor) 处 alpha 最小者 (并列取靠前的)。"""
        probe = r * (1.0 + float(CONFIG.get("lemma.probe_factor", 1e-6)))
        best, best_alpha = None, math.inf
        for c in candidate_centers(self.body):
            c = _round_point(c)
            alpha = marked_set(self.body, c, probe).alpha
            logger.debug(f"candidate center ({c.x:.6g}, {c.y:.6g}): alpha={alpha:.6g}")
            if alpha < best_alpha:
                best, best_alpha = c, alpha
        return best, best_alpha

    def subsets(self, n: int) -> Tuple[SubsetStrategy, Iterator[Tuple[int, ...]]]:
        total = math.comb(n, self.k)
        if total <= self.subset_budget:
            return SubsetStrategy("exhaustive", total), combinations(range(n), self.k)

        rng = np.random.default_rng(self.seed)
        k = self.k

        def sampled():
            for _ in range(self.sample_count):
                yield tuple(sorted(int(i) for i in rng.choice(n, size=k, replace=False)))

        return SubsetStrategy("sampled", self.sample_count, self.seed), sampled()

    def run(self) -> LemmaCertificate:
        """
        执行构造流程：选圆心 -> 选参数 -> 正多边形 -> 逐子集求旋转并验证 -> 不可覆盖检验
        """
        body = self.body
        incircle = chebyshev_incircle(body)
        logger.info(f"Building certificate for k={self.k}, body inradius {incircle.r:.12g}")

        # --- 阶段 1: 圆心与参数 ---
        center, _ = self.pick_center(incircle.r)
        params, _ = choose_construction_params(body, center, self.k, self.budget, self.schedule)
        config, R = regular_polygon_config(center, incircle.r, params.epsilon, params.n, self.phase)
        config = Configuration(tuple(_round_point(p) for p in config.points), provenance=config.provenance)
        params = ConstructionParams(epsilon=round_sig(params.epsilon), n=params.n, R=round_sig(R), center=center)

        marking = marked_set(body, center, params.R)
        alpha = round_sig(marking.alpha)
        if not self.k * alpha < TWO_PI:
            raise VerificationError(f"k*alpha = {self.k * alpha:.12g} is not below 2π")

        # --- 阶段 2: 子集旋转 ---
        angles = vertex_angles(config, center)
        strategy, stream = self.subsets(len(config))
        results: List[SubsetResult] = []
        for subset in tqdm(stream, total=strategy.count, desc=f"Verifying {self.k}-subsets",
                           disable=not self.show_progress):
            feasible = rotation_feasible_set(marking.U, angles[list(subset)])
            arc = feasible.largest_arc()
            if arc is None:
                logger.error(f"subset {list(subset)} has no feasible rotation")
                raise VerificationError(f"subset {list(subset)} has no feasible rotation")
            theta = round_sig(arc.midpoint)
            margin = verify_subset(body, center, config, subset, theta)
            if margin < -self.tol:
                logger.error(f"subset {list(subset)} at theta={theta} has margin {margin:.3g}")
                raise VerificationError(f"subset {list(subset)} fails containment (margin {margin:.3g})")
            results.append(SubsetResult(subset=tuple(subset), theta=theta, margin=round_sig(margin)))

        # --- 阶段 3: 整体不可覆盖 ---
        hull_r, body_r = noncover_inradii(body, config)
        if hull_r - body_r < 0.5 * params.epsilon:
            logger.error(f"hull inradius {hull_r:.12g} does not exceed body inradius {body_r:.12g} by epsilon/2")
            raise VerificationError("constructed polygon is not provably uncoverable")

        logger.info(f"Certificate done: {len(results)} subsets ({strategy.mode}), n={params.n}, alpha={alpha}")
        return LemmaCertificate(
            body=body, center=center, k=self.k, params=params, alpha=alpha, points=config,
            subset_strategy=strategy, subset_results=tuple(results),
            noncover=NoncoverRecord(hull_inradius=round_sig(hull_r), body_inradius=round_sig(body_r)),
            verdict=True,
        )


def build_certificate(body: Body, k: int, budget: int = None, subset_budget: int = None, seed: int = 0,
                      **kwargs) -> LemmaCertificate:
    return CertificateBuilder(body, k, budget=budget, subset_budget=subset_budget, seed=seed, **kwargs).run()


def verify_certificate(cert: LemmaCertificate, tol: float = None) -> VerificationReport:
    """
    独立复核证书：圆心、参数、k·alpha < 2π、每个子集的包含关系、不可覆盖不等式。
    报告列出所有违例，不抛异常。
    """
    tol = DEFAULT_TOL if tol is None else float(tol)
    violations: List[str] = []
    body, center, k, params = cert.body, cert.center, cert.k, cert.params

    incircle = chebyshev_incircle(body)
    if incircle.distance_to_centers(center) > CONTACT_TOL:
        violations.append(f"center ({center.x}, {center.y}) is not an incircle center")

    expected_R = circumradius(incircle.r, params.epsilon, params.n)
    if abs(expected_R - params.R) > 1e-9 * max(1.0, params.R):
        violations.append(f"params: R={params.R} does not match (r + epsilon)/cos(pi/n) = {expected_R:.12g}")
    if len(cert.points) != params.n:
        violations.append(f"params: n={params.n} but {len(cert.points)} points stored")

    marking = marked_set(body, center, params.R)
    if not k * cert.alpha < TWO_PI:
        violations.append(f"precondition: k*alpha = {k * cert.alpha:.12g} >= 2*pi")
    if abs(marking.alpha - cert.alpha) > 1e-9:
        violations.append(f"alpha: stored {cert.alpha} but recomputed {marking.alpha:.12g}")
    if not k * marking.alpha < TWO_PI:
        violations.append(f"precondition: recomputed k*alpha = {k * marking.alpha:.12g} >= 2*pi")

    n = len(cert.points)
    if cert.subset_strategy.mode == "exhaustive" and len(cert.subset_results) != math.comb(n, k):
        violations.append(f"subset_strategy: exhaustive but {len(cert.subset_results)} of {math.comb(n, k)} "
                          f"subsets recorded")

    all_pts = cert.points.as_array()
    for res in cert.subset_results:
        label = f"subset {list(res.subset)}"
        if len(res.subset) != k or any(not 0 <= i < n for i in res.subset):
            violations.append(f"{label}: expected {k} indices in [0, {n})")
            continue
        moved = rotate_about(all_pts[list(res.subset)], center, res.theta)
        outside = [i for i, p in zip(res.subset, moved) if not contains(body, p, tol)]
        margin = verify_subset(body, center, cert.points, res.subset, res.theta)
        if outside or margin < -tol:
            violations.append(f"{label}: points {outside} outside K at theta={res.theta} (margin {margin:.3g})")
        if res.margin < -tol or abs(res.margin - margin) > 1e-9:
            violations.append(f"{label}: stored margin {res.margin} but recomputed {margin:.12g}")

    hull_r, body_r = noncover_inradii(body, cert.points)
    if not hull_r > body_r + tol:
        violations.append(f"noncover: hull inradius {hull_r:.12g} <= body inradius {body_r:.12g}")
    if not cert.verdict:
        violations.append("verdict: stored verdict is false")

    for v in violations:
        logger.warning(f"certificate violation: {v}")
    return VerificationReport(violations=tuple(violations), subsets_checked=len(cert.subset_results),
                              alpha_recomputed=marking.alpha, hull_inradius=hull_r, body_inradius=body_r)
