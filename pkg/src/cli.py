import os
import sys
import json
import argparse
import logging
from dataclasses import asdict
from typing import Any, Dict, List, Optional

from src.coverage import CoverResult, empirical_helly_number, rigid_cover, translation_cover
from src.geometry import (
    ContactReport,
    bound_summary,
    candidate_centers,
    chebyshev_incircle,
    contact_report,
    alpha_profile,
)
from src.geometry.core import BudgetExhausted, Point2, VerificationError
from src.geometry.marking import MARKING_INTERPRETATION
from src.lemma import build_certificate, verify_certificate
from src.utils.body_loader import load_body, load_certificate, load_points, same_body
from src.utils.config_manager import CONFIG
from src.utils.serializers import dumps, write_csv, write_json
from src.utils.svg_scene import emit_svg, scene_for_body, scene_for_certificate, scene_for_marking

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def _pair(text: str) -> Point2:
    try:
        x, y = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x,y', got {text!r}")
    return Point2(x, y)


def _float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _emit(payload: Any):
    sys.stdout.write(dumps(payload))


def _point(p: Point2) -> List[float]:
    return [p.x, p.y]


def _contact_dict(rep: ContactReport) -> Dict[str, Any]:
    return {
        "center": _point(rep.center),
        "r": rep.r,
        "tangent_points": list(rep.tangent_points),
        "contact_arcs": [list(b) for b in rep.contact_arcs.to_bounds()],
        "alpha_contact": rep.alpha_contact,
        "beta": rep.beta,
        "discrete": rep.discrete,
        "lower_bound": rep.lower_bound,
        "interpretation": rep.interpretation,
    }


def _cover_dict(res: CoverResult) -> Dict[str, Any]:
    cert = res.certificate_of_impossibility
    return {
        "found": res.found,
        "motion": None if res.motion is None else {"theta": res.motion.theta, "t": list(res.motion.t)},
        "margin": res.margin,
        "inconclusive": res.inconclusive,
        "certificate_of_impossibility": None if cert is None else asdict(cert),
        "solver_agreement": res.solver_agreement,
    }


# --- 子命令 ---

def cmd_incircle(args) -> int:
    inc = chebyshev_incircle(load_body(args.body))
    _emit({"r": inc.r, "kind": inc.kind, "centers": [_point(c) for c in inc.centers],
           "core_radius": inc.core_radius})
    return 0


def cmd_contact(args) -> int:
    body = load_body(args.body)
    centers = [args.center] if args.center is not None else candidate_centers(body)
    _emit({"reports": [_contact_dict(contact_report(body, c)) for c in centers]})
    return 0


def cmd_alpha(args) -> int:
    body = load_body(args.body)
    center = args.center if args.center is not None else candidate_centers(body)[0]
    profile = alpha_profile(body, center, args.R)
    if args.csv:
        write_csv(profile.to_frame(), args.csv)
    _emit({"center": _point(center), "rows": [{"R": R, "alpha": a} for R, a in profile.rows],
           "interpretation": MARKING_INTERPRETATION})
    return 0


def cmd_construct(args) -> int:
    body = load_body(args.body)
    cert = build_certificate(body, args.k, budget=args.budget, subset_budget=args.subset_budget, seed=args.seed,
                             sample_count=args.samples, schedule=args.schedule, phase=args.phase,
                             show_progress=args.progress or None)
    write_json(cert.to_dict(), args.out)
    _emit({
        "out": str(args.out),
        "k": cert.k,
        "n": cert.params.n,
        "epsilon": cert.params.epsilon,
        "R": cert.params.R,
        "alpha": cert.alpha,
        "subset_strategy": cert.subset_strategy.to_dict(),
        "subsets_verified": len(cert.subset_results),
        "noncover": asdict(cert.noncover),
        "verdict": cert.verdict,
    })
    return 0 if cert.verdict else 1


def cmd_verify(args) -> int:
    cert = load_certificate(args.cert)
    report = verify_certificate(cert)
    payload = report.to_dict()
    if args.body:
        body = load_body(args.body)
        if not same_body(body, cert.body):
            payload["violations"].append("body: file differs from the certificate body")
            payload["ok"] = False
    _emit(payload)
    return 0 if payload["ok"] else 1


def cmd_cover(args) -> int:
    body = load_body(args.body)
    points = load_points(args.points)
    if args.mode == "translate":
        res = translation_cover(points, body, tol=args.tol)
    else:
        res = rigid_cover(points, body, grid_n=args.grid, refine_iters=args.refine, tol=args.tol)
    _emit(_cover_dict(res))
    return 0


def cmd_helly(args) -> int:
    body = load_body(args.body)
    points = load_points(args.points)
    est = empirical_helly_number(points, body, budget=args.budget, seed=args.seed, grid_n=args.grid,
                                 show_progress=args.progress or None)
    _emit(asdict(est))
    return 0


def cmd_bound(args) -> int:
    summary = bound_summary(load_body(args.body))
    _emit({
        "min_lower_bound": summary.min_lower_bound,
        "max_lower_bound": summary.max_lower_bound,
        "per_center": [{"center": _point(rep.center), "lower_bound": rep.lower_bound} for rep in summary.reports],
    })
    return 0


def cmd_plot(args) -> int:
    if args.cert:
        scene = scene_for_certificate(load_certificate(args.cert))
    else:
        body = load_body(args.body)
        scene = scene_for_marking(body, args.R, args.center) if args.R is not None else scene_for_body(body)
    path = emit_svg(scene, args.out)
    _emit({"out": str(path)})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="helly-rotation",
                                     description="Rotational Helly-type covering: incircles, marked sets, "
                                                 "lemma certificates and covering oracles.")
    parser.add_argument("--log-level", default=os.getenv("HELLY_LOG_LEVEL", "WARNING"))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("incircle", help="inradius and incircle center set")
    p.add_argument("--body", required=True)
    p.set_defaults(handler=cmd_incircle)

    p = sub.add_parser("contact", help="contact set boundary ∩ incircle per candidate center")
    p.add_argument("--body", required=True)
    p.add_argument("--center", type=_pair)
    p.set_defaults(handler=cmd_contact)

    p = sub.add_parser("alpha", help="marked-set measure alpha(R)")
    p.add_argument("--body", required=True)
    p.add_argument("--center", type=_pair)
    p.add_argument("--R", required=True, type=_float_list)
    p.add_argument("--csv")
    p.set_defaults(handler=cmd_alpha)

    p = sub.add_parser("construct", help="build a lemma certificate for k")
    p.add_argument("--body", required=True)
    p.add_argument("--k", required=True, type=int)
    p.add_argument("--budget", type=int)
    p.add_argument("--subset-budget", dest="subset_budget", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--schedule", choices=["decade", "halving"])
    p.add_argument("--phase", type=float, default=0.0)
    p.add_argument("--out", required=True)
    p.add_argument("--progress", action="store_true")
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("verify", help="re-check a stored certificate")
    p.add_argument("--cert", required=True)
    p.add_argument("--body")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("cover", help="translation or rigid-motion covering")
    p.add_argument("--body", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--mode", choices=["translate", "rigid"], default="translate")
    p.add_argument("--grid", type=int, default=CONFIG.get("coverage.grid_n", 720))
    p.add_argument("--refine", type=int, default=CONFIG.get("coverage.refine_iters", 60))
    p.add_argument("--tol", type=float, default=CONFIG.get("coverage.tol", 1e-7))
    p.set_defaults(handler=cmd_cover)

    p = sub.add_parser("helly-est", help="empirical rigid-motion Helly number of a configuration")
    p.add_argument("--body", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--budget", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=int)
    p.add_argument("--progress", action="store_true")
    p.set_defaults(handler=cmd_helly)

    p = sub.add_parser("bound", help="min/max beta/alpha lower bound over candidate centers")
    p.add_argument("--body", required=True)
    p.set_defaults(handler=cmd_bound)

    p = sub.add_parser("plot", help="SVG figure of a body, a marked set or a certificate")
    p.add_argument("--body")
    p.add_argument("--cert")
    p.add_argument("--R", type=float)
    p.add_argument("--center", type=_pair)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_plot)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(level=getattr(logging, str(args.log_level).upper(), logging.WARNING),
                        format=LOG_FORMAT, stream=sys.stderr)

    if args.command == "plot" and not (args.body or args.cert):
        print("error: plot needs --body or --cert", file=sys.stderr)
        return 2

    try:
        return args.handler(args)
    except (BudgetExhausted, VerificationError) as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return 1
    except (ValueError, FileNotFoundError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
