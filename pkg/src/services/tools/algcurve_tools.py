import logging
from typing import List

import numpy as np

from src.lab.algcurve import (branch_points, curve_polynomial, reciprocity_sweep, schwarz_values, symmetry_check,
                              trace_branch, trapping_check)
from src.lab.curve import circle_path, curve_to_dict
from src.lab.errors import ConfigError
from src.lab.io import complex_from_json
from src.services.tools.base import BaseTool, Check, Table, ToolResult, curve_spec, rational_param
from src.utils.run_config import RunConfig

logger = logging.getLogger(__name__)


class BranchPointsTool(BaseTool):
    """Branch and exceptional points of the curve's defining polynomial."""
    name = "branch-points"
    commands = ("branch-points",)

    def execute(self, config: RunConfig) -> ToolResult:
        spec = curve_spec(config)
        Q = curve_polynomial(spec)
        B = branch_points(Q, config.tol("epsilon", 1e-3))
        residual_tol = config.tol("residual", 1e-8)
        checks = [Check("hermitian-symmetry", symmetry_check(Q), detail="Q(z, w) = conj Q(conj w, conj z)")]
        if B.branch_residuals.size:
            checks.append(Check.below("branch-residual", float(np.max(B.branch_residuals)), residual_tol,
                                      "relative residual of the discriminant at its roots"))
        expected = [complex_from_json(p) for p in config.params.get("expected", [])]
        for point in expected:
            gap = float(np.min(np.abs(B.branch - point))) if B.branch.size else float("inf")
            checks.append(Check.below(f"branch-at-{point.real:g}{point.imag:+g}i", gap, config.tol("match", 1e-8),
                                      "distance to the nearest computed branch point"))
        payload = {"curve": curve_to_dict(spec), "Q": Q.to_dict(), "branch_points": B.to_dict(),
                   "discriminant": B.discriminant}
        logger.info("[%s] %s: %d branch, %d exceptional points", self.name, spec.kind, B.branch.size,
                    B.exceptional.size)
        return ToolResult(payload, checks, {"branch_points": Table(["re", "im", "type", "residual"], B.rows())})


def _path(config: RunConfig) -> np.ndarray:
    if "waypoints" in config.params:
        points = np.array([complex_from_json(p) for p in config.params["waypoints"]], dtype=complex)
        if points.size < 2:
            raise ConfigError("params.waypoints needs at least two points", field="params.waypoints")
        return points
    loop = config.params.get("path")
    if not isinstance(loop, dict) or "radius" not in loop:
        raise ConfigError("reflect needs params.path {center, radius, ...} or params.waypoints", field="params.path")
    return circle_path(complex_from_json(loop.get("center", 0.0)), float(loop["radius"]),
                       float(loop.get("start_angle", 0.0)), int(loop.get("turns", 1)), int(loop.get("points", 256)))


class ReflectTool(BaseTool):
    """
    Continue one Schwarz-function value along a path and report where it ends.
    params.expect = "return" asks the end value to equal the start value, "swap" asks it to
    land on a different root over the same base point.
    """
    name = "reflect"
    commands = ("reflect",)

    def execute(self, config: RunConfig) -> ToolResult:
        spec = curve_spec(config)
        Q = curve_polynomial(spec)
        B = branch_points(Q, config.tol("epsilon", 1e-3))
        path = _path(config)
        start = schwarz_values(Q, path[0])
        branch = int(config.params.get("branch", 0))
        if not 0 <= branch < start.values.size:
            raise ConfigError(f"params.branch must index one of {start.values.size} finite roots", field="params.branch")
        w_start = complex(start.values[branch])
        trace = trace_branch(Q, path, w_start, B)
        w_end = complex(trace.w[-1])
        closure = abs(w_end - w_start)
        tol = config.tol("closure", 1e-8)
        checks: List[Check] = []
        expect = config.params.get("expect")
        if expect == "return":
            checks.append(Check.below("returns-to-start", closure, tol, "|w_end - w_start|"))
        elif expect == "swap":
            end_set = schwarz_values(Q, path[-1])
            others = [w for w in end_set.values if abs(w - w_start) > tol]
            landed = min((abs(w - w_end) for w in others), default=float("inf"))
            checks.append(Check("swaps-sheet", closure > tol and landed < tol, closure, tol,
                                "end value is a different root over the start point"))
        elif expect is not None:
            raise ConfigError("params.expect must be 'return' or 'swap'", field="params.expect")
        payload = {
            "curve": curve_to_dict(spec),
            "start": path[0],
            "end": path[-1],
            "schwarz_start": start.values,
            "w_start": w_start,
            "w_end": w_end,
            "reflection_start": np.conj(w_start),
            "reflection_end": np.conj(w_end),
            "closure": closure,
            "steps": trace.steps,
            "halvings": trace.halvings,
        }
        return ToolResult(payload, checks, {"continuation": Table(["k", "re_z", "im_z", "re_w", "im_w"], trace.rows())})


class TrapCheckTool(BaseTool):
    """Reflection trapping for an R-domain map (params.map) or any curve (roles interior/exterior)."""
    name = "trap-check"
    commands = ("trap-check",)

    def execute(self, config: RunConfig) -> ToolResult:
        roles = config.params.get("roles", "interior")
        if roles not in ("interior", "exterior"):
            raise ConfigError("params.roles must be 'interior' or 'exterior'", field="params.roles")
        target = rational_param(config, "map") if "map" in config.params else curve_spec(config)
        report = trapping_check(target, samples=config.samples or 100, seed=config.seed, N=config.N, roles=roles,
                                epsilon=config.params.get("epsilon"))
        checks = [
            Check("samples-trapped", report.sample_fail == 0, report.sample_pass, report.samples,
                  "sampled points with every reflection on the expected side"),
            Check("boundary-nodes-trapped", report.boundary_fail == 0, report.boundary_pass,
                  report.boundary_pass + report.boundary_fail,
                  "boundary nodes with one reflection on the curve and the rest on the expected side"),
        ]
        rows = [(f["kind"], f["point"].real, f["point"].imag, " ".join(loc.value for loc in f["locations"]))
                for f in report.failures]
        return ToolResult(report.to_dict(), checks,
                          {"trap_failures": Table(["kind", "re", "im", "locations"], rows)})


class ReciprocityTool(BaseTool):
    """z1 in R(z2) iff z2 in R(z1), over seeded random pairs; half the pairs are reflection-related."""
    name = "reciprocity"
    commands = ("reciprocity",)

    def execute(self, config: RunConfig) -> ToolResult:
        spec = curve_spec(config)
        report = reciprocity_sweep(spec, trials=config.trials or 1000, seed=config.seed, N=config.N,
                                   tol=config.tol("membership", 1e-8), epsilon=config.tol("epsilon", 1e-3))
        checks = [Check("reciprocity", report.passed, report.failure_count, 0, "pairs violating the biconditional")]
        payload = {"curve": curve_to_dict(spec), **report.to_dict()}
        logger.info("[%s] %s: %d/%d failures", self.name, spec.kind, report.failure_count, report.trials)
        return ToolResult(payload, checks)
