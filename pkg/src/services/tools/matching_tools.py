import logging
from typing import Any, Dict, List

from src.lab.curve import Lemniscate, curve_to_dict, sample_curve
from src.lab.errors import ConfigError
from src.lab.matching import (MatchingPair, family_reports, fixed_point_dichotomy, gram_min_singular,
                              leading_form_check, melnikov_pair, nonexistence_evidence, power_family,
                              verify_matching)
from src.lab.potential import PERSISTENCE_TOL
from src.services.tools.base import (BaseTool, Check, Table, ToolResult, curve_spec, levels_or,
                                     rational_param)
from src.utils.run_config import RunConfig

logger = logging.getLogger(__name__)


def _level(config: RunConfig) -> float:
    c = config.params.get("c")
    if not isinstance(c, (int, float)) or isinstance(c, bool) or not c > 0:
        raise ConfigError("params.c must be a positive level", field="params.c")
    return float(c)


def pair_from_config(config: RunConfig) -> MatchingPair:
    """A lemniscate pair from params.R and params.c, or an explicit pair params.f / params.g on the curve."""
    if "R" in config.params:
        return melnikov_pair(rational_param(config, "R"), _level(config), config.N)
    return MatchingPair(rational_param(config, "f"), rational_param(config, "g"), curve_spec(config))


def _pair_checks(config: RunConfig, report, prefix: str = "") -> List[Check]:
    fixed = config.tol("fixed", 1e-8)
    return [
        Check.below(f"{prefix}boundary-match", report.boundary_residual, config.tol("boundary", 1e-10),
                    "max |f - conj g| on the curve"),
        Check.below(f"{prefix}fixed-point-f", report.fixed_residual_f, fixed, "max |Pi f - f|"),
        Check.below(f"{prefix}fixed-point-g", report.fixed_residual_g, fixed, "max |Pi g - g|"),
    ]


def _dichotomy(config: RunConfig, pair: MatchingPair, payload: Dict[str, Any], checks: List[Check]) -> None:
    report = fixed_point_dichotomy(pair, levels_or(config, (128, 256)), config.tol("dichotomy", 1e-6))
    payload["dichotomy"] = report.to_dict()
    checks.append(Check("fixed-point-dichotomy", report.holds, {"case_a": report.case_a, "case_b": report.case_b},
                        report.tol, "H(conj f) = 0, or conj(H conj f) is a fixed point at every level"))


class MatchVerifyTool(BaseTool):
    """Verify a given pair (f, g) on a curve and assert the fixed-point dichotomy."""
    name = "match-verify"
    commands = ("match-verify",)

    def execute(self, config: RunConfig) -> ToolResult:
        pair = pair_from_config(config)
        report = verify_matching(pair, config.N)
        checks = _pair_checks(config, report)
        payload: Dict[str, Any] = {"pair": pair.to_dict(), "match": report.to_dict()}
        _dichotomy(config, pair, payload, checks)
        return ToolResult(payload, checks)


class MatchMelnikovTool(BaseTool):
    """Construct (R, c^2/R) on the lemniscate |R| = c and verify it."""
    name = "match-melnikov"
    commands = ("match-melnikov",)

    def execute(self, config: RunConfig) -> ToolResult:
        R = rational_param(config, "R")
        c = _level(config)
        pair = melnikov_pair(R, c, config.N)
        report = verify_matching(pair, config.N)
        checks = _pair_checks(config, report)
        payload: Dict[str, Any] = {"pair": pair.to_dict(), "match": report.to_dict()}
        if isinstance(pair.curve, Lemniscate) and R.is_polynomial:
            leading = leading_form_check(pair.curve)
            payload["leading_form_is_power_of_x2_plus_y2"] = leading
            checks.append(Check("leading-form", leading, detail="top homogeneous part is (x^2 + y^2)^n"))
        _dichotomy(config, pair, payload, checks)
        logger.info("[%s] |R| = %g: boundary residual %.3g", self.name, c, report.boundary_residual)
        return ToolResult(payload, checks)


class MatchPowersTool(BaseTool):
    """Powers (f^k, g^k), k = 1..n_max, verified one by one plus their linear independence."""
    name = "match-powers"
    commands = ("match-powers",)

    def execute(self, config: RunConfig) -> ToolResult:
        pair = pair_from_config(config)
        n_max = config.params.get("n_max", 3)
        if not isinstance(n_max, int) or n_max < 1:
            raise ConfigError("params.n_max must be a positive integer", field="params.n_max")
        tol = config.tol("boundary", 1e-10)
        family = power_family(pair, n_max, config.N, tol)
        reports = family_reports(family, config.N)
        checks: List[Check] = []
        for r in reports:
            checks.extend(_pair_checks(config, r, prefix=f"k{r.k}-"))
        sc = sample_curve(pair.curve, config.N)
        smin = gram_min_singular(family, sc)
        checks.append(Check.above("linear-independence", smin, config.tol("gram", 1e-10),
                                  "smallest singular value of the sampled powers"))
        payload = {
            "pair": pair.to_dict(),
            "curve": curve_to_dict(pair.curve),
            "n_max": n_max,
            "family": [r.to_dict() for r in reports],
            "gram_min_singular": smin,
        }
        rows = [(r.k, r.boundary_residual, max(r.fixed_residual_f, r.fixed_residual_g)) for r in reports]
        return ToolResult(payload, checks,
                          {"power_family": Table(["k", "boundary_residual", "fixed_point_residual"], rows)})


class NonexistenceTool(BaseTool):
    """
    Graded evidence that Pi has no non-constant fixed point on a curve.
    params.expect = "none" (default) asks for a residual floor and no persistent modes;
    "fixed" is the positive control, asking for persistent modes.
    """
    name = "nonexistence"
    commands = ("nonexistence",)

    def execute(self, config: RunConfig) -> ToolResult:
        spec = curve_spec(config)
        expect = config.params.get("expect", "none")
        if expect not in ("none", "fixed"):
            raise ConfigError("params.expect must be 'none' or 'fixed'", field="params.expect")
        report = nonexistence_evidence(spec, trials=config.trials or 50, seed=config.seed,
                                       levels=levels_or(config, (128, 256, 512)), samples=config.samples or 100,
                                       degree=int(config.params.get("degree", 8)),
                                       tol=config.tol("persistence", PERSISTENCE_TOL))
        persistence = report.persistence
        checks: List[Check] = []
        if expect == "none":
            checks.append(Check.above("residual-floor", report.residual_floor, config.tol("floor", 1e-3),
                                      "min over trials of ||Pi F - F|| / ||F||"))
            checks.append(Check("no-persistent-mode", not report.persistent_mode_found,
                                persistence["persistent_count"], 0, "band-limited fixed modes across levels"))
            if spec.kind == "rational_map":
                trap = report.trapping
                checks.append(Check("reflection-trapping", trap["passed"],
                                    {"sample_fail": trap["sample_fail"], "boundary_fail": trap["boundary_fail"]}, 0))
        else:
            checks.append(Check("persistent-mode", report.persistent_mode_found,
                                persistence["persistent_count"], 1, "positive control"))
            checks.append(Check.below("persistent-residual", persistence["refined_residual"],
                                      config.tol("control", 1e-10), "coarse null vectors on finer grids"))
        rows = [(i, r) for i, r in enumerate(report.trial_residuals)]
        return ToolResult(report.to_dict(), checks,
                          {"trial_residuals": Table(["trial", "relative_residual"], rows)})

