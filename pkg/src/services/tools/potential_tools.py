import logging
from typing import Any, Dict, List

import numpy as np

from src.lab.cauchy import cauchy_matrix, pi_via_hilbert
from src.lab.curve import Location, SampledCurve, boundary_distances, curve_to_dict, locate_points, sample_curve
from src.lab.errors import ConfigError
from src.lab.io import complex_from_json
from src.lab.potential import (PERSISTENCE_TOL, assemble_k, assemble_pi, double_layer_eval_many,
                               fixed_point_persistence, gap_threshold, solve_dirichlet, spectrum)
from src.services.tools.base import BaseTool, Check, Table, ToolResult, curve_spec
from src.utils.run_config import RunConfig

logger = logging.getLogger(__name__)


def _probe_pair(sc: SampledCurve) -> Dict[str, complex]:
    """One interior probe at the reference point and one exterior probe well outside."""
    center = sc.reference_point
    probes = {"exterior": center + 1.5 * sc.diameter}
    if boundary_distances(sc.z, np.array([center]))[0] > gap_threshold(sc):
        probes["interior"] = center
    return probes


class GaussCheckTool(BaseTool):
    """
    Calibrates the quadrature: Pi 1 = 2 on the curve, the double layer of 1 is 2 inside
    and 0 outside, and Pi agrees with its Cauchy construction H F + conj(H conj F).
    """
    name = "gauss-check"
    commands = ("gauss-check",)

    def execute(self, config: RunConfig) -> ToolResult:
        spec = curve_spec(config)
        sc = sample_curve(spec, config.N)
        pi = assemble_pi(sc)
        K = assemble_k(pi)
        ones = np.ones(sc.N)

        gauss = float(np.max(np.abs(pi @ ones - 2)))
        split = float(np.max(np.abs(pi.matrix - np.eye(sc.N) - 2 * K.matrix)))
        checks = [
            Check.below("gauss", gauss, config.tol("gauss", 1e-8), "max |Pi 1 - 2|"),
            Check.below("pi-equals-i-plus-2k", split, config.tol("construction", 1e-14), "max |Pi - I - 2K|"),
        ]

        probes = _probe_pair(sc)
        expected = {"interior": 2.0, "exterior": 0.0}
        rows = []
        for side, z in sorted(probes.items()):
            value = complex(double_layer_eval_many(sc, ones, [z])[0])
            error = abs(value - expected[side])
            rows.append((side, z.real, z.imag, value.real, expected[side], error))
            checks.append(Check.below(f"double-layer-{side}", error, config.tol("probe", 1e-8),
                                      f"u(1) at {side} probe vs {expected[side]:g}"))

        # cross-construction against the Cauchy operator on a fixed smooth density
        H = cauchy_matrix(sc)
        F = np.cos(sc.t) + 0.5 * np.sin(2 * sc.t) + 0.25j * np.cos(3 * sc.t)
        cross = float(np.max(np.abs(pi @ F - pi_via_hilbert(sc, F, H).values)))
        HF = H @ F
        idem = float(np.max(np.abs(H @ HF - HF)))
        checks.append(Check.below("pi-via-hilbert", cross, config.tol("operator", 1e-7),
                                  "max |Pi F - (H F + conj(H conj F))|"))
        checks.append(Check.below("hilbert-idempotent", idem, config.tol("operator", 1e-7), "max |H^2 F - H F|"))

        payload = {
            "curve": curve_to_dict(spec),
            "N": sc.N,
            "gauss_residual": gauss,
            "construction_residual": split,
            "probes": {side: z for side, z in probes.items()},
            "cross_construction_residual": cross,
            "hilbert_idempotence_residual": idem,
        }
        logger.info("[%s] %s N=%d: |Pi 1 - 2| = %.3g", self.name, spec.kind, sc.N, gauss)
        return ToolResult(payload, checks,
                          {"gauss_probes": Table(["probe", "re", "im", "value", "expected", "error"], rows),
                           "curve_nodes": Table(["t", "re_z", "im_z", "re_dz", "im_dz", "kappa"], sc.rows())})


class SpectrumTool(BaseTool):
    """Eigenvalues of Pi, the fixed-point count and, over refinement levels, persistence of fixed modes."""
    name = "spectrum"
    commands = ("spectrum",)

    def execute(self, config: RunConfig) -> ToolResult:
        spec = curve_spec(config)
        sc = sample_curve(spec, config.N)
        report = spectrum(assemble_pi(sc), config.tol("fixed", 1e-6), int(config.params.get("keep_singular", 16)))
        checks = [
            Check.below("eigenvalue-two", abs(report.near_two - 2), config.tol("gauss", 1e-8),
                        "Pi 1 = 2 gives the eigenvalue 2"),
            Check.below("eigenvalues-real", float(np.max(np.abs(report.eigenvalues.imag))),
                        config.tol("imag", 1e-6), "max |Im lambda|"),
        ]
        payload: Dict[str, Any] = {"curve": curve_to_dict(spec), "spectrum": report.to_dict()}

        if config.levels:
            persistence = fixed_point_persistence(spec, config.levels, config.tol("persistence", PERSISTENCE_TOL),
                                                  int(config.params.get("max_mode", 8)))
            payload["persistence"] = persistence.to_dict()
            expect = config.params.get("expect_persistent")
            if expect is not None:
                checks.append(Check("persistent-fixed-modes", persistence.persistent == bool(expect),
                                    persistence.persistent_count, bool(expect),
                                    "band-limited fixed modes that survive refinement"))
        logger.info("[%s] %s N=%d: %d eigenvalues within %g of 1", self.name, spec.kind, sc.N,
                    report.fixed_count, report.tol_fixed)
        return ToolResult(payload, checks, {"spectrum": Table(["k", "re", "im", "dist_to_1"], report.rows())})


def _boundary_data(items: List[Dict[str, Any]]):
    """Harmonic polynomials Re z^k / Im z^k named by {"part": "re"|"im", "power": k}."""
    data = []
    for item in items:
        part = item.get("part", "re")
        power = item.get("power")
        if part not in ("re", "im") or not isinstance(power, int) or power < 0:
            raise ConfigError(f"boundary data entries need part re/im and a power >= 0, got {item!r}",
                              field="params.data")
        fn = (lambda z, k=power: np.real(z ** k)) if part == "re" else (lambda z, k=power: np.imag(z ** k))
        data.append((f"{part}(z^{power})", fn))
    return data


def _default_probes(sc: SampledCurve, count: int) -> np.ndarray:
    """Points of the curve pulled halfway to the reference point, kept when safely inside."""
    center = sc.reference_point
    idx = np.arange(count) * sc.N // count
    pts = center + 0.5 * (sc.z[idx] - center)
    locs = locate_points(sc, pts)
    ok = np.array([loc is Location.INTERIOR for loc in locs])
    ok &= boundary_distances(sc.z, pts) > gap_threshold(sc)
    return pts[ok]


class DirichletTool(BaseTool):
    """Solve Pi F = f for harmonic-polynomial boundary data and compare with the exact extension."""
    name = "dirichlet"
    commands = ("dirichlet",)

    def execute(self, config: RunConfig) -> ToolResult:
        spec = curve_spec(config)
        sc = sample_curve(spec, config.N)
        pi = assemble_pi(sc)
        data = _boundary_data(config.params.get("data", [{"part": "re", "power": 1}, {"part": "re", "power": 2}]))
        if "probes" in config.params:
            probes = np.array([complex_from_json(p) for p in config.params["probes"]], dtype=complex)
        else:
            probes = _default_probes(sc, int(config.params.get("probe_count", 10)))
        if probes.size == 0:
            raise ConfigError("no interior probe points", field="params.probes")

        tol = config.tol("probe", 1e-7)
        checks = []
        rows = []
        results = {}
        for label, fn in data:
            F = solve_dirichlet(sc, fn(sc.z), pi)
            u = double_layer_eval_many(sc, F, probes)
            exact = fn(probes)
            errors = np.abs(u - exact)
            rows.extend((label, z.real, z.imag, v.real, e, err) for z, v, e, err in zip(probes, u, exact, errors))
            results[label] = {"max_error": float(np.max(errors)), "density_norm": F.norm()}
            checks.append(Check.below(f"dirichlet-{label}", float(np.max(errors)), tol,
                                      "max error of the double layer solution at interior probes"))
        payload = {"curve": curve_to_dict(spec), "N": sc.N, "probes": probes, "data": results}
        return ToolResult(payload, checks,
                          {"dirichlet_probes": Table(["data", "re", "im", "u", "exact", "error"], rows)})
