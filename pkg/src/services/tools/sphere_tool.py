from src.lab.errors import ConfigError
from src.lab.sphere import sphere_identity_check
from src.services.tools.base import BaseTool, Check, Table, ToolResult
from src.utils.run_config import RunConfig


class SphereCheckTool(BaseTool):
    """
    Double layer kernel versus Newtonian kernel on unit spheres.
    The ratio k/E must be constant with magnitude (n-2)/2; its sign is measured, not asserted.
    """
    name = "sphere-check"
    commands = ("sphere-check",)

    def execute(self, config: RunConfig) -> ToolResult:
        dimensions = config.params.get("dimensions", [3])
        if not dimensions or any(not isinstance(n, int) or n < 3 for n in dimensions):
            raise ConfigError("params.dimensions must list integers >= 3", field="params.dimensions")
        trials = config.trials or 1000
        checks = []
        rows = []
        reports = {}
        for n in dimensions:
            report = sphere_identity_check(n, trials, config.seed, float(config.params.get("c_n", 1.0)))
            reports[str(n)] = report.to_dict()
            rows.append((n, report.ratio, report.sign, report.spread, report.identity_residual))
            checks.append(Check.below(f"n{n}-constant-ratio", report.spread, config.tol("spread", 1e-10)))
            checks.append(Check.below(f"n{n}-magnitude", report.magnitude_error, config.tol("magnitude", 1e-12),
                                      f"| |k/E| - {report.expected_magnitude:g} |"))
            checks.append(Check.below(f"n{n}-sphere-identity", report.identity_residual,
                                      config.tol("identity", 1e-12), "max | |y-x|^2 + 2 (y-x).x |"))
        payload = {"trials": trials, "seed": config.seed, "dimensions": reports}
        return ToolResult(payload, checks,
                          {"sphere": Table(["n", "ratio", "sign", "spread", "identity_residual"], rows)})
