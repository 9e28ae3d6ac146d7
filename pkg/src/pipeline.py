#!/usr/bin/env python3
"""
Singular Drift Lab
Orchestration for checking, transforming, simulating and verifying scenarios

Scenarios are JSON files (see config/scenarios/v1); lab settings live in
config/config.yaml.
"""

import logging
import os
import sys
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .coefficients.piecewise import check_drift_function
from .harness.catalog import Catalog, SuiteReport, run_catalog
from .localtime.estimators import (
    DEFAULT_EPS,
    LocalTimeEstimate,
    LocalTimeTable,
    local_time_table,
)
from .localtime.identities import IdentityReport, check_identity, left_right_ratio
from .scenarios.config_parser import ScenarioConfig, load_config
from .simulation.runner import SimulationResult, collect, simulate_paths
from .simulation.scenario import Engine, QvMode, Scenario, StepRule
from .simulation.walk import DEFAULT_BATCH
from .storage.result_writer import (
    write_json,
    write_localtime_csv,
    write_path_dumps,
    write_table_csv,
)
from .transform.space_transform import dump_table, invariant_residuals
from .wellposed.verdicts import check_skewness, image_identity

# Configure logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger(__name__)

SEED_ENV = "SINGDRIFT_SEED"
DEFAULT_LEVELS = [-1.0, -0.5, 0.0, 0.5, 1.0]


class SingularDriftLab:
    """
    Entry point for the lab's operations.

    Flow:
    1. Load a scenario configuration (strict JSON)
    2. Check coefficients and well-posedness verdicts
    3. Simulate paths with the walk or time-change engine
    4. Estimate local times and check their identities
    5. Run the acceptance catalog
    """

    def __init__(self, config_path: str = "config/config.yaml"):
        """Initialize lab settings from config."""
        self.config = self._load_config(config_path)

        level = self.config.get("logging", {}).get("level")
        if level:
            logging.getLogger().setLevel(level.upper())

        simulation = self.config.get("simulation", {})
        self.default_seed = self._seed_from_env(simulation.get("seed"))
        self.default_paths = simulation.get("n_paths")
        self.workers = simulation.get("workers", 1)
        self.batch_size = simulation.get("batch_size", DEFAULT_BATCH)
        self.step_rule = simulation.get("step_rule")
        self.qv_mode = simulation.get("qv_mode")

        localtime = self.config.get("localtime", {})
        self.eps = localtime.get("eps", DEFAULT_EPS)
        self.levels = localtime.get("levels", DEFAULT_LEVELS)

        transform = self.config.get("transform", {})
        self.dump_lower = transform.get("lower", -4.0)
        self.dump_upper = transform.get("upper", 4.0)
        self.dump_points = transform.get("points", 801)

        verify = self.config.get("verify", {})
        self.catalog_path = verify.get("catalog", "config/catalog.yaml")
        self.verify_seed = verify.get("seed", 42)
        self.report_path = verify.get("report", "output/verify_report.json")

        # Initialize components (lazy)
        self._catalog = None

    def _load_config(self, config_path: str) -> dict:
        """Load configuration from YAML."""
        config_path = Path(config_path)
        if not config_path.exists():
            logger.warning(f"Config not found: {config_path}, using defaults")
            return {}

        with open(config_path) as f:
            return yaml.safe_load(f) or {}

    @staticmethod
    def _seed_from_env(default: int | None) -> int | None:
        raw = os.environ.get(SEED_ENV)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            logger.warning(f"{SEED_ENV}={raw!r} is not an integer, ignoring it")
            return default

    @property
    def catalog(self) -> Catalog:
        """Lazy-load the acceptance catalog."""
        if self._catalog is None:
            self._catalog = Catalog.load(self.catalog_path)
        return self._catalog

    def load_scenario(self, path: str | Path) -> ScenarioConfig:
        return load_config(path)

    def prepare(
        self, config: ScenarioConfig, seed: int | None = None, engine: str | None = None
    ) -> Scenario:
        """Scenario with lab-level overrides applied (seed, engine, step rule, qv mode)."""
        changes: dict[str, Any] = {}
        seed = seed if seed is not None else self._seed_from_env(self.default_seed)
        if seed is not None:
            changes["seed"] = seed
        if engine:
            changes["engine"] = Engine(engine)
        if self.step_rule:
            changes["step_rule"] = StepRule(self.step_rule)
        if self.qv_mode:
            changes["qv_mode"] = QvMode(self.qv_mode)
        scenario = config.scenario
        return scenario.with_settings(**changes) if changes else scenario

    # -- check ----------------------------------------------------------------------

    def check(self, config: ScenarioConfig) -> dict[str, Any]:
        """Coefficient validation, well-posedness verdicts and image identity."""
        scenario = config.scenario
        report = scenario.report
        exists = report.skew_exists if scenario.is_skew else report.symmetric_exists
        return {
            "scenario": scenario.name,
            "drift_function": check_drift_function(scenario.f).to_dict(),
            "skewness": check_skewness(scenario.f, scenario.nu).to_dict(),
            "report": report.to_dict(),
            "image_identity": image_identity(scenario.transform, scenario.b),
            "solution_exists": exists,
        }

    # -- transform ------------------------------------------------------------------

    def transform_dump(
        self,
        config: ScenarioConfig,
        lower: float | None = None,
        upper: float | None = None,
        points: int | None = None,
    ) -> tuple[dict[str, np.ndarray], dict[str, float]]:
        scenario = config.scenario
        lower = self.dump_lower if lower is None else lower
        upper = self.dump_upper if upper is None else upper
        xs = np.linspace(lower, upper, points or self.dump_points)
        table = dump_table(scenario.transform, scenario.b, xs)
        residuals = invariant_residuals(scenario.transform, lower, upper)
        return table, residuals

    # -- simulate -------------------------------------------------------------------

    def simulate(
        self,
        config: ScenarioConfig,
        n_paths: int | None = None,
        engine: str | None = None,
        seed: int | None = None,
        dump_dir: str | Path | None = None,
        dump_limit: int | None = None,
    ) -> tuple[SimulationResult, list[Path]]:
        """Run the engine; optionally write path_<index>.csv files for the first paths."""
        scenario = self.prepare(config, seed, engine)
        n_paths = n_paths or self.default_paths or scenario.settings.n_paths
        record = dump_dir is not None
        batches = list(
            simulate_paths(
                scenario,
                n_paths,
                record=record,
                batch_size=self.batch_size,
                workers=self.workers,
            )
        )
        written = write_path_dumps(batches, dump_dir, dump_limit) if record else []
        result = collect(scenario, batches)
        logger.info(f"simulated {result.n_paths} paths of '{scenario.name}'")
        return result, written

    # -- local time -----------------------------------------------------------------

    def localtime(
        self,
        config: ScenarioConfig,
        levels: list[float] | None = None,
        eps: float | None = None,
        n_paths: int | None = None,
        seed: int | None = None,
    ) -> tuple[list[LocalTimeEstimate], IdentityReport, dict[str, float]]:
        """Pooled local-time estimates, the identity check and L_m jump ratios at skew points."""
        scenario = self.prepare(config, seed)
        levels = levels or list(config.outputs.levels) or self.levels
        eps = eps or config.outputs.eps or self.eps
        n_paths = n_paths or self.default_paths or scenario.settings.n_paths
        t = scenario.settings.T
        tables = [
            local_time_table(batch, scenario.f, levels, t, eps)
            for batch in simulate_paths(
                scenario, n_paths, record=True, batch_size=self.batch_size, workers=self.workers
            )
        ]
        table = LocalTimeTable.concat(tables)
        identity = check_identity(table, scenario.f)
        jumps = {}
        for a in scenario.nu.atom_points:
            if a in table.levels:
                jumps[str(a)] = left_right_ratio(table, a)
        return table.estimates(), identity, jumps

    # -- verify ---------------------------------------------------------------------

    def verify(
        self,
        selection: list[str] | None = None,
        seed: int | None = None,
        include_slow: bool = True,
    ) -> SuiteReport:
        seed = seed if seed is not None else self._seed_from_env(self.verify_seed)
        return run_catalog(
            selection, seed, self.catalog, self.workers, self.batch_size, include_slow
        )


# CLI using Click
try:
    import click
    from rich.console import Console
    from rich.table import Table

    from .scenarios.config_parser import ScenarioConfigError
    from .storage.result_writer import to_json

    console = Console()

    def _load(lab: SingularDriftLab, path: str) -> ScenarioConfig:
        try:
            return lab.load_scenario(path)
        except ScenarioConfigError as e:
            raise click.BadParameter(str(e), param_hint="CONFIG") from e

    @click.group()
    @click.option("--config", default="config/config.yaml", help="Lab settings file")
    @click.pass_context
    def cli(ctx, config):
        """Singular Drift Lab"""
        ctx.ensure_object(dict)
        ctx.obj["lab"] = SingularDriftLab(config_path=config)

    @cli.command()
    @click.argument("scenario_file", metavar="CONFIG")
    @click.option("--output", help="Write the report JSON here as well")
    @click.pass_context
    def check(ctx, scenario_file, output):
        """Validate a scenario and print its well-posedness report."""
        lab = ctx.obj["lab"]
        result = lab.check(_load(lab, scenario_file))
        click.echo(to_json(result), nl=False)
        if output:
            write_json(result, output)
        if not result["solution_exists"]:
            sys.exit(1)

    @cli.group()
    def transform():
        """Space transformation tools."""

    @transform.command("dump")
    @click.argument("scenario_file", metavar="CONFIG")
    @click.option("--lower", type=float, help="Left end of the x grid")
    @click.option("--upper", type=float, help="Right end of the x grid")
    @click.option("--points", type=int, help="Number of grid points")
    @click.option("--output", help="CSV file (default: print residuals only)")
    @click.pass_context
    def transform_dump(ctx, scenario_file, lower, upper, points, output):
        """Tabulate x, G(x), H(G(x)) and sigma_tilde(G(x))."""
        lab = ctx.obj["lab"]
        config = _load(lab, scenario_file)
        table, residuals = lab.transform_dump(config, lower, upper, points)
        if output:
            write_table_csv(table, output)
            console.print(f"[green]Wrote {len(table['x'])} rows to {output}[/green]")
        click.echo(to_json({"scenario": config.name, "residuals": residuals}), nl=False)

    @cli.command()
    @click.argument("scenario_file", metavar="CONFIG")
    @click.option("--paths", "n_paths", type=click.IntRange(min=1), help="Number of paths")
    @click.option("--engine", type=click.Choice([e.value for e in Engine]), help="Engine")
    @click.option("--seed", type=click.IntRange(min=0), help="Master seed")
    @click.option("--dump", is_flag=True, help="Write one CSV file per path")
    @click.option("--out-dir", help="Directory for path files")
    @click.option("--stats", "stats_path", help="Write summary statistics JSON here")
    @click.pass_context
    def simulate(ctx, scenario_file, n_paths, engine, seed, dump, out_dir, stats_path):
        """Simulate paths and print terminal statistics."""
        lab = ctx.obj["lab"]
        config = _load(lab, scenario_file)
        dump_dir = None
        if dump:
            dump_dir = out_dir or config.outputs.paths or f"output/paths/{config.name}"
        try:
            result, written = lab.simulate(config, n_paths, engine, seed, dump_dir)
        except ValueError as e:
            console.print(f"[red]{e}[/red]")
            sys.exit(1)
        summary = result.summary()
        stats_path = stats_path or config.outputs.stats
        if stats_path:
            write_json(summary, stats_path)
        if written:
            console.print(f"[green]Wrote {len(written)} path files to {dump_dir}[/green]")

        table = Table(title=f"{config.name} ({summary['engine']})")
        table.add_column("Statistic")
        table.add_column("Value", justify="right")
        table.add_row("paths", str(summary["n_paths"]))
        table.add_row("mean X_T", f"{summary['mean_X_T']}")
        table.add_row("var X_T", f"{summary['var_X_T']}")
        table.add_row("mean <X>_T", f"{summary['mean_qv_T']:.6g}")
        table.add_row("absorbed", f"{summary['absorbed_fraction']:.4f}")
        table.add_row("exploded", f"{summary['explosion']['fraction']:.4f}")
        console.print(table)

    @cli.command()
    @click.argument("scenario_file", metavar="CONFIG")
    @click.option("--level", "levels", type=float, multiple=True, help="Level y (repeatable)")
    @click.option("--eps", type=float, help="Window width")
    @click.option("--paths", "n_paths", type=click.IntRange(min=1), help="Number of paths")
    @click.option("--seed", type=click.IntRange(min=0), help="Master seed")
    @click.option("--output", help="CSV file for the estimates")
    @click.pass_context
    def localtime(ctx, scenario_file, levels, eps, n_paths, seed, output):
        """Estimate local times and check the occupation-density identity."""
        lab = ctx.obj["lab"]
        config = _load(lab, scenario_file)
        if eps is not None and not eps > 0.0:
            raise click.BadParameter("window width must be positive", param_hint="--eps")
        try:
            estimates, identity, jumps = lab.localtime(
                config, list(levels) or None, eps, n_paths, seed
            )
        except ValueError as e:
            console.print(f"[red]{e}[/red]")
            sys.exit(1)
        output = output or config.outputs.localtime
        if output:
            write_localtime_csv(estimates, output)

        table = Table(title=f"Local times of {config.name}")
        for column in ("level", "L+", "L-", "L_m(y)", "L_m(y-)"):
            table.add_column(column, justify="right")
        for e in estimates:
            table.add_row(
                f"{e.level:g}",
                f"{e.Lp:.5g}",
                f"{e.Lminus:.5g}",
                f"{e.Lm_right:.5g}",
                f"{e.Lm_left:.5g}",
            )
        console.print(table)
        for a, ratio in jumps.items():
            console.print(f"L_m({a}-) / L_m({a}) = {ratio:.4f}")
        status = "[green]PASS[/green]" if identity.passed else "[red]FAIL[/red]"
        console.print(f"{status} occupation-density identity (worst {identity.worst:.4f})")
        if not identity.passed:
            sys.exit(1)

    @cli.command()
    @click.argument("names", nargs=-1)
    @click.option("--all", "run_all", is_flag=True, help="Run every catalog check")
    @click.option("--seed", type=click.IntRange(min=0), help="Master seed")
    @click.option("--catalog", "catalog_path", help="Catalog file")
    @click.option("--output", help="Report JSON path")
    @click.option("--skip-slow", is_flag=True, help="With --all, leave out entries marked slow")
    @click.pass_context
    def verify(ctx, names, run_all, seed, catalog_path, output, skip_slow):
        """Run acceptance checks from the catalog."""
        lab = ctx.obj["lab"]
        if not names and not run_all:
            raise click.UsageError("name checks or entries to run, or pass --all")
        if catalog_path:
            lab.catalog_path = catalog_path
        try:
            report = lab.verify(None if run_all else list(names), seed, not skip_slow)
        except ValueError as e:
            raise click.UsageError(str(e)) from e
        output = output or lab.report_path
        Path(output).parent.mkdir(parents=True, exist_ok=True)
        Path(output).write_text(report.to_json())

        table = Table(title=f"Verification (seed {report.seed})")
        table.add_column("Check")
        table.add_column("Value", justify="right")
        table.add_column("Target", justify="right")
        table.add_column("Tolerance")
        table.add_column("Provenance")
        table.add_column("Result")
        for c in report.checks:
            value = "error" if c.error else f"{c.value:.6g}" if c.value is not None else "-"
            target = f"{c.target:.6g}" if c.target is not None else "-"
            width = f" {c.tolerance.width:g}" if c.tolerance.width is not None else ""
            result = "[green]PASS[/green]" if c.passed else "[red]FAIL[/red]"
            table.add_row(
                c.name, value, target, f"{c.tolerance.kind.value}{width}", c.provenance, result
            )
        console.print(table)
        console.print(f"Report written to {output}")
        if not report.passed:
            sys.exit(1)

except ImportError:
    # Fallback if click/rich not installed
    def cli():
        print("CLI requires click and rich. Run: uv add click rich")
        sys.exit(1)


if __name__ == "__main__":
    cli()
