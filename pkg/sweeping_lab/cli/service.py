"""
Subcommands of the command-line front end.

Independent integrations and verification suites run concurrently in worker
threads; results are collected in input order so outputs do not depend on
scheduling.
"""

import asyncio
import logging
import sys
from collections.abc import Awaitable, Callable, Sequence
from pathlib import Path
from typing import Final, TypeVar

from pydantic import ValidationError

from ..analysis.checks import audit_trajectory, check_convergence_order, check_stability
from ..analysis.models import SuiteReport
from ..analysis.suites import run_suite, suite_names
from ..catchup.integrator import (
    convergence_table,
    finest_steps,
    integrate,
    minimal_steps,
)
from ..catchup.models import Problem, Trajectory
from ..catchup.references import closed_form_reference
from ..crowd.simulation import simulate_crowd
from ..eikonal.fast_marching import solve_room
from ..eikonal.models import GridField
from ..errors import (
    ERROR_CHECK_FAILED,
    ERROR_INVALID_INPUT,
    ErrorResponse,
    InvalidInputError,
    SolverError,
    SweepingError,
)
from ..settings import overridden, tolerance_settings
from .models import ConvergenceReport, CrowdReport, RunReport, Scenario, VerifyReport
from .validators import error_location, load_scenario
from .writers import (
    field_summary,
    write_convergence_csv,
    write_field_csv,
    write_frames_csv,
    write_json,
    write_trajectory_csv,
)

EXIT_OK: Final[int] = 0
EXIT_INVALID: Final[int] = 1
EXIT_SOLVER: Final[int] = 2
EXIT_CHECK: Final[int] = 3

MIN_CONVERGENCE_POINTS: Final[int] = 3

T = TypeVar("T")

logger = logging.getLogger(__name__)


async def gather_in_threads(jobs: Sequence[Callable[[], T]]) -> list[T]:
    """Run blocking jobs concurrently in worker threads, results in job order."""
    async with asyncio.TaskGroup() as tg:
        tasks = [tg.create_task(asyncio.to_thread(job)) for job in jobs]
    return [task.result() for task in tasks]


def report_error(response: ErrorResponse) -> None:
    print(response.model_dump_json(), file=sys.stderr)


def exit_code_for(error: BaseException) -> int:
    """
    Report ``error`` on stderr and return its exit code.

    Raises:
        BaseException: ``error`` itself when it is not a laboratory error
    """
    match error:
        case SolverError():
            logger.error(f"solver failure: {error.message}")
            report_error(error.to_response())
            return EXIT_SOLVER
        case SweepingError():
            logger.error(f"invalid input: {error.message}")
            report_error(error.to_response())
            return EXIT_INVALID
        case ValidationError():
            first = error.errors(include_url=False)[0]
            location = error_location(first["loc"])
            message = f"{location}: {first['msg']}" if location else first["msg"]
            logger.error(f"invalid input: {message}")
            report_error(ErrorResponse(error=ERROR_INVALID_INPUT, message=message))
            return EXIT_INVALID
        case _:
            raise error


def _unwrap(error: BaseException) -> BaseException:
    while isinstance(error, BaseExceptionGroup) and error.exceptions:
        error = error.exceptions[0]
    return error


class LabService:
    """Runs one subcommand and writes its artifacts under ``out_dir``."""

    def __init__(
        self, out_dir: str | Path | None = None, seed: int | None = None, n: int | None = None
    ) -> None:
        self.out_dir = Path(out_dir) if out_dir is not None else None
        self.seed = seed
        self.n = n

    def _out(self, name: str) -> Path:
        if self.out_dir is None:
            raise InvalidInputError("an output directory is required (--out)")
        return self.out_dir / name

    def _seed(self, scenario: Scenario | None = None) -> int:
        if self.seed is not None:
            return self.seed
        return scenario.seed if scenario is not None else 0

    def _steps(self, scenario: Scenario) -> int:
        n = self.n if self.n is not None else scenario.n
        if n is None:
            raise InvalidInputError(f"scenario {scenario.name!r} has no n; pass --n")
        return n

    async def _grid(self, scenario: Scenario) -> GridField | None:
        if not scenario.needs_field or scenario.room is None:
            return None
        return await asyncio.to_thread(solve_room, scenario.room)

    async def _problem(self, scenario: Scenario) -> Problem:
        return scenario.problem(await self._grid(scenario))

    def _check_failed(self, what: str) -> int:
        logger.warning(f"{what} failed")
        report_error(ErrorResponse(error=ERROR_CHECK_FAILED, message=f"{what} failed"))
        return EXIT_CHECK

    async def run(self, scenario: Scenario) -> int:
        """Integrate, audit every step, write ``trajectory.csv`` and ``audit.json``."""
        seed, n = self._seed(scenario), self._steps(scenario)
        problem = await self._problem(scenario)
        trajectory = await asyncio.to_thread(integrate, problem, n, seed)
        audit = audit_trajectory(trajectory, problem, seed=seed)
        stability = None
        if scenario.stability_v0 is not None:
            stability = await asyncio.to_thread(
                check_stability,
                problem,
                problem.u0,
                scenario.stability_v0,
                n,
                scenario.bounds.stability_constant,
                seed,
            )
        report = RunReport(
            scenario=scenario.name,
            n=n,
            h=trajectory.h,
            seed=seed,
            minimal_n=minimal_steps(problem),
            ambiguous_steps=trajectory.ambiguous_steps,
            audit=audit,
            stability=stability,
        )
        write_trajectory_csv(self._out("trajectory.csv"), trajectory)
        write_json(self._out("audit.json"), report)
        return EXIT_OK if report.passed else self._check_failed(f"audit of {scenario.name!r}")

    async def converge(self, scenario: Scenario) -> int:
        """Integrate every n of ``n_list`` concurrently and write the order table."""
        ns = scenario.n_list or []
        if len(ns) < MIN_CONVERGENCE_POINTS:
            raise InvalidInputError(
                f"n_list needs at least {MIN_CONVERGENCE_POINTS} values to fit an order"
            )
        if any(b <= a for a, b in zip(ns, ns[1:], strict=False)):
            raise InvalidInputError("n_list must be strictly increasing")
        seed = self._seed(scenario)
        problem = await self._problem(scenario)

        def job(n: int) -> Callable[[], Trajectory]:
            return lambda: integrate(problem, n, seed)

        needs_finest = closed_form_reference(problem) is None
        runs = await gather_in_threads(
            [job(n) for n in ns] + ([job(finest_steps(ns))] if needs_finest else [])
        )
        finest = runs.pop() if needs_finest else None
        table = convergence_table(problem, runs, finest)
        check = check_convergence_order(table, minimum=scenario.bounds.convergence_order)
        write_convergence_csv(self._out("convergence.csv"), table)
        write_json(
            self._out("convergence.json"),
            ConvergenceReport(scenario=scenario.name, seed=seed, table=table, check=check),
        )
        return EXIT_OK if check.passed else self._check_failed(f"convergence of {scenario.name!r}")

    async def crowd(self, scenario: Scenario) -> int:
        """Run both crowd schemes, write the frames of each and the audit."""
        if scenario.crowd is None:
            raise InvalidInputError(f"scenario {scenario.name!r} describes no crowd")
        seed, n = self._seed(scenario), self._steps(scenario)
        grid = await self._grid(scenario)
        problem = scenario.problem(grid)
        run = await asyncio.to_thread(
            simulate_crowd,
            scenario.crowd.configuration(),
            problem.field,
            scenario.horizon,
            n,
            problem.r,
            seed,
        )
        audit = audit_trajectory(run.sweeping, problem, seed=seed)
        report = CrowdReport(
            scenario=scenario.name,
            n=n,
            seed=seed,
            n_disks=len(scenario.crowd.centers),
            scheme_gap=run.scheme_gap,
            velocity_overlap=run.velocity_overlap,
            ambiguous_steps=run.sweeping.ambiguous_steps,
            audit=audit,
        )
        write_frames_csv(self._out("sweeping.csv"), run.sweeping)
        write_frames_csv(self._out("velocity.csv"), run.velocity)
        write_json(self._out("audit.json"), report)
        return EXIT_OK if audit.passed else self._check_failed(f"crowd audit of {scenario.name!r}")

    async def field(self, scenario: Scenario) -> int:
        """Solve the eikonal equation of the room and export the grid."""
        if scenario.room is None:
            raise InvalidInputError(f"scenario {scenario.name!r} describes no room")
        grid = await asyncio.to_thread(solve_room, scenario.room)
        write_field_csv(self._out("field.csv"), grid)
        write_json(self._out("field.json"), field_summary(grid))
        return EXIT_OK

    async def verify(self, suite: str) -> int:
        """Run one suite, or every regular suite for ``all``, concurrently."""
        names = suite_names(suite)
        seed = self._seed()

        def job(name: str) -> Callable[[], SuiteReport]:
            return lambda: run_suite(name, seed)

        suites = await gather_in_threads([job(name) for name in names])
        report = VerifyReport(requested=suite, seed=seed, suites=suites)
        if self.out_dir is not None:
            write_json(self._out("verify.json"), report)
        else:
            print(report.model_dump_json(indent=2))
        return EXIT_OK if report.passed else self._check_failed(f"suite {suite!r}")


SCENARIO_COMMANDS: Final[dict[str, Callable[[LabService, Scenario], Awaitable[int]]]] = {
    "run": LabService.run,
    "converge": LabService.converge,
    "crowd": LabService.crowd,
    "field": LabService.field,
}


async def execute(
    command: str,
    scenario_path: str | Path | None = None,
    out_dir: str | Path | None = None,
    seed: int | None = None,
    n: int | None = None,
    suite: str | None = None,
) -> int:
    """
    Run ``command`` and map failures to exit codes: 1 invalid input, 2 solver
    failure, 3 failed audit or check.
    """
    service = LabService(out_dir=out_dir, seed=seed, n=n)
    try:
        if command == "verify":
            if suite is None:
                raise InvalidInputError("verify needs a suite name")
            return await service.verify(suite)
        if command not in SCENARIO_COMMANDS:
            raise InvalidInputError(f"unknown command {command!r}")
        if scenario_path is None:
            raise InvalidInputError(f"{command} needs --scenario")
        scenario = load_scenario(scenario_path)
        overrides = scenario.tolerances.model_dump(exclude_none=True)
        with overridden(tolerance_settings, overrides):
            return await SCENARIO_COMMANDS[command](service, scenario)
    except Exception as e:
        return exit_code_for(_unwrap(e))
