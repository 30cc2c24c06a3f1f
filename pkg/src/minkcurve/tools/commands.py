"""
Commands behind the CLI.

Each command wraps the service layer and returns a consistent
CommandResponse; module errors never escape, they come back with the exit
code of their class (2 precondition, 3 numerical, 1 I/O).
"""

from typing import Callable, Dict

import numpy as np
import pandas as pd
from pydantic import ValidationError

from minkcurve.core.errors import InvalidConfig, MinkError, NumericalError
from minkcurve.models.curve_models import ClosedCurve
from minkcurve.repositories.file_repository import (
    CurveRepository, MeshRepository, ReportRepository, SeriesRepository, dumps_json,
)
from minkcurve.schemas.schemas import CurvatureReport, GeneratorSpec, PlateauReport, VerifyReport
from minkcurve.services.curve_service import CurveService
from minkcurve.services.fuzz_service import FuzzService
from minkcurve.services.generator_service import GeneratorService
from minkcurve.services.lemma_service import LemmaService
from minkcurve.services.log_service import LogService
from minkcurve.services.plateau_service import PlateauService
from minkcurve.services.ruled_service import RuledService
from minkcurve.tools.schemas import CommandResponse, RunConfig


def _failure(e: MinkError, cfg: RunConfig, run_id: str) -> CommandResponse:
    LogService.log_error(cfg.command, f"{e.error}: {e.message}", run_id)
    return CommandResponse(success=False, data=e.to_dict(), message=e.message, exit_code=e.exit_code)


def _emit_report(cfg: RunConfig, payload: dict, message: str) -> CommandResponse:
    """Write the report to --report, or hand it to stdout."""
    path = cfg.report
    if path:
        ReportRepository.write_json(path, payload)
        return CommandResponse(success=True, data=payload, message=f"{message}; report written to {path}")
    return CommandResponse(success=True, data=payload, message=message, stdout=dumps_json(payload))


def _load_curve(cfg: RunConfig, run_id: str) -> ClosedCurve:
    points = CurveRepository.read(cfg.input)
    return CurveService(run_id=run_id).resample_arclength(points, cfg.samples, method=cfg.method)


# =============================================================================
# gen
# =============================================================================
def run_gen(cfg: RunConfig, run_id: str) -> CommandResponse:
    """Generate a test curve and write it as curve JSON."""
    try:
        try:
            spec = GeneratorSpec(
                kind=cfg.kind or "planar-circle", samples=cfg.samples, radius=cfg.radius,
                a=cfg.a, b=cfg.b, c=cfg.c, amplitudes=cfg.amplitudes, harmonics=cfg.harmonics,
                amplitude_cap=cfg.amplitude_cap, seed=cfg.seed,
            )
        except ValidationError as e:
            raise InvalidConfig("; ".join(err["msg"] for err in e.errors())) from None
        curve = GeneratorService(run_id=run_id).generate(spec)
        if cfg.output:
            CurveRepository.write(cfg.output, curve.points)
            return CommandResponse(
                success=True, data={"samples": curve.n, "arcLength": curve.arc_length},
                message=f"Curve {spec.kind} written to {cfg.output}",
            )
        return CommandResponse(
            success=True, data={"samples": curve.n}, message=f"Curve {spec.kind} generated",
            stdout=CurveRepository.to_json(curve.points),
        )
    except MinkError as e:
        return _failure(e, cfg, run_id)


# =============================================================================
# verify
# =============================================================================
def run_verify(cfg: RunConfig, run_id: str) -> CommandResponse:
    """Hypotheses (spacelike, strong spacelike, index) plus both lemma checks."""
    try:
        curve = _load_curve(cfg, run_id)
        curves = CurveService(run_id=run_id)
        lemmas = LemmaService(run_id=run_id)

        strong = curves.is_strong_spacelike(curve)
        indicatrix = curves.indicatrix(curve)
        projections = lemmas.check_projection_planes(curve, cfg.planes, cfg.seed)
        section = lemmas.check_section_lemma(curve, cfg.trials, cfg.seed)
        report = VerifyReport(
            spacelike=True,
            strong_spacelike=strong,
            index=curves.index(curve),
            reversed=curve.reversed,
            theta_monotone=indicatrix.monotone,
            convex=all(p.convex for p in projections),
            injective=all(p.injective for p in projections),
            projection_checks=projections,
            chords_ok=section.chords_ok,
            triples_ok=section.triples_ok,
            chord_tangent_ok=section.chord_tangent_ok,
            worst_margin=section.worst_margin,
            config=cfg.provenance(),
        )
        return _emit_report(cfg, report.to_json_dict(), "Verification finished")
    except MinkError as e:
        return _failure(e, cfg, run_id)


# =============================================================================
# curvature
# =============================================================================
def run_curvature(cfg: RunConfig, run_id: str) -> CommandResponse:
    """Total curvature, Fenchel margin and the per-sample curvature series."""
    try:
        curve = _load_curve(cfg, run_id)
        curves = CurveService(run_id=run_id)
        tc = curves.total_curvature(curve)
        report = CurvatureReport(
            total_curvature=tc,
            fenchel_margin=2.0 * np.pi - tc,
            samples=curve.n,
            arc_length=curve.arc_length,
            index=curves.index(curve),
        )
        if cfg.csv:
            ind = curves.indicatrix(curve)
            frame = pd.DataFrame({
                "s": curve.sample_arclengths,
                "kappa": curve.kappa,
                "theta": ind.theta,
                "phi": ind.phi,
            })
            if cfg.csv == "-":
                payload = report.to_json_dict()
                payload["config"] = cfg.provenance()
                if cfg.report:
                    ReportRepository.write_json(cfg.report, payload)
                return CommandResponse(
                    success=True, data=payload, message=f"Total curvature {tc!r}",
                    stdout=SeriesRepository.to_csv(frame),
                )
            SeriesRepository.write_csv(cfg.csv, frame)
        payload = report.to_json_dict()
        payload["config"] = cfg.provenance()
        return _emit_report(cfg, payload, f"Total curvature {tc!r}")
    except MinkError as e:
        return _failure(e, cfg, run_id)


# =============================================================================
# ruled
# =============================================================================
def run_ruled(cfg: RunConfig, run_id: str) -> CommandResponse:
    """Ruled surface, spacelike sweep, boundary curvature and Gauss-Bonnet."""
    try:
        curve = _load_curve(cfg, run_id)
        service = RuledService(run_id=run_id)
        rs = service.build_ruled(curve, cfg.grid, start=cfg.start)
        report = service.report(rs)
        report.config = cfg.provenance()
        if cfg.output:
            service.export_mesh(rs, cfg.output)
        if cfg.csv:
            profile = service.boundary_geodesic_curvature(rs)
            SeriesRepository.write_csv(cfg.csv, pd.DataFrame(profile.as_records()))
        return _emit_report(cfg, report.to_json_dict(), f"Gauss-Bonnet residual {report.residual!r}")
    except MinkError as e:
        return _failure(e, cfg, run_id)


# =============================================================================
# plateau
# =============================================================================
def run_plateau(cfg: RunConfig, run_id: str) -> CommandResponse:
    """buildDomain -> initialGuess -> solveMaximal -> verifyMaximal, plus a uniqueness comparison."""
    try:
        curve = _load_curve(cfg, run_id)
        ruled = RuledService(run_id=run_id)
        service = PlateauService(run_id=run_id)

        rs = ruled.build_ruled(curve, cfg.grid, start=cfg.start)
        mesh = service.build_domain(curve, cfg.h)
        g0 = service.initial_guess(rs, mesh)
        solved, log = service.solve_maximal(g0, tol=cfg.tol, max_iter=cfg.max_iter)
        check = service.verify_maximal(solved)

        alternative = service.harmonic_extension(mesh, service.dirichlet_data(curve, mesh))
        checked, gap = service.compare_solutions(solved, alternative, cfg.tol, cfg.max_iter)

        report = PlateauReport(
            **check.model_dump(),
            iterations=log.iterations,
            converged=log.converged,
            initial_area=log.area_history[0],
            uniqueness_checked=checked,
            uniqueness_gap=gap,
            uniqueness_flag=bool(checked and gap > 1e-6),
            config=cfg.provenance(),
        )
        if cfg.output:
            MeshRepository.write_obj(cfg.output, *service.mesh_faces(solved))
        return _emit_report(cfg, report.to_json_dict(), f"Maximal graph after {log.iterations} iterations")
    except MinkError as e:
        return _failure(e, cfg, run_id)


# =============================================================================
# fuzz
# =============================================================================
def run_fuzz(cfg: RunConfig, run_id: str) -> CommandResponse:
    """Random curves through the invariant suite; any failure exits with 3."""
    try:
        summary = FuzzService(run_id=run_id).run(
            count=cfg.count, seed=cfg.seed, samples=cfg.samples, grid=cfg.grid,
            planes=cfg.planes, trials=cfg.trials, harmonics=cfg.harmonics,
            amplitude_cap=cfg.amplitude_cap, plateau_h=cfg.plateau_h,
        )
        summary.config = cfg.provenance()
        payload = summary.to_json_dict()
        if cfg.output:
            ReportRepository.write_json(cfg.output, payload)
            stdout = None
        else:
            stdout = dumps_json(payload)
        message = f"{summary.passed}/{summary.count} curves passed"
        if summary.failures:
            return CommandResponse(
                success=False, data=payload, message=message,
                exit_code=NumericalError.exit_code, stdout=stdout,
            )
        return CommandResponse(success=True, data=payload, message=message, stdout=stdout)
    except MinkError as e:
        return _failure(e, cfg, run_id)


COMMANDS: Dict[str, Callable[[RunConfig, str], CommandResponse]] = {
    "gen": run_gen,
    "verify": run_verify,
    "curvature": run_curvature,
    "ruled": run_ruled,
    "plateau": run_plateau,
    "fuzz": run_fuzz,
}


def run(cfg: RunConfig, run_id: str) -> CommandResponse:
    LogService.log_run_event(cfg.command, cfg.provenance(), "started", run_id)
    response = COMMANDS[cfg.command](cfg, run_id)
    LogService.log_run_event(
        cfg.command, cfg.provenance(), "ok" if response.success else "failed", run_id,
        {"exitCode": response.exit_code, "message": response.message},
    )
    return response
