'''
Seeded sweep of random curves through the whole invariant suite.

Each curve is checked independently on a worker thread; results are
collected in seed order, so the summary does not depend on scheduling.
'''

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from minkcurve.core import config
from minkcurve.core.errors import MinkError, RejectionExhausted
from minkcurve.schemas.schemas import FuzzFailure, FuzzSummary, GeneratorSpec
from minkcurve.services.curve_service import CurveService
from minkcurve.services.generator_service import GeneratorService
from minkcurve.services.lemma_service import LemmaService
from minkcurve.services.log_service import LogService
from minkcurve.services.plateau_service import PlateauService
from minkcurve.services.ruled_service import RuledService

TC_SLACK = 1e-4
GAUSS_K_SLACK = 1e-4
GB_TOL = 1e-3
KAPPA_SLACK = 1e-6
CHAIN_SLACK = 1e-3
AREA_SLACK = 1e-12


@dataclass
class FuzzOutcome:
    seed: int
    rejected: bool = False
    fenchel_margin: Optional[float] = None
    residual: Optional[float] = None
    kappa_gap: Optional[float] = None
    failures: List[Tuple[str, str]] = field(default_factory=list)


class FuzzService:
    """
    Service layer for randomized invariant sweeps.

    Responsibilities:
    - Derive per-curve seeds from one master seed
    - Run curve, lemma and ruled-surface checks on each curve
    - Optionally solve a coarse maximal graph on each curve
    - Aggregate worst margins and failures into a FuzzSummary
    """
    def __init__(self, run_id: str = "local"):
        self.run_id = run_id
        self.generators = GeneratorService(run_id=run_id)
        self.curves = CurveService(run_id=run_id)
        self.lemmas = LemmaService(run_id=run_id)
        self.ruled = RuledService(run_id=run_id)
        self.plateau = PlateauService(run_id=run_id)

    @staticmethod
    def curve_seeds(count: int, seed: int) -> List[int]:
        rng = np.random.default_rng(seed)
        return [int(x) for x in rng.integers(0, 2 ** 31 - 1, size=count)]

    def run(
        self,
        count: int,
        seed: int = 0,
        samples: int = 256,
        grid: Tuple[int, int] = (128, 16),
        planes: int = 5,
        trials: int = 1000,
        harmonics: int = 3,
        amplitude_cap: Optional[float] = None,
        plateau_h: Optional[float] = None,
    ) -> FuzzSummary:
        def job(curve_seed: int) -> FuzzOutcome:
            spec = GeneratorSpec(
                kind="random-fourier", samples=samples, harmonics=harmonics,
                amplitude_cap=amplitude_cap, seed=curve_seed,
            )
            return self.check_one(spec, grid, planes, trials, plateau_h)

        with ThreadPoolExecutor(max_workers=config.thread_count()) as pool:
            outcomes = list(pool.map(job, self.curve_seeds(count, seed)))

        accepted = [o for o in outcomes if not o.rejected]
        failures = [FuzzFailure(seed=o.seed, check=name, message=msg) for o in outcomes for name, msg in o.failures]

        def worst(values, pick, default):
            values = [v for v in values if v is not None]
            return float(pick(values)) if values else default

        summary = FuzzSummary(
            count=count,
            passed=sum(1 for o in accepted if not o.failures),
            worst_fenchel_margin=worst([o.fenchel_margin for o in accepted], min, 0.0),
            worst_gauss_bonnet_residual=worst([o.residual for o in accepted], max, 0.0),
            worst_kappa_gap=worst([o.kappa_gap for o in accepted], min, 0.0),
            rejected=len(outcomes) - len(accepted),
            failures=failures,
        )
        LogService.log_check_event("fuzz", not failures, {"count": count, "failures": len(failures)}, self.run_id)
        return summary

    def check_one(
        self,
        spec: GeneratorSpec,
        grid: Tuple[int, int],
        planes: int,
        trials: int,
        plateau_h: Optional[float] = None,
    ) -> FuzzOutcome:
        """Run every check on one generated curve; plateau_h adds a coarse maximal-graph solve."""
        outcome = FuzzOutcome(seed=spec.seed)

        def fail(check: str, message: str):
            outcome.failures.append((check, message))

        try:
            c = self.generators.generate(spec)
        except RejectionExhausted:
            outcome.rejected = True
            return outcome

        try:
            tc = self.curves.total_curvature(c)
            outcome.fenchel_margin = 2.0 * np.pi - tc
            if tc > 2.0 * np.pi + TC_SLACK:
                fail("fenchel", f"total curvature {tc!r} exceeds 2*pi")

            for report in self.lemmas.check_projection_planes(c, planes, spec.seed):
                if not (report.convex and report.injective):
                    fail("projection_lemma", f"{report.plane_kind} plane: convex={report.convex}, injective={report.injective}")
                    break

            section = self.lemmas.check_section_lemma(c, trials, spec.seed)
            if not (section.chords_ok and section.triples_ok and section.chord_tangent_ok):
                fail("section_lemma", f"worst margin {section.worst_margin!r}")

            rs = self.ruled.build_ruled(c, grid)
            r = self.ruled.report(rs)
            outcome.residual = abs(r.residual)
            outcome.kappa_gap = r.min_kappa_gap
            if not r.spacelike_ok:
                fail("ruled_spacelike", f"worst margin {r.spacelike_margin!r}")
            if r.min_gauss_k < -GAUSS_K_SLACK:
                fail("gauss_curvature", f"min K {r.min_gauss_k!r}")
            if abs(r.residual) >= GB_TOL:
                fail("gauss_bonnet", f"residual {r.residual!r}")
            if r.min_kappa_gap < -KAPPA_SLACK or r.kappa_g_agreement >= 1e-3:
                fail("geodesic_curvature", f"gap {r.min_kappa_gap!r}, agreement {r.kappa_g_agreement!r}")
            if tc > r.boundary_integral_kg + CHAIN_SLACK or r.boundary_integral_kg > 2.0 * np.pi - r.area_integral_k + CHAIN_SLACK:
                fail("fenchel_chain", f"tc {tc!r}, boundary {r.boundary_integral_kg!r}, area {r.area_integral_k!r}")

            if plateau_h is not None:
                mesh = self.plateau.build_domain(c, plateau_h)
                _, log = self.plateau.solve_maximal(self.plateau.initial_guess(rs, mesh))
                areas = np.asarray(log.area_history)
                if max(log.grad_history) >= 1.0:
                    fail("plateau_gradient", f"grad bound {max(log.grad_history)!r}")
                if np.any(np.diff(areas) < -AREA_SLACK * max(1.0, float(np.max(np.abs(areas))))):
                    fail("plateau_area", "area history is not non-decreasing")
        except MinkError as e:
            fail(e.error, e.message)
        return outcome
