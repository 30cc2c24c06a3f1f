'''
Executable checks of the two structural lemmas on discrete curves:
* projection: the image of the curve in a spacelike or lightlike plane is a
  strictly convex Jordan curve
* sections: every chord, every chord-tangent pair and every triple of
  curve points spans something spacelike
'''

from concurrent.futures import ThreadPoolExecutor
from typing import List, Tuple

import numpy as np

from minkcurve.core import config, lorentz
from minkcurve.core.errors import InvalidConfig
from minkcurve.models.curve_models import ClosedCurve
from minkcurve.models.plane_models import ProjectionPlane
from minkcurve.schemas.schemas import ProjectionLemmaReport, SectionLemmaReport
from minkcurve.services.log_service import LogService

TRIPLE_CHUNK = 4096
MAX_BOOST = 2.0


# -----------------------
# Random planes
# -----------------------
def random_spacelike_planes(k: int, rng: np.random.Generator) -> List[ProjectionPlane]:
    """Unit normals (sinh r cos a, sinh r sin a, cosh r), r uniform in [0, 2]."""
    rho = rng.uniform(0.0, MAX_BOOST, size=k)
    alpha = rng.uniform(0.0, 2.0 * np.pi, size=k)
    normals = np.stack(
        [np.sinh(rho) * np.cos(alpha), np.sinh(rho) * np.sin(alpha), np.cosh(rho)], axis=-1
    )
    return [ProjectionPlane.spacelike(n) for n in normals]


def random_lightlike_planes(k: int, rng: np.random.Generator) -> List[ProjectionPlane]:
    """Null normals (cos a, sin a, 1) with the default transversal."""
    alpha = rng.uniform(0.0, 2.0 * np.pi, size=k)
    normals = np.stack([np.cos(alpha), np.sin(alpha), np.ones(k)], axis=-1)
    return [ProjectionPlane.lightlike(n) for n in normals]


# -----------------------
# Planar polygon predicates
# -----------------------
def _orient(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Sign of the turn a -> b -> c."""
    d = (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])
    return np.sign(d)


def _on_segment(a, b, c) -> np.ndarray:
    """For collinear a, b, c: whether c lies in the bounding box of a-b."""
    return (
        (np.minimum(a[..., 0], b[..., 0]) <= c[..., 0]) & (c[..., 0] <= np.maximum(a[..., 0], b[..., 0]))
        & (np.minimum(a[..., 1], b[..., 1]) <= c[..., 1]) & (c[..., 1] <= np.maximum(a[..., 1], b[..., 1]))
    )


def _segments_intersect(a, b, c, d) -> np.ndarray:
    o1, o2 = _orient(a, b, c), _orient(a, b, d)
    o3, o4 = _orient(c, d, a), _orient(c, d, b)
    proper = (o1 * o2 < 0) & (o3 * o4 < 0)
    touching = (
        ((o1 == 0) & _on_segment(a, b, c))
        | ((o2 == 0) & _on_segment(a, b, d))
        | ((o3 == 0) & _on_segment(c, d, a))
        | ((o4 == 0) & _on_segment(c, d, b))
    )
    return proper | touching


def _brute_force_simple(poly: np.ndarray) -> bool:
    """No two non-adjacent edges of the closed polygon meet."""
    m = len(poly)
    nxt = np.roll(poly, -1, axis=0)
    for i in range(m - 2):
        # edge m-1 is adjacent to edge 0
        stop = m - 1 if i == 0 else m
        j = np.arange(i + 2, stop)
        if j.size and np.any(_segments_intersect(poly[i], nxt[i], poly[j], nxt[j])):
            return False
    return True


def _upper(d: np.ndarray) -> np.ndarray:
    return (d[:, 1] > 0) | ((d[:, 1] == 0) & (d[:, 0] > 0))


def polygon_turns(poly: np.ndarray) -> np.ndarray:
    edges = np.roll(poly, -1, axis=0) - poly
    nxt = np.roll(edges, -1, axis=0)
    return edges[:, 0] * nxt[:, 1] - edges[:, 1] * nxt[:, 0]


def is_simple_polygon(poly: np.ndarray) -> bool:
    """
    Jordan test for a closed polygon. A polygon turning one way at every
    vertex is simple iff its edge directions wind exactly once, which is
    counted by crossings of the positive x axis; anything else goes through
    the pairwise segment test.
    """
    poly = np.asarray(poly, dtype=float)
    turns = polygon_turns(poly)
    if np.all(turns > 0) or np.all(turns < 0):
        if turns[0] < 0:
            poly = poly[::-1]
        edges = np.roll(poly, -1, axis=0) - poly
        up = _upper(edges)
        crossings = int(np.sum(~up & np.roll(up, -1)))
        return crossings == 1
    return _brute_force_simple(poly)


# -----------------------
# Service
# -----------------------
class LemmaService:
    """
    Service layer for the projection and section checks.

    Responsibilities:
    - Project curves into spacelike and lightlike planes
    - Decide convexity and injectivity of the projected curve
    - Sweep chords, chord-tangent pairs and random triples for spacelikeness
    """
    def __init__(self, run_id: str = "local"):
        self.run_id = run_id

    # ---------- projection ----------
    def check_projection_lemma(self, c: ClosedCurve, plane: ProjectionPlane) -> ProjectionLemmaReport:
        """
        Convex iff det(sigma T, sigma kN) keeps one strict sign; injective iff
        the projected sample polygon is simple.
        """
        a = plane.coordinates(c.tangents)
        b = plane.coordinates(c.curvature_vectors)
        det = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
        convex = bool(np.all(det > 0) or np.all(det < 0))
        injective = is_simple_polygon(plane.coordinates(c.points))

        report = ProjectionLemmaReport(
            convex=convex,
            injective=injective,
            min_turn_rate=float(np.min(np.abs(det))),
            plane_kind=plane.kind.value,
        )
        if not (convex and injective):
            details = report.to_json_dict()
            details["normal"] = plane.normal.tolist()
            LogService.log_check_event("projection_lemma", False, details, self.run_id)
        return report

    def check_projection_planes(
        self, c: ClosedCurve, count: int, seed: int
    ) -> List[ProjectionLemmaReport]:
        """The x1x2-plane, then `count` random spacelike and `count` random lightlike planes."""
        rng = np.random.default_rng(seed)
        planes = [ProjectionPlane.spacelike([0.0, 0.0, 1.0])]
        planes += random_spacelike_planes(count, rng)
        planes += random_lightlike_planes(count, rng)
        return [self.check_projection_lemma(c, p) for p in planes]

    # ---------- sections ----------
    def check_section_lemma(
        self, c: ClosedCurve, trials: int, seed: int = 0, exhaustive: bool = True
    ) -> SectionLemmaReport:
        return self.check_section_points(c.points, c.tangents, trials, seed, exhaustive)

    def check_section_points(
        self,
        points: np.ndarray,
        tangents: np.ndarray,
        trials: int,
        seed: int = 0,
        exhaustive: bool = True,
    ) -> SectionLemmaReport:
        """
        Section sweep over raw arrays, so that inputs violating the
        hypotheses can still be examined.

        Chord margins are <d,d>/|d|^2; plane margins are -<n,n>/|n|^2 for the
        normal n of the spanned plane. Every margin must be positive.
        """
        P = np.asarray(points, dtype=float)
        T = np.asarray(tangents, dtype=float)
        n = len(P)
        if trials < 1:
            raise InvalidConfig(f"trials must be >= 1, got {trials}")

        rng = np.random.default_rng(seed)
        if exhaustive:
            chord_worst, pairs = self._all_chords(P)
            tangent_worst = self._all_chord_tangents(P, T)
        else:
            i = rng.integers(0, n, size=trials)
            j = (i + rng.integers(1, n, size=trials)) % n
            d = P[j] - P[i]
            chord_worst = float(np.min(lorentz.normalized_form(d)))
            tangent_worst = float(np.min(-lorentz.normalized_form(lorentz.cross(d, T[i]))))
            pairs = trials

        triple_worst = self._random_triples(P, trials, seed) if n >= 3 else np.inf

        report = SectionLemmaReport(
            chords_ok=bool(chord_worst > 0),
            triples_ok=bool(triple_worst > 0),
            chord_tangent_ok=bool(tangent_worst > 0),
            worst_margin=float(min(chord_worst, triple_worst, tangent_worst)),
            pairs_checked=pairs,
            triples_checked=trials if n >= 3 else 0,
        )
        if not (report.chords_ok and report.triples_ok and report.chord_tangent_ok):
            LogService.log_check_event("section_lemma", False, report.to_json_dict(), self.run_id)
        return report

    @staticmethod
    def _all_chords(P: np.ndarray) -> Tuple[float, int]:
        n = len(P)
        worst = np.inf
        for k in range(1, n // 2 + 1):
            d = np.roll(P, -k, axis=0) - P
            worst = min(worst, float(np.min(lorentz.normalized_form(d))))
        return worst, n * (n - 1) // 2

    @staticmethod
    def _all_chord_tangents(P: np.ndarray, T: np.ndarray) -> float:
        n = len(P)
        worst = np.inf
        for k in range(1, n):
            d = np.roll(P, -k, axis=0) - P
            worst = min(worst, float(np.min(-lorentz.normalized_form(lorentz.cross(d, T)))))
        return worst

    @staticmethod
    def _triple_chunk(P: np.ndarray, size: int, seed_seq: np.random.SeedSequence) -> float:
        n = len(P)
        rng = np.random.default_rng(seed_seq)
        i = rng.integers(0, n, size=size)
        a = rng.integers(1, n, size=size)
        b = rng.integers(1, n - 1, size=size)
        b = b + (b >= a)
        p1, p2, p3 = P[i], P[(i + a) % n], P[(i + b) % n]
        normal = lorentz.cross(p2 - p1, p3 - p1)
        return float(np.min(-lorentz.normalized_form(normal)))

    def _random_triples(self, P: np.ndarray, trials: int, seed: int) -> float:
        """Chunks draw from child seeds, so the result does not depend on the thread count."""
        sizes = [TRIPLE_CHUNK] * (trials // TRIPLE_CHUNK)
        if trials % TRIPLE_CHUNK:
            sizes.append(trials % TRIPLE_CHUNK)
        children = np.random.SeedSequence(seed).spawn(len(sizes))
        with ThreadPoolExecutor(max_workers=config.thread_count()) as pool:
            worst = list(pool.map(lambda job: self._triple_chunk(P, *job), zip(sizes, children)))
        return min(worst)
