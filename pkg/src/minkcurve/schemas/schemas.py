"""
Validates generator input and serializes the reports of the toolkit.

Report field names are camelCase on the wire (JSON) and snake_case in Python.
"""
import math
from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic.alias_generators import to_camel
from typing import Any, Dict, List, Literal, Optional

class Base(BaseModel):
    class Config:
        from_attributes = True
        populate_by_name = True
        alias_generator = to_camel

    def to_json_dict(self) -> Dict[str, Any]:
        return self.model_dump(by_alias=True)

# ---------- Curve file ----------
class CurvePayload(Base):
    points: List[List[float]]
    closed: bool = True

    @field_validator("points")
    @classmethod
    def check_points(cls, points):
        for p in points:
            if len(p) != 3:
                raise ValueError(f"Each point needs 3 coordinates, got {p}")
            if not all(math.isfinite(x) for x in p):
                raise ValueError(f"Point coordinates must be finite, got {p}")
        return points

# ---------- Generator schemas ----------
GeneratorKind = Literal["planar-circle", "tilted-ellipse", "graph-over-convex", "random-fourier"]

class GeneratorSpec(Base):
    """
    Parameters of a test-curve family.

    planar-circle: radius.
    tilted-ellipse: a, b, tilt slope c with |c| < 1.
    graph-over-convex: ellipse (a, b) plus height coefficients
        amplitudes = [alpha_1, beta_1, alpha_2, beta_2, ...] with
        sum_k k*(|alpha_k| + |beta_k|) < min(a, b).
    random-fourier: circle of given radius plus a seeded random height with
        |alpha_k|, |beta_k| <= amplitude_cap / k^2, then rejection-checked.
    """
    kind: GeneratorKind
    samples: int = Field(1024, gt=7)
    radius: float = Field(1.0, gt=0)
    a: float = Field(1.0, gt=0)
    b: float = Field(1.0, gt=0)
    c: float = 0.0
    amplitudes: List[float] = Field(default_factory=list)
    harmonics: int = Field(3, gt=0)
    amplitude_cap: Optional[float] = Field(None, gt=0)
    seed: int = Field(0, ge=0)

    @model_validator(mode="after")
    def check_ranges(self):
        if self.kind == "tilted-ellipse" and not abs(self.c) < 1.0:
            raise ValueError(f"Tilt slope must satisfy |c| < 1, got {self.c}")
        if self.kind == "graph-over-convex":
            if len(self.amplitudes) % 2:
                raise ValueError("amplitudes must come in (alpha_k, beta_k) pairs")
            bound = sum((i // 2 + 1) * abs(x) for i, x in enumerate(self.amplitudes))
            if not bound < min(self.a, self.b):
                raise ValueError(
                    f"sum k*|h_k| = {bound} must stay below min(a, b) = {min(self.a, self.b)}"
                )
        return self

# ---------- Curve reports ----------
class StrongSpacelikeReport(Base):
    ok: bool
    worst_margin: float
    worst_index: int
    indicatrix_margin: float
    tests_agree: bool

class CurvatureReport(Base):
    total_curvature: float
    fenchel_margin: float
    samples: int
    arc_length: float
    index: int

# ---------- Lemma reports ----------
class ProjectionLemmaReport(Base):
    convex: bool
    injective: bool
    min_turn_rate: float
    plane_kind: Literal["Spacelike", "Lightlike"]

class SectionLemmaReport(Base):
    """
    Margins are scale-free forms <d, d> / |d|^2 with the Euclidean norm.
    A raw antipodal chord of the unit circle has <d, d> = 4 and margin 1.
    """
    chords_ok: bool = Field(..., alias="chordsOK")
    triples_ok: bool = Field(..., alias="triplesOK")
    chord_tangent_ok: bool = Field(..., alias="chordTangentOK")
    worst_margin: float
    pairs_checked: int
    triples_checked: int

class VerifyReport(Base):
    spacelike: bool
    strong_spacelike: StrongSpacelikeReport
    index: int
    reversed: bool
    theta_monotone: bool
    convex: bool
    injective: bool
    projection_checks: List[ProjectionLemmaReport]
    chords_ok: bool = Field(..., alias="chordsOK")
    triples_ok: bool = Field(..., alias="triplesOK")
    chord_tangent_ok: bool = Field(..., alias="chordTangentOK")
    worst_margin: float
    config: Dict[str, Any] = Field(default_factory=dict)

# ---------- Ruled surface reports ----------
class SpacelikeSurfaceReport(Base):
    ok: bool
    worst_margin: float
    location: List[float]

class GaussBonnetReport(Base):
    area_integral_k: float = Field(..., alias="areaIntegralK")
    boundary_integral_kg: float = Field(..., alias="boundaryIntegralKg")
    residual: float

class RuledReport(Base):
    area_integral_k: float = Field(..., alias="areaIntegralK")
    boundary_integral_kg: float = Field(..., alias="boundaryIntegralKg")
    residual: float
    min_gauss_k: float = Field(..., alias="minGaussK")
    spacelike_margin: float
    spacelike_ok: bool
    min_kappa_gap: float
    kappa_g_agreement: float
    total_curvature: float
    config: Dict[str, Any] = Field(default_factory=dict)

# ---------- Plateau reports ----------
class MaximalReport(Base):
    grad_bound: float
    residual_norm: float
    area_value: float
    mean_curvature_defect: float

class PlateauReport(Base):
    grad_bound: float
    residual_norm: float
    area_value: float
    mean_curvature_defect: float
    iterations: int
    converged: bool
    initial_area: float
    uniqueness_checked: bool
    uniqueness_gap: Optional[float] = None
    uniqueness_flag: bool = False
    config: Dict[str, Any] = Field(default_factory=dict)

# ---------- Fuzz summary ----------
class FuzzFailure(Base):
    seed: int
    check: str
    message: str

class FuzzSummary(Base):
    count: int
    passed: int
    worst_fenchel_margin: float
    worst_gauss_bonnet_residual: float
    worst_kappa_gap: float
    rejected: int
    failures: List[FuzzFailure] = Field(default_factory=list)
    config: Dict[str, Any] = Field(default_factory=dict)
