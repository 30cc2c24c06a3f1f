"""
Pydantic schemas for the command layer.

RunConfig carries every knob of a CLI run and is embedded verbatim in the
reports; CommandResponse is the uniform result of every command.
"""

from pydantic import BaseModel, Field, field_validator, model_validator
from typing import Any, List, Literal, Optional, Tuple

from minkcurve.core import config
from minkcurve.schemas.schemas import GeneratorKind


# ---------- Command Response Schema ----------
class CommandResponse(BaseModel):
    """Standard response format for all commands."""
    success: bool
    data: Optional[Any] = None
    message: str
    exit_code: int = 0
    # text for stdout when no output path was given
    stdout: Optional[str] = None

    class Config:
        from_attributes = True


# ---------- Run configuration ----------
Command = Literal["gen", "verify", "curvature", "ruled", "plateau", "fuzz"]

# lighter per-curve defaults for sweeps; explicit flags still win
FUZZ_DEFAULTS = {"samples": 256, "grid": (128, 16), "planes": 5, "trials": 1000}


class RunConfig(BaseModel):
    """Input for every command; paths are optional where stdout is a fallback."""
    command: Command
    input: Optional[str] = Field(None, description="Curve JSON to read")
    output: Optional[str] = Field(None, description="Curve JSON, OBJ mesh or summary to write")
    report: Optional[str] = Field(None, description="Report JSON to write")
    csv: Optional[str] = Field(None, description="Per-sample CSV to write")
    method: Literal["spline", "fourier"] = Field("spline", description="Interpolant used to resample input curves")

    # generator knobs
    kind: Optional[GeneratorKind] = None
    radius: float = Field(1.0, gt=0)
    a: float = Field(1.0, gt=0)
    b: float = Field(1.0, gt=0)
    c: float = 0.0
    amplitudes: List[float] = Field(default_factory=list)
    harmonics: int = Field(3, gt=0)
    amplitude_cap: Optional[float] = Field(None, gt=0)

    # numeric knobs
    samples: int = Field(config.DEFAULT_SAMPLES, gt=7)
    grid: Tuple[int, int] = config.DEFAULT_GRID
    h: float = Field(config.DEFAULT_MESH_H, gt=0)
    tol: float = Field(config.DEFAULT_TOL, gt=0)
    max_iter: int = Field(config.DEFAULT_MAX_ITER, gt=0)
    seed: int = Field(0, ge=0)
    trials: int = Field(10000, gt=0)
    planes: int = Field(20, gt=0)
    count: int = Field(50, gt=0)
    start: float = Field(0.0, ge=0)
    plateau_h: Optional[float] = Field(None, gt=0, description="Mesh size of the optional fuzz maximal-graph solve")

    @model_validator(mode="before")
    @classmethod
    def fuzz_defaults(cls, values):
        if isinstance(values, dict) and values.get("command") == "fuzz":
            values = {**FUZZ_DEFAULTS, **{k: v for k, v in values.items() if v is not None}}
        return values

    @field_validator("grid", mode="before")
    @classmethod
    def parse_grid(cls, value):
        if isinstance(value, str):
            parts = value.lower().split("x")
            if len(parts) != 2:
                raise ValueError(f"grid must look like 512x64, got {value!r}")
            value = (int(parts[0]), int(parts[1]))
        ns, nt = value
        if ns < 4 or nt < 2:
            raise ValueError(f"grid must be at least 4x2, got {ns}x{nt}")
        return (ns, nt)

    def provenance(self) -> dict:
        """The configuration as embedded in reports."""
        return self.model_dump(mode="json")
