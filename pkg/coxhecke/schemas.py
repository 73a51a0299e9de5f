from pathlib import Path
from typing import Any, Literal, Optional

import sympy
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from coxhecke.config import settings
from coxhecke.coxeter import validate_matrix


Command = Literal[
    "classify", "orbit", "shift-graph", "class-poly", "centralizer", "verify", "decompose"
]
SEED_COMMANDS = {"classify", "orbit", "class-poly"}


# ── Job config ───────────────────────────────────────────

class Caps(BaseModel):
    model_config = ConfigDict(extra="forbid")

    length_cap: int = Field(default_factory=lambda: settings.LENGTH_CAP, ge=1)
    node_budget: int = Field(default_factory=lambda: settings.NODE_BUDGET, ge=1)
    search_cap: Optional[int] = Field(default=None, ge=1)


class OutputSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dir: Path = Field(default_factory=lambda: settings.OUTPUT_DIR)
    format: Literal["json", "dot", "both"] = "json"


class ParamValue(BaseModel):
    """Target values for one generator class. Strings are sympy expressions."""

    model_config = ConfigDict(extra="forbid")

    a: int | str = 0
    b: int | str = 1

    @field_validator("a", "b")
    @classmethod
    def must_parse(cls, v):
        if isinstance(v, str):
            try:
                sympy.sympify(v)
            except (sympy.SympifyError, TypeError, SyntaxError) as e:
                raise ValueError(f"Cannot parse parameter value {v!r}: {e}")
        return v

    def values(self) -> tuple[Any, Any]:
        def parse(v):
            return v if isinstance(v, int) else sympy.sympify(v)
        return parse(self.a), parse(self.b)


class HeckeTermIn(BaseModel):
    word: list[int]
    coeff: list[tuple[list[int], int]]


class JobConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    matrix: list[list[int]]
    generator_names: Optional[list[str]] = None
    J: list[int] = Field(default_factory=list)
    command: Command
    seeds: list[list[int]] = Field(default_factory=list)
    caps: Caps = Field(default_factory=Caps)
    output: OutputSpec = Field(default_factory=OutputSpec)
    specialization: Optional[dict[int, ParamValue]] = None
    element: Optional[list[HeckeTermIn]] = None

    @field_validator("matrix")
    @classmethod
    def matrix_must_be_coxeter(cls, v):
        validate_matrix(v)
        return v

    @model_validator(mode="after")
    def indices_in_range(self):
        rank = len(self.matrix)
        if self.generator_names is not None:
            if len(self.generator_names) != rank:
                raise ValueError(
                    f"{len(self.generator_names)} generator names for rank {rank}"
                )
            if len(set(self.generator_names)) != rank:
                raise ValueError("Generator names must be distinct")
        for s in self.J:
            if not 0 <= s < rank:
                raise ValueError(f"J contains {s}, outside [0, {rank})")
        if len(set(self.J)) != len(self.J):
            raise ValueError("J has repeated generators")
        for seed in self.seeds:
            if any(not 0 <= s < rank for s in seed):
                raise ValueError(f"Seed {seed} uses a generator outside [0, {rank})")
        for term in self.element or []:
            if any(not 0 <= s < rank for s in term.word):
                raise ValueError(f"Element term {term.word} uses a generator outside [0, {rank})")
        if self.command in SEED_COMMANDS and not self.seeds:
            raise ValueError(f"Command {self.command!r} needs at least one seed")
        return self


# ── Artifacts ────────────────────────────────────────────

class CertificateOut(BaseModel):
    kind: str
    component: list[int]
    w1: Optional[list[int]] = None
    w2: Optional[list[int]] = None
    witness: Optional[list[int]] = None


class ReportOut(BaseModel):
    J: list[int]
    seed: list[int]
    verdict: Literal["finite", "infinite"]
    certificate: CertificateOut
    component_certificates: list[CertificateOut]
    orbit: Optional[list[list[int]]]
    max: list[list[int]]
    min: list[list[int]]


class ClassifyOut(BaseModel):
    report: ReportOut
    subset_type: str
    components: list[dict[str, Any]]
    u_plus: dict[str, Any]
    max_chain: Optional[list[dict[str, Any]]] = None


class TableEntryOut(BaseModel):
    word: list[int]
    poly: list
    text: str


class TableOut(BaseModel):
    class_rep: list[int]
    variant: str
    entries: list[TableEntryOut]


class BasisEntryOut(BaseModel):
    class_rep: list[int]
    orbit: list[list[int]]
    z: list[dict[str, Any]]
    verified: dict[str, bool]
    specialized: Optional[list[dict[str, Any]]] = None


class PieceOut(BaseModel):
    v: list[int]
    K: list[int]
    twisted_classes: Optional[list[list[list[int]]]] = None
    members: list[list[int]]
    counting_identity: Optional[bool] = None


class DecompositionOut(BaseModel):
    J: list[int]
    radius: int
    disjoint: bool
    covered: bool
    pieces: list[PieceOut]
    overlaps: list[list[int]]
    uncovered: list[list[int]]


class VerifyOut(BaseModel):
    target: str
    coeffs: bool
    commutation: bool
    witness: Optional[int] = None
    violations: list[str] = Field(default_factory=list)


class ArtifactOut(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: str = Field(serialization_alias="schema")
    command: str
    config: dict[str, Any]
    caps: Caps
    completeness: str
    result: Any


class ErrorOut(BaseModel):
    error: str
    message: str
    exit_code: int
