"""JSON report schemas.

Field order is the output key order; reports are written with
`model_dump_json(indent=2)` so repeated runs give identical bytes.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class RunReport(BaseModel):
    problem: str
    parameterization: str
    n_in: int
    m_in: int
    n_out: int
    m_out: int
    boundary_size: int
    param_value: int = Field(..., description="size of the lifted modulator B ∪ X")
    delta: int | None = None
    rules: dict[str, int] = Field(default_factory=dict)
    elapsed_ms: float | None = Field(default=None, description="only with --timing")
    seed: int | None = Field(default=None, description="campaign seed; null outside fuzz runs")
    tool_version: str


class SeparationReport(BaseModel):
    family: str
    problem: str
    indices: dict[str, int]
    witnesses: list[str] = Field(..., description="names of the two attachments W1, W2")
    # OPT(Gi+W1), OPT(Gj+W1), OPT(Gi+W2), OPT(Gj+W2)
    optima: list[int]
    closed_form: bool = Field(..., description="optima agree with the construction's formulas")
    verdict: bool = Field(..., description="True iff the two offsets differ")
    notes: list[str] = Field(default_factory=list)


class PairWitness(BaseModel):
    left: int
    right: int
    witness: str


class DsIndexReport(BaseModel):
    q: int
    members: int
    pairs: int
    separated: int
    by_subset_witness: int = Field(..., description="pairs split by H^[q] vs H^([q] minus I)")
    by_other_subset: int
    by_exhaustive: int
    unseparated: list[tuple[int, int]] = Field(default_factory=list)
    full_witness_optima: list[int] = Field(..., description="distinct OPT(G + H^[q])")
    bound_ok: bool | None = Field(default=None, description="strict bound, checked for q >= 4")
    witnesses: list[PairWitness] = Field(default_factory=list)


class EquivalenceVerdict(BaseModel):
    instance: int
    passed: bool
    kind: str = Field("equivalence", description="equivalence | size | fixpoint | error")
    attachment: str | None = Field(default=None, description="minimized attachment as BKG text")
    original: str | None = None
    reduced: str | None = None
    delta: int | None = None
    checked: int = Field(0, description="attachments compared")
    message: str = ""


class CampaignSummary(BaseModel):
    problem: str
    parameterization: str
    seed: int
    instances: int
    attachments: int
    failures: int
    tool_version: str


class DerivedKernelReport(BaseModel):
    problem: str
    parameterization: str
    n_in: int
    n_out: int
    ell_in: int | None
    ell_out: int | None
    delta: int | None = None
    decided: bool | None = Field(default=None, description="set for constant YES/NO instances")
    tool_version: str
