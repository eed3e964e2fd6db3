"""
Report wire models.

Lengths and q values are decimal strings, normalized values are exact
"num/den" strings with a float convenience field. Reports carry no
timestamps so identical inputs give byte-identical output.
"""

import csv
import hashlib
import io
import json
from fractions import Fraction
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field

from .config import ENGINE_VERSION
from .tables import Estimate, InvariantTable

SCHEMA_VERSION = 1

CSV_COLUMNS = ["e", "q", "length", "normalized_num", "normalized_den"]


def fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


class RowModel(BaseModel):
    """One per-e sample"""
    e: int
    q: str = Field(description="p^e as a decimal string")
    length: str = Field(description="exact colength as a decimal string")
    normalized: str = Field(description="length / (scale * q^d) as num/den")
    normalized_float: float
    t: Optional[int] = Field(default=None, description="chain index where the row stabilized")


class TableModel(BaseModel):
    kind: str
    p: int
    d: int
    scale: int = 1
    rows: List[RowModel] = Field(default_factory=list)
    diagnostics: Dict[str, Any] = Field(default_factory=dict)


class EstimateModel(BaseModel):
    """Two-term limit fit"""
    eta: str
    eta_float: float
    alpha: str
    error_bound: float
    model: str
    samples_used: List[int]
    residual: float
    envelope: float
    clamped: bool = False


class Report(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema")
    command: str
    flags: Dict[str, Any] = Field(default_factory=dict)
    input_hash: str
    engine_version: str = ENGINE_VERSION
    result: Dict[str, Any] = Field(default_factory=dict)
    tables: List[TableModel] = Field(default_factory=list)
    estimates: Dict[str, EstimateModel] = Field(default_factory=dict)
    diagnostics: Dict[str, Any] = Field(default_factory=dict)

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2) + "\n"

    def to_csv(self) -> str:
        """One CSV block per table; blocks after the first are preceded by a blank line"""
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        for i, table in enumerate(self.tables):
            if i:
                out.write("\n")
            writer.writerow(CSV_COLUMNS)
            for row in table.rows:
                num, den = row.normalized.split("/")
                writer.writerow([row.e, row.q, row.length, num, den])
        return out.getvalue()


def table_model(table: InvariantTable) -> TableModel:
    return TableModel(
        kind=table.kind,
        p=table.p,
        d=table.d,
        scale=table.scale,
        rows=[
            RowModel(
                e=r.e,
                q=str(r.q),
                length=str(r.length),
                normalized=fraction_text(r.normalized),
                normalized_float=float(r.normalized),
                t=r.t,
            )
            for r in table.rows
        ],
        diagnostics=dict(table.diagnostics),
    )


def estimate_model(estimate: Estimate) -> EstimateModel:
    return EstimateModel(
        eta=fraction_text(estimate.eta),
        eta_float=float(estimate.eta),
        alpha=fraction_text(estimate.alpha),
        error_bound=estimate.error_bound,
        model=estimate.model,
        samples_used=list(estimate.samples_used),
        residual=estimate.residual,
        envelope=estimate.envelope,
        clamped=estimate.clamped,
    )


def input_hash(command: str, ring_text: str, flags: Dict[str, Any]) -> str:
    digest = hashlib.sha256()
    digest.update(command.encode("utf-8"))
    digest.update(b"\0")
    digest.update(ring_text.encode("utf-8"))
    digest.update(b"\0")
    digest.update(json.dumps(flags, sort_keys=True, default=str).encode("utf-8"))
    return digest.hexdigest()
