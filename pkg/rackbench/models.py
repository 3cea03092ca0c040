from datetime import datetime
from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, Field, model_validator


class CellStatus(str, Enum):
    OK = "ok"
    UNKNOWN = "?"
    UNDEFINED = "-"


class OutputFormat(str, Enum):
    JSON = "json"
    TABLE = "table"


class ReportFormat(str, Enum):
    JSON = "json"
    CSV = "csv"
    XLSX = "xlsx"


class CayleyMode(str, Enum):
    DIRECTED = "directed"
    UNDIRECTED = "undirected"
    LABELED = "labeled"


class CensusProgress(BaseModel):
    nodes_visited: int = 0
    leaves: int = 0
    racks: int = 0
    quandles: int = 0
    elapsed: float = 0.0

    def merge(self, other: "CensusProgress") -> "CensusProgress":
        return CensusProgress(
            nodes_visited=self.nodes_visited + other.nodes_visited,
            leaves=self.leaves + other.leaves,
            racks=self.racks + other.racks,
            quandles=self.quandles + other.quandles,
            elapsed=max(self.elapsed, other.elapsed),
        )


class CensusResult(BaseModel):
    mu_rack: Optional[int] = Field(None, description="None when only q-markings were searched")
    mu_qnd: int
    total_markings: int
    elapsed: float = Field(description="seconds")
    nodes_explored: int = Field(0, description="search nodes visited")
    leaves: int = Field(0, description="complete assignments reached")

    @model_validator(mode="after")
    def _check_counts(self) -> "CensusResult":
        ceiling = self.total_markings if self.mu_rack is None else self.mu_rack
        if not 0 <= self.mu_qnd <= ceiling <= self.total_markings:
            raise ValueError(
                f"inconsistent counts: mu_qnd={self.mu_qnd}, mu_rack={self.mu_rack}, "
                f"total={self.total_markings}"
            )
        if self.leaves > self.total_markings:
            raise ValueError(f"{self.leaves} leaves exceed {self.total_markings} markings")
        return self

    def counts(self) -> tuple[Optional[int], int]:
        return self.mu_rack, self.mu_qnd

    def to_json(self) -> dict:
        return {
            "mu_rack": self.mu_rack,
            "mu_qnd": self.mu_qnd,
            "total_markings": self.total_markings,
            "elapsed_ms": int(round(self.elapsed * 1000)),
        }


class Table1Cell(BaseModel):
    family: str
    n: int
    status: CellStatus
    mu_rack: Optional[int] = None
    mu_qnd: Optional[int] = None

    def text(self) -> str:
        if self.status == CellStatus.OK:
            return f"({self.mu_rack},{self.mu_qnd})"
        return self.status.value


class Table1(BaseModel):
    columns: int
    rows: dict[str, list[Table1Cell]]


class MagmaPayload(BaseModel):
    order: int
    right_mult: list[list[int]]


class CheckResponse(BaseModel):
    order: int
    right_cancellative: bool
    right_divisible: bool
    right_quasigroup: bool
    rack: bool
    quandle: bool
    involutory: bool
    kei: bool
    rack_via_hom: bool
    closed_under_conjugation: bool


class CayleyRequest(BaseModel):
    magma: MagmaPayload
    subset: list[int]
    mode: CayleyMode = CayleyMode.DIRECTED


class GraphPayload(BaseModel):
    kind: str = "graph"
    order: int
    edges: list[list[int]] = []


class LabeledPayload(BaseModel):
    order: int
    labels: list[int] = []
    edges: list[list[int]] = []


class AutResponse(BaseModel):
    degree: int
    order: int
    elements: list[list[int]]


class CayleyResponse(BaseModel):
    mode: CayleyMode
    graph: dict[str, Any]
    is_marking: Optional[bool] = None
    marking_condition: Optional[bool] = None


class ReflectionsResponse(BaseModel):
    n: int
    count: int
    markings: list[list[list[int]]]


class HealthResponse(BaseModel):
    status: str
    timestamp: datetime
    invalid_settings: list[str]
    examples: int


class ErrorResponse(BaseModel):
    detail: str
    error_code: Optional[str] = None
