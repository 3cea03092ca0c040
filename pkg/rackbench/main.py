from datetime import datetime, timezone
from typing import Optional

from fastapi import FastAPI, HTTPException, Query, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse

from rackbench.config import get_settings
from rackbench.errors import BudgetExceededError, InputParseError, RackbenchError
from rackbench.models import (
    AutResponse,
    CayleyMode,
    CayleyRequest,
    CheckResponse,
    ErrorResponse,
    GraphPayload,
    HealthResponse,
    LabeledPayload,
    MagmaPayload,
    ReflectionsResponse,
    ReportFormat,
)
from rackbench.services.census import census_service
from rackbench.services.fixtures import fixtures_service
from rackbench.utils.algebra import RightQuasigroup, check_report
from rackbench.utils.cayley import (
    cayley_digraph,
    cayley_graph,
    is_marking,
    marking_condition_digraph,
    marking_condition_graph,
    marking_of,
)
from rackbench.utils.excel import generate_csv_report, generate_excel_report
from rackbench.utils.graphs import automorphism_group
from rackbench.utils.io import FAMILIES, family_graph, graph_from_json, labeled_from_json, magma_from_json
from rackbench.utils.labeled import ClassReport, classify, labeled_cayley

settings = get_settings()

app = FastAPI(
    title=settings.app_name,
    version=settings.app_version,
    description="Racks, quandles, Cayley graphs and rack/quandle marking censuses of finite graphs.",
    docs_url="/docs",
    redoc_url="/redoc",
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.cors_origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(RackbenchError)
async def rackbench_error_handler(request: Request, exc: RackbenchError) -> JSONResponse:
    status = 503 if isinstance(exc, BudgetExceededError) else 400
    body = ErrorResponse(detail=exc.detail, error_code=exc.error_code)
    return JSONResponse(status_code=status, content=body.model_dump())


@app.on_event("startup")
async def startup_event():
    """Check settings and load the bundled examples on startup."""
    invalid = settings.validate_required()
    if invalid:
        raise RuntimeError(f"Invalid config: {', '.join(invalid)}")
    fixtures_service.load()


@app.get("/")
async def root():
    """API health check and info."""
    return {
        "name": settings.app_name,
        "version": settings.app_version,
        "status": "operational",
        "docs_url": "/docs",
    }


@app.post("/api/check", response_model=CheckResponse)
def check_magma(magma: MagmaPayload):
    """Every axiom predicate for a magma given by its right-multiplication rows."""
    m = magma_from_json(magma.model_dump())
    return CheckResponse(order=m.order, **check_report(m))


@app.post("/api/classify", response_model=ClassReport)
def classify_labeled(labeled: LabeledPayload):
    return classify(labeled_from_json(labeled.model_dump()))


@app.post("/api/cayley")
def cayley(request: CayleyRequest):
    """Cayley digraph, Cayley graph or labeled Cayley digraph of a magma."""
    magma = magma_from_json(request.magma.model_dump())
    subset = sorted(set(request.subset))
    if request.mode == CayleyMode.LABELED:
        return {"mode": request.mode.value, "graph": labeled_cayley(magma, subset).to_json()}

    directed = request.mode == CayleyMode.DIRECTED
    graph = cayley_digraph(magma, subset) if directed else cayley_graph(magma, subset)
    body = {"mode": request.mode.value, "graph": graph.to_json()}
    if isinstance(magma, RightQuasigroup):
        condition = marking_condition_digraph if directed else marking_condition_graph
        body["is_marking"] = is_marking(marking_of(magma, subset, directed=directed))
        body["marking_condition"] = condition(magma, subset)
    return body


@app.post("/api/aut", response_model=AutResponse)
def automorphisms(graph: GraphPayload):
    group = automorphism_group(graph_from_json(graph.model_dump()))
    return AutResponse(
        degree=group.degree,
        order=group.order(),
        elements=[list(p.images) for p in group.elements()],
    )


@app.get("/api/census")
def census(
    family: str = Query(..., description=f"One of: {', '.join(FAMILIES)}"),
    n: int = Query(..., ge=0, description="Number of vertices"),
    budget_seconds: Optional[float] = Query(None, gt=0),
    jobs: Optional[int] = Query(None, ge=1),
    quandles_only: bool = Query(False),
):
    """Count the markings of a named graph that realize racks and quandles."""
    graph = family_graph(family, n)
    result = census_service.mu_census(
        graph, budget_seconds=budget_seconds, jobs=jobs, quandles_only=quandles_only,
    )
    return result.to_json()


@app.get("/api/reflections/{n}", response_model=ReflectionsResponse)
def reflection_markings(n: int):
    markings = census_service.reflection_markings(n)
    return ReflectionsResponse(
        n=n,
        count=len(markings),
        markings=[[list(p.images) for p in m.assignment] for m in markings],
    )


@app.get("/api/table1")
def table1(
    format: ReportFormat = Query(ReportFormat.JSON, description="Output format: json, csv, or xlsx"),
    max_complete: Optional[int] = Query(None, ge=0),
    max_star: Optional[int] = Query(None, ge=1),
    max_cycle: Optional[int] = Query(None, ge=3),
    columns: Optional[int] = Query(None, ge=1),
):
    """
    Rack and quandle marking counts for complete graphs, stars and cycles.

    Cells past the per-family maximum or the per-cell time budget are "?".
    """
    max_orders = {
        family: value
        for family, value in (("complete", max_complete), ("star", max_star), ("cycle", max_cycle))
        if value is not None
    }
    result = census_service.census_table1(max_orders=max_orders, columns=columns)

    if format == ReportFormat.XLSX:
        excel_file = generate_excel_report(result, datetime.now(timezone.utc))
        return StreamingResponse(
            excel_file,
            media_type="application/vnd.openxmlformats-officedocument.spreadsheetml.sheet",
            headers={"Content-Disposition": "attachment; filename=table1.xlsx"},
        )

    if format == ReportFormat.CSV:
        return Response(
            content=generate_csv_report(result),
            media_type="text/csv",
            headers={"Content-Disposition": "attachment; filename=table1.csv"},
        )

    return result.model_dump(mode="json")


@app.get("/api/examples")
def examples():
    return {"examples": fixtures_service.names()}


@app.get("/api/examples/{name}")
def example(name: str):
    try:
        data = fixtures_service.get(name)
    except InputParseError as e:
        raise HTTPException(status_code=404, detail=e.detail)
    magma = magma_from_json(data)
    return {**data, "right_mult": [list(row) for row in magma.right_mult]}


@app.get("/api/health", response_model=HealthResponse)
def health_check():
    invalid = settings.validate_required()
    return HealthResponse(
        status="healthy" if not invalid else "degraded",
        timestamp=datetime.now(timezone.utc),
        invalid_settings=invalid,
        examples=len(fixtures_service.names()),
    )


if __name__ == "__main__":
    import uvicorn

    uvicorn.run(app, host="0.0.0.0", port=8000)
