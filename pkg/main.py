"""
FastAPI application exposing the Lelek fan dynamics pipelines
"""
import logging
from fractions import Fraction
from typing import List, Literal, Optional

from fastapi import FastAPI, HTTPException, Query
from fastapi.responses import Response
from pydantic import BaseModel

from config import configure_logging, settings
from models.errors import CapExceeded, LelekError
from models.intervals import IntervalUnion
from models.rational import format_rational, parse_rational, rational_to_json
from models.relation import Profile, SlopeSet
from models.schemas import SpecificationModel, TraceCertificateModel, TruncatedPointModel
from services.dynamics_service import DynamicsService

configure_logging()
logger = logging.getLogger(__name__)

app = FastAPI(
    title="Lelek Fan Dynamics API",
    description="Exact computations on Mahavier products of finite unions of lines",
    version="1.0.0",
    docs_url="/docs",
    redoc_url="/redoc",
)

# Created on first request so that importing the app stays cheap
dynamics_service = None


def get_service() -> DynamicsService:
    """Get or create the DynamicsService instance (lazy initialization)"""
    global dynamics_service
    if dynamics_service is None:
        dynamics_service = DynamicsService()
    return dynamics_service


def _http_error(e: Exception, label: str) -> HTTPException:
    if isinstance(e, CapExceeded):
        return HTTPException(status_code=422, detail={"inconclusive": True, "error": str(e), "cap": e.cap})
    if isinstance(e, LelekError):
        return HTTPException(status_code=400, detail=str(e))
    logger.error(f"Error in {label}: {e}")
    return HTTPException(status_code=500, detail=str(e))


def _intervals(pairs: List[List[str]]) -> IntervalUnion:
    return IntervalUnion.of((parse_rational(lo), parse_rational(hi)) for lo, hi in pairs)


# Request models
class NcCheckRequest(BaseModel):
    r: str
    rho: str


class ValidateRequest(BaseModel):
    slopes: str
    profile: Profile = Profile.LF_INDUCING


class ImageRequest(BaseModel):
    slopes: str
    intervals: List[List[str]]
    direction: Literal["forward", "inverse"] = "forward"


class IterateRequest(ImageRequest):
    n: int = 1


class SeriesRequest(BaseModel):
    slopes: str
    intervals: List[List[str]]
    n_max: int = 40


class DiagPowerRequest(BaseModel):
    slopes: str
    n_max: int = 20


class TraceRequest(BaseModel):
    slopes: str = "3,1,1/2"
    spec: SpecificationModel
    eps: str


class VerifyTraceRequest(BaseModel):
    slopes: str = "3,1,1/2"
    spec: SpecificationModel
    certificate: TraceCertificateModel


class PseudoOrbitRequest(BaseModel):
    slopes: str = "3,1,1/2"
    kind: Literal["staircase", "diagonal"] = "staircase"
    n0: Optional[int] = None
    word: Optional[List[str]] = None
    a: Optional[str] = None
    delta: Optional[str] = None


class NoShadowRequest(PseudoOrbitRequest):
    eps: str
    horizon: int
    depth: int


class PointRequest(BaseModel):
    slopes: str
    point: TruncatedPointModel
    eps: str


def _pseudo_orbit(service: DynamicsService, request: PseudoOrbitRequest, omega: SlopeSet):
    return service.pseudo_orbit(
        request.kind,
        omega,
        n0=request.n0,
        word=[parse_rational(w) for w in request.word] if request.word else None,
        a=parse_rational(request.a) if request.a is not None else None,
        delta=parse_rational(request.delta) if request.delta is not None else None,
    )


@app.get("/")
async def root():
    """Root endpoint - shows API information"""
    return {
        "service": "Lelek Fan Dynamics API",
        "version": "1.0.0",
        "status": "running",
        "endpoints": {
            "health": ["/health", "/api/v1/health"],
            "nc_check": ["/nc-check", "/api/v1/nc-check"],
            "validate": ["/validate", "/api/v1/validate"],
            "image": ["/image", "/api/v1/image"],
            "iterate": ["/iterate", "/api/v1/iterate"],
            "hausdorff_series": ["/hausdorff-series", "/api/v1/hausdorff-series"],
            "diag_power": ["/diag-power", "/api/v1/diag-power"],
            "trace": ["/trace", "/api/v1/trace"],
            "verify_trace": ["/verify-trace", "/api/v1/verify-trace"],
            "pseudo_orbit": ["/pseudo-orbit", "/api/v1/pseudo-orbit"],
            "no_shadow": ["/no-shadow", "/api/v1/no-shadow"],
            "periodic": ["/periodic", "/api/v1/periodic"],
            "endpoint": ["/endpoint", "/api/v1/endpoint"],
            "fan": ["/fan.svg", "/api/v1/fan.svg"],
            "docs": "/docs",
        },
    }


@app.get("/health")
@app.get("/api/v1/health")
async def health_check():
    """Health check endpoint - does not build the service"""
    return {
        "status": "healthy",
        "service": "lelek-fan-dynamics",
        "version": "1.0.0",
        "service_initialized": dynamics_service is not None,
    }


@app.post("/nc-check")
@app.post("/api/v1/nc-check")
def nc_check(request: NcCheckRequest):
    try:
        result = get_service().nc_check(parse_rational(request.r), parse_rational(request.rho))
        return {"success": True, **result}
    except Exception as e:
        raise _http_error(e, "nc-check")


@app.post("/validate")
@app.post("/api/v1/validate")
def validate(request: ValidateRequest):
    try:
        report = get_service().validate(SlopeSet.parse(request.slopes), request.profile)
        return {"success": True, "report": report.to_json()}
    except Exception as e:
        raise _http_error(e, "validate")


@app.post("/image")
@app.post("/api/v1/image")
def image(request: ImageRequest):
    try:
        result = get_service().iterate(SlopeSet.parse(request.slopes), _intervals(request.intervals), 1, request.direction)
        return {"success": True, "image": result.to_json(), "text": str(result)}
    except Exception as e:
        raise _http_error(e, "image")


@app.post("/iterate")
@app.post("/api/v1/iterate")
def iterate(request: IterateRequest):
    try:
        result = get_service().iterate(
            SlopeSet.parse(request.slopes), _intervals(request.intervals), request.n, request.direction
        )
        return {"success": True, "n": request.n, "image": result.to_json(), "count": len(result)}
    except Exception as e:
        raise _http_error(e, "iterate")


@app.post("/hausdorff-series")
@app.post("/api/v1/hausdorff-series")
def hausdorff_series(request: SeriesRequest):
    try:
        series = get_service().hausdorff_series(
            SlopeSet.parse(request.slopes), _intervals(request.intervals), request.n_max
        )
        return {"success": True, **series.to_json()}
    except Exception as e:
        raise _http_error(e, "hausdorff-series")


@app.post("/diag-power")
@app.post("/api/v1/diag-power")
def diag_power(request: DiagPowerRequest):
    try:
        result = get_service().diag_power(SlopeSet.parse(request.slopes), request.n_max)
        return {
            "success": True,
            "powers": {str(n): hit for n, hit in result["powers"].items()},
            "eventual_threshold": result["eventual_threshold"],
        }
    except Exception as e:
        raise _http_error(e, "diag-power")


@app.post("/trace")
@app.post("/api/v1/trace")
def trace(request: TraceRequest):
    try:
        omega = SlopeSet.parse(request.slopes)
        _, certificate = get_service().trace(omega, request.spec.to_domain(), parse_rational(request.eps))
        return {"success": True, "certificate": certificate.to_json()}
    except Exception as e:
        raise _http_error(e, "trace")


@app.post("/verify-trace")
@app.post("/api/v1/verify-trace")
def verify_trace(request: VerifyTraceRequest):
    try:
        omega = SlopeSet.parse(request.slopes)
        certificate = request.certificate.to_domain(omega)
        return {"success": True, "valid": get_service().verify_trace(request.spec.to_domain(), certificate)}
    except Exception as e:
        raise _http_error(e, "verify-trace")


@app.post("/pseudo-orbit")
@app.post("/api/v1/pseudo-orbit")
def pseudo_orbit(request: PseudoOrbitRequest):
    try:
        po, valid = _pseudo_orbit(get_service(), request, SlopeSet.parse(request.slopes))
        return {
            "success": True,
            "delta": rational_to_json(po.delta),
            "valid": valid,
            "points": [p.to_json() for p in po.points],
        }
    except Exception as e:
        raise _http_error(e, "pseudo-orbit")


@app.post("/no-shadow")
@app.post("/api/v1/no-shadow")
def no_shadow(request: NoShadowRequest):
    try:
        service = get_service()
        omega = SlopeSet.parse(request.slopes)
        po, _ = _pseudo_orbit(service, request, omega)
        result = service.no_shadow(omega, po, parse_rational(request.eps), request.horizon, request.depth)
        body = {"success": True, "status": result.status}
        if result.feasible:
            body["witness"] = result.witness.to_json()
        else:
            body["certificate"] = result.certificate.to_json()
        return body
    except Exception as e:
        raise _http_error(e, "no-shadow")


@app.post("/periodic")
@app.post("/api/v1/periodic")
def periodic(request: PointRequest):
    try:
        omega = SlopeSet.parse(request.slopes)
        z, period = get_service().periodic(omega, request.point.to_domain(omega), parse_rational(request.eps))
        return {"success": True, "period": period, "point": z.to_json()}
    except Exception as e:
        raise _http_error(e, "periodic")


@app.post("/endpoint")
@app.post("/api/v1/endpoint")
def endpoint(request: PointRequest):
    try:
        omega = SlopeSet.parse(request.slopes)
        point = get_service().endpoint(omega, request.point.to_domain(omega), parse_rational(request.eps))
        return {"success": True, "point": point.to_json(), "top": format_rational(max(point.coords, default=Fraction(0)))}
    except Exception as e:
        raise _http_error(e, "endpoint")


@app.get("/fan.svg")
@app.get("/api/v1/fan.svg")
def fan_svg(slopes: str = Query("1/2,3"), depth: int = Query(3, ge=1)):
    try:
        rendering = get_service().fan(SlopeSet.parse(slopes), depth)
        return Response(content=rendering.svg(), media_type="image/svg+xml")
    except Exception as e:
        raise _http_error(e, "fan-svg")


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(
        "main:app",
        host=settings.host,
        port=settings.port,
        reload=settings.debug
    )
