import logging
from typing import Any, Dict, List, Optional, Tuple

from fastapi import FastAPI, HTTPException
from fastapi.concurrency import run_in_threadpool
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field, ValidationError

from casimir import __version__
from casimir.catalog import BUILTIN, resolve_material
from casimir.config import make_config
from casimir.errors import CasimirError
from casimir.sweeps import QUANTITY_UNITS, Geometry, SweepQuantity, SweepSpec, compute_point, run_band, run_scan
from casimir.thermo import nernst_scan

logger = logging.getLogger("casimir.api")

app = FastAPI(title="casimir API", description="Lifshitz-theory Casimir free energy, pressure and entropy",
              version=__version__)

# Enable CORS for browser clients
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["*"],
    allow_headers=["*"],
)


class Numerics(BaseModel):
    rel_tol: Optional[float] = None
    y_max_offset: Optional[float] = None
    l_max_cap: Optional[int] = None
    euler_maclaurin_from: Optional[int] = None


class ComputeRequest(BaseModel):
    model: str = "ideal-metal"
    model2: Optional[str] = None
    a: float = Field(gt=0, description="separation (m)")
    T: float = Field(300.0, ge=0, description="K; 0 selects the zero-temperature integrals")
    quantity: SweepQuantity = SweepQuantity.PRESSURE
    geometry: Geometry = Field(default_factory=Geometry)
    convention: str = "at_T"
    numerics: Numerics = Field(default_factory=Numerics)


class ScanRequest(BaseModel):
    model: str = "ideal-metal"
    model2: Optional[str] = None
    sweep: SweepSpec
    numerics: Numerics = Field(default_factory=Numerics)
    jobs: int = Field(1, ge=1, le=32)


class BandRequest(ScanRequest):
    parameter: str = "omega_p"
    interval: Tuple[float, float]
    samples: int = Field(3, ge=1)


class NernstRequest(BaseModel):
    model: str = "ideal-metal"
    model2: Optional[str] = None
    a: float = Field(gt=0)
    t_grid: List[float] = Field(default_factory=lambda: [30.0, 15.0, 7.5, 3.0, 1.5, 0.75, 0.2])
    numerics: Numerics = Field(default_factory=Numerics)
    jobs: int = Field(1, ge=1, le=32)


def _models(model: str, model2: Optional[str]):
    m1 = resolve_material(model)
    return m1, (resolve_material(model2) if model2 else m1)


def _config(numerics: Numerics, temperature: float):
    return make_config(temperature=temperature, **numerics.model_dump())


async def _guarded(func, *args):
    """Runs a blocking computation off the event loop, mapping library errors to 400."""
    try:
        return await run_in_threadpool(func, *args)
    except (CasimirError, ValidationError) as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.exception("Unhandled failure")
        raise HTTPException(status_code=500, detail=str(e))


@app.get("/")
async def root():
    return {"message": "casimir backend is running", "version": __version__}


@app.get("/materials")
async def list_materials():
    out = {}
    for name, factory in BUILTIN.items():
        model = factory()
        out[name] = {"type": model.type.value, "parameters": {k: p.value for k, p in model.parameters().items()}}
    return out


@app.post("/compute")
async def compute(request: ComputeRequest):
    def work() -> Dict[str, Any]:
        m1, m2 = _models(request.model, request.model2)
        cfg = _config(request.numerics, request.T)
        out = compute_point(request.quantity, request.a, request.T, m1, m2, cfg, request.geometry,
                            request.convention)
        return {"quantity": request.quantity.value, "units": QUANTITY_UNITS[request.quantity], "a": request.a,
                "T": request.T, "model1": m1.name, "model2": m2.name, **out}

    return await _guarded(work)


@app.post("/scan")
async def scan(request: ScanRequest):
    def work():
        m1, m2 = _models(request.model, request.model2)
        frame = run_scan(request.sweep, m1, m2, _config(request.numerics, request.sweep.temperature), request.jobs)
        return {"columns": list(frame.columns),
                "rows": frame.astype(object).where(frame.notna(), None).values.tolist()}

    return await _guarded(work)


@app.post("/band")
async def band(request: BandRequest):
    def work():
        m1, m2 = _models(request.model, request.model2)
        result = run_band(request.sweep, m1, m2, request.parameter, request.interval,
                          _config(request.numerics, request.sweep.temperature), request.samples, request.jobs)
        return result.model_dump(mode="json")

    return await _guarded(work)


@app.post("/nernst")
async def nernst(request: NernstRequest):
    def work():
        m1, m2 = _models(request.model, request.model2)
        cfg = _config(request.numerics, request.t_grid[0] if request.t_grid else 300.0)
        return nernst_scan(request.a, m1, m2, request.t_grid, cfg, request.jobs).model_dump(mode="json")

    return await _guarded(work)


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="0.0.0.0", port=8000)
