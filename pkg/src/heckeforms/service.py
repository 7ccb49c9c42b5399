"""HTTP front end: one POST endpoint per operation, sharing the api layer
with the CLI so both produce identical text and JSON."""

from typing import Any, Dict, List, Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import api
from .errors import ConsistencyError, DomainError, HeckeError, ParseError, UsageError

app = FastAPI(title="heckeforms", description="Reduction theory of binary "
              "quadratic forms over Z[lambda_p] for Hecke groups.")


class GroupCheckRequest(BaseModel):
    p: int
    precision_start: int = api.DEFAULT_START_BITS


class NumberRequest(BaseModel):
    p: int
    number: str
    max_steps: int = 10000
    precision_start: int = api.DEFAULT_START_BITS


class CfRequest(BaseModel):
    p: int
    cf: str
    max_steps: int = 10000
    precision_start: int = api.DEFAULT_START_BITS


class FormRequest(BaseModel):
    p: int
    form: str
    max_steps: int = 10000
    precision_start: int = api.DEFAULT_START_BITS


class FormPairRequest(BaseModel):
    p: int
    form: str
    other: str
    with_witness: bool = False
    max_steps: int = 10000
    precision_start: int = api.DEFAULT_START_BITS


class FormActRequest(BaseModel):
    p: int
    form: str
    word: Optional[str] = None
    matrix: Optional[Dict[str, Any]] = None
    precision_start: int = api.DEFAULT_START_BITS


class OpResponse(BaseModel):
    result: Dict[str, Any]
    text: List[str]


@app.exception_handler(HeckeError)
async def hecke_error_handler(_request, exc):
    if isinstance(exc, ConsistencyError):
        return JSONResponse(status_code=500, content={
            "detail": {"kind": "consistency", "message": str(exc)}})
    if isinstance(exc, ParseError):
        kind = "parse"
    elif isinstance(exc, UsageError):
        kind = "usage"
    elif isinstance(exc, DomainError):
        kind = "domain"
    else:
        kind = "error"
    detail = {"kind": kind, "message": str(exc)}
    if isinstance(exc, ParseError) and exc.position is not None:
        detail["position"] = exc.position
    return JSONResponse(status_code=400, content={"detail": detail})


def _ctx(req):
    return api.get_context(req.p, start_bits=req.precision_start)


@app.post("/group/check", response_model=OpResponse)
async def group_check(req: GroupCheckRequest):
    return api.op_group_check(_ctx(req))


@app.post("/cf/expand", response_model=OpResponse)
async def cf_expand(req: NumberRequest):
    return api.op_cf_expand(_ctx(req), req.number, req.max_steps)


@app.post("/cf/eval", response_model=OpResponse)
async def cf_eval(req: CfRequest):
    return api.op_cf_eval(_ctx(req), req.cf, req.max_steps)


@app.post("/form/reduce", response_model=OpResponse)
async def form_reduce(req: FormRequest):
    return api.op_form_reduce(_ctx(req), req.form, req.max_steps)


@app.post("/form/cycle", response_model=OpResponse)
async def form_cycle(req: FormRequest):
    return api.op_form_cycle(_ctx(req), req.form, req.max_steps)


@app.post("/form/equiv", response_model=OpResponse)
async def form_equiv(req: FormPairRequest):
    return api.op_form_equiv(_ctx(req), req.form, req.other, req.max_steps,
                             req.with_witness)


@app.post("/form/act", response_model=OpResponse)
async def form_act(req: FormActRequest):
    return api.op_form_act(_ctx(req), req.form, req.word, req.matrix)


@app.post("/number/of-form", response_model=OpResponse)
async def number_of_form(req: FormRequest):
    return api.op_number_of_form(_ctx(req), req.form)


@app.post("/form/of-number", response_model=OpResponse)
async def form_of_number(req: NumberRequest):
    return api.op_form_of_number(_ctx(req), req.number, req.max_steps)


@app.post("/simple/set", response_model=OpResponse)
async def simple_set_endpoint(req: FormRequest):
    return api.op_simple_set(_ctx(req), req.form, req.max_steps)


@app.post("/phi/apply", response_model=OpResponse)
async def phi_apply_endpoint(req: NumberRequest):
    return api.op_phi_apply(_ctx(req), req.number)


@app.post("/phi/orbit", response_model=OpResponse)
async def phi_orbit_endpoint(req: NumberRequest):
    return api.op_phi_orbit(_ctx(req), req.number, req.max_steps)


@app.post("/stabilizer", response_model=OpResponse)
async def stabilizer_endpoint(req: NumberRequest):
    return api.op_stabilizer(_ctx(req), req.number, req.max_steps)
