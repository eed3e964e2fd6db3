"""
frobkit HTTP service
A small FastAPI wrapper around the frobkit command runner. Every request
carries its own ring file text; nothing is stored between requests.
"""

import logging
import os
from typing import List

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from frobkit import config
from frobkit.cli import COMMAND_FLAGS, COMMANDS, CommandFlags, configure_logging, run_command
from frobkit.errors import FrobkitError

# CORS configuration from environment
# Default allows localhost only
CORS_ORIGINS = os.getenv("CORS_ORIGINS", "http://localhost:*,https://localhost:*").split(",")

configure_logging()
logger = logging.getLogger("frobkit.service")

app = FastAPI(
    title="frobkit",
    description="Hilbert-Kunz and F-signature computations over prime fields",
    version=config.ENGINE_VERSION,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=CORS_ORIGINS if CORS_ORIGINS != ["*"] else ["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# exit code -> HTTP status
STATUS_BY_EXIT_CODE = {1: 400, 2: 422, 3: 503}


# Request/Response models
class ComputeRequest(BaseModel):
    """One command over one ring file"""
    command: str = Field(description="one of the commands listed by GET /v1/commands")
    ring_file: str = Field(description="ring file text")
    flags: CommandFlags = Field(default_factory=CommandFlags)


class CommandInfo(BaseModel):
    name: str
    flags: List[str]


@app.get("/health")
async def health():
    """Health check endpoint"""
    return {
        "status": "ok",
        "engine_version": config.ENGINE_VERSION,
        "max_reductions": config.MAX_REDUCTIONS,
        "max_spairs": config.MAX_SPAIRS,
        "timeout_seconds": config.TIMEOUT_SECONDS,
    }


@app.get("/v1/commands", response_model=List[CommandInfo])
async def commands():
    """Available commands and the flags each one reads"""
    return [CommandInfo(name=name, flags=COMMAND_FLAGS[name]) for name in COMMANDS]


@app.post("/v1/compute")
def compute(request: ComputeRequest):
    """Run a command and return its JSON report"""
    if request.command not in COMMANDS:
        raise HTTPException(status_code=400, detail=f"unknown command '{request.command}'")
    try:
        report = run_command(request.command, request.ring_file, request.flags, source="<request>")
    except FrobkitError as e:
        logger.warning("%s failed: %s", request.command, e.message)
        detail = e.to_dict()
        partial = getattr(e, "report", None)
        if partial is not None:
            detail["partial"] = partial.model_dump(by_alias=True)
        raise HTTPException(status_code=STATUS_BY_EXIT_CODE.get(e.exit_code, 422), detail=detail)
    return report.model_dump(by_alias=True)


if __name__ == "__main__":
    import uvicorn
    uvicorn.run(app, host="127.0.0.1", port=int(os.getenv("FROBKIT_PORT", "8091")))
