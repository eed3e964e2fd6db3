"""
frobkit command line.

    frobkit COMMAND RING_FILE [flags]

Reports go to stdout (JSON by default, CSV with --csv); logs go to stderr.
Exit codes: 0 success, 1 parse/IO error, 2 hypothesis failure, 3 budget.
"""

import argparse
import logging
import sys
from fractions import Fraction
from typing import Any, Callable, Dict, List, Literal, Optional

from pydantic import BaseModel, Field

from . import config
from .config import Budget
from .errors import BudgetExceeded, ChainExhausted, FrobkitError, InputError
from .groebner import buchberger, colength
from .ideals import RingPresentation
from .invariants import (
    SOP,
    fedder_hypersurface_oracle,
    find_sop,
    fsig_function_chain,
    fsig_function_gorenstein,
    fsig_ideals_gorenstein,
    fsig_hk_sequence,
    fsig_sequence,
    half_frobenius_sequence,
    hk_function,
    hk_sequence,
    relative_hk,
    sequence_limit,
    splitting_prime_probe,
    tc_membership,
)
from .pairs import PairSpec, pair_fsig_estimate, pair_fsig_function, parameter_power_chain
from .report import Report, estimate_model, input_hash, table_model
from .ringfile import RingFile, parse_ring_file, parse_ring_text
from .tables import InvariantTable, hk_estimate

logger = logging.getLogger(__name__)

FSIG_METHODS = ("gorenstein", "chain", "fedder")
BUILTIN_SEQUENCES = ("hk", "fsig", "half-frobenius", "fsig-hk")


class CommandFlags(BaseModel):
    """Flags shared by the CLI and the HTTP service"""
    emax: Optional[int] = Field(default=None, ge=1, description="largest Frobenius iterate; default 3 for p <= 3, else 2")
    tmax: int = Field(default=6, ge=1, description="chain budget; t for the fsig-hk sequence")
    order: Optional[Literal["grevlex", "lex", "grlex"]] = Field(default=None, description="monomial order override")
    seed: int = 0
    budget_reductions: Optional[int] = Field(default=None, ge=1)
    tau: float = Field(default=config.DEFAULT_TAU, ge=0)
    ideal: Optional[str] = Field(default=None, description="ideal name, 'm', or inline generators")
    element: Optional[str] = None
    pair_ideal: Optional[str] = None
    xi: str = "0"
    chain: Optional[str] = None
    sequence: Optional[str] = None
    method: Literal["gorenstein", "chain", "fedder"] = "gorenstein"
    threads: Optional[int] = Field(default=None, ge=1)

    def reported(self) -> Dict[str, Any]:
        """Flags echoed into reports; thread count never changes results"""
        return self.model_dump(exclude={"threads"})


class Context:
    """Everything a command handler needs"""

    def __init__(self, rf: RingFile, flags: CommandFlags):
        self.rf = rf
        self.flags = flags
        self.budget = Budget.from_config(max_reductions=flags.budget_reductions)
        self.R: RingPresentation = rf.presentation(self.budget, flags.order)
        self.emax = flags.emax or config.default_emax(rf.p)
        self.threads = flags.threads
        self.report: Dict[str, Any] = {"result": {}, "tables": [], "estimates": {}, "diagnostics": {}}

    def ideal(self, default: str = "m"):
        return self.rf.ideal(self.R, self.flags.ideal or default)

    def element(self):
        if not self.flags.element:
            raise InputError("this command needs --element")
        return self.rf.element(self.R, self.flags.element)

    def sop(self) -> SOP:
        sop = self.rf.system_of_parameters(self.R)
        if sop is None:
            sop = find_sop(self.R, self.flags.seed)
            self.report["diagnostics"]["sop_source"] = "search"
        else:
            self.report["diagnostics"]["sop_source"] = "file"
        self.report["result"]["sop"] = [str(f) for f in sop.elements]
        return sop

    def chain(self):
        if self.flags.chain:
            return self.rf.chain(self.R, self.flags.chain, self.flags.tmax)
        return parameter_power_chain(self.R, self.sop(), self.flags.tmax)

    def add_table(self, table: InvariantTable, estimate_name: Optional[str] = None, estimator=hk_estimate) -> None:
        self.report["tables"].append(table_model(table))
        if estimate_name is None:
            return
        if len(table.rows) >= 3:
            self.report["estimates"][estimate_name] = estimate_model(estimator(table))
        else:
            self.report["diagnostics"]["estimate"] = "insufficient samples"


# Command handlers

def cmd_gb(ctx: Context) -> None:
    if ctx.flags.ideal:
        handle = ctx.ideal().lift
    else:
        handle = ctx.R.Q
    if handle.generators:
        gb = buchberger(handle.generators, budget=ctx.budget)
        basis = gb.generators
        ctx.report["diagnostics"]["gb_stats"] = gb.stats.as_dict()
    else:
        basis = ()
    ctx.report["result"]["basis"] = [str(g) for g in basis]


def cmd_colength(ctx: Context) -> None:
    ctx.report["result"]["colength"] = str(colength(ctx.ideal().lift))


def cmd_hk(ctx: Context) -> None:
    table = hk_function(ctx.R, ctx.ideal(), ctx.emax, ctx.threads)
    ctx.add_table(table, "hk")


def cmd_fsig(ctx: Context) -> None:
    method = ctx.flags.method
    if method not in FSIG_METHODS:
        raise InputError(f"unknown fsig method '{method}', expected one of {', '.join(FSIG_METHODS)}")
    if method == "gorenstein":
        table = fsig_function_gorenstein(ctx.R, ctx.sop(), ctx.emax, ctx.threads)
        ctx.report["result"]["socle_generator"] = table.diagnostics.get("socle_generator")
    elif method == "chain":
        table = fsig_function_chain(ctx.R, ctx.chain(), ctx.emax, ctx.threads)
    else:
        table = fedder_hypersurface_oracle(ctx.R, ctx.emax, ctx.threads)
    ctx.add_table(table, "fsig")


def cmd_relhk(ctx: Context) -> None:
    table = relative_hk(ctx.R, ctx.ideal(), ctx.element(), ctx.emax, ctx.threads)
    ctx.add_table(table, "relhk")


def cmd_tc(ctx: Context) -> None:
    verdict = tc_membership(ctx.R, ctx.ideal(), ctx.element(), ctx.emax, ctx.flags.tau, ctx.threads)
    result = ctx.report["result"]
    result["status"] = verdict.status
    result["flags"] = dict(verdict.flags)
    if verdict.multiplier is not None:
        result["multiplier"] = [str(g) for g in verdict.multiplier.basis()]
    if verdict.table is not None:
        ctx.add_table(verdict.table)
    if verdict.estimate is not None:
        ctx.report["estimates"]["relhk"] = estimate_model(verdict.estimate)


def cmd_pair_fsig(ctx: Context) -> None:
    if not ctx.flags.pair_ideal:
        raise InputError("pair-fsig needs --pair-ideal")
    try:
        xi = Fraction(ctx.flags.xi)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad exponent --xi {ctx.flags.xi!r}") from exc
    spec = PairSpec.create(ctx.R, ctx.rf.ideal(ctx.R, ctx.flags.pair_ideal), xi)
    table = pair_fsig_function(spec, ctx.chain(), ctx.emax, ctx.threads)
    ctx.add_table(table, "pair_fsig", pair_fsig_estimate)


def _sequence(ctx: Context) -> List:
    name = ctx.flags.sequence or "hk"
    if name in ctx.rf.sequences:
        return ctx.rf.sequence(ctx.R, name, ctx.emax)
    if name == "hk":
        return hk_sequence(ctx.ideal(), ctx.emax)
    if name == "fsig":
        return fsig_sequence(ctx.R, ctx.sop(), ctx.emax)
    if name == "half-frobenius":
        return half_frobenius_sequence(ctx.ideal(), ctx.emax)
    if name == "fsig-hk":
        return fsig_hk_sequence(ctx.R, ctx.sop(), ctx.flags.tmax, ctx.emax)
    raise InputError(f"no sequence named '{name}'; built-ins are {', '.join(BUILTIN_SEQUENCES)}")


def cmd_seqlim(ctx: Context) -> None:
    result = sequence_limit(ctx.R, _sequence(ctx))
    ctx.add_table(result.table)
    ctx.report["estimates"]["limit"] = estimate_model(result.estimate)
    ctx.report["result"].update(
        intersection=[str(g) for g in result.intersection.basis()],
        stable_part=[str(g) for g in result.stable_part.basis()],
        stable_part_is_zero=result.stable_part_is_zero,
        intersection_colengths=[str(n) for n in result.intersection_colengths],
    )


def cmd_splitting_prime(ctx: Context) -> None:
    ideals = fsig_ideals_gorenstein(ctx.R, ctx.sop(), ctx.emax)
    result = splitting_prime_probe(ctx.R, ideals)
    ctx.add_table(result.table)
    ctx.report["estimates"]["splitting_ratio"] = estimate_model(result.rf_estimate)
    ctx.report["result"].update(
        splitting_prime=[str(g) for g in result.ideal.basis()],
        stabilized=result.stabilized,
        n_est=result.n_est,
        growth_n=result.table.diagnostics["growth_n"],
        intersection_colengths=[str(n) for n in result.intersection_colengths],
    )


COMMANDS: Dict[str, Callable[[Context], None]] = {
    "gb": cmd_gb,
    "colength": cmd_colength,
    "hk": cmd_hk,
    "fsig": cmd_fsig,
    "relhk": cmd_relhk,
    "tc": cmd_tc,
    "pair-fsig": cmd_pair_fsig,
    "seqlim": cmd_seqlim,
    "splitting-prime": cmd_splitting_prime,
}

COMMAND_FLAGS: Dict[str, List[str]] = {
    "gb": ["ideal", "order", "budget_reductions"],
    "colength": ["ideal", "order", "budget_reductions"],
    "hk": ["ideal", "emax", "order", "budget_reductions", "threads"],
    "fsig": ["method", "emax", "tmax", "chain", "seed", "order", "budget_reductions", "threads"],
    "relhk": ["ideal", "element", "emax", "order", "budget_reductions", "threads"],
    "tc": ["ideal", "element", "emax", "tau", "order", "budget_reductions", "threads"],
    "pair-fsig": ["pair_ideal", "xi", "emax", "tmax", "chain", "seed", "order", "budget_reductions", "threads"],
    "seqlim": ["sequence", "ideal", "emax", "tmax", "seed", "order", "budget_reductions"],
    "splitting-prime": ["emax", "seed", "order", "budget_reductions"],
}


def _report(command: str, rf_text: str, flags: CommandFlags, body: Dict[str, Any]) -> Report:
    reported = flags.reported()
    return Report(
        command=command,
        flags=reported,
        input_hash=input_hash(command, rf_text, reported),
        **body,
    )


def run_command(command: str, ring_text: str, flags: Optional[CommandFlags] = None, source: str = "<string>") -> Report:
    """
    Parse ``ring_text`` and run one command. A budget failure or an
    exhausted chain is re-raised with the partial report attached as
    ``exc.report``.
    """
    if command not in COMMANDS:
        raise InputError(f"unknown command '{command}', expected one of {', '.join(COMMANDS)}")
    flags = flags or CommandFlags()
    rf = parse_ring_text(ring_text, source=source)
    ctx = Context(rf, flags)
    logger.info("running %s on %s (emax=%d)", command, ctx.R, ctx.emax)
    try:
        COMMANDS[command](ctx)
    except (BudgetExceeded, ChainExhausted) as exc:
        if isinstance(exc.partial, InvariantTable):
            ctx.report["tables"].append(table_model(exc.partial))
        key = "budget_exceeded" if isinstance(exc, BudgetExceeded) else "chain_exhausted"
        ctx.report["diagnostics"][key] = exc.message
        exc.report = _report(command, ring_text, flags, ctx.report)
        raise
    return _report(command, ring_text, flags, ctx.report)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frobkit",
        description="Frobenius invariants of quotients of polynomial rings over prime fields.",
    )
    parser.add_argument("command", choices=list(COMMANDS), help="computation to run")
    parser.add_argument("ring_file", help="path to a ring file")
    parser.add_argument("--emax", type=int, help="largest Frobenius iterate e")
    parser.add_argument("--tmax", type=int, default=6, help="chain budget (t for the fsig-hk sequence)")
    parser.add_argument("--order", choices=["grevlex", "lex", "grlex"], help="monomial order override")
    parser.add_argument("--seed", type=int, default=0, help="seed for the system-of-parameters search")
    parser.add_argument("--budget-reductions", type=int, help="Groebner reduction budget per basis")
    parser.add_argument("--tau", type=float, default=config.DEFAULT_TAU, help="tight closure threshold")
    parser.add_argument("--ideal", help="ideal name, 'm', or inline generators")
    parser.add_argument("--element", help="element name or inline expression")
    parser.add_argument("--pair-ideal", help="ideal a of the pair (R, a^xi)")
    parser.add_argument("--xi", default="0", help="pair exponent as an exact rational, e.g. 1/2")
    parser.add_argument("--chain", help="name of a chain family in the ring file")
    parser.add_argument("--sequence", help=f"sequence family name or one of {', '.join(BUILTIN_SEQUENCES)}")
    parser.add_argument("--method", choices=FSIG_METHODS, default="gorenstein", help="F-signature method")
    parser.add_argument("--threads", type=int, help="parallel workers over e (results are identical)")
    output = parser.add_mutually_exclusive_group()
    output.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON report (default)")
    output.add_argument("--csv", dest="fmt", action="store_const", const="csv", help="CSV table rows")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("--quiet", action="store_true", help="only log errors")
    verbosity.add_argument("--verbose", action="store_true", help="debug logging")
    return parser


def configure_logging(quiet: bool = False, verbose: bool = False) -> None:
    level = config.LOG_LEVEL
    if quiet:
        level = "ERROR"
    elif verbose:
        level = "DEBUG"
    logging.basicConfig(
        stream=sys.stderr,
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def _emit(report: Report, fmt: Optional[str]) -> None:
    sys.stdout.write(report.to_csv() if fmt == "csv" else report.to_json())


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.quiet, args.verbose)
    try:
        flags = CommandFlags(
            emax=args.emax,
            tmax=args.tmax,
            order=args.order,
            seed=args.seed,
            budget_reductions=args.budget_reductions,
            tau=args.tau,
            ideal=args.ideal,
            element=args.element,
            pair_ideal=args.pair_ideal,
            xi=args.xi,
            chain=args.chain,
            sequence=args.sequence,
            method=args.method,
            threads=args.threads,
        )
    except ValueError as exc:
        logger.error("bad flags: %s", exc)
        return InputError.exit_code

    try:
        rf = parse_ring_file(args.ring_file)
        report = run_command(args.command, rf.text, flags, source=rf.source)
    except FrobkitError as exc:
        logger.error("%s: %s", type(exc).__name__, exc.message)
        partial = getattr(exc, "report", None)
        if partial is not None:
            _emit(partial, args.fmt)
        return exc.exit_code
    _emit(report, args.fmt)
    return 0


if __name__ == "__main__":
    sys.exit(main())
