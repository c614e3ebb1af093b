"""Command-line front end; every subcommand builds a RunConfig for run()."""
import io
import json
import logging
import math
import sys
import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, TextIO

import click
import numpy as np
import pandas as pd
import yaml
from pydantic import BaseModel

from app import bell, constants, galsets, gcdsums, numtheory, randomzeta, resonance
from app.errors import ParseError, ValidationError, exit_code_for
from app.numtheory import FactoredInteger, IntegerSet
from app.schemas import OutputFormat, RandomZetaConfig, ResonanceParams, RunConfig, Subcommand

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# set files
# ---------------------------------------------------------------------------

def parse_set_file(source: str | Path | TextIO, label: str = "") -> IntegerSet:
    """One entry per line: a decimal integer >= 1 or ``p1^e1*p2^e2*...``."""
    if isinstance(source, (str, Path)):
        label = label or str(source)
        with open(source, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    else:
        lines = source.read().splitlines()
    seen: dict[int, int] = {}
    elements = []
    for number, raw in enumerate(lines, start=1):
        entry = raw.strip()
        if not entry:
            continue
        if entry.isdigit():
            if int(entry) < 1:
                raise ValidationError(f"line {number}: entries must be >= 1")
            element = FactoredInteger.from_int(int(entry))
        elif "^" in entry:
            try:
                element = FactoredInteger.from_literal(entry)
            except ParseError as exc:
                raise ParseError(str(exc), line=number) from exc
            except ValidationError as exc:
                raise ValidationError(f"line {number}: {exc}") from exc
        else:
            raise ParseError(f"expected an integer or a factored literal, got {entry!r}", line=number)
        if element.value in seen:
            logger.warning("line %d duplicates line %d (%d), kept once", number, seen[element.value], element.value)
            continue
        seen[element.value] = number
        elements.append(element)
    return IntegerSet.from_elements(elements, label=label)


def emit_set(M: IntegerSet) -> str:
    return "".join(f"{v}\n" for v in M.values)


# ---------------------------------------------------------------------------
# documents
# ---------------------------------------------------------------------------

def jsonable(obj: Any) -> Any:
    if isinstance(obj, BaseModel):
        return jsonable(obj.model_dump(by_alias=True))
    if isinstance(obj, Fraction):
        return str(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return obj
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        return value if math.isfinite(value) else str(value)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": jsonable(obj.real), "im": jsonable(obj.imag)}
    if isinstance(obj, np.ndarray):
        return [jsonable(x) for x in obj.tolist()]
    if isinstance(obj, IntegerSet):
        return obj.values
    if isinstance(obj, FactoredInteger):
        return obj.to_literal()
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    return str(obj)


def render(document: dict, output: OutputFormat) -> str:
    if output == OutputFormat.json:
        return json.dumps(document, indent=2) + "\n"
    result = document.get("result")
    if output == OutputFormat.csv:
        if isinstance(result, list):
            frame = pd.DataFrame({"value": result})
        else:
            frame = pd.json_normalize(result if isinstance(result, dict) else {"value": result})
        buffer = io.StringIO()
        frame.to_csv(buffer, index=False)
        return buffer.getvalue()
    lines = [f"# {document['command']}", f"# {document['provenance']}"]
    if isinstance(result, dict):
        lines += [f"{k}: {v}" for k, v in result.items()]
    else:
        lines.append(str(result))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Operation:
    handler: Callable[[dict, int | None], Any]
    provenance: str


def _set(p: dict) -> IntegerSet:
    if p.get("gal"):
        r, b = (int(v) for v in str(p["gal"]).split(","))
        return galsets.gal_divisor_set(r, b)
    if "set" not in p:
        raise ValidationError("a --set file (or --gal r,b) is required")
    return parse_set_file(p["set"])


def _rationals(text) -> list[Fraction]:
    if isinstance(text, (list, tuple)):
        return [Fraction(str(x)) for x in text]
    try:
        return [Fraction(x.strip()) for x in str(text).split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"bad rational list {text!r}") from exc


def _gcdsum(p, _):
    M = _set(p)
    sigma, ell, kind = float(p.get("sigma", 1.0)), float(p.get("ell", 0.0)), p.get("kind", "auto")
    if kind == "auto":
        kind = "plain" if ell == 0 else "log_type"
    if kind == "plain":
        return gcdsums.gcd_sum(M, sigma, strategy=p.get("strategy", "auto"))
    if kind == "log_type":
        return gcdsums.log_gcd_sum(M, sigma, ell)
    if kind == "modified_log":
        return gcdsums.modified_log_gcd_sum(M, ell)
    if kind == "diagonal":
        return gcdsums.diagonal_sum(M, sigma)
    if kind == "spectral":
        return gcdsums.spectral_norm(M, sigma, float(p.get("tol", 1e-12)))
    raise ValidationError(f"unknown kind {kind!r}")


def _gal_set(p, _):
    M = galsets.gal_divisor_set(int(p["r"]), int(p["b"]))
    return {"size": len(M), "elements": M.values}


def _squarefree(p, _):
    construction = galsets.squarefree_set(int(p["k"]))
    sigma = float(p.get("sigma", 1.0))
    return {"elements": construction.set.values, "closed_form": construction.closed_form(sigma)}


def _spade(p, _):
    return constants.spade(float(p.get("tol", 1e-6)))


def _d_over_spade(p, _):
    spade_val = constants.spade(float(p.get("tol", 1e-6)))
    Y = p.get("Y")
    return constants.d_over_spade(int(p["ell"]), spade_val, None if Y is None else float(Y))


def _asymptotic(p, _):
    A = float(p.get("A", 1.0))
    L = float(p.get("loglog_t", 10.0))
    return {
        "spectral_constant": constants.spectral_constant(A),
        "gal_constant": constants.gal_constant(),
        "large_value_constant": constants.large_value_constant(A),
        "littlewood_constant": constants.littlewood_constant(),
        "explicit_zeta_bound": constants.explicit_zeta_bound(L),
        "critical_line_exponent": constants.critical_line_exponent(),
    }


def _c_constant(p, _):
    result = bell.zeta_deriv_bound_constant(int(p["ell"]))
    return {"c": result.c, "bound_e_gamma": result.bound_in_e_gamma_units}


def _faa_di_bruno(p, _):
    n, s = int(p["n"]), float(p.get("s", 3.0))
    derivs = bell.zeta_log_derivs_dirichlet(s, n, float(p.get("x", 1e6)))
    return {"log_derivs": derivs, "zeta_ratio": bell.faa_di_bruno_zeta(n, derivs)}


def _zeta_cfg(p, seed) -> RandomZetaConfig:
    return RandomZetaConfig(
        alpha=float(p.get("alpha", 1.0)),
        prime_cutoff=float(p.get("P", 2.0)),
        Y=float(p.get("Y", 1.0)),
        samples=int(p.get("samples", 1000)),
        seed=0 if seed is None else seed,
    )


def _resonance_params(p) -> ResonanceParams:
    return ResonanceParams(
        beta=float(p.get("beta", 0.0)), kappa=float(p.get("kappa", 0.5)),
        ell=int(p.get("ell", 0)), A=float(p.get("A", 1.0)),
    )


def _resonator(p, _):
    res = resonance.build_resonator(_set(p), float(p["T"]))
    return {
        "T": res.T, "ratio": res.ratio, "source_size": res.source_size,
        "buckets": [{"u": b.u, "m": b.m.value, "r": b.r} for b in res.buckets],
    }


def _m1(p, _):
    res = resonance.build_resonator(_set(p), float(p["T"]))
    return resonance.moment_m1_closed(res, resonance.GaussianKernel(float(p.get("A", 1.0))))


def _i_moment(p, _):
    M, T, A = _set(p), float(p["T"]), float(p.get("A", 1.0))
    ell, cutoff = int(p.get("ell", 1)), int(p.get("cutoff", 36))
    res = resonance.build_resonator(M, T)
    kernel = resonance.GaussianKernel(A)
    return {
        "I": resonance.moment_i_closed(res, kernel, ell, cutoff),
        "lower_main": float(kernel.phi_hat(1.0)) * res.c * gcdsums.log_gcd_sum(M, 1.0, ell).value_real,
        "tail": resonance.resonance_tail(M, T, ell, cutoff, A),
    }


def _experiment(p, _):
    return resonance.resonance_experiment(
        _set(p), _resonance_params(p), float(p["T"]), int(p.get("quad_points", 4096))
    )


def _sieve_primes(p, _):
    primes = numtheory.primes_up_to(float(p["x"]))
    return {"count": int(primes.size), "largest": int(primes[-1]) if primes.size else None}


OPERATIONS: dict[tuple[Subcommand, str | None], Operation] = {
    (Subcommand.gcdsum, None): Operation(_gcdsum, "S_sigma(M) = sum_{m,n in M} ((m,n)/[m,n])^sigma and its log-weighted variants"),
    (Subcommand.gal, "divisor-set"): Operation(_gal_set, "divisors of p_1^{b-1} ... p_r^{b-1}"),
    (Subcommand.gal, "identity"): Operation(
        lambda p, _: galsets.gal_product_identity(int(p["r"]), int(p["b"]), float(p.get("alpha", 1.0))),
        "prod_p (b + 2 sum_{k<b} (b-k) p^{-k alpha})"),
    (Subcommand.gal, "split"): Operation(
        lambda p, _: galsets.gal_three_factor_split(int(p["r"]), int(p["b"]), float(p.get("alpha", 1.0))),
        "Gal product = b^r f1 f2 f3"),
    (Subcommand.gal, "asymptotics"): Operation(
        lambda p, _: galsets.gal_asymptotic_factors(int(p["r"]), int(p["b"]), float(p.get("alpha", 1.0))),
        "f2 ~ (e^gamma log p_r)^2, f3 -> 1/zeta(2)"),
    (Subcommand.gal, "squarefree"): Operation(_squarefree, "2^k prod (1 + p_i^-sigma) over square-free products of the first k primes"),
    (Subcommand.gal, "diagonal-ratio"): Operation(
        lambda p, _: galsets.diagonal_ratio_squarefree(int(p["k"]), float(p.get("sigma", 0.5))),
        "E~_sigma / S_sigma for the square-free construction"),
    (Subcommand.gal, "parameters"): Operation(
        lambda p, _: galsets.parameters_for_N(int(p["N"])), "r = [log N / log log N], b^r <= N < (b+1)^r"),
    (Subcommand.gal, "prime-power"): Operation(
        lambda p, _: (galsets.prime_power_construction_from_T(float(p["T"]), float(p.get("sigma", 1.0))) if p.get("T") is not None
                      else galsets.prime_power_construction(float(p["x"]), int(p["b"]), float(p.get("sigma", 1.0)))),
        "prod_{p<=x} (1 + sum_{k<b} (1 - k/b) p^{-k sigma})"),
    (Subcommand.constants, "spade"): Operation(_spade, constants.SPADE_PROVENANCE),
    (Subcommand.constants, "a-constant"): Operation(
        lambda p, _: constants.a_constant(float(p["ell"])),
        "a_ell = min_A exp(2 gamma + 2 e^{2 ell A} - 2) / (zeta(2) A^{2 ell}), normalised by 4^-ell"),
    (Subcommand.constants, "first-proof"): Operation(
        lambda p, _: constants.first_proof_constant(int(p["ell"])),
        "2 ell! / A^ell exp(e^{2A} - 1) with 2 A e^{2A} = ell"),
    (Subcommand.constants, "d-over-spade"): Operation(_d_over_spade, "D_ell / spade with D_ell = Y_ell^2"),
    (Subcommand.constants, "strip"): Operation(
        lambda p, _: constants.strip_exponent(float(p["sigma0"])), "1/2 + (2 sigma0 - 1) / (sigma0 (1 - sigma0))"),
    (Subcommand.constants, "asymptotic"): Operation(_asymptotic, "closed-form asymptotic constants"),
    (Subcommand.bell, "partial"): Operation(
        lambda p, _: bell.partial_bell(int(p["n"]), int(p["k"]), _rationals(p["xs"])), "partial Bell polynomial B_{n,k}"),
    (Subcommand.bell, "complete"): Operation(
        lambda p, _: bell.complete_bell(int(p["n"]), _rationals(p["xs"])), "complete Bell polynomial B_n"),
    (Subcommand.bell, "deriv-ratio"): Operation(
        lambda p, _: bell.deriv_ratio_constant(int(p["ell"])), "2^{ell+2} - 2^{ell+1}/(ell+1)"),
    (Subcommand.bell, "c-constant"): Operation(_c_constant, "c(ell) = B_ell(a_0, ..., a_{ell-1}); bound 2 c(ell) e^gamma (log log t)^{ell+1}"),
    (Subcommand.bell, "faa-di-bruno"): Operation(_faa_di_bruno, "zeta^(n)/zeta = B_n((zeta'/zeta), ..., (zeta'/zeta)^(n-1))"),
    (Subcommand.randzeta, "sample"): Operation(
        lambda p, seed: randomzeta.sample_log_zeta(_zeta_cfg(p, seed)), "log|zeta(alpha, X)| = -sum_{p<=P} log|1 - X(p) p^-alpha|"),
    (Subcommand.randzeta, "expectation"): Operation(
        lambda p, seed: randomzeta.mc_log_expectation(_zeta_cfg(p, seed)),
        "log E|zeta(alpha, X)|^{2Y} against 2Y(log log Y + gamma)"),
    (Subcommand.randzeta, "single-prime"): Operation(
        lambda p, _: randomzeta.single_prime_factor(int(p["p"]), float(p.get("alpha", 1.0)), float(p.get("Y", 1.0))),
        "E|1 - X(p) p^-alpha|^{-2Y} against I_0(2Y / p^alpha)"),
    (Subcommand.resonate, "build"): Operation(_resonator, "buckets [(1 + log T / T)^u, (1 + log T / T)^{u+1})"),
    (Subcommand.resonate, "m1"): Operation(_m1, "M1 = c sum r_u r_v Phi^(c log(m_u/m_v)) <= (1 + 2 sum Phi^(n)) c |M|"),
    (Subcommand.resonate, "i-moment"): Operation(_i_moment, "I >= Phi^(1) c S(M; ell) - tail"),
    (Subcommand.resonate, "zeta-line"): Operation(
        lambda p, _: resonance.zeta_deriv_line(int(p.get("ell", 0)), float(p["t"]), float(p.get("T_cut", 1e4))),
        "(-1)^ell sum_{k<=T} (log k)^ell k^{-1-it}"),
    (Subcommand.resonate, "experiment"): Operation(_experiment, "M2/M1 <= max |zeta^(ell)(1+it)|^2 on [T^beta, T]"),
    (Subcommand.resonate, "main-term"): Operation(
        lambda p, _: resonance.main_term_ratio(float(p["x"]), int(p["b"]), float(p.get("sigma", 1.0))),
        "main-term ratio prod_{p<=x} (1 + sum_{k<b} (1 - k/b) p^{-k sigma}) and its split"),
    (Subcommand.dickman, "rho"): Operation(
        lambda p, _: numtheory.dickman_rho(float(p["u"])), "u rho'(u) = -rho(u-1), rho = 1 on [0, 1]"),
    (Subcommand.dickman, "moment"): Operation(
        lambda p, _: numtheory.dickman_moment(int(p["ell"]), tol=float(p.get("tol", 1e-6))),
        "Y_ell = int_0^oo u^ell rho(u) du"),
    (Subcommand.chebyshev, "sum"): Operation(
        lambda p, _: numtheory.chebyshev_log_sum(
            float(p["x"]), float(p.get("sigma", 1.0)), int(p.get("ell", 0)), bool(p.get("weighted", False))),
        "sum_{n<=x} (log n)^ell Lambda(n) / n^sigma [log(x/n)]"),
    (Subcommand.chebyshev, "primes"): Operation(_sieve_primes, "primes <= x"),
    (Subcommand.chebyshev, "mertens"): Operation(
        lambda p, _: numtheory.mertens_product(float(p["x"])), "prod_{p<=x} (1 - 1/p)^-1 against e^gamma log x"),
    (Subcommand.chebyshev, "prime-ratio"): Operation(
        lambda p, _: numtheory.prime_ratio_bounds(float(p["X"]), float(p["A"])),
        "sum_{p<=X} log((1 - 1/p)/(1 - p^-alpha)), alpha = 1 - A/log X"),
    (Subcommand.chebyshev, "int-limit"): Operation(
        lambda p, _: numtheory.int_limit_bound(float(p["alpha"]), float(p["A"])),
        "int_2^{exp(A/(1-alpha))} t^-alpha exp(-sqrt(log t)) dt"),
}


def run(config: RunConfig, timing: bool = False) -> tuple[int, dict]:
    key = (config.subcommand, config.operation)
    command = " ".join(x for x in (config.subcommand.value, config.operation) if x)
    document = {
        "command": command,
        "params": jsonable(config.parameters),
        "result": None,
        "provenance": None,
        "seed": config.seed,
        "elapsed_ms": None,
    }
    operation = OPERATIONS.get(key)
    if operation is None:
        document["error"] = f"unknown operation {command!r}"
        return 1, document
    document["provenance"] = operation.provenance
    logger.info("running %s", command)
    start = time.perf_counter()
    try:
        result = operation.handler(config.parameters, config.seed)
    except (KeyError, TypeError) as exc:
        document["error"] = f"missing or malformed parameter: {exc}"
        return 1, document
    except Exception as exc:
        code = exit_code_for(exc)
        logger.log(logging.WARNING if code == 1 else logging.ERROR, "%s failed: %s", command, exc)
        document["error"] = str(exc)
        return code, document
    document["result"] = jsonable(result)
    if timing:
        document["elapsed_ms"] = round(1000.0 * (time.perf_counter() - start), 3)
    return 0, document


def load_run_config(path: str | Path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    return RunConfig.model_validate(data)


def store_document(code: int, document: dict) -> int:
    from app import crud, schemas
    from app.database import SessionLocal, init_db

    init_db()
    db = SessionLocal()
    try:
        row = crud.create_run(db, schemas.CreateRun(
            command=document["command"],
            params=json.dumps(document["params"]),
            result=json.dumps(document["result"]),
            provenance=document["provenance"],
            seed=document["seed"],
            exit_code=code,
            elapsed_ms=document["elapsed_ms"],
        ))
        return row.id
    finally:
        db.close()


# ---------------------------------------------------------------------------
# click surface
# ---------------------------------------------------------------------------

def _execute(ctx: click.Context, config: RunConfig) -> None:
    opts = ctx.obj
    code, document = run(config, timing=opts["timing"])
    if opts["store"]:
        store_document(code, document)
    if code:
        click.echo(f"error: {document.get('error')}", err=True)
        ctx.exit(code)
    click.echo(render(document, config.output), nl=False)


tol_option = click.option("--tol", type=float, default=None, help="Tolerance for operations that take one.")


def _dispatch(ctx: click.Context, subcommand: Subcommand, operation: str | None, params: dict) -> None:
    opts = ctx.obj
    params = {k: v for k, v in params.items() if v is not None}
    if opts["tol"] is not None:
        params.setdefault("tol", opts["tol"])
    config = RunConfig(subcommand=subcommand, operation=operation, parameters=params,
                       seed=opts["seed"], output=opts["output"])
    _execute(ctx, config)


@click.group(invoke_without_command=True)
@click.option("--output", type=click.Choice([f.value for f in OutputFormat]), default="json", show_default=True)
@click.option("--seed", type=int, default=None, help="Seed for the random model.")
@click.option("--tol", type=float, default=None, help="Tolerance passed to operations that take one.")
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="YAML run config (subcommand, operation, parameters, seed, output).")
@click.option("--store/--no-store", default=False, help="Persist the document to the runs table.")
@click.option("--timing/--no-timing", default=False, help="Report elapsed_ms.")
@click.option("-v", "--verbose", count=True)
@click.pass_context
def main(ctx, output, seed, tol, config_path, store, timing, verbose):
    """GCD sums, extremal sets and extreme values of zeta derivatives."""
    logging.basicConfig(
        level=logging.WARNING - 10 * min(verbose, 2),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    ctx.obj = {"output": OutputFormat(output), "seed": seed, "tol": tol, "store": store, "timing": timing}
    if config_path is not None:
        try:
            config = load_run_config(config_path)
        except (ValueError, yaml.YAMLError) as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(1)
        _execute(ctx, config)
    elif ctx.invoked_subcommand is None:
        click.echo(ctx.get_help())


@main.command()
@click.option("--set", "set_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--gal", help="r,b: use the Gal divisor set instead of a file.")
@click.option("--sigma", type=float, default=1.0, show_default=True)
@click.option("--ell", type=float, default=0.0, show_default=True)
@click.option("--kind", type=click.Choice(["auto", "plain", "log_type", "modified_log", "diagonal", "spectral"]),
              default="auto", show_default=True)
@click.option("--strategy", type=click.Choice(["auto", "pairs", "lattice"]), default="auto", show_default=True)
@tol_option
@click.pass_context
def gcdsum(ctx, set_path, gal, sigma, ell, kind, strategy, tol):
    """GCD sums over a set file."""
    _dispatch(ctx, Subcommand.gcdsum, None, {
        "set": set_path, "gal": gal, "sigma": sigma, "ell": ell, "kind": kind, "strategy": strategy, "tol": tol,
    })


@main.command()
@click.argument("operation", type=click.Choice(
    ["divisor-set", "identity", "split", "asymptotics", "squarefree", "diagonal-ratio", "parameters", "prime-power"]))
@click.option("--r", type=int)
@click.option("--b", type=int)
@click.option("--alpha", type=float)
@click.option("--k", type=int)
@click.option("--sigma", type=float)
@click.option("--N", "N", type=int)
@click.option("--x", type=float)
@click.option("--T", "T", type=float)
@click.pass_context
def gal(ctx, operation, **params):
    """Extremal set constructions."""
    _dispatch(ctx, Subcommand.gal, operation, params)


@main.command(name="constants")
@click.argument("operation", type=click.Choice(
    ["spade", "a-constant", "first-proof", "d-over-spade", "strip", "asymptotic"]))
@click.option("--ell", type=float)
@click.option("--sigma0", type=float)
@click.option("--Y", "Y", type=float)
@click.option("--A", "A", type=float)
@click.option("--loglog-t", "loglog_t", type=float)
@tol_option
@click.pass_context
def constants_cmd(ctx, operation, **params):
    """Certified constants."""
    if params.get("ell") is not None and operation != "a-constant":
        params["ell"] = int(params["ell"])
    _dispatch(ctx, Subcommand.constants, operation, params)


@main.command(name="bell")
@click.argument("operation", type=click.Choice(["partial", "complete", "deriv-ratio", "c-constant", "faa-di-bruno"]))
@click.option("--n", type=int)
@click.option("--k", type=int)
@click.option("--xs", help="Comma-separated rationals, e.g. 2,6,40/3.")
@click.option("--ell", type=int)
@click.option("--s", type=float)
@click.pass_context
def bell_cmd(ctx, operation, **params):
    """Bell polynomials and derivative-bound constants."""
    _dispatch(ctx, Subcommand.bell, operation, params)


@main.command()
@click.argument("operation", type=click.Choice(["sample", "expectation", "single-prime"]))
@click.option("--alpha", type=float)
@click.option("--P", "P", type=float)
@click.option("--Y", "Y", type=float)
@click.option("--samples", type=int)
@click.option("--p", type=int)
@click.pass_context
def randzeta(ctx, operation, **params):
    """Random Euler product model."""
    _dispatch(ctx, Subcommand.randzeta, operation, params)


@main.command()
@click.argument("operation", type=click.Choice(["build", "m1", "i-moment", "zeta-line", "experiment", "main-term"]))
@click.option("--set", "set", type=click.Path(exists=True, dir_okay=False))
@click.option("--gal", help="r,b: use the Gal divisor set instead of a file.")
@click.option("--T", "T", type=float)
@click.option("--A", "A", type=float)
@click.option("--ell", type=int)
@click.option("--cutoff", type=int)
@click.option("--beta", type=float)
@click.option("--kappa", type=float)
@click.option("--quad-points", type=int)
@click.option("--t", type=float)
@click.option("--T-cut", "T_cut", type=float)
@click.option("--x", type=float)
@click.option("--b", type=int)
@click.option("--sigma", type=float)
@click.pass_context
def resonate(ctx, operation, **params):
    """Resonance method experiments."""
    _dispatch(ctx, Subcommand.resonate, operation, params)


@main.command()
@click.argument("operation", type=click.Choice(["rho", "moment"]))
@click.option("--u", type=float)
@click.option("--ell", type=int)
@tol_option
@click.pass_context
def dickman(ctx, operation, **params):
    """Dickman function and its moments."""
    _dispatch(ctx, Subcommand.dickman, operation, params)


@main.command()
@click.argument("operation", type=click.Choice(["sum", "primes", "mertens", "prime-ratio", "int-limit"]))
@click.option("--x", type=float)
@click.option("--sigma", type=float)
@click.option("--ell", type=int)
@click.option("--weighted/--unweighted", default=None)
@click.option("--X", "X", type=float)
@click.option("--A", "A", type=float)
@click.option("--alpha", type=float)
@click.pass_context
def chebyshev(ctx, operation, **params):
    """Prime sums, Mertens products and the quadrature bound."""
    _dispatch(ctx, Subcommand.chebyshev, operation, params)
