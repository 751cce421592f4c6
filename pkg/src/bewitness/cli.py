"""Command-line surface: constructions, certificates, checks, and scans.

Verdicts ("entangled", "infeasible", RC failed) are data, not process
failures: every completed analysis exits 0 and encodes its outcome in the
output file.  Nonzero exits are reserved for I/O, parse, and precondition
errors, so scan pipelines never abort mid-grid on a verdict.

The global ``--seed`` (default 42, overridable through the environment
variable ``BEWITNESS_SEED``) threads into every stochastic search; repeated
runs with the same configuration and inputs produce byte-identical outputs.
"""

from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field

import click
import numpy as np

from bewitness import rangecrit, states, upb, witness
from bewitness.rangecrit import (
    computational_product_basis,
    convex_decomposition_feasibility,
    find_product_states,
    range_criterion_check,
)
from bewitness.states import DensityOperator, ppt_report, rho_be, rho_g, spectrum_and_rank
from bewitness.upb import ProductVector, SubspaceProjector, UpbSet, projector
from bewitness.witness import basic_witness, projector_witness, witness_value

DEFAULT_SEED = 42
SCAN_COLUMNS = ("omega", "witness_value", "min_pt_eig", "nnls_residual",
                "nnls_feasible", "rc_passed")


@dataclass
class RunConfig:
    """Options shared by subcommands; identical configs reproduce outputs."""

    seed: int = DEFAULT_SEED
    starts: int = 200
    tolerances: dict = field(default_factory=dict)


def _default_seed() -> int:
    env = os.environ.get("BEWITNESS_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError:
        raise click.ClickException(f"BEWITNESS_SEED must be an integer, got {env!r}")


def _write_json(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise click.ClickException(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise click.ClickException(f"{path} is not valid JSON: {exc}")


def _load_upb(path: str) -> UpbSet:
    try:
        return upb.upb_from_json(_load_json(path))
    except (KeyError, ValueError, TypeError) as exc:
        raise click.ClickException(f"malformed UPB catalog {path}: {exc}")


def _load_state(path: str) -> tuple[DensityOperator, dict]:
    try:
        return states.state_from_json(_load_json(path))
    except (KeyError, ValueError, TypeError) as exc:
        raise click.ClickException(f"malformed state file {path}: {exc}")


def _parse_indices(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise click.ClickException(f"--g expects comma-separated integers, got {text!r}")


@click.group()
@click.option("--seed", type=int, default=None,
              help="Seed for stochastic searches (default 42 or $BEWITNESS_SEED).")
@click.pass_context
def main(ctx, seed):
    """Bound entangled states from unextendible product bases."""
    ctx.obj = RunConfig(seed=_default_seed() if seed is None else seed)


# ---------------------------------------------------------------------------
# upb


@main.group("upb")
def upb_group():
    """Construct and certify unextendible product bases."""


@upb_group.command("tiles")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def upb_tiles(out):
    """Write the five-member 3x3 Tiles catalog."""
    _write_json(upb.upb_to_json(upb.tiles_upb()), out)


@upb_group.command("padded")
@click.option("--dim", type=int, required=True, help="Local dimension d >= 3.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def upb_padded(dim, out):
    """Write the padded real catalog with d**2 - 4 members."""
    try:
        catalog = upb.padded_real_upb(dim)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    _write_json(upb.upb_to_json(catalog), out)


@upb_group.command("certify")
@click.option("--in", "path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--starts", type=int, default=200, show_default=True)
@click.option("--tol", type=float, default=1e-12, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def upb_certify(config, path, starts, tol, out):
    """Numerical unextendibility certificate for a catalog."""
    catalog = _load_upb(path)
    cert = upb.unextendibility_certificate(catalog, starts=starts, tol=tol, seed=config.seed)
    _write_json({
        "upb": path,
        "lambda_hat": cert.lambda_hat,
        "is_upb_evidence": cert.is_upb_evidence,
        "starts": starts,
        "seed": config.seed,
    }, out)


# ---------------------------------------------------------------------------
# state


@main.group("state")
def state_group():
    """Build density operators from a UPB catalog."""


def _emit_state(rho: DensityOperator, provenance: dict, out: str | None) -> None:
    spectrum, rank = spectrum_and_rank(rho)
    report = ppt_report(rho)
    click.echo(f"rank {rank}, PPT {report.is_ppt} "
               f"(min PT eigenvalue {report.min_pt_eigenvalue:.3e})", err=True)
    _write_json(states.state_to_json(rho, provenance), out)


@state_group.command("rho-be")
@click.option("--upb", "upb_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def state_rho_be(upb_path, out):
    """Normalized projector onto the catalog's orthocomplement."""
    catalog = _load_upb(upb_path)
    try:
        rho = rho_be(catalog)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    _emit_state(rho, {"family": "rho_be", "upb": upb_path}, out)


@state_group.command("rho-g")
@click.option("--upb", "upb_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--g", "g_text", required=True, help="1-based member indices, e.g. 1,2.")
@click.option("--omega", type=float, required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def state_rho_g(upb_path, g_text, omega, out):
    """Mix a member subset with the orthocomplement state."""
    catalog = _load_upb(upb_path)
    g = _parse_indices(g_text)
    try:
        rho = rho_g(catalog, g, omega)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    _emit_state(rho, {"family": "rho_g", "upb": upb_path, "G": g, "omega": omega}, out)


# ---------------------------------------------------------------------------
# check


@main.group("check")
def check_group():
    """Run a verdict-producing analysis on a state file."""


@check_group.command("ppt")
@click.option("--in", "path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def check_ppt(path, out):
    """Spectrum of the partial transpose and the PPT verdict."""
    rho, _ = _load_state(path)
    report = ppt_report(rho)
    _write_json({
        "check": "ppt",
        "state": path,
        "is_ppt": report.is_ppt,
        "min_pt_eigenvalue": report.min_pt_eigenvalue,
        "spectrum": [float(x) for x in report.spectrum],
    }, out)


@check_group.command("witness")
@click.option("--in", "path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--upb", "upb_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--lambda", "lambda_hat", type=float, required=True,
              help="Certified minimal product overlap of the catalog.")
@click.option("--family", type=click.Choice(["basic", "projector"]), default="basic",
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
def check_witness(path, upb_path, lambda_hat, family, out):
    """Expectation value of a witness built from the catalog."""
    rho, _ = _load_state(path)
    catalog = _load_upb(upb_path)
    try:
        if family == "basic":
            spec = basic_witness(catalog, lambda_hat)
        else:
            spec = projector_witness(catalog, lambda_hat)
        value = witness_value(spec, rho)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    _write_json({
        "check": "witness",
        "state": path,
        "upb": upb_path,
        "family": family,
        "lambda_hat": lambda_hat,
        "gamma_sq": spec.gamma_sq,
        "detection_threshold": spec.detection_threshold,
        "value": value,
        "entanglement_detected": bool(value < 0.0),
    }, out)


def _range_candidates(rho: DensityOperator, starts: int, seed: int
                      ) -> tuple[list[ProductVector], rangecrit.ProductStateFindings | None]:
    """Product states for spanning checks: the computational basis when the
    state has full rank, otherwise a seesaw search over the range."""
    basis = _range_projector(rho)
    if basis is None:
        return computational_product_basis(rho.dims), None
    findings = find_product_states(basis, starts=starts, seed=seed)
    return list(findings.states), findings


def _range_projector(rho: DensityOperator) -> SubspaceProjector | None:
    """Projector onto the state's range, or None when the state has full rank."""
    from bewitness.kernel import orthonormal_range

    basis = orthonormal_range(rho.matrix, dims=rho.dims)
    if basis.dimension >= rho.dims.total:
        return None
    return SubspaceProjector(basis.projector(), rho.dims)


@check_group.command("range-criterion")
@click.option("--in", "path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--starts", type=int, default=rangecrit.FIND_STARTS, show_default=True)
@click.option("--findings-out", type=click.Path(dir_okay=False), default=None,
              help="Also write the product-state findings file.")
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def check_range_criterion(config, path, starts, findings_out, out):
    """Spanning checks with candidates found in the state's range."""
    rho, _ = _load_state(path)
    candidates, findings = _range_candidates(rho, starts, config.seed)
    verdict = range_criterion_check(rho, candidates)
    if findings_out is not None and findings is not None:
        proj = _range_projector(rho)
        _write_json(rangecrit.findings_to_json(findings, proj.trace), findings_out)
    _write_json({
        "check": "range-criterion",
        "state": path,
        "passed": verdict.passed,
        "range_dim": verdict.range_dim,
        "product_span_rank": verdict.product_span_rank,
        "pt_range_dim": verdict.pt_range_dim,
        "conjugated_span_rank": verdict.conjugated_span_rank,
        "candidate_count": len(candidates),
    }, out)


def _pool_from_file(path: str) -> list[ProductVector]:
    obj = _load_json(path)
    try:
        if "members" in obj:
            return list(upb.upb_from_json(obj).members)
        if "clusters" in obj:
            return list(rangecrit.findings_from_json(obj).states)
    except (KeyError, ValueError, TypeError) as exc:
        raise click.ClickException(f"malformed pool file {path}: {exc}")
    raise click.ClickException(f"{path} is neither a UPB catalog nor a findings file")


@check_group.command("separable-nnls")
@click.option("--in", "path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--pool", "pool_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Catalog or findings file; default: search the state's range.")
@click.option("--starts", type=int, default=rangecrit.FIND_STARTS, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def check_separable_nnls(config, path, pool_path, starts, out):
    """Convex-decomposition feasibility over a product-state pool."""
    rho, _ = _load_state(path)
    if pool_path is not None:
        pool = _pool_from_file(pool_path)
    else:
        pool, _ = _range_candidates(rho, starts, config.seed)
    if not pool:
        raise click.ClickException("the product-state pool is empty; the state's "
                                   "range holds no product state to mix")
    result = convex_decomposition_feasibility(rho, pool)
    _write_json({
        "check": "separable-nnls",
        "state": path,
        "pool": pool_path,
        "pool_size": len(pool),
        "verdict": result.verdict,
        "feasible": result.feasible,
        "residual": result.residual,
        "weight_sum": result.weight_sum,
        "weights": [float(x) for x in result.weights],
    }, out)


# ---------------------------------------------------------------------------
# scan


def _omega_grid(start: float, stop: float, step: float) -> list[float]:
    if step <= 0.0:
        raise click.ClickException(f"--step must be positive, got {step}")
    if stop < start:
        raise click.ClickException(f"--omega-to must not be below --omega-from")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [start + k * step for k in range(count)]


def _scan_pool(catalog: UpbSet, g: list[int], starts: int, seed: int) -> list[ProductVector]:
    """Pool of product states in the generic range of the subset mixtures.

    For interior mixing weights the range is the orthocomplement of the
    unselected members, which does not depend on the weight; with every
    member selected the states have full rank and the computational basis
    spans everything.
    """
    if len(g) == catalog.size:
        return computational_product_basis(catalog.dims)
    rest = [catalog.members[i - 1].composite()
            for i in range(1, catalog.size + 1) if i not in set(g)]
    generic_range = projector(rest, catalog.dims).complement()
    findings = find_product_states(generic_range, starts=starts, seed=seed)
    return list(findings.states)


@main.command("scan")
@click.option("--upb", "upb_path", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--g", "g_text", required=True, help="1-based member indices, e.g. 1 or 1,2.")
@click.option("--omega-from", type=float, required=True)
@click.option("--omega-to", type=float, required=True)
@click.option("--step", type=float, required=True)
@click.option("--checks", required=True,
              help="Comma-separated subset of witness,ppt,nnls,rc.")
@click.option("--lambda", "lambda_hat", type=float, default=None,
              help="Certified overlap minimum; required for the witness check.")
@click.option("--starts", type=int, default=rangecrit.FIND_STARTS, show_default=True,
              help="Search restarts for the nnls/rc candidate pools.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None)
@click.pass_obj
def scan(config, upb_path, g_text, omega_from, omega_to, step, checks,
         lambda_hat, starts, fmt, out):
    """One row per mixing weight: witness value, PT spectrum floor, NNLS
    residual and feasibility, RC verdict."""
    catalog = _load_upb(upb_path)
    g = _parse_indices(g_text)
    wanted = [c.strip() for c in checks.split(",") if c.strip()]
    unknown = set(wanted) - {"witness", "ppt", "nnls", "rc"}
    if unknown:
        raise click.ClickException(f"unknown checks: {sorted(unknown)}")
    if "witness" in wanted and lambda_hat is None:
        raise click.ClickException("--lambda is required for the witness check")

    spec = basic_witness(catalog, lambda_hat) if "witness" in wanted else None
    pool = (_scan_pool(catalog, g, starts, config.seed)
            if "nnls" in wanted or "rc" in wanted else [])

    rows = []
    for omega in _omega_grid(omega_from, omega_to, step):
        try:
            rho = rho_g(catalog, g, omega)
        except ValueError as exc:
            raise click.ClickException(str(exc))
        row = {key: None for key in SCAN_COLUMNS}
        row["omega"] = omega
        if spec is not None:
            row["witness_value"] = witness_value(spec, rho)
        if "ppt" in wanted:
            row["min_pt_eig"] = ppt_report(rho).min_pt_eigenvalue
        if "nnls" in wanted:
            result = convex_decomposition_feasibility(rho, pool)
            row["nnls_residual"] = result.residual
            row["nnls_feasible"] = result.feasible
        if "rc" in wanted:
            _, rank = spectrum_and_rank(rho)
            generic_rank = (catalog.dims.total - catalog.size) + len(g)
            if rank >= rho.dims.total:
                candidates = computational_product_basis(rho.dims)
            elif rank == generic_rank:
                candidates = pool
            else:
                # endpoint weights collapse the range; search it directly
                candidates, _ = _range_candidates(rho, starts, config.seed)
            row["rc_passed"] = range_criterion_check(rho, candidates).passed
        rows.append(row)

    if fmt == "json":
        _write_json({"upb": upb_path, "G": g, "columns": list(SCAN_COLUMNS), "rows": rows}, out)
        return
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    writer.writerow(SCAN_COLUMNS)
    for row in rows:
        writer.writerow(["" if row[key] is None else row[key] for key in SCAN_COLUMNS])
    text = buffer.getvalue()
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
