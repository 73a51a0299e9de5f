"""
Batch front door.

    python -m coxhecke --config job.json [--out DIR] [--format json|dot|both]

Exit codes: 0 ok, 1 unexpected failure, 2 invalid input, 3 node budget
exceeded, 4 verification failed. Failures are also written to stderr as
one JSON object.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Optional

from pydantic import ValidationError

from coxhecke.cache import load_cache, store_cache
from coxhecke.centralizer import (
    check_commutation,
    check_membership_coeffs,
    enumerate_basis,
)
from coxhecke.class_poly import class_poly_max, class_poly_min, min_class_table
from coxhecke.config import settings, logger
from coxhecke.conjugacy import (
    INFINITE,
    decide_finite,
    orbit,
    partial_decomposition,
    reduce_to_max,
    shift_graph,
    twisted_class_size_check,
    u_plus,
)
from coxhecke.coxeter import CoxeterSystem
from coxhecke.errors import ResourceLimitError
from coxhecke.export import shift_graph_dot
from coxhecke.hecke import HeckeElement, specialize
from coxhecke.schemas import (
    ArtifactOut,
    BasisEntryOut,
    ClassifyOut,
    DecompositionOut,
    ErrorOut,
    JobConfig,
    PieceOut,
    ReportOut,
    TableOut,
    VerifyOut,
)
from coxhecke.storage import write_json, write_text

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_INVALID = 2
EXIT_RESOURCE = 3
EXIT_VERIFY_FAILED = 4


class _Outcome:
    """Result of one command before it is written out."""

    def __init__(self, result: Any, completeness: str, dot: Optional[str] = None, ok: bool = True):
        self.result = result
        self.completeness = completeness
        self.dot = dot
        self.ok = ok


def _assignment(system: CoxeterSystem, config: JobConfig) -> Optional[dict]:
    if config.specialization is None:
        return None
    missing = [c for c in range(system.num_classes) if c not in config.specialization]
    if missing:
        raise ValueError(f"Specialization has no values for generator classes {missing}")
    return {c: v.values() for c, v in config.specialization.items()}


# ── Commands ─────────────────────────────────────────────

def _classify(system: CoxeterSystem, config: JobConfig) -> _Outcome:
    budget = config.caps.node_budget
    out = []
    for seed in config.seeds:
        w = system.normalize(seed)
        report = decide_finite(system, config.J, w, budget)
        up = u_plus(system, config.J, w, budget=budget)
        chain = reduce_to_max(system, config.J, w, budget)
        out.append(ClassifyOut(
            report=ReportOut.model_validate(report.to_json()),
            subset_type=system.subset_type(config.J).value,
            components=[
                {"component": list(c), "type": kind.value, "label": label}
                for c, kind, label in system.classify_subset(config.J)
            ],
            u_plus={
                "elements": [x.to_json() for x in up.elements],
                "saturated": up.saturated,
                "cap": up.cap,
            },
            max_chain=None if chain is INFINITE else [a.to_json() for a in chain.arrows],
        ).model_dump(mode="json"))
    return _Outcome(out, "exact verdicts; u_plus bounded by its reported cap")


def _orbit(system: CoxeterSystem, config: JobConfig) -> _Outcome:
    cap = config.caps.length_cap
    budget = config.caps.node_budget
    out, nodes, arrows = [], set(), []
    truncated = False
    for seed in config.seeds:
        w = system.normalize(seed)
        report = decide_finite(system, config.J, w, budget)
        members = report.orbit
        if members is None:
            truncated = True
            members = orbit(system, config.J, w, budget, max_length=cap)
        out.append({
            "report": ReportOut.model_validate(report.to_json()).model_dump(mode="json"),
            "elements": [x.to_json() for x in members],
        })
        nodes.update(members)
        arrows.extend(shift_graph(system, config.J, members))
    completeness = (
        f"infinite orbits listed up to length {cap}" if truncated else "exact"
    )
    dot = shift_graph_dot(system, nodes, set(arrows), name="orbit")
    return _Outcome(out, completeness, dot)


def _shift_graph(system: CoxeterSystem, config: JobConfig) -> _Outcome:
    cap = config.caps.length_cap
    nodes = system.ball(cap, config.caps.node_budget)
    arrows = shift_graph(system, config.J, nodes)
    result = {
        "nodes": [w.to_json() for w in nodes],
        "arrows": [a.to_json() for a in arrows],
    }
    return _Outcome(result, f"elements up to length {cap}", shift_graph_dot(system, nodes, arrows))


def _class_poly(system: CoxeterSystem, config: JobConfig) -> _Outcome:
    budget = config.caps.node_budget
    nc = system.num_classes
    finite_w = system.is_spherical(system.generators)
    out = []
    for seed in config.seeds:
        w = system.normalize(seed)
        report = decide_finite(system, config.J, w, budget)
        table = class_poly_max(system, config.J, report, config.caps.search_cap, budget)
        entry = {"max": TableOut.model_validate(table.to_json(nc)).model_dump(mode="json")}
        if finite_w:
            classes = min_class_table(system)
            entry["min"] = {
                "classes": [[x.to_json() for x in members] for members in classes],
                "coefficients": [
                    {"class": c, "poly": f.to_json(nc), "text": str(f)}
                    for c, f in class_poly_min(system, w).items()
                ],
            }
        out.append(entry)
    return _Outcome(out, "exact")


def _basis_entries(system: CoxeterSystem, config: JobConfig, threads: Optional[int]):
    basis = enumerate_basis(
        system, config.J, config.caps.length_cap, threads, config.caps.node_budget
    )
    assignment = _assignment(system, config)
    nc = system.num_classes
    entries, ok = [], True
    for b in basis.elements:
        coeffs = not check_membership_coeffs(system, config.J, b.element)
        commutes = check_commutation(system, config.J, b.element) is None
        ok = ok and coeffs and commutes
        specialized = None
        if assignment is not None:
            specialized = [
                {"word": w.to_json(), "value": str(v)}
                for w, v in specialize(system, b.element, assignment).items()
            ]
        entries.append(BasisEntryOut(
            **b.to_json(nc),
            verified={"coeffs": coeffs, "commutation": commutes},
            specialized=specialized,
        ).model_dump(mode="json"))
    return basis, entries, ok


def _centralizer(system: CoxeterSystem, config: JobConfig, threads=None) -> _Outcome:
    basis, entries, ok = _basis_entries(system, config, threads)
    return _Outcome(entries, basis.note, ok=ok)


def _verify(system: CoxeterSystem, config: JobConfig, threads=None) -> _Outcome:
    if config.element is None:
        basis, entries, ok = _basis_entries(system, config, threads)
        return _Outcome(entries, basis.note, ok=ok)

    h = HeckeElement.from_json(system, [t.model_dump() for t in config.element])
    violations = check_membership_coeffs(system, config.J, h)
    witness = check_commutation(system, config.J, h)
    result = VerifyOut(
        target="element",
        coeffs=not violations,
        commutation=witness is None,
        witness=witness,
        violations=[str(v) for v in violations],
    )
    return _Outcome(result.model_dump(mode="json"), "exact", ok=result.coeffs and result.commutation)


def _decompose(system: CoxeterSystem, config: JobConfig) -> _Outcome:
    cap = config.caps.length_cap
    budget = config.caps.node_budget
    dec = partial_decomposition(system, config.J, cap, budget)
    spherical = system.is_spherical(config.J)
    pieces = []
    for p in dec.pieces:
        identity = None
        if spherical and p.twisted_classes is not None:
            identity = all(
                twisted_class_size_check(system, config.J, p, C, budget)
                for C in p.twisted_classes
            )
        pieces.append(PieceOut(
            v=p.v.to_json(),
            K=list(p.K),
            twisted_classes=(
                [[x.to_json() for x in C] for C in p.twisted_classes]
                if p.twisted_classes is not None else None
            ),
            members=[x.to_json() for x in p.members],
            counting_identity=identity,
        ))
    result = DecompositionOut(
        J=list(dec.J),
        radius=dec.radius,
        disjoint=dec.disjoint,
        covered=dec.covered,
        pieces=pieces,
        overlaps=[x.to_json() for x in dec.overlaps],
        uncovered=[x.to_json() for x in dec.uncovered],
    )
    return _Outcome(result.model_dump(mode="json"), f"ball of radius {cap}")


_COMMANDS = {
    "classify": _classify,
    "orbit": _orbit,
    "shift-graph": _shift_graph,
    "class-poly": _class_poly,
    "centralizer": _centralizer,
    "verify": _verify,
    "decompose": _decompose,
}


# ── Runner ───────────────────────────────────────────────

def run(
    config: JobConfig,
    threads: Optional[int] = None,
    use_cache: bool = True,
    cache_dir: Optional[Path] = None,
) -> int:
    """Execute one job and write its artifacts; returns the exit code."""
    system = CoxeterSystem(config.matrix, names=config.generator_names)
    if use_cache:
        load_cache(system, cache_dir)

    handler = _COMMANDS[config.command]
    if config.command in ("centralizer", "verify"):
        outcome = handler(system, config, threads)
    else:
        outcome = handler(system, config)

    out_dir = Path(config.output.dir)
    fmt = config.output.format
    if fmt in ("json", "both") or outcome.dot is None:
        artifact = ArtifactOut(
            schema_version=settings.SCHEMA_VERSION,
            command=config.command,
            config=config.model_dump(mode="json"),
            caps=config.caps,
            completeness=outcome.completeness,
            result=outcome.result,
        )
        path = out_dir / f"{config.command}.json"
        write_json(path, artifact.model_dump(mode="json", by_alias=True))
        logger.info(f"Wrote {path}")
    if fmt in ("dot", "both") and outcome.dot is not None:
        path = out_dir / f"{config.command}.dot"
        write_text(path, outcome.dot)
        logger.info(f"Wrote {path}")

    if use_cache:
        store_cache(system, cache_dir)
    if outcome.ok:
        return EXIT_OK
    logger.error(f"Verification failed for {config.command}, see {out_dir}")
    return _emit("VerificationFailed", f"{config.command}: membership check failed", EXIT_VERIFY_FAILED)


def _emit_error(exc: BaseException, code: int) -> int:
    return _emit(type(exc).__name__, str(exc), code)


def _emit(error: str, message: str, code: int) -> int:
    err = ErrorOut(error=error, message=message, exit_code=code)
    print(json.dumps(err.model_dump(), sort_keys=True), file=sys.stderr)
    return code


def _parse_seed(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    return [int(part) for part in text.split(",")]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coxhecke",
        description="Partial conjugacy classes, class polynomials and centralizer bases "
                    "for generic Hecke algebras of Coxeter systems.",
    )
    parser.add_argument("--config", required=True, help="Job config (JSON)")
    parser.add_argument("--out", help="Output directory")
    parser.add_argument("--format", choices=["json", "dot", "both"])
    parser.add_argument("--threads", type=int, help="Worker threads for basis construction")
    parser.add_argument("--cap-length", type=int, help="Length cap")
    parser.add_argument("--cap-nodes", type=int, help="Node budget per search")
    parser.add_argument(
        "--seed", action="append", default=None,
        help='Seed word as comma-separated indices, e.g. "1,0,1"; repeatable',
    )
    parser.add_argument("--cache-dir", help="Normal-form cache directory")
    parser.add_argument("--no-cache", action="store_true", help="Skip the normal-form cache")
    return parser


def load_config(args: argparse.Namespace) -> JobConfig:
    raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
    if not isinstance(raw, dict):
        raise ValueError("Config must be a JSON object")
    caps = raw.setdefault("caps", {})
    output = raw.setdefault("output", {})
    if args.cap_length is not None:
        caps["length_cap"] = args.cap_length
    if args.cap_nodes is not None:
        caps["node_budget"] = args.cap_nodes
    if args.out is not None:
        output["dir"] = args.out
    if args.format is not None:
        output["format"] = args.format
    if args.seed is not None:
        raw["seeds"] = [_parse_seed(s) for s in args.seed]
    return JobConfig.model_validate(raw)


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        config = load_config(args)
    except (OSError, ValueError, ValidationError) as e:
        logger.error(f"Invalid job config {args.config}: {e}")
        return _emit_error(e, EXIT_INVALID)

    try:
        return run(
            config,
            threads=args.threads,
            use_cache=settings.CACHE_ENABLED and not args.no_cache,
            cache_dir=Path(args.cache_dir) if args.cache_dir else None,
        )
    except ResourceLimitError as e:
        logger.error(f"{e} (phase={e.phase})")
        return _emit_error(e, EXIT_RESOURCE)
    except ValueError as e:
        logger.error(f"Job rejected: {e}")
        return _emit_error(e, EXIT_INVALID)
    except Exception as e:
        logger.error(f"Unexpected failure: {e}", exc_info=True)
        return _emit_error(e, EXIT_UNEXPECTED)


if __name__ == "__main__":
    sys.exit(main())
