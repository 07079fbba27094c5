"""Command-line front end.

Every command prints a JSON report (sorted keys, counts as decimal
strings). Reports are byte-identical across runs except for the
``timing`` field. Exit codes: 0 success, 1 verification counterexample,
2 input or precondition error, 3 enumeration budget exceeded.
"""

from __future__ import annotations

import hashlib
import json
import sys
import time
from pathlib import Path

import click

from .circuits import (
    circuit_from_prenex, circuit_to_structure, count_proof_trees, evaluate, format_circuit, parse_circuit,
    structure_to_circuit,
)
from .counting import DEFAULT_BUDGET, count_functional, count_relational, count_skolem, search_space
from .errors import FocountError, ResourceError
from .interpretations import apply_interpretation, parse_interpretation
from .logic.normal import classify_fragment, is_prefix_restricted
from .logic.parser import parse_document
from .textio import format_structure, parse_structure
from .transforms import PASSES, run_pass
from .verify import SUITES, parse_sizes, run_suite

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

MODES = {"rel": count_relational, "func": count_functional, "skolem": count_skolem}


class _Run:
    """Collects the pieces of one report."""

    def __init__(self, command: str, **flags):
        self.started = time.perf_counter()
        self.report = {"command": command, "flags": {k: v for k, v in flags.items() if v is not None},
                       "inputs": {}, "outputs": {}}

    def read(self, role: str, path: str) -> str:
        data = Path(path).read_bytes()
        self.report["inputs"][role] = {"file": Path(path).name, "sha256": hashlib.sha256(data).hexdigest()}
        return data.decode("utf-8")

    def finish(self, out: str | None, status: str = "ok") -> None:
        self.report["status"] = status
        self.report["timing"] = {"seconds": round(time.perf_counter() - self.started, 6)}
        text = json.dumps(self.report, sort_keys=True, indent=2) + "\n"
        if out:
            Path(out).write_text(text)
        click.echo(text, nl=False)


def _fail(run: _Run, out: str | None, exc: FocountError) -> None:
    run.report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ResourceError):
        run.report["error"]["required_budget"] = str(exc.required)
    run.finish(out, status="error")
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_BUDGET if isinstance(exc, ResourceError) else EXIT_INPUT)


_out = click.option("--out", type=click.Path(dir_okay=False, writable=True), help="Also write the report here.")
_budget = click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_BUDGET, show_default=True,
                       help="Maximum number of candidate assignments to enumerate.")


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Count assignments to free relation and function variables over finite structures."""


@main.command()
@click.option("--structure", "structure_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--formula", "formula_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(sorted(MODES)), required=True)
@_budget
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@_out
def count(structure_path, formula_path, mode, budget, jobs, out):
    """Count satisfying assignments of a formula in a structure."""
    run = _Run("count", mode=mode, budget=budget)
    try:
        A = parse_structure(run.read("structure", structure_path))
        q = parse_document(run.read("formula", formula_path), A.vocabulary).query
        if mode == "skolem":
            value = count_skolem(A, q, budget=budget)
        else:
            run.report["outputs"]["search_space"] = str(search_space(A, q))
            value = MODES[mode](A, q, budget=budget, workers=jobs)
    except FocountError as exc:
        _fail(run, out, exc)
    run.report["outputs"]["count"] = str(value)
    run.finish(out)


@main.command()
@click.option("--formula", "formula_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--pass", "pass_name", required=True, type=click.Choice(PASSES))
@click.option("--structure", "structure_path", type=click.Path(exists=True, dir_okay=False),
              help="Read vocabulary symbols and builtins from this structure.")
@_out
def transform(formula_path, pass_name, structure_path, out):
    """Apply a count-preserving transformation pass to a formula."""
    run = _Run("transform", **{"pass": pass_name})
    try:
        voc = parse_structure(run.read("structure", structure_path)).vocabulary if structure_path else None
        doc = parse_document(run.read("formula", formula_path), voc)
        report = run_pass(pass_name, doc.query, doc.vocabulary.builtins)
        info = classify_fragment(report.output)
        run.report["outputs"] = report.as_dict()
        run.report["outputs"]["fragment"] = info.name
        if info.in_prenex and info.in_pi(1):
            run.report["outputs"]["prefix_restricted"] = is_prefix_restricted(report.output)
    except FocountError as exc:
        _fail(run, out, exc)
    run.finish(out)


@main.command()
@click.option("--suite", required=True, type=click.Choice(list(SUITES)))
@click.option("--sizes", help="Inclusive range A..B; defaults depend on the suite.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@_out
def verify(suite, sizes, seed, jobs, out):
    """Check one counting identity exhaustively on small instances."""
    run = _Run("verify", suite=suite, sizes=sizes, seed=seed)
    try:
        bounds = parse_sizes(sizes) if sizes else None
    except ValueError as exc:
        raise click.BadParameter(str(exc), param_hint="--sizes")
    try:
        result = run_suite(suite, bounds, seed=seed, jobs=jobs)
    except FocountError as exc:
        _fail(run, out, exc)
    run.report["outputs"] = result
    run.finish(out, status="ok" if result["passed"] else "counterexample")
    if not result["passed"]:
        cx = result["counterexample"]
        click.echo(f"counterexample at instance {cx['index']} ({cx['label']}): "
                   f"lhs={cx['lhs']} rhs={cx['rhs']}\nformula:\n{cx['formula']}\n"
                   f"structure:\n{cx['structure'] or '-'}", err=True)
        sys.exit(EXIT_COUNTEREXAMPLE)


@main.group()
def circuit():
    """Evaluate, count, build and interpret circuits."""


_circuit_file = click.option("--circuit", "circuit_path", required=True, type=click.Path(exists=True, dir_okay=False))


@circuit.command("eval")
@_circuit_file
@_out
def circuit_eval(circuit_path, out):
    """Evaluate a circuit."""
    run = _Run("circuit eval")
    try:
        C = parse_circuit(run.read("circuit", circuit_path))
        run.report["outputs"]["value"] = evaluate(C)
    except FocountError as exc:
        _fail(run, out, exc)
    run.finish(out)


@circuit.command("count")
@_circuit_file
@_out
def circuit_count(circuit_path, out):
    """Count the proof trees of a circuit."""
    run = _Run("circuit count")
    try:
        C = parse_circuit(run.read("circuit", circuit_path))
        run.report["outputs"]["count"] = str(count_proof_trees(C))
    except FocountError as exc:
        _fail(run, out, exc)
    run.finish(out)


@circuit.command("from-formula")
@click.option("--structure", "structure_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--formula", "formula_path", required=True, type=click.Path(exists=True, dir_okay=False))
@_budget
@click.option("--emit", type=click.Path(dir_okay=False, writable=True), help="Write the circuit file here.")
@_out
def circuit_from_formula(structure_path, formula_path, budget, emit, out):
    """Build the quantifier-tree circuit of a prenex sentence in a structure."""
    run = _Run("circuit from-formula", budget=budget)
    try:
        A = parse_structure(run.read("structure", structure_path))
        q = parse_document(run.read("formula", formula_path), A.vocabulary).query
        C = circuit_from_prenex(A, q, budget=budget)
    except FocountError as exc:
        _fail(run, out, exc)
    text = format_circuit(C)
    if emit:
        Path(emit).write_text(text)
    run.report["outputs"] = {"circuit": text, "gates": len(C), "depth": C.depth(),
                             "count": str(count_proof_trees(C))}
    run.finish(out)


@circuit.command("interpret")
@click.option("--interpretation", "interp_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--structure", "structure_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--emit", type=click.Path(dir_okay=False, writable=True), help="Write the target structure file here.")
@_out
def circuit_interpret(interp_path, structure_path, emit, out):
    """Apply an interpretation; if the target is a circuit vocabulary, also count its proof trees."""
    run = _Run("circuit interpret")
    try:
        interp = parse_interpretation(run.read("interpretation", interp_path))
        A = parse_structure(run.read("structure", structure_path))
        B = apply_interpretation(interp, A)
        text = format_structure(B)
        run.report["outputs"]["structure"] = text
        if {"E", "G_and", "G_or", "B", "r"} <= set(B.vocabulary.arities):
            C = structure_to_circuit(B)
            run.report["outputs"]["circuit"] = format_circuit(C)
            run.report["outputs"]["count"] = str(count_proof_trees(C))
            # normal form of the circuit as a structure, for round-trip checks
            run.report["outputs"]["circuit_structure"] = format_structure(circuit_to_structure(C))
    except FocountError as exc:
        _fail(run, out, exc)
    if emit:
        Path(emit).write_text(text)
    run.finish(out)


if __name__ == "__main__":
    main()
