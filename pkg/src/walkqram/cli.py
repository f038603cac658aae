"""Command-line front end.

Exit codes: 0 ok, 1 verification failure, 2 input error, 3 domain error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field

from . import resources
from .formats import dump_state, format_term, parse_memory
from .query import MemorySpec
from .schemes import (NO_MUTATION, Mutation, prepare_input, qram_circuit, qram_tilde_circuit,
                      zero_state)
from .state import DomainError, make_input
from .verify import DEFAULT_TOL, exhaustive_cases, verify_qram

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DOMAIN = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    memory_path: str | None = None
    mode: str = "classical"
    addresses: list[int] | str | None = None
    weights: list[complex] | None = None
    trace: bool = False
    snapshots: bool = False
    out: str | None = None
    tolerance: float = DEFAULT_TOL
    mutation: Mutation = field(default_factory=Mutation)


def parse_addresses(text: str | None) -> list[int] | str | None:
    if text is None:
        return None
    text = text.strip()
    if text == "all":
        return "all"
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"bad address list {text!r}") from None


def parse_weights(text: str | None) -> list[complex] | None:
    if text is None:
        return None
    try:
        return [complex(t.strip().replace(" ", "")) for t in text.split(",") if t.strip()]
    except ValueError:
        raise InputError(f"bad weight list {text!r}") from None


def parse_mutation(text: str | None) -> Mutation:
    """``skip-layer:LEVEL:K`` or ``flip-roundabout:W:LEVEL``."""
    if not text:
        return NO_MUTATION
    kind, _, rest = text.partition(":")
    try:
        a, b = (int(x) for x in rest.split(":"))
    except ValueError:
        raise InputError(f"bad mutation {text!r}") from None
    if kind == "skip-layer":
        return Mutation(skip_layer=(a, b))
    if kind == "flip-roundabout":
        return Mutation(flip_roundabout=(a, b))
    raise InputError(f"unknown mutation kind {kind!r}")


def parse_range(text: str) -> range:
    for sep in ("..", "-", ":"):
        if sep in text:
            lo, hi = text.split(sep, 1)
            return range(int(lo), int(hi) + 1)
    return range(int(text), int(text) + 1)


def load_memory(config: RunConfig) -> MemorySpec:
    if not config.memory_path:
        raise InputError("--memory is required")
    try:
        memory = parse_memory(config.memory_path)
    except OSError as exc:
        raise InputError(f"cannot read memory file: {exc}") from None
    if config.mode == "tilde" and not memory.designated:
        raise InputError("mode 'tilde' needs a 'designated=' line in the memory file")
    if config.mode == "quantum" and not memory.has_quantum_cells:
        raise InputError("mode 'quantum' needs quantum cell entries in the memory file")
    return memory


def resolve_addresses(config: RunConfig, memory: MemorySpec) -> list[int]:
    addrs = config.addresses
    if addrs is None:
        addrs = sorted(memory.designated) if memory.designated else None
    if addrs == "all":
        addrs = list(range(2 ** memory.n))
    if not addrs:
        raise InputError("no addresses given (use --addresses LIST|all)")
    return addrs


def build_run(config: RunConfig, memory: MemorySpec):
    """Circuit and input state for the configured mode."""
    if config.mode == "tilde":
        return qram_tilde_circuit(memory, config.mutation), zero_state(memory.n, memory.m)
    addrs = resolve_addresses(config, memory)
    try:
        state = make_input(addrs, config.weights, memory.n, memory.m)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    state = prepare_input(memory, state, config.mode)
    return qram_circuit(memory, config.mode, config.mutation), state


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_run(config: RunConfig) -> int:
    memory = load_memory(config)
    circuit, state = build_run(config, memory)
    if config.trace or config.snapshots:
        final, trace = circuit.run_traced(state, config.snapshots)
        for entry in trace:
            if entry.events:
                print(f"# layer {entry.events[0].layer:3d} {entry.op} gates={len(entry.events)}",
                      file=sys.stderr)
            else:
                print(f"# {'':9s} {entry.op} (no devices)", file=sys.stderr)
    else:
        final = circuit.run(state)
    _emit(dump_state(final), config.out)
    return EXIT_OK


def cmd_trace(config: RunConfig) -> int:
    memory = load_memory(config)
    circuit, state = build_run(config, memory)
    final, trace = circuit.run_traced(state, config.snapshots)
    lines = []
    for entry in trace:
        layer = f"{entry.events[0].layer:3d}" if entry.events else "  -"
        lines.append(f"layer {layer}  {entry.op:<28s} gates={len(entry.events)}")
        if entry.snapshot is not None:
            lines += [f"    {format_term(t, a, state.n, state.m)}" for t, a in entry.snapshot.items()]
    lines.append("final:")
    lines += [f"    {ln}" for ln in dump_state(final).splitlines()]
    _emit("\n".join(lines) + "\n", config.out)
    return EXIT_OK


def cmd_verify(config: RunConfig, exhaustive: bool = False, sizes=None) -> int:
    if exhaustive:
        return _verify_exhaustive(config, sizes or [(1, 1), (1, 2), (2, 1), (2, 2)])
    memory = load_memory(config)
    addrs = [] if config.mode == "tilde" else resolve_addresses(config, memory)
    try:
        res = verify_qram(memory, addrs, config.weights, config.mode, config.mutation, config.tolerance)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if res.error:
        print(f"domain error: {res.error}")
    print(f"fidelity={res.fidelity:.15f}")
    print("PASS" if res.passed else "FAIL")
    return EXIT_OK if res.passed else EXIT_FAIL


def _verify_exhaustive(config: RunConfig, sizes) -> int:
    checked = failed = 0
    for n, m in sizes:
        if n > 2 or m > 2:
            raise InputError("exhaustive verification is limited to n <= 2, m <= 2")
        for memory, subset, mode in exhaustive_cases(n, m):
            res = verify_qram(memory, subset, None, mode, config.mutation, config.tolerance)
            checked += 1
            if not res.passed:
                failed += 1
                if failed <= 5:
                    print(f"FAIL n={n} m={m} mode={mode} addresses={list(subset)} "
                          f"fidelity={res.fidelity:.15f} {res.error or ''}".rstrip())
    print(f"checked {checked} configurations, {failed} failed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_resources(n_range, m_range, scheme: str = "F", csv: bool = False, out: str | None = None) -> int:
    rows = resources.scaling_table(n_range, m_range, scheme)
    _emit(resources.format_csv(rows) if csv else resources.format_table(rows), out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="walkqram", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--memory", metavar="PATH")
        p.add_argument("--mode", choices=("classical", "quantum", "tilde"), default="classical")
        p.add_argument("--addresses", metavar="LIST|all", help="comma-separated decimal addresses")
        p.add_argument("--weights", metavar="LIST", help="comma-separated complex amplitudes")
        p.add_argument("--out", metavar="PATH")
        p.add_argument("--snapshots", action="store_true", help="record the state after every layer")
        p.add_argument("--mutate", metavar="SPEC",
                       help="test hook: skip-layer:LEVEL:K or flip-roundabout:W:LEVEL")

    p_run = sub.add_parser("run", help="run a qRAM pipeline and dump the final state")
    common(p_run)
    p_run.add_argument("--trace", action="store_true", help="print layer summary to stderr")

    p_trace = sub.add_parser("trace", help="run a pipeline and print every layer")
    common(p_trace)

    p_verify = sub.add_parser("verify", help="compare a pipeline with the definitional target")
    common(p_verify)
    p_verify.add_argument("--tolerance", type=float, default=DEFAULT_TOL)
    p_verify.add_argument("--exhaustive", action="store_true",
                          help="all memories and address sets for n, m <= 2")
    p_verify.add_argument("--n", help="with --exhaustive: n value or range")
    p_verify.add_argument("--m", help="with --exhaustive: m value or range")

    p_res = sub.add_parser("resources", help="depth/gate/qubit table against the bucket-brigade baseline")
    p_res.add_argument("--n", default="3", help="value or range like 1..8")
    p_res.add_argument("--m", default="2", help="value or range like 1..8")
    p_res.add_argument("--scheme", choices=resources.SCHEMES, default="F")
    p_res.add_argument("--csv", action="store_true")
    p_res.add_argument("--out", metavar="PATH")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "resources":
            return cmd_resources(parse_range(args.n), parse_range(args.m), args.scheme, args.csv, args.out)
        config = RunConfig(
            memory_path=args.memory, mode=args.mode,
            addresses=parse_addresses(args.addresses), weights=parse_weights(args.weights),
            trace=getattr(args, "trace", False), snapshots=args.snapshots, out=args.out,
            tolerance=getattr(args, "tolerance", DEFAULT_TOL), mutation=parse_mutation(args.mutate),
        )
        if args.command == "run":
            return cmd_run(config)
        if args.command == "trace":
            return cmd_trace(config)
        sizes = None
        if args.exhaustive and (args.n or args.m):
            sizes = [(n, m) for n in parse_range(args.n or "1..2") for m in parse_range(args.m or "1..2")]
        return cmd_verify(config, args.exhaustive, sizes)
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DomainError as exc:
        print(f"domain error in operator {exc.op}: {exc.message}", file=sys.stderr)
        if exc.term is not None:
            print(f"  term: {exc.term.label()}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
