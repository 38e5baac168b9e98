"""
Command-line front end.

Exit status: 0 success (halted / static), 1 bad input, 2 out of fuel or
segment budget, 3 nondeterministic net. One summary line goes to stdout;
diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from fractions import Fraction
from pathlib import Path

from . import compiler, core, execute, ode, regmachine, waves

EXIT_OK, EXIT_ERROR, EXIT_FUEL, EXIT_NONDETERMINISTIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"{path}: {e.strerror}") from None


def _write_or_print(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _parse_init(text: str) -> core.Configuration:
    try:
        return core.parse_configuration(text)
    except core.ParseError as e:
        raise UsageError(f"--init: {e.message}") from None


def _load_machine(path: str) -> regmachine.RegisterMachine:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", regmachine.ImplicitHaltWarning)
        m = regmachine.parse_rm(_read(path), source=path)
    for w in caught:
        print(f"{path}: warning: {w.message}", file=sys.stderr)
    return m


def _load_net(path: str) -> compiler.NetFile:
    return compiler.load_net(_read(path), source=path)


def _check_species(net: core.Icrn, c, path: str) -> None:
    unknown = [s for s in c if s not in net.species_index]
    if unknown:
        raise UsageError(f"--init names species not in {path}: {', '.join(unknown)}")


def cmd_compile(args) -> int:
    cn = compiler.compile_machine(_load_machine(args.program))
    _write_or_print(compiler.format_compiled(cn), args.output)
    return EXIT_OK


def cmd_run_rm(args) -> int:
    m = _load_machine(args.program)
    result = regmachine.run(m, args.input, args.fuel, trace=args.trace)
    if args.trace:
        for s in result.trace:
            regs = " ".join(f"{r}={v}" for r, v in s.registers.items())
            print(f"line={s.line} {regs}")
    if not result.halted:
        print("FUEL")
        return EXIT_FUEL
    print(f"HALT {m.output_register}={result.output(m)} steps={result.steps}")
    return EXIT_OK


def cmd_exec(args) -> int:
    nf = _load_net(args.net)
    c0 = _parse_init(args.init)
    _check_species(nf.net, c0, args.net)
    try:
        result = execute.run_to_static(nf.net, c0, args.max_segments, lowest_index=args.lowest_index)
    except execute.UnboundedSegment as e:
        raise UsageError(f"{args.net}: {e}") from None
    if args.log:
        Path(args.log).write_text(execute.format_transition_log(nf.net, result.trajectory))
    final = core.format_configuration(result.final, nf.net.species)
    label = {
        execute.Outcome.STATIC: "STATIC",
        execute.Outcome.FUEL_EXHAUSTED: "FUEL",
        execute.Outcome.NONDETERMINISTIC: "NONDETERMINISTIC",
    }[result.outcome]
    extra = ""
    if result.outcome is execute.Outcome.NONDETERMINISTIC:
        extra = " applicable=" + ",".join(map(str, result.applicable))
    print(f"{label} segments={result.segments}{extra} {final}")
    return {
        execute.Outcome.STATIC: EXIT_OK,
        execute.Outcome.FUEL_EXHAUSTED: EXIT_FUEL,
        execute.Outcome.NONDETERMINISTIC: EXIT_NONDETERMINISTIC,
    }[result.outcome]


def cmd_ode(args) -> int:
    nf = _load_net(args.net)
    c0 = _parse_init(args.init)
    _check_species(nf.net, c0, args.net)
    try:
        settings = ode.OdeSettings(hill_k=args.hill_k, t_end=args.t_end, dt=args.dt, sample_every=args.sample)
    except ValueError as e:
        raise UsageError(str(e)) from None
    traj = ode.integrate(nf.net, {k: float(v) for k, v in c0.items()}, settings)
    Path(args.output).write_text(ode.format_sampled_csv(traj))
    final = ",".join(f"{s}={x:.6g}" for s, x in traj.final().items() if x > 1e-9)
    print(f"t={traj.times[-1]:.9g} {final}")
    return EXIT_OK


def cmd_oscillator(args) -> int:
    try:
        net = execute.build_ring_oscillator(args.n)
    except ValueError as e:
        raise UsageError(str(e)) from None
    _write_or_print(core.format_icrn(net), args.output)
    return EXIT_OK


def cmd_check_oscillation(args) -> int:
    text = _read(args.trajectory)
    header = text.split("\n", 1)[0]
    try:
        if header.startswith("segment,"):
            traj = execute.read_transition_log(text)
            eps = Fraction(args.eps) if args.eps is not None else Fraction(0)
            known = header.split(",")[3:]
        else:
            traj = ode.read_sampled_csv(text)
            eps = float(args.eps) if args.eps is not None else 1e-3
            known = list(traj.species)
    except (ValueError, ZeroDivisionError) as e:
        raise UsageError(f"{args.trajectory}: {e}") from None
    ordered = [s.strip() for s in args.species.split(",") if s.strip()]
    missing = [s for s in ordered if s not in known]
    if missing:
        raise UsageError(f"{args.trajectory}: no column for {', '.join(missing)}")
    n_waves = len(waves.find_waves(traj, ordered, eps))
    print(f"periods={waves.count_periods(traj, ordered, eps)} waves={n_waves}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="icrn", description=__doc__.strip().splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("compile", help="compile a register machine to an iCRN")
    c.add_argument("program")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_compile)

    r = sub.add_parser("run-rm", help="interpret a register machine")
    r.add_argument("program")
    r.add_argument("--input", type=int, required=True)
    r.add_argument("--fuel", type=int, default=10**6)
    r.add_argument("--trace", action="store_true")
    r.set_defaults(func=cmd_run_rm)

    e = sub.add_parser("exec", help="rate-independent exact execution")
    e.add_argument("net")
    e.add_argument("--init", required=True, help='e.g. "A_1=1,R_in=3"; rationals like 1/3 allowed')
    e.add_argument("--max-segments", type=int, default=10**6)
    e.add_argument("--log", help="write the transition log CSV here")
    e.add_argument("--lowest-index", action="store_true", help="break ties by lowest reaction index")
    e.set_defaults(func=cmd_exec)

    o = sub.add_parser("ode", help="mass-action integration with Hill inhibition")
    o.add_argument("net")
    o.add_argument("--init", required=True)
    o.add_argument("--t-end", type=float, default=2000.0)
    o.add_argument("--dt", type=float, default=1e-3)
    o.add_argument("--hill-k", type=float, default=1e5)
    o.add_argument("--sample", type=float, default=1.0)
    o.add_argument("-o", "--output", required=True)
    o.set_defaults(func=cmd_ode)

    s = sub.add_parser("oscillator", help="emit the ring oscillator net")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_oscillator)

    k = sub.add_parser("check-oscillation", help="count waves and periods in a trajectory CSV")
    k.add_argument("trajectory")
    k.add_argument("--species", required=True)
    k.add_argument("--eps", default=None)
    k.set_defaults(func=cmd_check_oscillation)
    return p


def run_cli(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run-rm" and args.input < 0:
        print("icrn: error: --input must be nonnegative", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.func(args)
    except (core.ParseError, UsageError, ode.NonFiniteState) as e:
        print(f"icrn: error: {e}", file=sys.stderr)
        return EXIT_ERROR


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
