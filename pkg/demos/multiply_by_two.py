"""
Doubling a number with inhibitory reactions
===========================================

A four-line register machine doubles its input. We compile it into an
inhibitory CRN, run it under exact rate-independent semantics, and check the
projected trace against the interpreter.
"""

from icrn import compile_machine, format_compiled, initial_configuration, parse_rm, run, run_to_static
from icrn.execute import project_trace

program = parse_rm(
    """
    dec r_in, 5
    inc r_out
    inc r_out
    goto 1
    halt
    """
)

# The interpreter is the reference.
print(run(program, 3, fuel=1000))

# Each non-halt line becomes a three-phase oscillator stage A_i -> B_i -> C_i.
net = compile_machine(program)
print(format_compiled(net))

# Exact execution: every segment is a maximal straight line, flux exactly 1.
result = run_to_static(net.net, initial_configuration(net, 3), max_segments=1000)
print(result.outcome.name, "after", result.segments, "segments; final", dict(result.final))

# Reading off the A_i transition points recovers the machine's own trace.
for line, registers in project_trace(net, result.trajectory)[:6]:
    print(f"  line {line}: {registers}")
