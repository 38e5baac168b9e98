"""Rate-independent inhibitory chemical reaction networks: compile register machines, run them exactly, and integrate them."""

from .compiler import CompiledNet, compile_machine, format_compiled, initial_configuration, load_net, predecessors
from .core import (
    Configuration,
    ICRNError,
    Icrn,
    InapplicableFlux,
    NegativeResult,
    ParseError,
    Reaction,
    applicable,
    apply_segment,
    format_icrn,
    is_static,
    parse_configuration,
    parse_icrn,
    stoichiometry_matrix,
)
from .execute import (
    ExecResult,
    Nondeterministic,
    Outcome,
    Trajectory,
    build_ring_oscillator,
    next_transition,
    project_trace,
    run_to_static,
    simulate_function,
    transition_points,
)
from .ode import OdeSettings, SampledTrajectory, derivatives, integrate, reaction_rate
from .regmachine import RegisterMachine, RmState, parse_rm, run, step
from .waves import Wave, count_periods, find_waves

__version__ = "0.1.0"
