from fractions import Fraction

import pytest
from machines import MUL2_SOURCE

from icrn.compiler import compile_machine, initial_configuration
from icrn.core import Configuration, is_static, parse_icrn
from icrn.execute import (
    NoApplicable,
    Nondeterministic,
    Outcome,
    UnboundedSegment,
    build_ring_oscillator,
    format_transition_log,
    max_flux,
    next_transition,
    project_trace,
    read_transition_log,
    run_to_static,
    simulate_function,
    transition_points,
)
from icrn.regmachine import parse_rm, run


def rxn_text(net, j):
    return str(net.reactions[j])


def test_next_transition_a_to_b(mul2_net):
    net = mul2_net.net
    c, j, u = next_transition(net, Configuration({"A_1": 1, "R_in": 3}))
    assert c == {"B_1": 1, "R_in": 3}
    assert rxn_text(net, j) == "A_1 -[C_4]-> B_1" and u == 1


def test_next_transition_decrement(mul2_net):
    net = mul2_net.net
    c, j, u = next_transition(net, Configuration({"C_1": 1, "R_in": 3}))
    assert c == {"A_2": 1, "R_in": 2}
    assert rxn_text(net, j) == "C_1 + R_in -[B_1]-> A_2" and u == 1


def test_next_transition_zero_branch(mul2_net):
    net = mul2_net.net
    c, j, u = next_transition(net, Configuration({"C_1": 1}))
    assert c == {"A_5": 1}
    assert rxn_text(net, j) == "C_1 -[B_1,R_in]-> A_5" and u == 1


def test_next_transition_errors(mul2_net):
    with pytest.raises(NoApplicable):
        next_transition(mul2_net.net, Configuration({"A_5": 1}))
    net = parse_icrn("A -> B\nA -> C")
    with pytest.raises(Nondeterministic) as e:
        next_transition(net, Configuration({"A": 1}))
    assert e.value.applicable == (0, 1)
    assert next_transition(net, Configuration({"A": 1}), lowest_index=True).config == {"B": 1}
    with pytest.raises(UnboundedSegment):
        next_transition(parse_icrn("A -> A + B"), Configuration({"A": 1}))


def test_max_flux_uses_net_consumption():
    rxn = parse_icrn("2 A -> A + B").reactions[0]
    # r(A) = 2 but only one A is consumed per unit flux
    assert max_flux(rxn, {"A": Fraction(3)}) == 3
    rxn = parse_icrn("A + 2 B -> C").reactions[0]
    assert max_flux(rxn, {"A": Fraction(5), "B": Fraction(3)}) == Fraction(3, 2)


def test_run_mul2_three(mul2_net):
    r = run_to_static(mul2_net.net, initial_configuration(mul2_net, 3), 1000)
    assert r.outcome is Outcome.STATIC
    assert r.final == {"A_5": 1, "R_out": 6}
    assert r.segments == 39
    assert is_static(mul2_net.net, r.final)


def test_run_mul2_zero(mul2_net):
    r = run_to_static(mul2_net.net, initial_configuration(mul2_net, 0), 1000)
    assert r.outcome is Outcome.STATIC and r.final == {"A_5": 1} and r.segments == 3


def test_ring_never_static():
    r = run_to_static(build_ring_oscillator(3), {"X_0": 1}, 10)
    assert r.outcome is Outcome.FUEL_EXHAUSTED and r.segments == 10
    assert r.final == {"X_1": 1}


def test_nondeterministic_outcome():
    r = run_to_static(parse_icrn("A -> B\nA -> C"), {"A": 1}, 10)
    assert r.outcome is Outcome.NONDETERMINISTIC and r.applicable == (0, 1)


def test_no_consecutive_segments_share_a_reaction():
    r = run_to_static(parse_icrn("2 A -> A + B\nB -> A"), {"A": 4}, 50)
    fired = [j for j, _ in r.trajectory.fired]
    assert all(a != b for a, b in zip(fired, fired[1:]))


@pytest.mark.parametrize("n", [0, 3, 7])
def test_simulate_function_against_interpreter(mul2, mul2_net, n):
    expected = run(mul2, n, fuel=10_000).output(mul2)
    assert simulate_function(mul2_net, n, 1000) == expected == 2 * n


def test_simulate_function_out_of_budget(mul2_net):
    assert simulate_function(mul2_net, 3, 5) is None


def test_every_compiled_segment_is_unit_flux_between_transition_points(mul2_net):
    r = run_to_static(mul2_net.net, initial_configuration(mul2_net, 4), 1000)
    assert all(u == 1 for _, u in r.trajectory.fired)
    assert len(transition_points(mul2_net, r.trajectory)) == len(r.trajectory.points)
    osc = mul2_net.oscillator_species
    for p in r.trajectory.points:
        assert sum(p[s] for s in osc) == 1


def test_project_trace_matches_interpreter(mul2, mul2_net):
    r = run_to_static(mul2_net.net, initial_configuration(mul2_net, 2), 1000)
    rm = run(mul2, 2, fuel=1000, trace=True)
    assert project_trace(mul2_net, r.trajectory) == [(s.line, s.registers) for s in rm.trace]


def test_ring_oscillator_structure():
    net = build_ring_oscillator(3)
    assert [str(r) for r in net.reactions] == ["X_0 -[X_2]-> X_1", "X_1 -[X_0]-> X_2", "X_2 -[X_1]-> X_0"]
    net5 = build_ring_oscillator(5)
    assert len(net5.reactions) == 5
    assert str(net5.reactions[0]) == "X_0 -[X_4]-> X_1"
    assert str(net5.reactions[4]) == "X_4 -[X_3]-> X_0"
    with pytest.raises(ValueError):
        build_ring_oscillator(2)


def test_transition_log_round_trip(mul2_net):
    r = run_to_static(mul2_net.net, initial_configuration(mul2_net, 1), 1000)
    text = format_transition_log(mul2_net.net, r.trajectory)
    header, first, second = text.splitlines()[:3]
    assert header == "segment,fired_reaction,flux," + ",".join(mul2_net.net.species)
    assert first.startswith("0,,,1,")
    assert second.startswith("1,0,1,0,1,")
    assert read_transition_log(text) == r.trajectory


def test_transition_log_writes_rationals():
    net = parse_icrn("A -> B")
    r = run_to_static(net, {"A": Fraction(2, 3)}, 5)
    assert format_transition_log(net, r.trajectory).splitlines()[-1] == "1,0,2/3,0,2/3"


def test_machine_with_unused_input_register():
    cn = compile_machine(parse_rm("inc r_out\ninc r_out\nhalt"))
    assert simulate_function(cn, 9, 100) == 2


def test_mul2_source_fixture_is_the_table_machine(mul2):
    assert parse_rm(MUL2_SOURCE) == mul2
