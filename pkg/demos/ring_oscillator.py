"""
A ring of mutually inhibiting species
=====================================

``X_i -[X_{i-1}]-> X_{i+1}`` passes a unit of concentration around a ring. Each
hand-off is one straight-line segment, so n segments make one lap, and the
odd-index species take turns rising to 1 and falling back to 0.
"""

from icrn.execute import build_ring_oscillator, run_to_static
from icrn.waves import count_periods, find_waves

n = 5
net = build_ring_oscillator(n)
traj = run_to_static(net, {"X_0": 1}, max_segments=4 * n).trajectory

for s in net.species:
    print(s, [str(v) for v in traj.series(s)])

odd = [f"X_{i}" for i in range(1, n, 2)]
print("waves:", find_waves(traj, odd))
print("periods of", odd, "=", count_periods(traj, odd))
