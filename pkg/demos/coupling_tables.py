#!/usr/bin/env python3
"""Finite-size tables of the coupling b and their infinite-size estimates.

Recomputes the spin-chain values at widths 4, 8, 12 and the dilute-polymer
values at widths 2..10, then extrapolates both families in 1/L.  The whole
run takes a few seconds; pass larger widths to the command-line driver
(``loopcells xxz-b --sizes ...``) for the slow iterative sizes.
"""

from loopcells import observables

print("spin chain (Hamiltonian convention):")
print(f"  {'L':>3}  {'b':>14}  {'gap exponent':>12}  {'gauge':>9}")
spin = []
for L in (4, 8, 12):
    m = observables.b_xxz(L)
    spin.append(m)
    print(f"  {L:>3}  {m.value:+14.8f}  {m.delta:12.6f}  {m.gauge_sensitivity:9.1e}")

fit = observables.extrapolate_b([m.L for m in spin], [m.value for m in spin])
print(f"  inf  {fit.value:+14.8f}  (spread over ansatz family: {fit.uncertainty:.3f})")
for name, value in fit.candidates.items():
    print(f"       {value:+14.8f}  via {name}")
print()

print("dilute polymers (transfer convention):")
print(f"  {'L':>3}  {'b':>14}  {'gap exponent':>12}  {'gauge':>9}")
poly = []
for L in (2, 4, 6, 8, 10):
    m = observables.b_polymer(L)
    poly.append(m)
    print(f"  {L:>3}  {m.value:+14.8f}  {m.delta:12.6f}  {m.gauge_sensitivity:9.1e}")

tail = [m for m in poly if m.L >= 4]
fit = observables.extrapolate_b([m.L for m in tail], [m.value for m in tail])
print(f"  inf  {fit.value:+14.8f}  (spread over ansatz family: {fit.uncertainty:.3f})")
for name, value in fit.candidates.items():
    print(f"       {value:+14.8f}  via {name}")
