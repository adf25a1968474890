#!/usr/bin/env python3
"""Walk through the heralded sign-shift gate on small photon-number states.

A beam splitter of reflectivity R, one extra single photon, and a detector
that fires on exactly one photon implement a conditional phase flip: the
heralded amplitude for |n> is (sqrt R)^(n-1) [R - n(1-R)], so the sign of
the output flips once n exceeds R/(1-R).  This script prints the closed
forms next to the full transform-plus-herald pipeline so the two routes
can be compared digit by digit.
"""

import math

from focksim import ns_amplitude, ns_amplitude_pol, ns_pipeline

print("Heralded amplitude for |n> at a balanced splitter (R = 1/2)")
print(f"{'n':>3} {'closed form':>15} {'pipeline':>15} {'herald prob':>13}")
for n in range(5):
    closed = ns_amplitude(n, 0.5)
    piped = ns_pipeline(0, n, 0.5, 0.5)
    print(f"{n:>3} {closed:>15.9f} {piped.amplitude.real:>15.9f} {piped.probability:>13.9f}")

print()
print("Two-photon polarization sector at R_V = R_H = 1/2:")
for m, n in ((2, 0), (1, 1), (0, 2)):
    closed = ns_amplitude_pol(m, n, 0.5, 0.5)
    piped = ns_pipeline(m, n, 0.5, 0.5)
    print(
        f"  |{m}_V;{n}_H>  ->  {closed:+.9f} * |{m}_V;{n}_H>   "
        f"(pipeline {piped.amplitude.real:+.9f}, success {piped.probability:.4f})"
    )
print("The |0V;2H> component flips sign while |2V;0H> does not, and the")
print("|1V;1H> input never produces the herald: it is filtered out entirely.")
print("Peak success probability is 1/8.")

print()
print("Critical reflectivities R = n/(n+1) null the amplitude:")
for n in range(1, 5):
    r = n / (n + 1)
    print(f"  n={n}, R={r:.4f}: amplitude = {ns_amplitude(n, r):+.2e}")

print()
print("Reflectivities used when two such gates build a two-qubit phase gate:")
r_v = 5.0 - 3.0 * math.sqrt(2.0)
r_h = (3.0 - math.sqrt(2.0)) / 7.0
piped = ns_pipeline(0, 2, r_v, r_h)
print(f"  R_V = {r_v:.9f}, R_H = {r_h:.9f}")
print(f"  |0_V;2_H> amplitude: closed {ns_amplitude_pol(0, 2, r_v, r_h):+.9f}, "
      f"pipeline {piped.amplitude.real:+.9f}")
