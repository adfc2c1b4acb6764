#!/usr/bin/env python3
"""Straight-line replay of the three-party clock scenario.

Independent of the C++ engine: every round is written out by hand with
exact rational arithmetic seeded from a high-precision reserve price.
Prints the values frozen into the C++ golden tests.
"""
from fractions import Fraction as F

import mpmath

mpmath.mp.dps = 50

# Reserve for pool1: cost 1, utilization 0.9, curve k=10, m=2, psi*=0.6.
reserve = mpmath.power(10, mpmath.mpf("0.9") ** 2 - mpmath.mpf("0.6") ** 2)
p = F(str(reserve))

alpha = F(1)
delta = F(1, 4)

buyer_a, buyer_b, seller_s = F(10), F(6), F(-2)

trajectory = []
t = 0
while True:
    trajectory.append(p)
    a_on = p <= buyer_a
    b_on = p <= buyer_b
    s_on = -p <= seller_s
    z = (1 if a_on else 0) + (1 if b_on else 0) - (1 if s_on else 0)
    if z <= 0:
        break
    inc = min(alpha * z, delta * p)
    p = p + inc
    t += 1

print("reserve", mpmath.nstr(reserve, 17))
for i, price in enumerate(trajectory):
    print("round", i, "price", repr(float(price)))
final = trajectory[-1]
print("rounds", t)
print("winners A", final <= buyer_a, "B", final <= buyer_b, "S", -final <= seller_s)
gamma_a = abs(buyer_a - final) / abs(final)
gamma_s = abs(seller_s + final) / abs(final)
print("gamma_A", repr(float(gamma_a)))
print("gamma_S", repr(float(gamma_s)))
print("median", repr(float((gamma_a + gamma_s) / 2)))
print("ratio_vs_baseline_4", repr(float(final / 4)))
