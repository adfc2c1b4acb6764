#!/usr/bin/env python3
"""High-precision closed-form evaluation of the congestion weighting curve."""
import mpmath

mpmath.mp.dps = 50


def weight(k, m, psi_star, psi):
    k, m, psi_star, psi = map(mpmath.mpf, (k, m, psi_star, psi))
    return mpmath.power(k, psi ** m - psi_star ** m)


print("w(0.9)", mpmath.nstr(weight(10, 2, "0.6", "0.9"), 17))
print("w(.99)/w(.80)", mpmath.nstr(weight(10, 2, "0.6", "0.99") / weight(10, 2, "0.6", "0.80"), 17))
print("w(.40)/w(.15)", mpmath.nstr(weight(10, 2, "0.6", "0.40") / weight(10, 2, "0.6", "0.15"), 17))
hot = weight(10, 2, "0.6", "0.95")
cold = weight(10, 2, "0.6", "0.30")
print("reserve(0.95)", mpmath.nstr(hot, 17))
print("reserve(0.30)", mpmath.nstr(cold, 17))
print("ratio", mpmath.nstr(hot / cold, 17))
