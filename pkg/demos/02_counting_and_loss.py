#!/usr/bin/env python3
# Exact reachable-pattern counting for the 1D AND automaton, two ways,
# and the information loss that certifies it nonsurjective.

import math

from feketeca import (
    find_orphan,
    loss,
    make_builtin,
    out_size_bruteforce,
    out_size_transfer_1d,
)

and1d = make_builtin("and1d")   # q=2, neighbourhood (0, +1), f(a,b) = a*b

####
# 1. counts by brute force (every input enumerated) and by the image
#    automaton (subset-determinized de Bruijn graph) -- always equal
####

print("n  brute  transfer  full   loss(q-its)")
transfer = out_size_transfer_1d(and1d, 12)
for n in range(1, 13):
    brute = out_size_bruteforce(and1d, n)
    rec = transfer[n - 1]
    assert brute.out_size == rec.out_size
    lam = loss(and1d, rec).lambda_qits
    print(f"{n:2d} {brute.out_size:6d} {rec.out_size:8d} {rec.full_size:6d}   {lam:.5f}")

####
# 2. the first hole in the image: pattern 101 has no preimage
#    (101 forces its ends to come from 11, which makes the middle 1)
####

print()
cert = find_orphan(and1d, 3)
print("minimal orphan at n=3:", cert.pattern.cells, " code:", cert.pattern.code(2))
print("no orphan at n=2:", find_orphan(and1d, 2) is None)

####
# 3. counts grow like a power: Out(n+1)/Out(n) approaches the growth rate
#    2^0.8114 ~ 1.7549, so each new cell carries about 0.81 bits, not 1
####

print()
big = out_size_transfer_1d(and1d, 2000)
for n in (10, 100, 1000, 2000):
    out = big[n - 1].out_size
    print(f"n={n:5d}: log2(out)/n = {math.log2(out) / n:.6f}")

####
# 4. exact big integers all the way: the n=2000 count has hundreds of
#    digits and is still exact
####

print()
print("digits in Out(2000):", len(str(big[-1].out_size)))

####
# 5. the same machinery in 2D (brute force only): the AND-of-three rule
#    first loses patterns on a 2x3 window
####

print()
and2d = make_builtin("and2d")
print("sides  out  full")
for sides in [(1, 1), (2, 2), (2, 3), (3, 3)]:
    rec = out_size_bruteforce(and2d, sides)
    mark = "  <- deficient" if rec.out_size < rec.full_size else ""
    print(f"{sides}  {rec.out_size:4d} {rec.full_size:5d}{mark}")
cert = find_orphan(and2d, (2, 3))
print("orphan pattern on 2x3:")
for row in cert.pattern.grid_rows():
    print("  ", *row)
