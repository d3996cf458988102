#!/usr/bin/env python3
# The per-cell information limit and the loss-dominates-boundary
# threshold: a nonsurjective automaton eventually loses more than any
# fixed boundary can carry.

from feketeca import (
    diagonal_schedule,
    excess_ratio_threshold,
    lambda_estimate,
    make_builtin,
    out_size_transfer_1d,
    theorem2_threshold,
)

####
# 1. lambda brackets: 1.0 exactly for surjective rules, strictly below
#    for AND (its limit is log2 of the dominant growth rate, ~0.81137)
####

for name in ("shift", "xor1d", "and1d"):
    ca = make_builtin(name)
    est = lambda_estimate(ca, diagonal_schedule(1, 2000))
    lo, hi = est.bracket
    print(f"{name:6s} lambda bracket: [{lo:.6f}, {hi:.6f}]"
          + ("   <- rules out surjectivity" if est.excludes_surjective else ""))

# 2D: brute-force counts up to (3,3) already push the certified upper
# bound below 1
and2d = make_builtin("and2d")
est = lambda_estimate(and2d, diagonal_schedule(2, 3))
print(f"and2d  lambda upper bound from (3,3): {est.bracket[1]:.6f}")

####
# 2. boundary growth: the excess (x+r1)(y+r2)-xy per unit volume dies
#    off, and the finder locates where it drops below any epsilon
####

print()
for eps in (0.5, 0.1, 0.02):
    t = excess_ratio_threshold((1, 2), eps, (500, 500))
    print(f"excess ratio < {eps}: from box {tuple(t)} on (within the 500x500 search)")

####
# 3. the threshold: beyond t, loss(n) >= boundary excess + K.  For AND
#    with widths (2,) and K = 1 the right side is the constant 3, and the
#    scan certifies every n between t and 64
####

print()
and1d = make_builtin("and1d")
report = theorem2_threshold(and1d, K=1, r=(2,), delta=0.9, search_box=(64,))
print(f"threshold t = {tuple(report.t)}  (delta = {report.delta}, "
      f"observed lambda upper bound = {report.lambda_upper:.4f})")
print(f"verified cells: {len(report.checked_region)}  re-checked: {report.verified}")

out = {r.sides[0]: r.out_size for r in out_size_transfer_1d(and1d, 64)}
import math
n = report.t[0]
print(f"loss at t: {n - math.log2(out[n]):.3f} >= 3;"
      f" at 64: {64 - math.log2(out[64]):.3f}")

# with zero widths and K = 0 the inequality is just loss >= 0 and the
# gate condition alone decides the threshold
report0 = theorem2_threshold(and1d, K=0, r=(0,), delta=0.9, search_box=(64,))
print(f"degenerate case r=(0,), K=0: t = {tuple(report0.t)}")

# at desk scale the 2D variant honestly fails: the boundary excess is
# still far larger than the loss a 3x3 table can witness
report2d = theorem2_threshold(and2d, K=0, r=(1, 1), delta=None, search_box=(3, 3))
print(f"and2d within (3,3): threshold found = {report2d.found}")
