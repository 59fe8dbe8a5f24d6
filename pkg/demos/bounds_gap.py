"""How loose are the classical error bounds compared to the exact prediction?

For a bilevel spectrum we tabulate, across sketch sizes k:

* the optimal rank-k floor (tail energy) -- unbeatable;
* the exact asymptotic prediction from the fixed point;
* the best tail-times-prefactor upper bound, minimized over the free
  index r < k;
* the classical oversampling bound at the same r.

The exact prediction typically sits a few percent above the floor, while
the classical bound overshoots by a factor that grows linearly in k when
the oversampling k - r is held constant -- the whole motivation for having
an exact prediction rather than bounds.

Run:  python demos/bounds_gap.py
"""

from rsvdlab import (
    bilevel_profile,
    bound_report,
    power_filter,
    prop2_upper,
    solve_filtered,
    solve_theta_tilde,
)

profile = bilevel_profile(50, 1000, 1.0, 0.7)

print("bilevel spectrum: 50 directions at 1.0, 950 at 0.7 (m = 1000)")
print()
print(f"{'k':>4} {'floor':>9} {'exact':>9} {'best upper':>11} {'r*':>4} {'classical':>10} {'over':>7}")
for k in (60, 80, 100, 150, 200, 300, 500):
    theta = solve_theta_tilde(profile, k).theta_tilde
    rep = bound_report(profile, k, r=max(0, k - 10))
    over = rep.halko_tropp / theta if rep.halko_tropp is not None else float("nan")
    print(
        f"{k:>4} {rep.lower:>9.2f} {theta:>9.2f} {rep.prop1_best:>11.2f} "
        f"{rep.prop1_best_r:>4} {rep.halko_tropp:>10.2f} {over:>6.1f}x"
    )

print()
print("with a power-iteration filter the filtered bound tracks the filtered")
print("prediction from above (k = 100, r = 50):")
print()
print(f"{'q':>4} {'prediction':>12} {'filtered bound':>15}")
for q in (0, 1, 2, 6, 10, 20):
    spec = power_filter(q)
    pred = solve_filtered(profile, 100, spec).theta_tilde
    bound = prop2_upper(profile, 100, 50, spec)
    print(f"{q:>4} {pred:>12.4f} {bound:>15.4f}")
print()
print(f"floor at k = 100: {900 * 0.49:.2f}  (the q -> infinity limit)")
