"""Walkthrough: exact success probabilities and the concentration bound.

The success probability of a method at sample size n in a world is the
probability mass of length-n data sequences whose output meets a success
criterion (zero loss, or loss below eps).  For count-symmetric methods
under IID-Bernoulli data the engine computes it exactly as a binomial sum
in rational arithmetic; the frequency-concentration bound
1 - 1/(4*n*eps^2) certifies a floor under those probabilities.

Run:  python demos/02_bounds_and_exact_probabilities.py
"""

from fractions import Fraction

import convlab as cl

# --- The bound and the sample size it buys --------------------------------

print("== bound 1 - 1/(4*n*eps^2), clamped at 0")
for n, eps in [(25, "0.5"), (1, "0.1"), (100, "0.1"), (500, "0.1"), (501, "0.1")]:
    b = cl.bernoulli_bound(n, eps)
    print(f"  n={n:4d} eps={eps}: {b} = {float(b):.4f}")

print("\nsamples needed for eps=0.1 at confidence 0.95:",
      cl.required_sample_size("0.1", "0.05"))

# --- Exact curves dominate the bound ---------------------------------------

cb = cl.coin_bias([0.5])
w = cb.world("theta=0.5")
crit = cl.within("0.1")
print("\n== frequency estimator, theta=0.5, success = loss < 0.1")
print(f"{'n':>4s} {'exact P':>12s} {'bound':>10s}")
for n in (5, 10, 20, 50, 100):
    p = cl.exact_success_prob(cb, cl.frequency_estimator, w, n, crit)
    b = cl.bernoulli_bound(n, "0.1")
    assert p >= b
    print(f"{n:4d} {float(p):12.6f} {float(b):10.4f}")

# --- The fair-coin test on the truth ---------------------------------------

fc = cl.fair_coin()
wf = fc.world("theta=0.5")
print("\n== fair-coin test under a fair coin: P(output Fair), floor 1 - 1/(4*sqrt(n))")
for n in (1, 4, 16, 64, 256):
    p = cl.exact_success_prob(fc, cl.fair_coin_test, wf, n, cl.EXACT)
    floor = 1 - 1 / (4 * n**0.5)
    print(f"  n={n:4d}: exact={float(p):.6f}  floor={floor:.6f}")

# n=16 is a boundary case: the radius is exactly 1/2 and an all-heads sample
# deviates by exactly 1/2; the strict inequality tips it to Unfair, so the
# exact probability is 1 - 2**-15.
p16 = cl.exact_success_prob(fc, cl.fair_coin_test, wf, 16, cl.EXACT)
print("\nexact value at n=16:", p16, "=", float(p16))

# --- Monte Carlo agrees with the exact engine -------------------------------

est = cl.mc_success_prob(fc, cl.fair_coin_test, wf, 16, cl.EXACT, trials=200_000, seed=42)
print(f"Monte Carlo at n=16: {est.value:.6f} +- {est.stderr:.2g} "
      f"(|diff| = {abs(est.value - float(p16)):.2g})")

# --- Full curves with bound annotations -------------------------------------

curve = cl.success_curve(cb, cl.frequency_estimator, [w], crit, 200, stages=(20, 50, 100, 200))
print("\n== success_curve rows (world, n, estimate, bound)")
for pt in curve.points:
    print(f"  {pt.world_id} n={pt.n:3d} est={float(pt.estimate):.5f} bound={float(pt.bound):.5f}")
# Once n clears 25 the bound lifts off zero and the exact curve stays above
# it; by n = 200 the bound alone certifies success probability 0.875.
