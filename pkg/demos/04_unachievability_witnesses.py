"""Walkthrough: mechanized witnesses for the two unachievability arguments.

Why can't the fair-coin problem reach mode I?  Because its world family
admits two worlds that share one infinite data stream while disagreeing on
the truth: whatever a method outputs on that stream, it is wrong in one of
them.  Why can't bias estimation reach mode II?  Because a method has only
countably many possible inputs, hence countably many possible outputs,
while the candidate pool is a continuum: some value is never output at all.

Run:  python demos/04_unachievability_witnesses.py
"""

from fractions import Fraction

import convlab as cl

# --- Underdetermination: one stream, two truths ----------------------------

coin = cl.fair_coin()
w1, w2 = cl.underdetermination_witness(coin, horizon=64)
print("== shared-branch pair in the fair-coin world family")
print(f"  {w1.id}: truth {w1.truth}")
print(f"  {w2.id}: truth {w2.truth}")
print("  shared prefix:", "".join(map(str, w1.branch.prefix(16))), "...")

print("\n  stage-by-stage: zero loss in one world forces loss in the other")
for n in (4, 16, 64):
    out = cl.output_at(cl.fair_coin_test, w1, n)
    print(f"  n={n:3d} output={out:6s} "
          f"loss@{w1.id}={cl.loss_of(coin, out, w1)} "
          f"loss@{w2.id}={cl.loss_of(coin, out, w2)}")

# The coherent raven family has no such pair: each branch fixes its truth.
print("\nraven witness:", cl.underdetermination_witness(cl.easy_raven()))

# Reading the raven family *literally* (admitting incoherent pairs) brings
# underdetermination back -- exposed behind a flag for inspection:
literal = cl.easy_raven(max_first_zero=3, literal=True)
pair = cl.underdetermination_witness(literal)
print("literal-reading witness:", (pair[0].id, pair[1].id))

# --- Cardinality: a value the estimator can never produce -------------------

print("\n== outputs of the frequency estimator on inputs of length <= 4")
outputs = sorted(
    {cl.frequency_estimator.decide_counts(n, k) for n in range(1, 5) for k in range(n + 1)}
)
print("  ", [str(v) for v in outputs])
witness = cl.cardinality_witness(cl.frequency_estimator, 4)
print("  never-output witness (widest-gap midpoint):", witness)

# At depth 15 the outputs are every fraction with denominator <= 15; the
# widest remaining gap still has positive width, so a witness always exists.
w15 = cl.cardinality_witness(cl.frequency_estimator, 15)
report = cl.cardinality_witness_report(cl.frequency_estimator, 15)
print(f"\ndepth 15: witness {w15} inside gap {report['gap']}, "
      f"{report['distinct_outputs']} distinct outputs enumerated")

# Consequence: in a world whose true bias IS the witness value, the chance
# of outputting exactly the truth stays zero forever -- no method with these
# outputs achieves stochastic identification over a continuum of hypotheses.
bias = cl.coin_bias([w15])
world = bias.worlds[0]
print("loss of the nearest possible outputs in that world:")
for n, k in ((15, 0), (15, 1)):
    out = cl.frequency_estimator.decide_counts(n, k)
    print(f"  output {out}: loss {cl.loss_of(bias, out, world)} (never 0)")
