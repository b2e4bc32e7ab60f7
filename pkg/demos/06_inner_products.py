"""
Integer-rounded inner products of sine vectors
==============================================

x = sin(y) against y equidistant on [0, 2*pi].  On the integer grid the
product of two rounded factors is already an integer, so only the factors
are rounded.  Deterministic rounding wins for short vectors; past a few
hundred terms its accumulated bias overtakes the stochastic modes' noise
and the relative-error ranking flips.
"""

from srlab import DeterministicMode, SR, gen_sine_vectors, run_inner_product_experiment

print("exact inner products:")
for n in (50, 200, 1000):
    x, y = gen_sine_vectors(n)
    print(f"  n={n:>5}: <x, y> = {float(x @ y):.4f}")

print()
print(f"{'n':>5}  {'mode':>4}  {'|bias|':>8}  {'variance':>9}  {'rel err':>8}")
for n in (50, 200, 1000):
    for label, mode in (("sr", SR), ("cr", DeterministicMode.HALF_EVEN)):
        rep = run_inner_product_experiment(n, mode, n_reps=2000, seed=0)
        s = rep.summary
        print(f"{n:>5}  {label:>4}  {s.abs_bias:8.3f}  {s.variance:9.2f}  {s.mean_abs_rel_err:8.4f}")
