"""
Rounded summation with repeated and non-repeated inputs
=======================================================

Sums 10,000 one-decimal values (many repeats, including a big block of
exact ties at 0.5) and 10 distinct values, rounding every element to an
integer first.  Convergent rounding is deterministic (zero variance) but
its tie rule pushes every 0.5 to 0, which accumulates a large bias on the
repeated inputs; the stochastic modes stay near-unbiased at the cost of
variance.
"""

from srlab import CaseId, DeterministicMode, Preset, SR, optimize_table, run_summation_experiment

d1 = optimize_table(Preset.D1, grid_size=201)
d2 = optimize_table(Preset.D2, grid_size=201)
modes = [("sr", SR), ("cr", DeterministicMode.HALF_EVEN), ("d1", d1), ("d2", d2)]

for case in (CaseId.I, CaseId.III):
    print(f"case {case.value}:")
    print(f"  {'mode':>4}  {'|bias|':>10}  {'variance':>10}  {'rel err':>10}  {'reps':>6}")
    for label, mode in modes:
        rep = run_summation_experiment(case, mode, n_reps=2000, seed=0)
        s = rep.summary
        print(f"  {label:>4}  {s.abs_bias:10.3f}  {s.variance:10.3f}  {s.mean_abs_rel_err:10.5f}  {s.n_samples:6d}")
    print()
