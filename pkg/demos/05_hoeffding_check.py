"""
Checking the Hoeffding bound by simulation
==========================================

For N fair coin flips, the chance that the sample mean strays at least eps
from 0.5 is at most ``2 exp(-2 N eps^2)``.  We estimate that chance from
10 000 simulated batches and compare it with the bound, allowing three
binomial standard errors of Monte-Carlo noise.

The last block evaluates the deviation bound that combines this
concentration term with a Lipschitz term ``beta * L / tau``.
"""

import amaze
from amaze.theory import statistical_slack

root = amaze.SeededRng(0)
trials = 10_000
print("   N   eps   observed     bound")
for cell, (n, eps) in enumerate([(20, 0.1), (100, 0.1), (100, 0.2), (500, 0.05), (500, 0.1)]):
    freq = amaze.monte_carlo_violation(n, eps, trials, root.spawn(cell))
    bound = amaze.hoeffding_bound(n, eps)
    flag = "ok" if freq <= bound + statistical_slack(bound, trials) else "VIOLATED"
    print(f"{n:4d}  {eps:.2f}   {freq:.4f}    {bound:.4f}  {flag}")

for n_batch in (16, 64, 256):
    p = amaze.BoundParams(tau=0.07, beta=0.1, L=0.05, delta_conf=0.05, N_batch=n_batch)
    print(f"N_batch={n_batch:3d}: deviation <= {amaze.lemma1_deviation(p):.3f}")
