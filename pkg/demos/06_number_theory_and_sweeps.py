"""Good primes, well-factorable sizes and a small parameter sweep."""

from rigidity_forge.numtheory import ConfigFamily, GoodPrimeConfig, SearchExhausted, good_primes, pi_a, scales_search
from rigidity_forge.sweep import rows_to_csv, run_sweep

print("pi_1(50, 5) =", pi_a(1, 50, 5))
print("good primes in [10, 100], prime powers of q-1 <= 10:", good_primes(GoodPrimeConfig(10, 100, 10)))

fam = ConfigFamily()
for K in (50, 100, 200, 400):  # 200 stalls: the doubling step drops 11 at x = 48
    try:
        w = scales_search(K, fam)
    except SearchExhausted as exc:
        print(f"K={K}: no witness; {exc.diagnosis[-1]}")
        continue
    print(f"K={K}: N={w.N} = {' * '.join(map(str, w.primes))}")

# %% achieved (rank, sparsity) for H_{2,n}, n = 2..6
print(rows_to_csv(run_sweep("gwh", range(2, 7), {"d": "2", "m": "1"}, workers=1)))
