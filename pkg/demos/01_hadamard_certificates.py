"""Certify that generalized Walsh-Hadamard matrices are not rigid, then check the claim exactly."""

from rigidity_forge.certify import gwh_decompose, verify
from rigidity_forge.fields import cyclotomic
from rigidity_forge.tuples import build_s_plan, count_perm_s

# %% H_{2,8}: a 256 x 256 +-1 matrix over Q
plan = build_s_plan(2, 8, 3)  # every tuple with >= 3 zeros and >= 3 ones gets zeroed out
print("points where the new function vanishes:", count_perm_s(plan))
print("support size of the correction:", plan.t_size)

cert = gwh_decompose(2, 8, 3, cyclotomic(1))
rep = verify(cert)
for line in rep.lines():
    print(line)

# %% H_{3,4} over Q(zeta_3)
cert = gwh_decompose(3, 4, 1, cyclotomic(3))
rep = verify(cert)
print(f"H_3,4: rank {rep.achieved_rank} after changing at most {max(rep.max_per_row, rep.max_per_col)} entries per row/col")

# %% smaller m gives lower rank but more changes
for m in (1, 2, 3, 4):
    rep = verify(gwh_decompose(2, 8, m, cyclotomic(1)))
    print(f"m={m}: rank {rep.achieved_rank:3d}, sparsity {max(rep.max_per_row, rep.max_per_col)}")
