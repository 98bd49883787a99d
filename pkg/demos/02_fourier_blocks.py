"""How DFT_N with squarefree N breaks into blocks that are group circulants, and what that buys."""

from rigidity_forge.certify import DftBlockPlan, dft_blocks, dft_decompose, verify
from rigidity_forge.fields import cyclotomic, field_with_roots

plan = DftBlockPlan((3, 5))
F = field_with_roots(cyclotomic(1), [15])
blocks = dft_blocks(plan, F)
print("partition ok:", blocks.partition_ok, " copy counts ok:", blocks.counts_ok, " circulant ok:", blocks.circulant_ok)
for S, rec in sorted(blocks.records.items()):
    print(f"S={S}: group {tuple(rec.group)}, {len(rec.copies)} copies")

# %% certificate for DFT_15; at this size the honest answer is close to trivial
cert = dft_decompose(plan, cyclotomic(1))
rep = verify(cert)
print("zero blocks:", rep.lines()[1], "| degenerate:", cert.degenerate)

cert = dft_decompose(DftBlockPlan((3, 5), trivial_blocks="full"), cyclotomic(1))
rep = verify(cert)
print("full blocks:", rep.lines()[1], rep.lines()[2])
