"""Certificates over F_p: work in an extension when roots are missing, then descend with Frobenius."""

from rigidity_forge.certify import Certificate, conjugate_descent, gwh_finite_field, verify
from rigidity_forge.fields import finite_field, prime_field
from rigidity_forge.linalg import ExactMatrix, SparseChanges
from rigidity_forge.structured import circulant, realize

# %% F_7 already has cube roots of unity
cert = gwh_finite_field(3, 3, prime_field(7), 1)
print(cert.field, verify(cert).lines())

# %% F_5 has no cube roots; H_{2,4} needs fourth roots which F_5 has
cert = gwh_finite_field(2, 4, prime_field(5), 1)
print(cert.field, verify(cert).passed)

# %% descent: a rank one certificate over F_25 for a matrix with F_5 entries
F25 = finite_field(5, 2)
desc = circulant([F25.element(v) for v in (1, 2, 3, 4)], F25)
M = realize(desc)
u = ExactMatrix.from_vector(F25, [F25.gen, F25.one, F25.gen + 1, F25.zero])
v = ExactMatrix.from_vector(F25, [F25.one, F25.gen * 2, F25.gen, F25.one])
E = SparseChanges.from_dense(M - u @ v.transpose())
up = Certificate(desc, F25, E, 1, 4)
down = conjugate_descent(up)
print("over", up.field, verify(up).lines()[1])
print("over", down.field, verify(down).lines()[1])  # rank at most 2 = degree * 1
