"""A coefficient that only shows up after cancellation.

Both leading coefficients of s^2 + u s and s^3 are 1, so at first glance
the ring looks defined over Q.  The combination w1^3 - w2^2 exposes u.
"""
from affembed.embed import EmbeddingProblem, construct_embedding, discover_coefficient_field
from affembed.fields import QQ, adjoin_transcendental
from affembed.graded import SubalgebraPresentation, filtration_basis
from affembed.unipoly import UniPoly

U = adjoin_transcendental(QQ, "u")
u = U.gen()
s = UniPoly.gen(U, "s")
w1, w2 = s**2 + u * s, s**3
print("w1^3 - w2^2 =", w1**3 - w2**2)

P = SubalgebraPresentation(U, (w1, w2), QQ, "s")
piece = filtration_basis(P, 6)
print("dims of R_<=n:", piece.dim_table())
print("leading coefficients in degree 5:", [e.lc for _, e, _ in piece.leading[5]])

print(discover_coefficient_field(EmbeddingProblem(P), bound=3).to_json())
print(discover_coefficient_field(EmbeddingProblem(P), bound=6).to_json())

cert = construct_embedding(EmbeddingProblem(P, bound=6))
for rej in cert.rejected[:3]:
    print("rejected u =", rej["u0"], rej["reason"])
print("final case:", cert.case, "over", cert.field_tower)
print("images:", cert.images)
