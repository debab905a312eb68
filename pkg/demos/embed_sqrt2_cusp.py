"""A cusp with irrational coefficients: R = Q[a s^2, a s^3], a^2 = 2.

R has transcendence degree one but does not sit inside Q[t] for any t;
the embedding needs one more square root.
"""
from affembed.embed import EmbeddingProblem, construct_embedding, jacobian_trdeg
from affembed.fields import QQ, adjoin_algebraic
from affembed.graded import SubalgebraPresentation, degree_data
from affembed.unipoly import UniPoly

K = adjoin_algebraic(QQ, "a", [-2, 0, 1])
a = K.gen()
s = UniPoly.gen(K, "s")
P = SubalgebraPresentation(K, (a * s**2, a * s**3), QQ, "s")

print("trdeg R over Q:", jacobian_trdeg(P.generators, QQ))
print("degree semigroup:", degree_data(P, 12).to_json())

cert = construct_embedding(EmbeddingProblem(P, bound=10, seed=1))
print("case:", cert.case, " d =", cert.d)
print("tower:", cert.field_tower)
print("t =", cert.t)
for g, img in zip(P.generators, cert.images):
    print(f"  {g}  ->  {img}")

# every check is redone from scratch
print(cert.verification["checks"])
print("rank tables agree to N = 10:", cert.verification["ranks"]["source"])
