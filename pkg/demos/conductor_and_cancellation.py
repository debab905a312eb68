"""Conductor of the cusp and the rigidity argument for R[x]."""
import sympy

from affembed.fields import QQ
from affembed.graded import SubalgebraPresentation
from affembed.lnd import cancellation_trace
from affembed.normalize import conductor, extension_conductor_check, normalize_curve
from affembed.unipoly import UniPoly

s = UniPoly.gen(QQ, "s")
P = SubalgebraPresentation(QQ, (s**2, s**3), QQ, "s")
norm = normalize_curve(P)
print("normalization:", norm.to_json())
cond = conductor(P, norm)
print("conductor:", cond.to_json())
print("R[x]:", extension_conductor_check(norm, cond, bound=10))

# D = d/dx, then D with Dx = theta^2
for ext in ([1], [sympy.Symbol("s") ** 2]):
    tr = cancellation_trace([s**2, s**3], 1, [0, 0], ext)
    print()
    print(tr.narrative())

print()
print(cancellation_trace([s], 1, [0], [1]).narrative())
