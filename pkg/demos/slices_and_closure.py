"""D = x d/dy on Q[x, y]: nilpotency, slices, kernels, and the closure of Q[y^2]."""
import sympy

from affembed.lnd import (
    PolyDerivation,
    SliceData,
    closure_pipeline,
    is_locally_nilpotent,
    ml_intersection,
    reconstruct,
    slice_expansion,
)

x, y = sympy.symbols("x y")
D = PolyDerivation(["x", "y"], {"x": 0, "y": x})
print(D, is_locally_nilpotent(D).to_json())

sl = SliceData.make(D, y)
b = x**2 * y**3 + 5 * x * y - 7
exp = slice_expansion(D, sl, b)
print("b =", b)
for i, term in enumerate(exp.to_json()):
    print(f"  a_{i} = ({term['numerator']}) / x^{term['Ds_power']}")
rec, power = reconstruct(sl, exp)
print("x^P * b reconstructed:", rec == D.poly(b) * sl.Ds**power)

print("kernel to degree 3:", [str(p.as_expr()) for p in ml_intersection(["x", "y"], [D], 3)])

# D is linear, so it restricts to Q[V_2, V_3]; the closure of Q[y^2] there is Q[y^2, y^3]
out = closure_pipeline(["x", "y"], D, y**2, [y**2, y**3])
print("images in Q[t]:", out["certificate"].images)
print("normalization:", out["normalization"].to_json())
