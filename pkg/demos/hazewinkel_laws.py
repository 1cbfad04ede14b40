"""
Hazewinkel's p-typical formal group laws
========================================

Build the logarithm, check its functional equation, exponentiate it into a
law over Z_(p), and read off the height and the Araki coordinates.
"""
from fglchar.fgl import (
    araki_coordinates,
    check_axioms,
    genus_value,
    hazewinkel_law,
    hazewinkel_log,
    integral_g,
    torsion_order,
    verify_functional_equation,
)
from fglchar.series import reduce_mod_max

# %%
# The logarithm for p = 2, height 1 only has terms in degrees 2^k.
p, n = 2, 1
log = hazewinkel_log(p, n, 16)
print("log(X) =", log)

# %%
# It satisfies p log(X) = log(pX) + log(X^q), and g(X) = log(pX)/p has
# p-integral coefficients even though log itself does not.
print(verify_functional_equation(log, p, p ** n, 16).line())
g, rep = integral_g(log, p)
print("g(X) =", g, "|", rep.line())

# %%
# F(X, Y) = exp(log X + log Y) is a formal group law over Z_(2).
F = hazewinkel_law(p, n, 8)
print("F(X, Y) =", F.law)
print(check_axioms(F).line())

# %%
# [2](X) reduces to X^2 mod 2, so the law has height one, and the
# 4-torsion has order 4.
print("[2](X) mod 2 =", reduce_mod_max(F.p_series))
print("|F[2]| =", torsion_order(F, 1), " |F[4]| =", torsion_order(F, 2))

# %%
# Height two at p = 2: Araki coordinates v_0 = 2, v_1 = 0, v_2 = 1.
F2 = hazewinkel_law(2, 2, 16)
print("Araki coordinates (2, 2):", [str(v) for v in araki_coordinates(F2, 3).values])

# %%
# The genus of complex projective space CP^m is (m + 1) times the
# coefficient of X^(m+1) in the logarithm.
for m in range(1, 8):
    print(f"genus(CP^{m}) =", genus_value(2, 1, m).value)
