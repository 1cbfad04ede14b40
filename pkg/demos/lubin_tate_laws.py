"""
Lubin-Tate formal group laws
============================

For a uniformizer series f(X) = pi X + ... with f(X) = X^q mod pi there is a
unique law F with f(F(X, Y)) = F(f(X), f(Y)). The coefficients are solved
degree by degree over o_L / pi^N.
"""
from math import comb

from fglchar.arith import make_field, qp
from fglchar.lubin_tate import (
    lubin_tate_endomorphism,
    lubin_tate_law,
    standard_series,
    uniformizer_series,
    verify_lubin_tate,
)

# %%
# f(X) = (1 + X)^3 - 1 over Z_3 gives back the multiplicative law.
K = qp(3)
f = uniformizer_series(K, [0] + [comb(3, k) for k in range(1, 4)], 12)
F = lubin_tate_law(K, f, 12)
print("f(X) =", f)
print("F(X, Y) =", F.law)
print("correct mod 3^%d" % F.precision_achieved)

# %%
# The standard series 3X + X^3 gives a different law of the same height.
F = lubin_tate_law(K, standard_series(K, 12), 12)
print("F(X, Y) =", F.law.truncate(7))
print(verify_lubin_tate(F).line())

# %%
# Endomorphisms [a](X) = aX + ... commute with f for every a in Z_3.
print("[2](X) =", lubin_tate_endomorphism(F, 2).truncate(5))

# %%
# A ramified example: o_L = Z_2[y] with y^2 = 2, f(X) = yX + X^2. The
# coefficients are printed as coordinates in the basis 1, y.
R = make_field(2, 1, [0, 1], 2, [-2, 0, 1], name="Q2(sqrt2)")
F = lubin_tate_law(R, standard_series(R, 12), 12)
print("F(X, Y) =", F.law.truncate(3))
print(verify_lubin_tate(F).line(), "at 2-adic precision", F.precision_achieved)
