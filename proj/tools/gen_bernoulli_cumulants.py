#!/usr/bin/env python3
"""Regenerates include/monferm/bernoulli_cumulants.hpp.

Cumulants of a Bernoulli(p) variable are derivatives at t=0 of
ln(1 - p + p e^t). Each even cumulant is written as a polynomial in
p, coefficients stored lowest order first.
"""
import sympy as sp

p, t = sp.symbols("p t")
cgf = sp.log(1 - p + p * sp.exp(t))
orders = [2, 4, 6, 8]
rows = []
for n in orders:
    k = sp.expand(sp.simplify(sp.diff(cgf, t, n).subs(t, 0)))
    poly = sp.Poly(sp.simplify(k), p)
    coeffs = [int(poly.coeff_monomial(p**i)) for i in range(n + 1)]
    rows.append((n, coeffs))

out = []
out.append("// Generated by tools/gen_bernoulli_cumulants.py. Do not edit.")
out.append("#pragma once")
out.append("")
out.append("#include <array>")
out.append("")
out.append("namespace monferm::detail {")
out.append("")
out.append("// kBernoulliCumulants[i][j]: coefficient of p^j in the cumulant of order 2(i+1).")
out.append("inline constexpr std::array<std::array<double, 9>, 4> kBernoulliCumulants{{")
for n, c in rows:
    padded = c + [0] * (9 - len(c))
    out.append("    {{" + ", ".join(f"{v}.0" for v in padded) + "}},  // order " + str(n))
out.append("}};")
out.append("")
out.append("}  // namespace monferm::detail")
print("\n".join(out))
