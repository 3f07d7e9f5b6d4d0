"""Path-enumeration oracle for small Paley-Walsh martingales.

Enumerates every sign path with exact rational arithmetic where possible and
prints the resulting L^p norms with 15 significant digits. The output is
frozen in tests/golden/path_enumeration.csv.
"""
import itertools
from fractions import Fraction

import mpmath as mp

mp.mp.dps = 40


def norm(values, p):
    total = sum(abs(mp.mpf(v.numerator) / v.denominator) ** p for v in values) / len(values)
    return total ** (mp.mpf(1) / p)


def paths(depth):
    return list(itertools.product((1, -1), repeat=depth))


# f_2 = eps_1 + eps_2
f2 = [Fraction(e1 + e2) for e1, e2 in paths(2)]
# g_2 = eps_1 - eps_2 for v = (1, -1)
g2 = [Fraction(e1 - e2) for e1, e2 in paths(2)]
# f_3 = eps_1 + eps_2 + d_3 eps_3 with d_3 = 2 when eps_1 != eps_2, else 0;
# g from v = (1, -1, 1)
f3 = [Fraction(e1 + e2 + (2 if e1 != e2 else 0) * e3) for e1, e2, e3 in paths(3)]
g3 = [Fraction(e1 - e2 + (2 if e1 != e2 else 0) * e3) for e1, e2, e3 in paths(3)]

print("name,value")
print(f"f2_p2,{mp.nstr(norm(f2, 2), 15)}")
print(f"f2_p4,{mp.nstr(norm(f2, 4), 15)}")
print(f"g2_p2,{mp.nstr(norm(g2, 2), 15)}")
print(f"f3_p3,{mp.nstr(norm(f3, 3), 15)}")
print(f"ratio3_p3,{mp.nstr(norm(g3, 3) / norm(f3, 3), 15)}")
print(f"ratio3_p1.5,{mp.nstr(norm(g3, mp.mpf(3) / 2) / norm(f3, mp.mpf(3) / 2), 15)}")
