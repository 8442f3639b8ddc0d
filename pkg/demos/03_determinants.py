#!/usr/bin/env python
# coding: utf-8

# Frobenius determinants on H^1_c and on a middle convolution, from local
# epsilon data only, checked against brute-force traces.

# In[1]:


from midconv import PINNED, ALL_CONVENTIONS, MulChar, PointOrbit, kummer_sheaf, make_field
from midconv.epsilon import EpsilonContext, det_h1c, det_mc, kernel_det
from midconv.mc import mc_rank
from midconv.oracle import ExplicitSheaf, charpoly_frobenius, mc_charpoly

B = make_field(7, 1)
fac = [(PointOrbit.rational(B, 0), MulChar(B, 1, 3)),
       (PointOrbit(B, (1, 0, 1)), MulChar(B, 1, 1))]   # x^2 + 1 has no root mod 7
F = kummer_sheaf(B, fac)
E = ExplicitSheaf(B, tuple(fac))
chi = F.infinity_character()   # the convolution character must match infinity
chi.e, mc_rank(F, chi)


# In[2]:


for y in (1, 2, 3):
    sym = det_h1c(F, chi, y)
    orc = charpoly_frobenius(E, chi, y).det
    print(y, sym == orc, complex(sym.approx()))


# In[3]:


for y in (1, 2, 3):
    print(y, det_mc(F, chi, y) == mc_charpoly(E, chi, y).det)


# In[4]:


# the kernel determinant is where the conventions enter; only invariant lines matter,
# and a Kummer input has none at finite points, so every convention agrees here
print([(c.to_json(), kernel_det(F, chi, 2, EpsilonContext(B, c)) == kernel_det(F, chi, 2)) for c in ALL_CONVENTIONS])
