#!/usr/bin/env python
# coding: utf-8

# Finite fields, multiplicative characters and Gauss sums.
# Everything printed here is an exact element of a cyclotomic field.

# In[1]:


import numpy as np

from midconv import MulChar, make_field
from midconv.charsum import gauss_sum, jacobi_sum
from midconv.cyclo import CycloNum

B = make_field(3, 2)   # F_9
F = B.level(1)
F.info()


# In[2]:


# log and exp tables are plain numpy arrays indexed by element codes
F.exp[:8], F.log[:9]


# In[3]:


chi = MulChar.of_order(B, 4)
[chi.exponent_of(x) for x in range(1, 9)][:4]


# In[4]:


g = gauss_sum(chi)
print(g, g * g.conj())      # |g|^2 = 9


# In[5]:


# g(chi) g(chi^-1) = chi(-1) q
print(gauss_sum(chi) * gauss_sum(chi.inverse()) == chi.at_minus_one() * B.q)


# In[6]:


# Jacobi sums through Gauss sums: J g(chi chi') = -g(chi) g(chi')   (our sign convention)
psi = MulChar(B, 1, 4)
J = jacobi_sum(chi, psi)
print(J, J * gauss_sum(chi * psi) == -(gauss_sum(chi) * gauss_sum(psi)))


# In[7]:


# the table of |J|^2 over all pairs is q except where a character is trivial
# or the pair multiplies to the trivial character
N = B.q - 1
tab = np.zeros((N, N), dtype=int)
for a in range(N):
    for b in range(N):
        j = jacobi_sum(MulChar(B, 1, a), MulChar(B, 1, b))
        tab[a, b] = (j * j.conj()).to_rational()
print(tab)
