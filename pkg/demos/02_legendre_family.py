#!/usr/bin/env python
# coding: utf-8

# The Legendre family y^2 = x(x - 1)(x - t) as a middle convolution.
# Tensor the constant sheaf with the quadratic character at 0 and at 1,
# then convolve with the quadratic character.

# In[1]:


from midconv import MulChar, PointOrbit, make_field
from midconv.oracle import mc_charpoly
from midconv.pipeline import PipelineStep, run_pipeline
from midconv.mc import rigidity_index

B = make_field(7, 1)
eps = MulChar.quadratic(B)
steps = [PipelineStep.MT(eps, PointOrbit.rational(B, 0)),
         PipelineStep.MT(eps, PointOrbit.rational(B, 1)),
         PipelineStep.MC(eps)]
state = run_pipeline(B, steps, with_oracle=True, samples=[2, 3, 4, 5, 6])
G = state.sheaf
G.rank, rigidity_index(G)


# In[2]:


# local monodromy: a unipotent block at 0 and at 1, the quadratic character at infinity
for s, L in G.singular:
    print(s.to_json(), [(b.n, b.chi.e, b.mult) for b in L.blocks])
[(b.n, b.chi.e, b.mult) for b in G.infinity.blocks]


# In[3]:


# the symbolic and brute-force tracks were compared after every step
for entry in state.log:
    print(entry["step"], entry["rank"], [(c["y"], c["rank"]) for c in entry["checks"]])


# In[4]:


# compare with point counts on the curves themselves
def a_t(p, t):
    sq = {x * x % p for x in range(1, p)}
    leg = lambda v: 0 if v % p == 0 else (1 if v % p in sq else -1)
    return -sum(leg(x * (x - 1) * (x - t)) for x in range(p))


E = state.explicit.parent
for t in range(2, 7):
    cp = mc_charpoly(E, eps, t)
    # trace of Frobenius is e_1; the convolution picks up eps(-1)
    print(t, cp.es[1], eps.at_minus_one() * a_t(7, t), cp.det)
