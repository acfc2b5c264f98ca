# coding: utf-8

# # A shape resonance behind a double barrier
#
# 10 x^2 exp(-x^2) traps a quasi-bound state.  Once the continuum has rotated past it the
# resonance appears as an isolated eigenvalue of H(i phi) in the lower half plane that does
# not move when phi changes further.

# In[1]:

from dilatlab import Grid, LTConstants, classify, spectrum_at, verify
from dilatlab.potentials import QuadraticGaussian

V = QuadraticGaussian(c=1.0, amplitude=10.0)
grid = Grid(10.0, 800)
cls = classify(V, grid, 0.6, 0.4)
for e in cls.resonance:
    print("resonance", e.value)


# In[2]:

for phi in (0.45, 0.5, 0.55, 0.6):
    z = min((e.value for e in spectrum_at(V, grid, phi)),
            key=lambda w: abs(w - cls.resonance[0].value))
    print(f"phi={phi}: {z:.8f}")


# In[3]:

r = verify("Resonance", V, grid, LTConstants(1.5, 1), phi=0.6, classification=cls)
print(r.lhs, r.rhs, r.satisfied)
