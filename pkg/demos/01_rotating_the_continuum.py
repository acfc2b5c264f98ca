# coding: utf-8

# # Rotating the continuum
#
# For the free operator the dilated Hamiltonian H(i phi) = e^{-2 i phi}(-d^2/dx^2) has its
# whole spectrum on the ray arg z = -2 phi.  A finite-difference box reproduces this exactly,
# which makes it a good first sanity check of the discretisation.

# In[1]:

import numpy as np

from dilatlab import Grid, spectrum_at, zero_potential
from dilatlab.spectra import ray_distance


# In[2]:

grid = Grid(20.0, 400)
for phi in (0.1, 0.3, 0.6):
    eigs = spectrum_at(zero_potential(), grid, phi)
    args = np.angle([e.value for e in eigs])
    dist = max(ray_distance(e.value, phi) for e in eigs)
    print(f"phi={phi}: arg range [{args.min():+.12f}, {args.max():+.12f}], -2phi={-2 * phi:+.3f}, "
          f"max distance to ray {dist:.1e}")


# Adding a well does not change the picture far from the origin, but the bound state stays
# put on the negative axis while the continuum swings down.

# In[3]:

from dilatlab import Gaussian

V = Gaussian(c=1.0, amplitude=-1.2)
for phi in (0.0, 0.2):
    vals = sorted((e.value for e in spectrum_at(V, grid, phi)), key=lambda z: z.real)
    print(phi, np.round(vals[:3], 6))
