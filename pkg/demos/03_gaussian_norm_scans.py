# coding: utf-8

# # How the dilated L^p norm of a Gaussian depends on the angle
#
# For exp(-c x^2) the dilated norm is (pi / (F p))^{1/(2p)} with
# F = (Re c) cos 2phi - (Im c) sin 2phi.  When Im c < 0 it first shrinks and then grows,
# with its minimum at the critical angle.

# In[1]:

import math

import numpy as np

from dilatlab import Gaussian, critical_angle, gaussian_norm_closed_form, lp_norm_quadrature


# In[2]:

c = 1 - 1j
print("critical angle", critical_angle(c), "pi/8 =", math.pi / 8)
for phi in np.linspace(0.0, 0.6, 7):
    exact = gaussian_norm_closed_form(c, phi, 2.0)
    num = lp_norm_quadrature(Gaussian(c=c), phi, 2.0)
    print(f"phi={phi:.2f} closed form {exact:.12f} quadrature {num:.12f}")


# In[3]:

# Past the edge of the strip the integrand no longer decays.
from dilatlab import NonIntegrable

try:
    lp_norm_quadrature(Gaussian(c=1 + 1j), math.pi / 8, 2.0)
except NonIntegrable as exc:
    print("rejected:", exc)
