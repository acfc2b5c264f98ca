# coding: utf-8

# # Checking every applicable bound on a few complex potentials
#
# verify_suite classifies the spectrum once and evaluates all estimates whose angle
# requirement the potential meets.  ratio = lhs / rhs, so anything below 1 is satisfied.

# In[1]:

from dilatlab import Gaussian, Grid, LTConstants, Rational, verify_suite

grid = Grid(20.0, 600)
const = LTConstants(1.5, 1)
catalog = {
    "gauss, complex amplitude": Gaussian(c=1.0, amplitude=-1 + 0.3j),
    "rational s=2, complex": Rational(c=1.0, s=2.0, amplitude=-1 + 0.5j),
}


# In[2]:

for name, V in catalog.items():
    print(name)
    for r in verify_suite(V, grid, const, kappa=1.0):
        print(f"  {r.theorem_id:12s} n={r.n_contributing:2d} lhs={r.lhs:.4g} rhs={r.rhs:.4g} "
              f"ratio={r.ratio:.3f}")
