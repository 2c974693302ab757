"""Evaluate the constants ledger for a few surfaces.

    python3 demos/constants.py
"""

from hiermodel.ledger import constants
from hiermodel.surfaces import Surface

for g, p in [(1, 1), (0, 4), (0, 5), (2, 0), (1, 3)]:
    S = Surface(g, p)
    c = constants(S, d0=1, delta0=1, delta1=2, K=1, m0=1, d=3, L=2, epsilon=1, epsilon1=1)
    print(f"S_{g},{p}: xi={S.xi} chi={S.chi} n0={c.n0} d1={c.d1} "
          f"delta2'={c.delta2_prime} delta2={c.delta2} gamma0={c.gamma0} a0={c.a0}")
