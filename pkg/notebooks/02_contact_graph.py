"""
Contact graphs and strongly separated chains
============================================

"""

import numpy as np

from cubecx import generators as gen
from cubecx import contact_graph, delta_chain, four_point_delta, qi_check

# along a path consecutive hyperplanes touch, so the contact graph is again a path
for k in (5, 10, 20):
    g = gen.path(k)
    cg = contact_graph(g)
    print(k, delta_chain(g, 0, k - 2).length, cg.dist[0, k - 2])

# a random dual: chain statistic against contact distance, pair by pair
g = gen.random_wallspace_dual(20, 10, 7)
cg = contact_graph(g)
rep = qi_check(g, cg)
print(rep.pairs, "pairs,", len(rep.violations), "violations,", rep.literal_upper_failures, "with d > 5 delta")
print("four-point delta", four_point_delta(cg))
print(np.bincount(cg.dist[np.triu_indices(len(cg.nodes), 1)]))
