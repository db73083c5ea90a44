"""
Hyperplanes, distances and gates in a small grid
================================================

"""

from cubecx import generators as gen
from cubecx import carrier, dist_l1, dist_linf, gate, hyperplanes, project_set

# a 3 x 3 grid; vertex (x, y) has id 3 * x + y
g = gen.grid(3, 3)
for H in hyperplanes(g):
    print(H.id, "edges", H.edges, "carrier", H.carrier)

# l1 counts separating hyperplanes, l-infinity the longest disjoint run of them
print(dist_l1(g, 0, 8), dist_linf(g, 0, 8))

# gates onto the carrier of hyperplane 1 (the cut between x = 0 and x = 1)
N = carrier(g, 1)
print({x: gate(g, x, N) for x in range(g.n)})

# projecting one carrier onto another: the image is a whole row
proj = project_set(g, carrier(g, 2).vertices, carrier(g, 0))
print(proj.image, proj.diameter())
