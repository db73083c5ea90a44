"""Name the hyperplanes of grids and paths by geometry instead of by id."""

from cubecx.graph import hyperplanes


def grid_lines(g, b):
    """Hyperplanes of grid(a, b) as (y-cuts, x-cuts), each ordered along its axis.

    Vertex (x, y) has id x * b + y; a y-cut is crossed by edges changing y.
    """
    ys, xs = [], []
    for H in hyperplanes(g):
        u, v = g.edges[H.edges[0]]
        if v - u == 1:
            ys.append((u % b, H.id))
        else:
            xs.append((u // b, H.id))
    return [h for _, h in sorted(ys)], [h for _, h in sorted(xs)]


def path_hyperplanes(g):
    """Hyperplane ids of a path ordered from vertex 0."""
    return [h for _, h in sorted((g.edges[H.edges[0]][0], H.id) for H in hyperplanes(g))]
