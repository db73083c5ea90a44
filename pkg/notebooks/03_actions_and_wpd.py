"""
Symmetries, displacement and window certificates
================================================

"""

from cubecx import corpus as K
from cubecx import generators as gen
from cubecx import Automorphism, acyl_profile, displacement_check, generate_group, wpd_certificate

# the full symmetry group of the 3-cube
q3 = gen.cube(3)
grp = generate_group(q3, K.q3_generators())
print(grp.order, acyl_profile(grp).to_dict())

# the coordinate 3-cycle fixes 000 and 111 but moves a midpoint by 2
cyc = Automorphism(q3, K.cube_coordinate_map(3, [2, 0, 1]))
rep = displacement_check(cyc, 0, 7, [0, 4, 6, 7])
print(rep.displacements, "C =", rep.C, "d =", rep.d, rep.literal_holds, rep.corrected_holds)

# coset trees: pair stabilisers shrink with separation but grow with depth
for d in (2, 3, 4):
    print(d, acyl_profile(generate_group(gen.coset_tree(d), gen.coset_tree_action(d))).n_hyp)

# windows of periodic complexes with a partial shift
for name, p in K.window_actions().items():
    doc = wpd_certificate(p).to_dict()
    print(name, doc["kind"], doc.get("degree", doc.get("reason")))
