"""A tour of the library API on the type C austere space in dimension four.

Run with ``python3 demos/walkthrough.py``.
"""
from austere_eds import geometry
from austere_eds.austere import (SymSpace, case_representative, classify_pair, is_austere,
                                 maximal_basis, prolongation)
from austere_eds.frames import FrameBundleSpec, semi_orthonormal_bundle
from austere_eds.pfaffian import cartan_characters, integral_element_space, standard_system

# Maximal austere subspaces of symmetric 4x4 matrices and their prolongations.
for kind in "ABC":
    space = maximal_basis(kind)
    print(f"Q_{kind}: dim {space.dim}, austere {bool(is_austere(space))}, "
          f"prolongation dim {prolongation(space).dimension}")

# A non-austere span comes with a certificate polynomial.
ident = SymSpace(4, ([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]],))
print("span{I}:", is_austere(ident).certificate)

# The standard Pfaffian system for type C, with the eigenvalue parameters as
# extra unknowns subject to their defining relation.
model = semi_orthonormal_bundle(FrameBundleSpec(n=4, r=3, params=("l1", "l2", "l3"),
                                                constraints=("l1*l2*l3+l1+l2+l3",)))
system = standard_system(model, maximal_basis("C"))
space = integral_element_space(system)
chars = cartan_characters(system, seed=0, space=space)
print(f"type C: integral-element dim {space.dimension}, pi rank {space.pi_rank}, "
      f"characters {chars.characters}, involutive {chars.involutive}")

# Normal-form classification of a pair of complex symmetric 2x2 matrices.
print("case 2.b representative classifies as", classify_pair(case_representative("2.b", x=1, y=1)).tag)

# Floating-point check of the generalized helicoid.
rep = geometry.check_surface(geometry.helicoid([1, 2, 3]), points=10, tol=1e-9, seed=0)
print(f"helicoid: passed {rep.passed}, residual {rep.residual:.2e}")
