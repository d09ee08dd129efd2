from .complex import MultiFiltration, SimplicialComplex, build_complex, extend_filtration, star
from .gradient import DiscreteGradient, compute_discrete_gradient, verify_compatibility, verify_gradient_acyclic
from .morse import LefschetzComplex, betti_numbers_f2, boundary_matrix, extract_morse_complex, simplicial_lefschetz
from .persistence import PersistenceDiagram, persistence_diagram
from .foliation import compute_persistence_space, generate_slices, push_to_slice
