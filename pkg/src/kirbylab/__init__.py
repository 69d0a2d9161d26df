"""Exact HKR-type 3-manifold invariants from finite-dimensional ribbon Hopf algebras."""

from .errors import AxiomFailed, KirbyLabError
from .exactfield import FieldDescriptor, FieldElement
from .hopfcore import AlgebraElement, HopfPresentation, LinearForm, TensorElement
from .ribboncore import RibbonStructure
from .kirby import KirbyCandidate, compute_subspaces, is_kirby, traces_basis
from .links import LinkDiagram, handle_slide, linking_data, parse_diagram, parse_link_spec, stabilize
from .evaluator import bead_tensor, oracle_eval, rt_invariant, tau_link, tau_manifold
from .examples import cyclic_ribbon, hn_zd, parse_algebra_uri, radford_hn

__all__ = [
    "AlgebraElement",
    "AxiomFailed",
    "FieldDescriptor",
    "FieldElement",
    "HopfPresentation",
    "KirbyCandidate",
    "KirbyLabError",
    "LinearForm",
    "LinkDiagram",
    "RibbonStructure",
    "TensorElement",
    "bead_tensor",
    "compute_subspaces",
    "cyclic_ribbon",
    "handle_slide",
    "hn_zd",
    "is_kirby",
    "linking_data",
    "oracle_eval",
    "parse_algebra_uri",
    "parse_diagram",
    "parse_link_spec",
    "radford_hn",
    "rt_invariant",
    "stabilize",
    "tau_link",
    "tau_manifold",
    "traces_basis",
]
