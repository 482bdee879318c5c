"""Moderately discontinuous homology of complex plane curve germs (outer metric)."""
from .bdiagram import (
    BDiagram,
    FramedDiagram,
    Verdict,
    compare_framed,
    compare_unframed,
    evaluate,
    invariant_signature,
    jumping_rates,
    morphism_matrix,
)
from .eggers import EggersWallTree, build_tree, export_tree, level_slice, tree_isomorphic
from .exactnum import INF, ExtRat, GaussRat, IntMatrix, is_unimodular, matmul, snf
from .mdcurve import detect_smooth, md_diagram, reconstruct_tree, relative_multiplicities
from .puiseux import (
    Curve,
    PuiseuxSeries,
    characteristic_exponents,
    contact,
    multiplicity,
    parse_series,
    puiseux_pairs,
)
from .simplicial import SimplicialPair, bcone_diagram, curve_link_profile, homology

__version__ = "0.1.0"

__all__ = [
    "BDiagram", "FramedDiagram", "Verdict", "compare_framed", "compare_unframed", "evaluate",
    "invariant_signature", "jumping_rates", "morphism_matrix",
    "EggersWallTree", "build_tree", "export_tree", "level_slice", "tree_isomorphic",
    "INF", "ExtRat", "GaussRat", "IntMatrix", "is_unimodular", "matmul", "snf",
    "detect_smooth", "md_diagram", "reconstruct_tree", "relative_multiplicities",
    "Curve", "PuiseuxSeries", "characteristic_exponents", "contact", "multiplicity",
    "parse_series", "puiseux_pairs",
    "SimplicialPair", "bcone_diagram", "curve_link_profile", "homology",
]
