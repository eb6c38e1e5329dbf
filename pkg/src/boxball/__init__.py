"""Box-ball system: dynamics, soliton decompositions, trees and excursion measures."""
from .core import (
    BallConfig,
    Excursion,
    Walk,
    catalan,
    concatenate,
    decode_walk,
    encode_walk,
    enumerate_excursions,
    find_records,
    format_config,
    parse_config,
    parse_excursion,
    runs,
    soften,
    split_excursions,
    strictify,
)
from .dynamics import RingConfig, evolve, evolve_reverse, evolve_ring, evolve_t, pairing_profile
from .errors import BoxBallError
from .measures import MeasureParams, alpha_of_lambda, map_A, map_Q, nu_weight, sample_excursion, zeta_concat
from .solitons import SlotDiagram, YoungDiagram, build_excursion, decompose, identify_slots, merge_young, slot_diagram
from .trees import PlanarTree, branch_decompose, build_tree, contour_of, count_trees, tree_of, tree_slot_diagram

__version__ = "0.1.0"
