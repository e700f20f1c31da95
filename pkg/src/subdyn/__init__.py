"""Finite engine for open sub-functorial dynamics and interactive families."""

from .errors import *  # noqa: F401,F403
from .fincat import (Arrow, DirectedGraph, FiniteCategory, build_diamond_category,
                     build_interval_poset, free_category, point_category, underlying_graph,
                     validate_category)
from .dynamics import (ALL, Clock, ClassificationTag, Functor, MultiDynamics, OpenDynamics,
                       anteriority, build_essential_clock_singleton, build_existential_clock,
                       classify, determinism_class, is_dynamorphism, is_functorial,
                       is_subfunctorial, out_of_play_states, quotient_parameters)
from .realize import (Realization, enumerate_realizations, is_efficient, is_realization,
                      passes_through)
from .interact import (Disposition, Interaction, Relation, coherent_part, connectivity_structure,
                       is_compatible, is_concrete, is_determining, is_filtering, is_normal,
                       is_normal_bruteforce, is_operant, join_dispositions, null_interaction,
                       realization_relation)
from .families import (InteractiveFamily, Synchronization, is_rigid, validate_family,
                       validate_synchronization)
from .generate import (GeneratedDynamics, canonical_family, functional_heaps, generate_functional,
                       generate_mono, generate_primary, generate_souple, generate_with_heaps,
                       heap_equivalence, is_regular, same_generated, souple_heaps)

__version__ = "0.1.0"
