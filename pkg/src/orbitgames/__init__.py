"""Becker and Hjorth orbit games on finite topological actions and groupoids."""
from .engine import (INF, Arena, ArenaError, Player, SolveResult, Strategy, bounded_play_check, build_arena,
                     extract_strategy, relation_at_rank, solve_closed_game)
from .groupoids import (FiniteGroupoid, action_groupoid, groupoid_local_orbit, groupoid_orbit,
                        groupoid_orbit_partition, validate_groupoid)
from .orbit_games import (BeckerVerdict, HjorthVerdict, ObstructionVerdict, OrbitQuotientGraph, TurbulenceReport,
                          becker_arena, becker_digraph, becker_embeddable, becker_relation, cli_obstruction_check,
                          groupoid_becker_embeddable, groupoid_hjorth_isomorphic, groupoid_obstruction_check,
                          hjorth_arena, hjorth_graph, hjorth_isomorphic, hjorth_relation, local_orbit,
                          quotient_homomorphism_check, turbulence_report)
from .spaces import (FiniteSpace, GroupAction, TopGroup, Violation, category_report, closure, core_open, interior,
                     orbit_partition, validate_instance)

__all__ = [n for n in dir() if not n.startswith("_")]
__version__ = "0.1.0"
