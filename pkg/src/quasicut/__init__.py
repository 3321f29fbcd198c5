"""Quasimetric embeddings, random quasipartitions and directed cut approximation."""

from .cuts import CutInstance, CutResult, solve_multicut, solve_sparsest_cut
from .embedding import (
    build_scale_family,
    embed_01_combination,
    embed_quasiultrametric,
    quasiultrametric_to_quasipartition,
    sample_quasiultrametric,
)
from .errors import InputError, QuasicutError
from .graph import WeightedDigraph, shortest_path_quasimetric
from .quasipartition import Quasipartition, WeightedSupport
from .treewidth import TreeDecomposition, sample_treewidth_quasipartition, treewidth_quasipartition_support
from .trees import sample_tree_quasipartition, tree_quasipartition_support

__all__ = [
    "CutInstance", "CutResult", "InputError", "Quasipartition", "QuasicutError", "TreeDecomposition",
    "WeightedDigraph", "WeightedSupport", "build_scale_family", "embed_01_combination",
    "embed_quasiultrametric", "quasiultrametric_to_quasipartition", "sample_quasiultrametric",
    "sample_tree_quasipartition", "sample_treewidth_quasipartition", "shortest_path_quasimetric",
    "solve_multicut", "solve_sparsest_cut", "tree_quasipartition_support", "treewidth_quasipartition_support",
]
