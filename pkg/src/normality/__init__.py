"""Exact calculators for planar-tree associahedra, truncated bar homology,
mod-p Steenrod operations on characteristic classes, and certified p-local
homotopy-normality decisions for the inclusions SU(m) < SU(n) and
SO(2m+1) < SO(2n+1)."""

from .associahedra import (CubicalCell, boundary, cells, euler, f_vector,
                           homology, point_equal)
from .barhomology import BarComplex, FiniteMonoid, GSet, bar_homology, build_bar
from .charclass import (CHERN, PONTRYAGIN, GeneratorFamily, SparsePoly, chern,
                        closed_form_witness_coeff, coefficient, p1_extend,
                        p1_table, poly_mul, pontryagin, splitting_oracle,
                        truncate, wu_p1, wu_p1_chern, wu_p1_pontryagin)
from .decide import (Certificate, Conflict, Family, Instance,
                     InconsistentRulesError, LedgerEntry, Verdict, VerdictKind,
                     certify, classify, consistency_sweep, find_witness,
                     load_ledger, nonnormal_window, normal_threshold)
from .exactlin import (FpMatrix, HomologyGroup, IntMatrix,
                       PDividesDenominatorError, chain_homology, factorial,
                       is_prime, multinomial, rank_fp, reduce_mod_p,
                       smith_normal_form)
from .trees import (INFINITY, MetricTree, Tree, TreeSyntaxError, as_length,
                    canonicalize, corolla, cut, degeneracy, degeneracy_metric,
                    enumerate_trees, graft, graft_metric, internal_edges,
                    leaves, metric, parse, reassemble, serialize, spine)

__version__ = "0.1.0"
