"""Exact homological algebra over the integers.

Finitely generated abelian groups, their Hom and tensor groups, chain
complexes and homology, free resolutions and Tor, and the torsion category
``Tor^Z(A, B)`` whose path components recover ``A (x) B``.
"""

from .complexes import ChainComplex, ChainMap, ComplexSES, homology, long_exact_sequence
from .errors import ContractError, IllDefinedHomError, InputError, LiteralError, ZHomalgError
from .fgab import (
    FgAbGroup,
    GroupElement,
    GroupHom,
    ShortExactSeq,
    cokernel,
    direct_sum,
    hom_group,
    is_pure,
    is_split,
    kernel,
    parse_group,
    tensor,
)
from .intlin import IntMatrix, smith_normal_form, solve_congruence, solve_integer
from .robinson import TorCategory, TorTriple, component_group, enumerate_objects, pi0
from .torfun import free_resolution, tor, tor_les

__version__ = "0.1.0"
