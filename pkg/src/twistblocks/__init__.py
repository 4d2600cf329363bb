"""Twisted conformal-block dimensions for cyclic covers of curves.

Three independent pipelines compute the same integers: the twisted
Verlinde point sums, the Kac-Walton alternating sum, and the
factorization recursion.  See README for the CLI.
"""

from .alcove import (AlcoveEnumeration, FoldResult, TorusPoint,
                     enumerate_sigma_c, fold_to_alcove, lattice_orders)
from .dims import (CurveRequest, DimensionResult, ThreePointRequest,
                   classical_verlinde, factorized_dimension,
                   fusion_coefficient, general_dimension, identity_twist,
                   riemann_hurwitz_genus, twisted_three_point)
from .errors import (IllegalPair, InconsistentRamification, IntegralityError,
                     NonDominant, NotInAlphabet, SchemaError, SingularPoint,
                     UnstableInput, UnsupportedCombination, UnsupportedType,
                     VerlindeError, WeightNotInAlphabet)
from .kacwalton import KWLedger, euler_characteristic_report, kac_walton_dimension
from .liecore import (CharacterValue, RootDatum, WeylElement, build_root_datum,
                      character_value, tensor_multiplicities,
                      weight_multiplicities, weyl_dimension)
from .twist import (DIAGRAM2, DIAGRAM3, IDENTITY, STANDARD4, TwistData,
                    TwistKind, WeightSet, a2n_weight_bijection,
                    ambient_alphabet, branch_to_fixed, build_twist,
                    twist_kind, weight_alphabet)

__version__ = "0.1.0"
